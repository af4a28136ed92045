"""Finite-dimensional approximation of the evolution operator.

The state at time ``s`` (nodal values of the initial function on the
history grid) is mapped to the state at time ``r`` in three steps: a
collocation system ``u_plus . p = u_minus . phi`` determines the solution
polynomial on ``[0, rs]``; the matrices ``v_plus`` and ``v_minus`` then
read the new state off that polynomial (restriction when ``rs >= tau``)
or off the initial function itself (prolongation when ``rs < tau``).  The
assembled map is

    t_matrix = v_plus @ solve(u_plus, u_minus) + v_minus.

Rows and columns are organized node-major: each history or collocation
node owns a contiguous ``dim x dim`` block.  Row block 0 of ``u_plus``
and ``u_minus`` encodes the matching condition ``p(0) = phi(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from .interp import GridPair, NodeGrid, basis_deriv_row, basis_row
from .model import DdeProblem, ShiftedProblem, shift_problem
from .quadrature import QuadratureRule, default_rule, integrate

__all__ = [
    "EvolutionMatrices",
    "SingularOperatorError",
    "index_n_plus",
    "index_m_minus",
    "assemble_u",
    "assemble_v",
    "evolution_matrix",
]

RCOND_THRESHOLD = 1e-14


class SingularOperatorError(RuntimeError):
    """Collocation matrix numerically singular; a larger N usually cures it."""


@dataclass
class EvolutionMatrices:
    """Assembled discretization of the evolution operator.

    ``power`` records how many copies of a base window the matrix spans
    (used by monodromy operators built as ``U(k * omega)``; 1 otherwise).
    """

    u_plus: np.ndarray
    u_minus: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    t_matrix: np.ndarray
    n_plus: int
    m_minus: int
    cond_estimate: float
    grids: GridPair
    dim: int
    power: int = 1


def index_n_plus(plus0_grid: NodeGrid, tau: float) -> int:
    """Largest collocation index ``i >= 1`` whose node satisfies ``x_i <= tau``.

    Returns 0 when even the first interior node exceeds ``tau``.  Rows up
    to this index reach into the history segment through the discrete
    delay; rows beyond it stay within the current window.
    """
    return int(np.sum(plus0_grid.nodes[1:] <= tau))


def index_m_minus(minus_grid: NodeGrid, rs: float) -> int:
    """Largest history index ``j`` with ``rs + theta_j >= 0``.

    Since the history nodes descend from 0, this is the last node whose
    forward shift by ``rs`` still lands in the solved window.
    """
    return int(np.sum(minus_grid.nodes >= -rs)) - 1


def _kernel_block_row(c_s, ti, grid, lo, hi, rule, d):
    """Block row ``integral_lo^hi c_s(ti, theta) (x) l_row(ti + theta) dtheta``."""

    def f(theta):
        return np.kron(basis_row(grid, ti + theta), c_s(ti, theta))

    return integrate(rule, f, lo, hi)


def assemble_u(
    problem: ShiftedProblem, grids: GridPair, rule: QuadratureRule
) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the collocation pair ``(u_plus, u_minus)``.

    ``u_plus`` is ``d(N+1) x d(N+1)``, acting on the solution polynomial's
    nodal values; ``u_minus`` is ``d(N+1) x d(M+1)``, acting on the
    initial nodal values.  Row block 0 of both is the identity block
    (matching condition at 0).  Collocation row ``i`` carries the cardinal
    derivative row minus the local term ``a``; the discrete-delay and
    distributed terms land in ``u_plus`` or ``u_minus`` according to
    whether their argument falls in the current window or the history.
    """
    d = problem.dim
    tau = problem.tau
    plus0, minus = grids.plus0, grids.minus
    n, m = grids.n, grids.m
    n_plus = index_n_plus(plus0, tau)
    eye = np.eye(d)

    u_plus = np.zeros((d * (n + 1), d * (n + 1)), dtype=complex)
    u_minus = np.zeros((d * (n + 1), d * (m + 1)), dtype=complex)
    u_plus[:d, :d] = eye
    u_minus[:d, :d] = eye

    for i in range(1, n + 1):
        ti = plus0.nodes[i]
        sl = slice(d * i, d * (i + 1))
        row = np.kron(basis_deriv_row(plus0, ti), eye).astype(complex)
        if problem.a_s is not None:
            row[:, sl] -= problem.a_s(ti)
        if i <= n_plus:
            # discrete delay and the history part of the kernel window
            if problem.b_s is not None:
                u_minus[sl, :] += np.kron(basis_row(minus, ti - tau), problem.b_s(ti))
            if problem.c_s is not None:
                row -= _kernel_block_row(problem.c_s, ti, plus0, -ti, 0.0, rule, d)
                u_minus[sl, :] += _kernel_block_row(
                    problem.c_s, ti, minus, -tau, -ti, rule, d
                )
        else:
            if problem.b_s is not None:
                row -= np.kron(basis_row(plus0, ti - tau), problem.b_s(ti))
            if problem.c_s is not None:
                row -= _kernel_block_row(problem.c_s, ti, plus0, -tau, 0.0, rule, d)
        u_plus[sl, :] = row
    return u_plus, u_minus


def assemble_v(grids: GridPair, dim: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the coefficient-independent pair ``(v_plus, v_minus)``.

    ``v_plus[i] = l_plus_row(rs + theta_i)`` for history indices up to
    ``m_minus`` (zero rows below); ``v_minus`` holds the complementary
    prolongation rows and is entirely zero when ``rs >= tau``.
    """
    minus, plus0 = grids.minus, grids.plus0
    rs = grids.rs
    n, m = grids.n, grids.m
    m_minus = index_m_minus(minus, rs)
    vp = np.zeros((m + 1, n + 1))
    vm = np.zeros((m + 1, m + 1))
    for i in range(m + 1):
        x = rs + minus.nodes[i]
        if i <= m_minus:
            vp[i, :] = basis_row(plus0, x)
        else:
            vm[i, :] = basis_row(minus, x)
    eye = np.eye(dim)
    return np.kron(vp, eye).astype(complex), np.kron(vm, eye).astype(complex)


def evolution_matrix(
    problem: DdeProblem,
    n: int,
    m: int | None = None,
    rule: QuadratureRule | None = None,
) -> EvolutionMatrices:
    """Assemble the full evolution matrix for ``problem``.

    ``m`` defaults to ``n``.  The linear solve uses an LU factorization
    with partial pivoting, never an explicit inverse; a reciprocal
    condition estimate below ``1e-14`` raises
    :class:`SingularOperatorError` (the discretization is only guaranteed
    invertible for sufficiently large ``n``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n if m is None else m
    if m < 1:
        raise ValueError("m must be >= 1")
    shifted = shift_problem(problem)
    if not shifted.rs > 0:
        raise ValueError("discretization requires a window with r > s")
    grids = GridPair.build(n, m, shifted.rs, problem.tau)
    if rule is None:
        rule = default_rule(n)

    u_plus, u_minus = assemble_u(shifted, grids, rule)
    v_plus, v_minus = assemble_v(grids, problem.dim)

    lu, piv = lu_factor(u_plus)
    gecon = get_lapack_funcs("gecon", (u_plus,))
    anorm = np.linalg.norm(u_plus, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or not np.isfinite(rcond) or rcond < RCOND_THRESHOLD:
        raise SingularOperatorError(
            f"collocation matrix is numerically singular "
            f"(reciprocal condition {rcond:.2e}); try a larger N"
        )
    x = lu_solve((lu, piv), u_minus)
    t_matrix = v_plus @ x + v_minus
    return EvolutionMatrices(
        u_plus=u_plus,
        u_minus=u_minus,
        v_plus=v_plus,
        v_minus=v_minus,
        t_matrix=t_matrix,
        n_plus=index_n_plus(grids.plus0, problem.tau),
        m_minus=index_m_minus(grids.minus, shifted.rs),
        cond_estimate=float(1.0 / rcond),
        grids=grids,
        dim=problem.dim,
    )
