"""Initial value problems: collocation solver and a method-of-steps oracle.

``collocation_solve`` computes the degree-N polynomial satisfying the
differential equation at the interior Chebyshev nodes with a given
initial function; ``evolve_state`` applies the assembled evolution matrix
to concrete nodal data.  ``reference_solution`` is an independent check:
a classical fourth-order one-step integration performed interval by
interval of length ``tau``, with history values taken from a cubic
Hermite interpolant of the stored mesh.  It shares no code with the
collocation path.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .evolution import assemble_u, evolution_matrix
from .interp import GridPair, NodeGrid, basis_deriv_row, cheb_zero_nodes, interp_eval
from .model import DdeProblem, ShiftedProblem
from .quadrature import QuadratureRule, default_rule

__all__ = [
    "CollocationSolution",
    "ReferenceSolution",
    "RemainderEstimate",
    "collocation_solve",
    "evolve_state",
    "reference_solution",
    "remainder_estimate",
    "collocation_residual",
    "nodal_values",
]


def _phi_function(phi, dim: int) -> Callable[[float], np.ndarray]:
    """Normalize an initial function to return (dim,) complex arrays."""

    def wrapped(theta: float) -> np.ndarray:
        val = np.asarray(phi(theta), dtype=complex)
        if val.ndim == 0:
            val = val.reshape(1)
        if val.shape != (dim,):
            raise ValueError(f"initial function must return shape ({dim},)")
        return val

    return wrapped


def nodal_values(phi, grid: NodeGrid, dim: int) -> np.ndarray:
    """Sample an initial function on a grid, as an (n, dim) block array."""
    fn = _phi_function(phi, dim)
    return np.array([fn(theta) for theta in grid.nodes])


@dataclass(frozen=True)
class CollocationSolution:
    """Nodal values of the collocation polynomial on ``{0} + interior nodes``."""

    grid: NodeGrid
    nodal_values: np.ndarray

    def __call__(self, t: float):
        return interp_eval(self.grid, self.nodal_values, t)


def collocation_solve(
    problem: ShiftedProblem,
    phi,
    grids: GridPair,
    rule: QuadratureRule | None = None,
) -> CollocationSolution:
    """Solve the shifted initial value problem by collocation.

    The initial function enters through its values on the history grid
    (i.e. through its interpolant there); the solution polynomial matches
    ``phi`` at 0 exactly.
    """
    if rule is None:
        rule = default_rule(grids.n)
    d = problem.dim
    u_plus, u_minus = assemble_u(problem, grids, rule)
    phi_vec = nodal_values(phi, grids.minus, d).reshape(-1)
    rhs = u_minus @ phi_vec
    sol = np.linalg.solve(u_plus, rhs)
    # one step of iterative refinement; the derivative rows make u_plus
    # moderately ill-conditioned and the refined solve recovers the last
    # couple of digits
    sol += np.linalg.solve(u_plus, rhs - u_plus @ sol)
    return CollocationSolution(grid=grids.plus0, nodal_values=sol.reshape(-1, d))


def evolve_state(
    problem: DdeProblem,
    phi,
    n: int,
    m: int | None = None,
    rule: QuadratureRule | None = None,
) -> np.ndarray:
    """Apply the evolution matrix to ``phi``: the nodal state at time ``r``.

    Returns an ``(M + 1, dim)`` block array on the history grid.  For
    ``rs >= tau`` this equals sampling the collocation polynomial on
    ``[rs - tau, rs]``.
    """
    mats = evolution_matrix(problem, n, m, rule)
    phi_vec = nodal_values(phi, mats.grids.minus, problem.dim).reshape(-1)
    return (mats.t_matrix @ phi_vec).reshape(-1, problem.dim)


class _Segment:
    __slots__ = ("t0", "h", "ys", "fs", "filled")

    def __init__(self, t0: float, h: float, steps: int, dim: int):
        self.t0 = t0
        self.h = h
        self.ys = np.empty((steps + 1, dim), dtype=complex)
        self.fs = np.empty((steps + 1, dim), dtype=complex)
        self.filled = 0

    @property
    def t1(self) -> float:
        return self.t0 + self.h * (self.ys.shape[0] - 1)


class ReferenceSolution:
    """Method-of-steps integration with dense cubic Hermite output.

    Integration intervals are aligned to multiples of ``tau`` so that no
    step straddles the derivative jump propagating from the initial time.
    The distributed term, when present, is evaluated by composite Simpson
    quadrature on a mesh no coarser than the step size.
    """

    def __init__(self, problem: ShiftedProblem, phi, h: float):
        if not h > 0:
            raise ValueError("h must be positive")
        if h > problem.tau / 4 * (1 + 1e-12):
            raise ValueError("h must be at most tau / 4")
        self.problem = problem
        self.dim = problem.dim
        self.phi = _phi_function(phi, problem.dim)
        self.h = float(h)
        tau, rs = problem.tau, problem.rs
        n_full = int(math.floor(rs / tau + 1e-12))
        bounds = [k * tau for k in range(n_full + 1)]
        if bounds[-1] < rs * (1 - 1e-12):
            bounds.append(rs)
        else:
            bounds[-1] = rs
        self._bounds = bounds
        if problem.c_s is not None:
            panels = 2 * max(2, math.ceil(tau / (2 * h)))
            self._quad_thetas = np.linspace(-tau, 0.0, panels + 1)
            w = np.ones(panels + 1)
            w[1:-1:2] = 4.0
            w[2:-1:2] = 2.0
            self._quad_weights = w * (tau / panels) / 3.0
        self.segments: list[_Segment] = []
        self._integrate()

    # -- history access -------------------------------------------------

    def _hermite(self, seg: _Segment, j: int, u: float) -> np.ndarray:
        h = seg.h
        s = (u - (seg.t0 + j * h)) / h
        s2 = s * s
        s3 = s2 * s
        h00 = 2 * s3 - 3 * s2 + 1
        h10 = s3 - 2 * s2 + s
        h01 = -2 * s3 + 3 * s2
        h11 = s3 - s2
        return (
            h00 * seg.ys[j]
            + (h * h10) * seg.fs[j]
            + h01 * seg.ys[j + 1]
            + (h * h11) * seg.fs[j + 1]
        )

    def _history(self, u: float) -> np.ndarray:
        """Value at u <= current integration front (tip queries extrapolate)."""
        if u <= 0.0:
            return self.phi(u)
        i = min(bisect_right(self._bounds, u) - 1, len(self.segments) - 1)
        i = max(i, 0)
        seg = self.segments[i]
        if seg.filled < 2:
            seg = self.segments[i - 1]
            j = seg.ys.shape[0] - 2
        else:
            j = int((u - seg.t0) / seg.h)
            j = min(max(j, 0), seg.filled - 2)
        return self._hermite(seg, j, u)

    def __call__(self, t: float) -> np.ndarray:
        """Solution value at ``t`` in ``[-tau, rs]``."""
        return self._history(t)

    def derivative(self, t: float) -> np.ndarray:
        """Derivative at ``t`` in ``[0, rs]``, via the right-hand side."""
        return self._rhs(t, self._history(t))

    # -- integration ----------------------------------------------------

    def _rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        p = self.problem
        val = p.a_s(t) @ y if p.a_s is not None else np.zeros(self.dim, dtype=complex)
        if p.b_s is not None:
            val = val + p.b_s(t) @ self._history(t - p.tau)
        if p.c_s is not None:
            acc = np.zeros(self.dim, dtype=complex)
            last = self._quad_thetas.size - 1
            for q, theta in enumerate(self._quad_thetas):
                xq = y if q == last else self._history(t + theta)
                acc += self._quad_weights[q] * (p.c_s(t, theta) @ xq)
            val = val + acc
        return val

    def _integrate(self) -> None:
        y = self.phi(0.0)
        carry = np.zeros(self.dim, dtype=complex)
        for b0, b1 in zip(self._bounds[:-1], self._bounds[1:]):
            steps = max(1, math.ceil((b1 - b0) / self.h - 1e-12))
            hk = (b1 - b0) / steps
            seg = _Segment(b0, hk, steps, self.dim)
            self.segments.append(seg)
            seg.ys[0] = y
            seg.fs[0] = self._rhs(b0, y)
            seg.filled = 1
            for j in range(steps):
                t = b0 + j * hk
                k1 = seg.fs[j]
                k2 = self._rhs(t + hk / 2, y + (hk / 2) * k1)
                k3 = self._rhs(t + hk / 2, y + (hk / 2) * k2)
                k4 = self._rhs(t + hk, y + hk * k3)
                # compensated update: the increment is O(h) while y is O(1),
                # so plain accumulation would round-off-walk over many steps
                delta = (hk / 6) * (k1 + 2 * k2 + 2 * k3 + k4) + carry
                y_next = y + delta
                carry = delta - (y_next - y)
                y = y_next
                seg.ys[j + 1] = y
                seg.fs[j + 1] = self._rhs(t + hk, y)
                seg.filled = j + 2


def reference_solution(problem: ShiftedProblem, phi, h: float) -> ReferenceSolution:
    """Integrate the shifted problem with the independent one-step oracle."""
    return ReferenceSolution(problem, phi, h)


class RemainderEstimate(NamedTuple):
    rho: float
    solution_error: float


def remainder_estimate(
    problem: ShiftedProblem,
    phi,
    grids: GridPair,
    rule: QuadratureRule | None = None,
    h: float = 1e-3,
) -> RemainderEstimate:
    """Measure the interpolation remainder of the solution derivative.

    ``rho`` is the sup over a dense sample of the difference between the
    reference derivative and its interpolant on the interior collocation
    nodes (degree N - 1); ``solution_error`` is the sup difference between
    the reference solution and the collocation polynomial.  Both floors at
    the accuracy of the reference integration, O(h^4).
    """
    ref = reference_solution(problem, phi, h)
    sol = collocation_solve(problem, phi, grids, rule)
    inner = cheb_zero_nodes(grids.n, grids.rs)
    dvals = np.array([ref.derivative(t) for t in inner.nodes])
    samples = 40 * grids.n + 17
    ts = np.linspace(0.0, grids.rs, samples)
    rho = 0.0
    err = 0.0
    for t in ts:
        dref = ref.derivative(t)
        rho = max(rho, float(np.abs(dref - interp_eval(inner, dvals, t)).max()))
        err = max(err, float(np.abs(ref(t) - sol(t)).max()))
    return RemainderEstimate(rho=rho, solution_error=err)


def collocation_residual(
    problem: ShiftedProblem,
    sol: CollocationSolution,
    phi_nodal: np.ndarray,
    grids: GridPair,
    rule: QuadratureRule | None = None,
) -> float:
    """A posteriori residual of the collocation solution at the nodes.

    Recomputes ``p'(x_i) - (rhs p)(x_i)`` from exact cardinal derivatives
    and the same quadrature windows used in assembly, with the history
    read from the interpolant of ``phi_nodal``.  Should be at round-off
    level for any successfully solved system.
    """
    from .quadrature import integrate

    if rule is None:
        rule = default_rule(grids.n)
    p = problem
    d = p.dim
    tau = p.tau
    minus, plus0 = grids.minus, grids.plus0

    def segment(x: float) -> np.ndarray:
        if x <= 0.0:
            return interp_eval(minus, phi_nodal, x)
        return sol(x)

    worst = 0.0
    for i in range(1, grids.n + 1):
        ti = plus0.nodes[i]
        deriv = basis_deriv_row(plus0, ti) @ sol.nodal_values
        rhs = np.zeros(d, dtype=complex)
        if p.a_s is not None:
            rhs += p.a_s(ti) @ sol.nodal_values[i]
        if p.b_s is not None:
            rhs += p.b_s(ti) @ segment(ti - tau)
        if p.c_s is not None:
            def f(th, ti=ti):
                return p.c_s(ti, th) @ segment(ti + th)

            split = -min(ti, tau)
            rhs += integrate(rule, f, split, 0.0)
            if split > -tau:
                rhs += integrate(rule, f, -tau, split)
        worst = max(worst, float(np.abs(deriv - rhs).max()))
    return worst
