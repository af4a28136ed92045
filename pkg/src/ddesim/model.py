"""Problem definition for linear delay differential equations.

A problem is the data of

    x'(t) = a(t) x(t) + b(t) x(t - tau) + integral_{-tau}^{0} c(t, theta) x(t + theta) dtheta

on a time window ``[s, r]``, with ``d``-dimensional state.  Coefficients
are stored as callables returning ``(d, d)`` complex arrays; any of them
may be ``None``, meaning the corresponding term is absent.  Scalar
problems are built with :func:`scalar_problem`, matrix-valued ones with
:func:`matrix_problem` from entrywise grids of expressions, numbers or
callables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .expressions import CoefficientExpr, parse_coefficient

__all__ = [
    "DdeProblem",
    "ShiftedProblem",
    "scalar_problem",
    "matrix_problem",
    "shift_problem",
    "validate_problem",
]

Coefficient = Callable[[float], np.ndarray]
KernelCoefficient = Callable[[float, float], np.ndarray]


@dataclass(frozen=True)
class DdeProblem:
    """A linear DDE with delay ``tau`` on the window ``[s, r]``.

    ``a`` and ``b`` map time to a ``(dim, dim)`` complex array, ``c`` maps
    ``(time, theta)`` with ``theta in [-tau, 0]`` to the same shape.  A
    ``None`` coefficient is identically zero.
    """

    dim: int
    tau: float
    s: float
    r: float
    a: Coefficient | None = None
    b: Coefficient | None = None
    c: KernelCoefficient | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.r < self.s:
            raise ValueError("window must satisfy r >= s")

    @property
    def rs(self) -> float:
        """Window length ``r - s``."""
        return self.r - self.s


@dataclass(frozen=True)
class ShiftedProblem:
    """The same problem after the time shift ``t -> s + t``.

    Coefficients live on ``[0, rs]`` with ``rs = r - s``.
    """

    dim: int
    tau: float
    rs: float
    a_s: Coefficient | None = None
    b_s: Coefficient | None = None
    c_s: KernelCoefficient | None = None


def shift_problem(problem: DdeProblem) -> ShiftedProblem:
    """Shift the time window to ``[0, rs]`` by composing with ``t -> s + t``."""
    s = problem.s
    if s == 0.0:
        a_s, b_s, c_s = problem.a, problem.b, problem.c
    else:
        a_s = None if problem.a is None else (lambda t, _a=problem.a: _a(s + t))
        b_s = None if problem.b is None else (lambda t, _b=problem.b: _b(s + t))
        c_s = (
            None
            if problem.c is None
            else (lambda t, theta, _c=problem.c: _c(s + t, theta))
        )
    return ShiftedProblem(
        dim=problem.dim, tau=problem.tau, rs=problem.rs, a_s=a_s, b_s=b_s, c_s=c_s
    )


def _entry_to_fn(entry, allow_theta: bool):
    """Turn a scalar entry (number, expression string, callable) into f(t, theta)."""
    if isinstance(entry, str):
        entry = parse_coefficient(entry, allow_theta)
    if isinstance(entry, CoefficientExpr):
        return lambda t, theta: entry(t, theta)
    if callable(entry):
        if allow_theta:
            return lambda t, theta: entry(t, theta)
        return lambda t, theta: entry(t)
    value = complex(entry)
    return lambda t, theta: value


def _as_matrix_coefficient(value, dim: int, allow_theta: bool, probe_t: float = 0.0):
    """Normalize a coefficient specification to a (d, d)-array-valued callable.

    ``probe_t`` is an admissible time used to sniff the output shape of an
    opaque callable (the window start, so the probe never leaves the
    coefficient's domain).
    """
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        rows = [list(row) for row in value]
        if len(rows) != dim or any(len(row) != dim for row in rows):
            raise ValueError(f"coefficient grid must be {dim}x{dim}")
        fns = [[_entry_to_fn(e, allow_theta) for e in row] for row in rows]

        def matrix_fn(t, theta=0.0):
            out = np.empty((dim, dim), dtype=complex)
            for i in range(dim):
                for j in range(dim):
                    out[i, j] = fns[i][j](t, theta)
            return out

    elif callable(value) and not isinstance(value, CoefficientExpr):
        probe = value(probe_t, 0.0) if allow_theta else value(probe_t)
        if np.ndim(probe) == 0:
            if dim != 1:
                raise ValueError("scalar-valued coefficient given for dim > 1")
            if allow_theta:
                def matrix_fn(t, theta=0.0):
                    return np.array([[value(t, theta)]], dtype=complex)
            else:
                def matrix_fn(t, theta=0.0):
                    return np.array([[value(t)]], dtype=complex)
        else:
            if np.shape(probe) != (dim, dim):
                raise ValueError(
                    f"coefficient callable must return a ({dim}, {dim}) array"
                )
            if allow_theta:
                def matrix_fn(t, theta=0.0):
                    return np.asarray(value(t, theta), dtype=complex)
            else:
                def matrix_fn(t, theta=0.0):
                    return np.asarray(value(t), dtype=complex)
    else:
        fn = _entry_to_fn(value, allow_theta)
        if dim != 1:
            raise ValueError("scalar coefficient given for dim > 1; pass a grid")

        def matrix_fn(t, theta=0.0):
            return np.array([[fn(t, theta)]], dtype=complex)

    return matrix_fn


def _wrap_time(matrix_fn):
    if matrix_fn is None:
        return None
    return lambda t: matrix_fn(t)


def _wrap_kernel(matrix_fn):
    if matrix_fn is None:
        return None
    return lambda t, theta: matrix_fn(t, theta)


def scalar_problem(
    a=None, b=None, c=None, *, tau: float, s: float = 0.0, r: float | None = None
) -> DdeProblem:
    """Build a one-dimensional problem.

    ``a``, ``b`` may be numbers, expression strings in ``t``, or callables
    ``t -> scalar``; ``c`` additionally depends on ``theta``.  ``r``
    defaults to ``s + tau``.
    """
    return matrix_problem(a=a, b=b, c=c, dim=1, tau=tau, s=s, r=r)


def matrix_problem(
    a=None,
    b=None,
    c=None,
    *,
    dim: int,
    tau: float,
    s: float = 0.0,
    r: float | None = None,
) -> DdeProblem:
    """Build a ``dim``-dimensional problem from entrywise coefficient grids.

    For ``dim > 1`` each coefficient is a ``dim x dim`` nested list whose
    entries are numbers, expression strings, or scalar callables; a single
    callable returning a ``(dim, dim)`` array is also accepted.
    """
    if r is None:
        r = s + tau
    s = float(s)
    problem = DdeProblem(
        dim=dim,
        tau=float(tau),
        s=s,
        r=float(r),
        a=_wrap_time(_as_matrix_coefficient(a, dim, allow_theta=False, probe_t=s)),
        b=_wrap_time(_as_matrix_coefficient(b, dim, allow_theta=False, probe_t=s)),
        c=_wrap_kernel(_as_matrix_coefficient(c, dim, allow_theta=True, probe_t=s)),
    )
    validate_problem(problem)
    return problem


def validate_problem(problem: DdeProblem) -> None:
    """Probe the coefficients at a few admissible points.

    Raises ``ValueError`` if any evaluation fails, is non-finite or has
    the wrong shape.  This cannot prove the coefficients are everywhere
    evaluable, but catches the common mistakes early.
    """
    d = problem.dim
    ts = [problem.s, problem.s + problem.rs / 2.0, problem.r]
    thetas = [-problem.tau, -problem.tau / 2.0, 0.0]

    def check(name, fn, *args):
        try:
            value = fn(*args)
        except (ArithmeticError, ValueError) as exc:
            raise ValueError(
                f"coefficient {name} failed to evaluate at {args}: {exc}"
            ) from exc
        arr = np.asarray(value)
        if arr.shape != (d, d):
            raise ValueError(f"coefficient {name} must return shape ({d}, {d})")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError(f"coefficient {name} evaluated to a non-finite value")

    for t in ts:
        if problem.a is not None:
            check("a", problem.a, t)
        if problem.b is not None:
            check("b", problem.b, t)
        if problem.c is not None:
            for theta in thetas:
                check("c", problem.c, t, theta)
