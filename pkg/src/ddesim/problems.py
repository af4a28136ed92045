"""Builtin benchmark problems.

Each builtin is a named factory with numeric parameters, so parameter
sweeps can rebind coefficients by name.  Exactly-zero coefficients are
dropped (stored as ``None``) so downstream assembly skips absent terms.
"""

from __future__ import annotations

import math

from .model import DdeProblem, scalar_problem

__all__ = [
    "hayes",
    "pure_ode",
    "distributed_const",
    "periodic_scalar",
    "BUILTINS",
    "builtin_defaults",
    "make_builtin",
]


def _or_none(value: float):
    return None if value == 0.0 else value


def hayes(
    a: float = 0.0,
    b: float = -1.0,
    tau: float = 1.0,
    s: float = 0.0,
    r: float | None = None,
) -> DdeProblem:
    """Constant-coefficient scalar problem ``x' = a x(t) + b x(t - tau)``."""
    return scalar_problem(a=_or_none(a), b=_or_none(b), tau=tau, s=s, r=r)


def pure_ode(
    a: float = 1.0, tau: float = 1.0, s: float = 0.0, r: float | None = None
) -> DdeProblem:
    """Delay-free scalar problem ``x' = a x`` carried on the delay state space."""
    return scalar_problem(a=_or_none(a), tau=tau, s=s, r=r)


def distributed_const(
    c0: float = -1.0, tau: float = 1.0, s: float = 0.0, r: float | None = None
) -> DdeProblem:
    """Constant distributed kernel: ``x' = c0 * integral_{-tau}^0 x(t + theta) dtheta``."""
    kernel = None if c0 == 0.0 else (lambda t, theta: c0)
    return scalar_problem(c=kernel, tau=tau, s=s, r=r)


def periodic_scalar(
    a0: float = 0.0,
    a1: float = 1.0,
    omega: float = 1.0,
    b: float = 0.0,
    tau: float = 1.0,
    s: float = 0.0,
    r: float | None = None,
) -> DdeProblem:
    """Periodic coefficient ``a(t) = a0 + a1 sin(2 pi t / omega)`` plus constant delay term."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    if a0 == 0.0 and a1 == 0.0:
        a = None
    else:
        a = lambda t: a0 + a1 * math.sin(2.0 * math.pi * t / omega)
    return scalar_problem(a=a, b=_or_none(b), tau=tau, s=s, r=r)


BUILTINS = {
    "hayes": (hayes, {"a": 0.0, "b": -1.0, "tau": 1.0}),
    "pure-ode": (pure_ode, {"a": 1.0, "tau": 1.0}),
    "distributed-const": (distributed_const, {"c0": -1.0, "tau": 1.0}),
    "periodic-scalar": (
        periodic_scalar,
        {"a0": 0.0, "a1": 1.0, "omega": 1.0, "b": 0.0, "tau": 1.0},
    ),
}


def builtin_defaults(name: str) -> dict[str, float]:
    """Default coefficient parameters of a builtin (window fields excluded)."""
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin problem {name!r}")
    return dict(BUILTINS[name][1])


def make_builtin(
    name: str,
    params: dict[str, float] | None = None,
    s: float = 0.0,
    r: float | None = None,
) -> DdeProblem:
    """Instantiate a builtin by name with parameter overrides."""
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin problem {name!r}")
    factory, defaults = BUILTINS[name]
    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ValueError(
                f"builtin {name!r} has no parameter {key!r}; "
                f"expected one of {sorted(defaults)}"
            )
        merged[key] = float(value)
    return factory(s=s, r=r, **merged)
