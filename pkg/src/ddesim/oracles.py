"""Independent spectral targets for the autonomous builtin problems.

For constant coefficients the multipliers are exponentials of the
characteristic roots: ``mu = exp(lambda * window)`` where ``lambda``
solves

    lambda = a + b exp(-lambda tau) + c0 * (1 - exp(-lambda tau)) / lambda

(the last term being the Laplace transform of a constant kernel over the
delay window).  Roots are located by Newton iteration started from a grid
of points on a rectangle of the complex plane, with duplicates deflated;
only problems with a registered target can report an error against
"exact".  None of this shares code with the collocation pipeline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "CharacteristicFunction",
    "OracleTarget",
    "autonomous_characteristic",
    "characteristic_roots",
    "rightmost_root",
    "smallest_root",
    "target_for_builtin",
]


@dataclass(frozen=True)
class CharacteristicFunction:
    """Holomorphic characteristic function with derivative, for Newton."""

    fun: Callable[[complex], complex]
    dfun: Callable[[complex], complex]
    description: str


SERIES_RADIUS = 0.5


def _kernel_transform(z: complex, tau: float) -> complex:
    """``g(z) = (1 - exp(-z tau)) / z`` with its removable singularity filled.

    The direct quotient loses roughly ``eps / |z tau|`` digits to
    cancellation, so small arguments are summed as
    ``tau * sum_k (-z tau)^k / (k + 1)!`` instead.
    """
    w = z * tau
    if abs(w) < SERIES_RADIUS:
        total = 0j
        term = 1.0 + 0j
        k = 0
        while abs(term) > 1e-20:
            total += term
            k += 1
            term *= -w / (k + 1)
        return tau * total
    return (1 - cmath.exp(-w)) / z


def _kernel_transform_deriv(z: complex, tau: float) -> complex:
    w = z * tau
    if abs(w) < SERIES_RADIUS:
        # -tau^2 * sum_k (k + 1) (-w)^k / (k + 2)!
        total = 0j
        term = 0.5 + 0j
        k = 0
        while abs(term) > 1e-20:
            total += term
            k += 1
            term *= -w * (k + 1) / (k * (k + 2))
        return -tau * tau * total
    return tau * cmath.exp(-w) / z - _kernel_transform(z, tau) / z


def autonomous_characteristic(
    a: float, b: float, c0: float, tau: float
) -> CharacteristicFunction:
    """Characteristic function of the constant-coefficient problem."""

    def fun(z: complex) -> complex:
        val = z - a
        if b != 0.0:
            val -= b * cmath.exp(-z * tau)
        if c0 != 0.0:
            val -= c0 * _kernel_transform(z, tau)
        return val

    def dfun(z: complex) -> complex:
        val = 1.0 + 0j
        if b != 0.0:
            val += b * tau * cmath.exp(-z * tau)
        if c0 != 0.0:
            val -= c0 * _kernel_transform_deriv(z, tau)
        return val

    return CharacteristicFunction(
        fun=fun,
        dfun=dfun,
        description=f"lambda = {a} + {b} exp(-lambda {tau}) + {c0} g(lambda)",
    )


def _newton(cf: CharacteristicFunction, z0: complex, tol: float, max_iter: int):
    z = z0
    try:
        for _ in range(max_iter):
            f = cf.fun(z)
            df = cf.dfun(z)
            if df == 0:
                return None
            dz = f / df
            z -= dz
            if abs(dz) <= tol * (1.0 + abs(z)):
                return z
    except (OverflowError, ZeroDivisionError, ValueError):
        return None
    return None


def characteristic_roots(
    cf: CharacteristicFunction,
    re_range: tuple[float, float] = (-8.0, 4.0),
    im_range: tuple[float, float] = (0.0, 32.0),
    grid: tuple[int, int] = (25, 25),
    tol: float = 1e-13,
    max_iter: int = 80,
) -> np.ndarray:
    """Roots found by deflated Newton from a grid on a rectangle.

    Real coefficients are assumed, so only the closed upper half plane is
    searched and each root is reported with nonnegative imaginary part.
    Roots drifting far outside the padded rectangle are discarded.
    """
    re_lo, re_hi = re_range
    im_lo, im_hi = im_range
    pad_re = 0.5 * (re_hi - re_lo)
    pad_im = 0.5 * (im_hi - im_lo)
    found: list[complex] = []
    for re0 in np.linspace(re_lo, re_hi, grid[0]):
        for im0 in np.linspace(im_lo, im_hi, grid[1]):
            z = _newton(cf, complex(re0, im0), tol, max_iter)
            if z is None:
                continue
            z = complex(z.real, abs(z.imag))
            if not (re_lo - pad_re <= z.real <= re_hi + pad_re):
                continue
            if z.imag > im_hi + pad_im:
                continue
            if abs(cf.fun(z)) > 1e-9 * (1.0 + abs(z)):
                continue
            if all(abs(z - w) > 1e-8 * (1.0 + abs(z)) for w in found):
                found.append(z)
    if not found:
        raise RuntimeError(
            f"no characteristic roots found in the search rectangle ({cf.description})"
        )
    found.sort(key=lambda z: (-z.real, z.imag))
    return np.array(found)


def rightmost_root(cf: CharacteristicFunction, **kwargs) -> complex:
    """Root with the largest real part in the search rectangle."""
    return complex(characteristic_roots(cf, **kwargs)[0])


def smallest_root(cf: CharacteristicFunction, **kwargs) -> complex:
    """Root of smallest modulus in the search rectangle."""
    roots = characteristic_roots(cf, **kwargs)
    return complex(roots[np.argmin(np.abs(roots))])


@dataclass(frozen=True)
class OracleTarget:
    """A trusted multiplier for a given problem and window length."""

    multiplier: complex
    provenance: str


def target_for_builtin(
    name: str, params: dict[str, float], window: float
) -> OracleTarget | None:
    """Dominant-multiplier target for a builtin, or ``None`` if unavailable.

    Autonomous builtins go through the characteristic equation (Newton
    when a transcendental term is present, directly otherwise); the
    periodic builtin without delay terms has the analytic target
    ``exp(integral of a)``.  Anything else is refused rather than guessed.
    """
    if name == "pure-ode":
        a = params.get("a", 0.0)
        return OracleTarget(
            multiplier=cmath.exp(a * window),
            provenance=f"analytic: exp(a * window), a={a}",
        )
    if name == "hayes":
        a, b, tau = params.get("a", 0.0), params.get("b", 0.0), params["tau"]
        if b == 0.0:
            return OracleTarget(
                multiplier=cmath.exp(a * window),
                provenance=f"analytic: exp(a * window), a={a}",
            )
        root = rightmost_root(autonomous_characteristic(a, b, 0.0, tau))
        return OracleTarget(
            multiplier=cmath.exp(root * window),
            provenance=f"newton: rightmost root {root!r}",
        )
    if name == "distributed-const":
        c0, tau = params.get("c0", 0.0), params["tau"]
        if c0 == 0.0:
            return OracleTarget(multiplier=1.0 + 0j, provenance="analytic: zero problem")
        root = rightmost_root(autonomous_characteristic(0.0, 0.0, c0, tau))
        return OracleTarget(
            multiplier=cmath.exp(root * window),
            provenance=f"newton: rightmost root {root!r}",
        )
    if name == "periodic-scalar":
        if params.get("b", 0.0) != 0.0:
            return None
        a0, a1 = params.get("a0", 0.0), params.get("a1", 0.0)
        omega = params.get("omega", 1.0)
        integral = a0 * window + a1 * (omega / (2 * math.pi)) * (
            1.0 - math.cos(2 * math.pi * window / omega)
        )
        return OracleTarget(
            multiplier=cmath.exp(integral),
            provenance="analytic: exp of the coefficient integral",
        )
    return None
