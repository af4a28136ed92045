"""Quadrature rules for the distributed-delay integrals.

The integrands are products of a smooth kernel with a polynomial of the
collocation degree, over windows that are subintervals of ``[-tau, 0]``.
Gauss-Legendre is the default; Clenshaw-Curtis is provided as an
alternative.  Rules are stored on the reference interval ``[-1, 1]`` and
mapped affinely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "clenshaw_curtis",
    "make_rule",
    "default_rule",
    "integrate",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Abscissae and weights on the reference interval ``[-1, 1]``."""

    kind: str
    points: int
    abscissae: np.ndarray
    weights: np.ndarray

    @property
    def exactness_degree(self) -> int:
        """Largest polynomial degree the rule integrates exactly."""
        if self.kind == "gauss_legendre":
            return 2 * self.points - 1
        return max(self.points - 1, 0)


def gauss_legendre(points: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``points`` nodes (exact to degree ``2p - 1``)."""
    if points < 1:
        raise ValueError("points must be >= 1")
    x, w = np.polynomial.legendre.leggauss(points)
    return QuadratureRule(kind="gauss_legendre", points=points, abscissae=x, weights=w)


def clenshaw_curtis(points: int) -> QuadratureRule:
    """Clenshaw-Curtis rule with ``points`` nodes (exact to degree ``p - 1``).

    Weights follow the classical closed formula on the extrema grid
    ``cos(k pi / (p - 1))``; a single point degenerates to the midpoint
    rule.
    """
    if points < 1:
        raise ValueError("points must be >= 1")
    if points == 1:
        return QuadratureRule(
            kind="clenshaw_curtis",
            points=1,
            abscissae=np.array([0.0]),
            weights=np.array([2.0]),
        )
    n = points - 1
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k * k - 1.0)
        v -= np.cos(n * theta[ii]) / (n**2 - 1.0)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k * k - 1.0)
    w[ii] = 2.0 * v / n
    x = np.cos(theta)[::-1].copy()
    return QuadratureRule(
        kind="clenshaw_curtis", points=points, abscissae=x, weights=w[::-1].copy()
    )


def make_rule(kind: str, points: int) -> QuadratureRule:
    if kind == "gauss_legendre":
        return gauss_legendre(points)
    if kind == "clenshaw_curtis":
        return clenshaw_curtis(points)
    raise ValueError(f"unknown quadrature kind {kind!r}")


def default_rule(n_collocation: int) -> QuadratureRule:
    """Default rule for collocation degree ``n``.

    Gauss-Legendre with ``max(ceil((n + 3) / 2), 8)`` points: the
    integrand is a kernel sample times a polynomial of degree at most
    ``n``, so polynomial kernels of modest degree are integrated exactly
    and the quadrature never limits the overall convergence rate.
    """
    return gauss_legendre(max(math.ceil((n_collocation + 3) / 2), 8))


def integrate(rule: QuadratureRule, f, lo: float, hi: float):
    """Integrate ``f`` over ``[lo, hi]`` with the affinely mapped rule.

    ``f`` may return scalars or arrays; the result has the same shape.
    A collapsed window (``lo == hi``) integrates to exactly zero.
    """
    if lo > hi:
        raise ValueError("integration window must satisfy lo <= hi")
    half = 0.5 * (hi - lo)
    mid = 0.5 * (lo + hi)
    acc = None
    for xi, wi in zip(rule.abscissae, rule.weights):
        val = wi * np.asarray(f(mid + half * xi))
        acc = val if acc is None else acc + val
    return half * acc
