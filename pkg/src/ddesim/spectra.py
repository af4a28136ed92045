"""Multipliers, eigenfunctions, stability verdicts, monodromy operators.

The nonzero eigenvalues of the assembled evolution matrix approximate the
multipliers of the underlying operator; eigenvalues below a relative
threshold are round-off artifacts of the finite-rank structure and are
discarded.  Eigenvectors prolong to eigenfunctions on ``[-tau, 0]`` by
interpolation on the history grid.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .evolution import EvolutionMatrices, evolution_matrix
from .interp import GridPair, NodeGrid, interp_eval
from .model import DdeProblem
from .quadrature import QuadratureRule

__all__ = [
    "Cluster",
    "SpectrumResult",
    "Eigenfunction",
    "multipliers",
    "cluster",
    "eigenfunction",
    "stability_verdict",
    "dominant_multiplier",
    "monodromy",
    "compute_spectrum",
]

DEFAULT_ZERO_REL_TOL = 1e-10
DEFAULT_MARGIN = 1e-9


def default_cluster_tol() -> float:
    return max(1e-6, math.sqrt(np.finfo(float).eps))


@dataclass(frozen=True)
class Cluster:
    """A group of nearby multipliers, summarized by their arithmetic mean."""

    mean: complex
    count: int
    members: tuple[int, ...]


@dataclass
class SpectrumResult:
    """Retained multipliers sorted by descending modulus."""

    multipliers: np.ndarray
    clusters: list[Cluster]
    eigenvectors: np.ndarray
    zero_threshold: float
    verdict: str


@dataclass(frozen=True)
class Eigenfunction:
    """Nodal values of an eigenfunction on the history grid.

    Calling the object evaluates the interpolating polynomial anywhere in
    ``[-tau, 0]``; at a history node the stored block is returned exactly.
    """

    grid: NodeGrid
    nodal_values: np.ndarray

    def __call__(self, theta: float):
        return interp_eval(self.grid, self.nodal_values, theta)


def _sort_key(values: np.ndarray) -> np.ndarray:
    # descending modulus, ties broken by descending real then imaginary part
    return np.lexsort((-values.imag, -values.real, -np.abs(values)))


def multipliers(
    mats: EvolutionMatrices,
    zero_rel_tol: float = DEFAULT_ZERO_REL_TOL,
    cluster_tol: float | None = None,
    margin: float = DEFAULT_MARGIN,
) -> SpectrumResult:
    """Eigen-decompose the evolution matrix and retain the nonzero spectrum.

    Eigenvalues with modulus at most ``zero_rel_tol`` times the spectral
    radius are discarded.  A real matrix is decomposed in real arithmetic
    so complex multipliers come out in exact conjugate pairs.
    """
    tm = mats.t_matrix
    if tm.shape[0] != tm.shape[1]:
        raise ValueError("t_matrix must be square")
    if not np.any(tm.imag):
        w, vecs = np.linalg.eig(tm.real)
    else:
        w, vecs = np.linalg.eig(tm)
    w = w.astype(complex)
    vecs = vecs.astype(complex)
    radius = float(np.abs(w).max()) if w.size else 0.0
    if radius == 0.0:
        raise ValueError("no nonzero spectrum resolved")
    threshold = zero_rel_tol * radius
    keep = np.abs(w) > threshold
    w, vecs = w[keep], vecs[:, keep]
    order = _sort_key(w)
    w, vecs = w[order], vecs[:, order]
    tol = default_cluster_tol() if cluster_tol is None else cluster_tol
    result = SpectrumResult(
        multipliers=w,
        clusters=cluster(w, tol),
        eigenvectors=vecs,
        zero_threshold=threshold,
        verdict="",
    )
    result.verdict = stability_verdict(result, margin)
    return result


def cluster(mults, tol: float) -> list[Cluster]:
    """Greedily group multipliers that lie within ``tol`` of a cluster mean.

    The input is processed in descending-modulus order, so clusters form
    around the largest members first; conjugate partners stay in separate
    clusters whenever their distance exceeds ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    values = np.asarray(mults, dtype=complex)
    order = _sort_key(values) if values.size else []
    groups: list[list[int]] = []
    means: list[complex] = []
    for idx in order:
        mu = values[idx]
        placed = False
        for gi, mean in enumerate(means):
            if abs(mu - mean) <= tol:
                groups[gi].append(int(idx))
                members = values[groups[gi]]
                means[gi] = complex(members.mean())
                placed = True
                break
        if not placed:
            groups.append([int(idx)])
            means.append(complex(mu))
    return [
        Cluster(mean=means[i], count=len(groups[i]), members=tuple(groups[i]))
        for i in range(len(groups))
    ]


def eigenfunction(
    mats: EvolutionMatrices, eigvec: np.ndarray, grids: GridPair | None = None
) -> Eigenfunction:
    """Prolong an eigenvector of the evolution matrix to an eigenfunction.

    The vector's d-blocks are the nodal values on the history grid.  The
    result is scaled so the value at ``theta = 0`` is 1 (its largest
    component for systems); if the value at 0 is negligible, the globally
    largest component is scaled to 1 instead.
    """
    grids = mats.grids if grids is None else grids
    d = mats.dim
    vec = np.asarray(eigvec, dtype=complex).reshape(-1)
    if vec.size != d * (grids.m + 1):
        raise ValueError("eigenvector length must be dim * (M + 1)")
    blocks = vec.reshape(-1, d)
    amax = float(np.abs(blocks).max())
    if amax == 0.0:
        raise ValueError("zero eigenvector")
    head = blocks[0]
    j = int(np.argmax(np.abs(head)))
    if abs(head[j]) > 1e-8 * amax:
        scale = head[j]
    else:
        flat = int(np.argmax(np.abs(blocks)))
        scale = blocks.flat[flat]
    return Eigenfunction(grid=grids.minus, nodal_values=blocks / scale)


def stability_verdict(result: SpectrumResult, margin: float = DEFAULT_MARGIN) -> str:
    """Classify the spectrum: all moduli below 1 (up to ``margin``) is stable.

    The strict inequality of the continuous theory is undecidable in
    floating point, so moduli within ``margin`` of 1 are ``marginal``.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if result.multipliers.size == 0:
        raise ValueError("no nonzero spectrum resolved")
    top = float(np.abs(result.multipliers[0]))
    if top < 1.0 - margin:
        return "stable"
    if top > 1.0 + margin:
        return "unstable"
    return "marginal"


def dominant_multiplier(result: SpectrumResult) -> complex:
    """Largest-modulus multiplier, preferring the nonnegative-imaginary twin."""
    if result.multipliers.size == 0:
        raise ValueError("no nonzero spectrum resolved")
    top = result.multipliers[0]
    mod = abs(top)
    for mu in result.multipliers:
        if abs(abs(mu) - mod) <= 1e-14 * max(mod, 1.0) and mu.imag >= 0:
            return complex(mu)
    return complex(top)


def monodromy(
    problem: DdeProblem,
    omega: float,
    k: int | None = None,
    n: int = 16,
    m: int | None = None,
    rule: QuadratureRule | None = None,
) -> EvolutionMatrices:
    """Evolution matrix over ``[0, k * omega]`` for ``omega``-periodic coefficients.

    ``k`` defaults to the smallest integer with ``k * omega >= tau``, the
    regime where the operator power is compact.  The chosen ``k`` is
    recorded on the result; for ``k > 1`` the eigenvalues are those of the
    k-th power of the period map and no root extraction is attempted.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    if k is None:
        k = max(1, math.ceil(problem.tau / omega - 1e-12))
    if k < 1:
        raise ValueError("k must be a positive integer")
    windowed = dataclasses.replace(problem, s=0.0, r=k * omega)
    mats = evolution_matrix(windowed, n, m, rule)
    mats.power = k
    return mats


def compute_spectrum(
    problem: DdeProblem,
    n: int,
    m: int | None = None,
    rule: QuadratureRule | None = None,
    zero_rel_tol: float = DEFAULT_ZERO_REL_TOL,
    cluster_tol: float | None = None,
    margin: float = DEFAULT_MARGIN,
) -> tuple[EvolutionMatrices, SpectrumResult]:
    """Assemble the evolution matrix and extract its spectrum in one call."""
    mats = evolution_matrix(problem, n, m, rule)
    result = multipliers(
        mats, zero_rel_tol=zero_rel_tol, cluster_tol=cluster_tol, margin=margin
    )
    return mats, result
