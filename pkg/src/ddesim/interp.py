"""Node grids and barycentric Lagrange interpolation.

Two grids drive the discretization: the zeros of the Chebyshev polynomial
of the first kind mapped to the open interval ``(0, rs)`` (collocation
nodes, with the auxiliary node ``0`` prepended), and Chebyshev-Lobatto
points on ``[-tau, 0]`` stored in descending order (history nodes, index 0
at ``theta = 0``).  All evaluation goes through the second barycentric
form, which is numerically stable for large node counts; evaluation
exactly at a node short-circuits to the cardinal property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NodeGrid",
    "GridPair",
    "cheb_zero_nodes",
    "history_nodes",
    "bary_weights",
    "basis_row",
    "interp_eval",
    "basis_deriv_row",
    "lebesgue_constant",
]


@dataclass(frozen=True)
class NodeGrid:
    """Distinct, strictly monotone nodes with their barycentric weights."""

    nodes: np.ndarray
    interval: tuple[float, float]
    bary_weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.bary_weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "bary_weights", weights)
        if nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes must be a non-empty 1-d array")
        if weights.shape != nodes.shape:
            raise ValueError("weights must match nodes in length")
        d = np.diff(nodes)
        if nodes.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("nodes must be strictly monotone")
        lo, hi = self.interval
        if nodes.min() < lo - 1e-14 * max(1.0, abs(lo)) or nodes.max() > hi + 1e-14 * max(1.0, abs(hi)):
            raise ValueError("nodes must lie inside the stated interval")

    def __len__(self) -> int:
        return self.nodes.size

    @classmethod
    def from_nodes(cls, nodes, interval=None) -> "NodeGrid":
        nodes = np.asarray(nodes, dtype=float)
        if interval is None:
            interval = (float(nodes.min()), float(nodes.max()))
        return cls(nodes=nodes, interval=interval, bary_weights=bary_weights(nodes))


def bary_weights(nodes) -> np.ndarray:
    """Barycentric weights ``w_j = 1 / prod_{k != j} (x_j - x_k)``.

    Any common rescaling of the weights cancels in the barycentric ratio;
    the raw product values are returned.  Raises on duplicate nodes.
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    w = np.ones(n)
    for j in range(n):
        diff = x[j] - x
        diff[j] = 1.0
        if np.any(diff == 0.0):
            raise ValueError("duplicate nodes")
        w[j] = 1.0 / np.prod(diff)
    return w


def cheb_zero_nodes(n: int, rs: float) -> NodeGrid:
    """Zeros of the degree-``n`` Chebyshev polynomial mapped to ``(0, rs)``.

    Nodes are ``rs/2 * (1 - cos((2i - 1) pi / (2n)))`` for ``i = 1..n``,
    strictly increasing and symmetric about ``rs/2``.  The grid is
    symmetrized explicitly so ``x_i + x_{n+1-i} == rs`` holds exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not rs > 0:
        raise ValueError("rs must be positive")
    x = np.empty(n)
    for i in range(1, n // 2 + 1):
        x[i - 1] = 0.5 * rs * (1.0 - math.cos((2 * i - 1) * math.pi / (2 * n)))
        x[n - i] = rs - x[i - 1]
    if n % 2 == 1:
        x[n // 2] = 0.5 * rs
    return NodeGrid(nodes=x, interval=(0.0, rs), bary_weights=bary_weights(x))


def history_nodes(m: int, tau: float) -> NodeGrid:
    """Chebyshev-Lobatto points on ``[-tau, 0]``, descending from 0 to -tau.

    Returns ``m + 1`` nodes including both endpoints, ordered so index 0 is
    ``theta = 0`` and index ``m`` is ``theta = -tau``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not tau > 0:
        raise ValueError("tau must be positive")
    x = np.empty(m + 1)
    x[0] = 0.0
    x[m] = -tau
    for j in range(1, (m + 1) // 2):
        x[j] = -0.5 * tau * (1.0 - math.cos(j * math.pi / m))
        x[m - j] = -tau - x[j]
    if m % 2 == 0 and m >= 2:
        x[m // 2] = -0.5 * tau
    return NodeGrid(nodes=x, interval=(-tau, 0.0), bary_weights=bary_weights(x))


def basis_row(grid: NodeGrid, t: float) -> np.ndarray:
    """Cardinal function values ``(l_0(t), ..., l_n(t))``.

    Evaluation at a node returns the exact unit vector; elsewhere the
    second barycentric form is used.
    """
    x = grid.nodes
    diff = t - x
    hit = np.nonzero(diff == 0.0)[0]
    if hit.size:
        row = np.zeros(x.size)
        row[hit[0]] = 1.0
        return row
    q = grid.bary_weights / diff
    return q / q.sum()


def interp_eval(grid: NodeGrid, values, t: float):
    """Evaluate the interpolating polynomial of nodal ``values`` at ``t``.

    ``values`` has one entry (scalar or d-block) per node.  At a node the
    nodal value is returned exactly.
    """
    values = np.asarray(values)
    if values.shape[0] != len(grid):
        raise ValueError("values length must match the node count")
    row = basis_row(grid, t)
    return row @ values


def basis_deriv_row(grid: NodeGrid, t: float) -> np.ndarray:
    """Derivatives of the cardinal functions, ``(l_0'(t), ..., l_n'(t))``.

    At a node the standard differentiation-matrix identity is used with
    the diagonal entry from the negative row sum, which avoids the
    cancellation-prone direct formula.  The row sums to zero.
    """
    x = grid.nodes
    w = grid.bary_weights
    n = x.size
    if n == 1:
        return np.zeros(1)
    diff = t - x
    hit = np.nonzero(diff == 0.0)[0]
    if hit.size:
        i = hit[0]
        row = np.empty(n)
        mask = np.arange(n) != i
        row[mask] = (w[mask] / w[i]) / (x[i] - x[mask])
        row[i] = 0.0
        row[i] = -row.sum()
        return row
    q = w / diff
    s = q.sum()
    sprime = -(w / diff**2).sum()
    lrow = q / s
    return lrow * (-1.0 / diff - sprime / s)


def lebesgue_constant(grid: NodeGrid, samples: int) -> float:
    """Lower-bound estimate of the Lebesgue constant of the grid.

    Maximizes ``sum_j |l_j(t)|`` over ``samples`` equispaced points in the
    grid interval.  Requires ``samples >= 10 * len(grid)``.
    """
    if samples < 10 * len(grid):
        raise ValueError("samples must be at least 10 times the node count")
    lo, hi = grid.interval
    ts = np.linspace(lo, hi, samples)
    best = 0.0
    for t in ts:
        val = float(np.abs(basis_row(grid, t)).sum())
        if val > best:
            best = val
    return best


@dataclass(frozen=True)
class GridPair:
    """History grid on ``[-tau, 0]`` and collocation grid on ``(0, rs)``.

    ``minus`` holds the ``m + 1`` descending history nodes, ``plus`` the
    ``n`` Chebyshev zeros, and ``plus0`` the zeros with the auxiliary node
    ``0`` prepended (``n + 1`` ascending nodes).
    """

    minus: NodeGrid
    plus: NodeGrid
    plus0: NodeGrid

    @classmethod
    def build(cls, n: int, m: int, rs: float, tau: float) -> "GridPair":
        plus = cheb_zero_nodes(n, rs)
        plus0_nodes = np.concatenate(([0.0], plus.nodes))
        plus0 = NodeGrid(
            nodes=plus0_nodes,
            interval=(0.0, rs),
            bary_weights=bary_weights(plus0_nodes),
        )
        minus = history_nodes(m, tau)
        return cls(minus=minus, plus=plus, plus0=plus0)

    @property
    def n(self) -> int:
        return len(self.plus)

    @property
    def m(self) -> int:
        return len(self.minus) - 1

    @property
    def rs(self) -> float:
        return self.plus.interval[1]

    @property
    def tau(self) -> float:
        return -self.minus.interval[0]
