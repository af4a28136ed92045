"""Scikit-learn style front end.

``EvolutionOperator`` wraps the assembly/eigendecomposition pipeline in
the familiar ``fit``/``transform`` shape: ``fit`` takes a problem and
builds the discretized evolution operator, ``transform`` applies it to
rows of nodal initial states.  Hyperparameters go through ``get_params``
/ ``set_params``, so the solver composes with ``sklearn.base.clone`` and
``ParameterGrid`` for parameter sweeps.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .model import DdeProblem, validate_problem
from .quadrature import default_rule, make_rule
from .spectra import Eigenfunction, compute_spectrum, eigenfunction

__all__ = ["EvolutionOperator"]


class EvolutionOperator(BaseEstimator):
    """Finite-dimensional evolution operator of a linear delay problem.

    Parameters
    ----------
    N : int, default=16
        Collocation degree (number of interior Chebyshev nodes).
    M : int or None, default=None
        Number of history subintervals; ``None`` means ``M = N``.
    quad_kind : {'gauss_legendre', 'clenshaw_curtis'}
        Quadrature family for distributed-delay integrals.
    quad_points : int or None
        Points per quadrature window; ``None`` picks a degree-aware default.
    zero_rel_tol : float
        Eigenvalues below this fraction of the spectral radius are dropped.
    cluster_tol : float or None
        Distance tolerance for multiplicity clustering.
    margin : float
        Half-width of the band around modulus 1 classified as marginal.

    Attributes
    ----------
    t_matrix_ : ndarray
        The assembled evolution matrix, shape ``(d(M+1), d(M+1))``.
    multipliers_ : ndarray
        Retained multipliers, descending modulus.
    clusters_ : list
        Multiplicity clusters of the multipliers.
    eigenvectors_ : ndarray
        Eigenvector columns aligned with ``multipliers_``.
    verdict_ : str
        'stable', 'unstable' or 'marginal'.
    cond_estimate_ : float
        Condition estimate of the collocation matrix.
    n_features_in_ : int
        Length of a nodal state vector, ``d * (M + 1)``.
    """

    def __init__(
        self,
        N=16,
        M=None,
        quad_kind="gauss_legendre",
        quad_points=None,
        zero_rel_tol=1e-10,
        cluster_tol=None,
        margin=1e-9,
    ):
        self.N = N
        self.M = M
        self.quad_kind = quad_kind
        self.quad_points = quad_points
        self.zero_rel_tol = zero_rel_tol
        self.cluster_tol = cluster_tol
        self.margin = margin

    def _rule(self):
        if self.quad_points is None:
            if self.quad_kind == "gauss_legendre":
                return default_rule(self.N)
            return make_rule(self.quad_kind, max(self.N + 3, 8))
        return make_rule(self.quad_kind, self.quad_points)

    def fit(self, problem: DdeProblem, y=None):
        """Assemble the evolution matrix for ``problem`` and decompose it."""
        if not isinstance(problem, DdeProblem):
            raise TypeError("fit expects a DdeProblem")
        validate_problem(problem)
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError("N must be a positive integer")
        mats, result = compute_spectrum(
            problem,
            int(self.N),
            None if self.M is None else int(self.M),
            self._rule(),
            zero_rel_tol=self.zero_rel_tol,
            cluster_tol=self.cluster_tol,
            margin=self.margin,
        )
        self.problem_ = problem
        self.matrices_ = mats
        self.grids_ = mats.grids
        self.t_matrix_ = mats.t_matrix
        self.multipliers_ = result.multipliers
        self.clusters_ = result.clusters
        self.eigenvectors_ = result.eigenvectors
        self.verdict_ = result.verdict
        self.spectrum_ = result
        self.cond_estimate_ = mats.cond_estimate
        self.n_features_in_ = mats.t_matrix.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "t_matrix_"):
            raise NotFittedError("this EvolutionOperator instance is not fitted yet")

    def transform(self, X) -> np.ndarray:
        """Propagate nodal initial states over the fitted window.

        ``X`` has one state per row: the d-blocks of the initial function
        on the history grid, ``d * (M + 1)`` entries.  Returns the evolved
        states in the same layout.
        """
        self._check_fitted()
        X = np.asarray(X, dtype=complex)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected states with {self.n_features_in_} entries, got shape {X.shape}"
            )
        out = X @ self.t_matrix_.T
        return out[0] if single else out

    def eigenfunction(self, index: int = 0) -> Eigenfunction:
        """Eigenfunction on ``[-tau, 0]`` for the ``index``-th multiplier."""
        self._check_fitted()
        return eigenfunction(self.matrices_, self.eigenvectors_[:, index])
