"""Stability spectra of linear delay differential equations.

The package discretizes the operator that evolves the solution segment of

    x'(t) = a(t) x(t) + b(t) x(t - tau) + integral_{-tau}^{0} c(t, theta) x(t + theta) dtheta

from time ``s`` to time ``r`` by polynomial collocation on Chebyshev
nodes, and reads stability off the eigenvalues of the resulting matrix:
multipliers for autonomous problems, Floquet multipliers for periodic
ones.  Eigenvalue accuracy improves faster than any fixed power of the
collocation degree for these problems, whose eigenfunctions are analytic.
"""

from .collocate import (
    CollocationSolution,
    ReferenceSolution,
    RemainderEstimate,
    collocation_residual,
    collocation_solve,
    evolve_state,
    nodal_values,
    reference_solution,
    remainder_estimate,
)
from .estimator import EvolutionOperator
from .evolution import (
    EvolutionMatrices,
    SingularOperatorError,
    assemble_u,
    assemble_v,
    evolution_matrix,
    index_m_minus,
    index_n_plus,
)
from .expressions import CoefficientExpr, ExpressionError, parse_coefficient
from .interp import (
    GridPair,
    NodeGrid,
    bary_weights,
    basis_deriv_row,
    basis_row,
    cheb_zero_nodes,
    history_nodes,
    interp_eval,
    lebesgue_constant,
)
from .model import (
    DdeProblem,
    ShiftedProblem,
    matrix_problem,
    scalar_problem,
    shift_problem,
    validate_problem,
)
from .oracles import (
    OracleTarget,
    autonomous_characteristic,
    characteristic_roots,
    rightmost_root,
    smallest_root,
    target_for_builtin,
)
from .problems import (
    BUILTINS,
    distributed_const,
    hayes,
    make_builtin,
    periodic_scalar,
    pure_ode,
)
from .quadrature import (
    QuadratureRule,
    clenshaw_curtis,
    default_rule,
    gauss_legendre,
    integrate,
    make_rule,
)
from .spectra import (
    Cluster,
    Eigenfunction,
    SpectrumResult,
    cluster,
    compute_spectrum,
    dominant_multiplier,
    eigenfunction,
    monodromy,
    multipliers,
    stability_verdict,
)

__version__ = "0.1.0"
