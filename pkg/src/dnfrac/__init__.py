"""Fractional calculus toolkit for the degenerate equation

    D^{gamma_0, ..., gamma_m} u(y) = lam * y**s * u(y),   y > 0,

with the Dzhrbashyan-Nersesyan derivative.  Solutions are built from
Kilbas-Saigo functions and checked term by term against the operator.
"""

from .dn_operator import (
    DnSequence,
    HilferParams,
    Monomial,
    PowerRuleResult,
    boundary_apply_monomial,
    caputo_sequence,
    dn_apply_monomial,
    dn_power_rule,
    dn_sequence_new,
    hilfer_sequence,
    rl_sequence,
    rl_step,
)
from .errors import (
    ConsistencyError,
    ConvergenceFailure,
    DnfracError,
    DomainError,
    PoleError,
    TruncationFailure,
    UnsupportedDomain,
    ValidationError,
)
from .oracle import QuadratureConfig, rl_derivative_numeric, rl_integral_numeric, validate_algebra
from .solver import (
    CauchyData,
    GeneralSolutionWeights,
    ProblemSpec,
    ResidualReport,
    SeriesSolution,
    boundary_limit_matrix,
    cauchy_solution,
    eval_solution,
    fundamental_solution,
    fundamental_system,
    general_solution,
    verify_cauchy_limits,
    verify_residual,
)
from .special_fn import (
    KilbasSaigoParams,
    MittagLefflerParams,
    SeriesEvalConfig,
    gamma,
    gamma_ratio,
    ks_coefficients,
    ks_eval,
    log_gamma,
    ml_eval,
)

__version__ = "0.1.0"
