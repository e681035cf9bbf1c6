"""Numerical verification of the six-parameter beta integral over the tube
domain ``v1 > 0, v1 v2 - sum x_j^2 > 0`` in C^{n+1}."""

__version__ = "0.1.0"

from .closed_form import VARIANTS, ClosedFormBreakdown, Variant, breakdown, factor_I, factor_J, rhs
from .domain import (
    BetaParams,
    ReducedPoint,
    SMatrix,
    TubePoint,
    contains,
    integrand_lhs,
    integrand_separated,
    invariant_measure_density,
    jacobian_reduction,
    reduce,
    reduce_inverse,
    s_matrix,
    validate_params,
)
from .errors import (
    BranchError,
    ConfigError,
    ConvergenceError,
    DomainError,
    MembershipError,
    ParameterError,
    PoleError,
    ProposalError,
    TubeBetaError,
)
from .montecarlo import IntegrationEstimate, mc_lhs
from .quadrature import quad_aux, quad_J_reduced
from .sampling import ProposalShapes, SamplerConfig
from .special import (
    BiExponent,
    aux_closed_form,
    beta_1d,
    cauchy_beta_inner,
    gamma,
    log_gamma,
    power_pair,
)
from .steps import STEPS, StepReport, verify_step
