"""Quasi-orthogonal q-Laguerre polynomials: evaluation, zeros and ordering checks."""

from .errors import (
    BracketError,
    ChainViolationError,
    ConvergenceError,
    DegeneracyError,
    DegenerateParameterError,
    DomainError,
    NoSignChangeError,
    QLagError,
    RegimeError,
    TruncationError,
)
from .precision import DEFAULT_PRECISION, context, default_precision, pow_real, qpoch, real, to_decimal_string
from .qlaguerre import (
    B_n,
    FamilyParams,
    PolySpec,
    a_n,
    b_n,
    c_n,
    coefficients,
    constant,
    constant_A,
    eval_hypergeometric,
    eval_recurrence,
    evaluate_relation,
    identity_residual,
    make_params,
    relation_holds,
)
from .zero_engine import ZeroList, zeros
from .checks import (
    BoundsRecord,
    CommonZeroReport,
    InterlacingReport,
    MomentReport,
    Verdict,
    bounds,
    check_bn_pattern,
    check_common_zero,
    check_interlace,
    check_same_degree_shift2,
    check_stieltjes_failure,
    find_common_zero_delta,
    moment,
    moments,
    run_check,
)

__version__ = "0.1.0"
