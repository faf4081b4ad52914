"""hardy-lab: a numerical laboratory for Hardy's Z function.

Point evaluation (fast Riemann-Siegel path and an independent
Euler-Maclaurin oracle), zero tables with gap statistics, zero-aware
adaptive quadrature, value-distribution functionals on dyadic windows,
the step-function decomposition of the primitive of Z, divisor-sum
identities for the cubic moment, the mean-square error term E(T), and
the random-matrix moment constants.
"""

from ._backend import BACKEND
from .constants import MomentConstant, conjectured_moment, euler_constant, ks_constant
from .distribution import (
    CltSample,
    MomentReport,
    alternating_gap_identity,
    i_plus_minus,
    j_measures,
    one_sided_cubic,
    selberg_clt_sample,
    small_values_measure,
)
from .divisor import (
    CapacityError,
    DivisorTable,
    cubic_moment_rhs,
    pure_exponential_sum,
    sieve_dk,
)
from .jutila import (
    JutilaDecomposition,
    f1,
    int_f1_closed_form,
    int_f1_piecewise,
    int_f1_tail_bound,
    k_step,
    predict_F,
    u_fourier,
)
from .meansq import ETrace, build_etrace, dk_estimate, e_of, g_of, get_etrace, j_pm_e
from .quad import QuadResult, SignPartition, integrate, integrate_prefix, sign_partition
from .special import (
    DEFAULT_CONFIG,
    EvalConfig,
    ZEvaluation,
    theta,
    z_fast,
    z_oracle,
    zeta_abs_sq,
)
from .zeros import (
    GapStats,
    ZeroTable,
    find_zeros,
    gap_sum,
    kalpokas_steuding_sum,
    normalized_gaps,
    theta_congruence_points,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "DEFAULT_CONFIG",
    "EvalConfig",
    "ZEvaluation",
    "theta",
    "z_fast",
    "z_oracle",
    "zeta_abs_sq",
    "ZeroTable",
    "GapStats",
    "find_zeros",
    "gap_sum",
    "normalized_gaps",
    "theta_congruence_points",
    "kalpokas_steuding_sum",
    "QuadResult",
    "SignPartition",
    "integrate",
    "integrate_prefix",
    "sign_partition",
    "MomentReport",
    "CltSample",
    "i_plus_minus",
    "j_measures",
    "alternating_gap_identity",
    "small_values_measure",
    "one_sided_cubic",
    "selberg_clt_sample",
    "JutilaDecomposition",
    "k_step",
    "f1",
    "predict_F",
    "u_fourier",
    "int_f1_closed_form",
    "int_f1_tail_bound",
    "int_f1_piecewise",
    "DivisorTable",
    "CapacityError",
    "sieve_dk",
    "pure_exponential_sum",
    "cubic_moment_rhs",
    "ETrace",
    "build_etrace",
    "get_etrace",
    "e_of",
    "g_of",
    "j_pm_e",
    "dk_estimate",
    "MomentConstant",
    "euler_constant",
    "ks_constant",
    "conjectured_moment",
]
