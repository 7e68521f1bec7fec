"""Sharp and classical tail bounds for sums of independent bounded
mean-zero random variables, with exact and Monte-Carlo oracles.

The hot convolution kernel is a compiled extension when available; see
``sharptail.BACKEND`` for which implementation this process is using.
"""

from ._backend import BACKEND
from .classical import (
    BoundValue,
    bennett_bound,
    bennett_log,
    bernstein_arg,
    bernstein_bound,
    hoeffding_bound,
    hoeffding_log,
    mills_ratio,
    normal_cdf,
)
from .errors import (
    HypothesisError,
    ModelError,
    NoSaddlepointError,
    ParameterError,
    RangeError,
    UnsupportedModelError,
)
from .models import (
    CurvatureReport,
    DiscreteDistribution,
    MomentProfile,
    SumModel,
    abs_moment,
    check_curvature_condition,
    curvature_condition_from_moments,
    extremal_model,
    hoeffding_extremal,
    load_model,
    loads_model,
    model_from_dict,
    model_to_dict,
    moment_profile,
    rademacher,
    rademacher_model,
)
from .oracle import (
    LatticeDistribution,
    TailEstimate,
    bentkus_bound,
    build_lattice,
    build_tilted_lattice,
    exact_tail,
    log_concave_hull,
    mc_tail,
    tilted_mc_tail,
)
from .rate import (
    Saddlepoint,
    chernoff_bound,
    chernoff_log,
    cumulant,
    cumulant_deriv,
    fenchel_legendre,
    solve_saddlepoint,
    solve_target,
)
from .sharp import (
    C3_BINOMIAL,
    C3_IID,
    C3_LOWER_BOUND,
    C3_UNIVERSAL,
    BerryEsseenConstants,
    SharpInterval,
    expansion_error,
    expansion_interval,
    normal_tail_upper,
    saddlepoint_interval,
    subgaussian_multiplier,
    subgaussian_upper,
    third_moment_interval,
    tilt_cap,
    two_sided_interval,
    two_sided_multiplier,
)
from .tilting import (
    InequalityCheck,
    NormalApproxReport,
    SuiteReport,
    TiltedComponent,
    TiltedState,
    berry_esseen_tilted,
    inequality_suite,
    tilt,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BerryEsseenConstants",
    "BoundValue",
    "C3_BINOMIAL",
    "C3_IID",
    "C3_LOWER_BOUND",
    "C3_UNIVERSAL",
    "CurvatureReport",
    "DiscreteDistribution",
    "HypothesisError",
    "InequalityCheck",
    "LatticeDistribution",
    "ModelError",
    "MomentProfile",
    "NoSaddlepointError",
    "NormalApproxReport",
    "ParameterError",
    "RangeError",
    "Saddlepoint",
    "SharpInterval",
    "SuiteReport",
    "SumModel",
    "TailEstimate",
    "TiltedComponent",
    "TiltedState",
    "UnsupportedModelError",
    "abs_moment",
    "bennett_bound",
    "bennett_log",
    "bentkus_bound",
    "bernstein_arg",
    "bernstein_bound",
    "berry_esseen_tilted",
    "build_lattice",
    "build_tilted_lattice",
    "check_curvature_condition",
    "chernoff_bound",
    "chernoff_log",
    "cumulant",
    "cumulant_deriv",
    "curvature_condition_from_moments",
    "exact_tail",
    "expansion_error",
    "expansion_interval",
    "extremal_model",
    "fenchel_legendre",
    "hoeffding_bound",
    "hoeffding_extremal",
    "hoeffding_log",
    "inequality_suite",
    "load_model",
    "loads_model",
    "log_concave_hull",
    "mc_tail",
    "mills_ratio",
    "model_from_dict",
    "model_to_dict",
    "moment_profile",
    "normal_cdf",
    "normal_tail_upper",
    "rademacher",
    "rademacher_model",
    "saddlepoint_interval",
    "solve_saddlepoint",
    "solve_target",
    "subgaussian_multiplier",
    "subgaussian_upper",
    "third_moment_interval",
    "tilt",
    "tilt_cap",
    "tilted_mc_tail",
    "two_sided_interval",
    "two_sided_multiplier",
]
