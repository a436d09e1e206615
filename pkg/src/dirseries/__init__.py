"""dirseries: a toolkit for square-summable Dirichlet series.

Truncated Dirichlet series as a convolution algebra, multi-index
("polydisk") lifts with sup-norm search, vertical-line mean values,
random multiplicative character experiments, dilation / sine-system
analysis with decidable Riesz-basis and completeness classes, and two
certified constructions (sign alternations with interval arithmetic, and
a vanishing-infimum multiplicative family).

Numeric hot loops run on a compiled backend when available and fall back
to pure Python + numpy otherwise; see :mod:`dirseries.kernels`.
"""

from .bohrlift import (
    MultiIndexPoly,
    SupNormEstimate,
    from_multi_index,
    lift,
    prime_linear_sup_norm,
    sup_norm_polytorus,
    sup_norm_search,
    to_multi_index,
)
from .characters import (
    Character,
    GridRect,
    GrowthExperimentReport,
    KolmogorovCheck,
    ZetaChiReport,
    char_value,
    derive_character_seed,
    growth_experiment,
    kronecker_flow,
    prime_supported_experiment,
    sample_character,
    twist,
    unit_character,
    zeta_chi_explore,
)
from .config import RunConfig, make_config, parse_config_file
from .dilation import (
    AlternationCertificate,
    CriterionVerdict,
    FrameBounds,
    GramSection,
    SignChangeConstruction,
    SineSystemSpec,
    TailDeclaration,
    VanishingInfimumReport,
    biorthogonal_system,
    completeness_check,
    construct_sign_change_series,
    construct_vanishing_infimum_spec,
    dilate_expand,
    frame_bounds_estimate,
    gram_section,
    multiplicative_spec,
    reciprocal_multiplicative_spec,
    riesz_check,
    s_transform,
)
from .errors import (
    DirseriesError,
    DomainError,
    InvalidArgumentError,
    NonInvertibleError,
    NumericalError,
    ResourceCapError,
)
from .numtheory import (
    FactorTable,
    MultiIndex,
    build_factor_table,
    extend_multiplicatively,
)
from .series import (
    CarlsonReport,
    DirichletPoly,
    EulerNorms,
    carlson_mean,
    convolve,
    euler_norms,
    evaluate,
    evaluate_vertical,
    from_multiplicative,
    norm_H,
    norm_Hd,
    ones,
    reciprocal,
    unit,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "DirseriesError",
    "InvalidArgumentError",
    "NonInvertibleError",
    "DomainError",
    "NumericalError",
    "ResourceCapError",
    # number theory
    "FactorTable",
    "MultiIndex",
    "build_factor_table",
    "extend_multiplicatively",
    # series algebra
    "DirichletPoly",
    "CarlsonReport",
    "EulerNorms",
    "carlson_mean",
    "convolve",
    "euler_norms",
    "evaluate",
    "evaluate_vertical",
    "from_multiplicative",
    "norm_H",
    "norm_Hd",
    "ones",
    "reciprocal",
    "unit",
    # lifts
    "MultiIndexPoly",
    "SupNormEstimate",
    "from_multi_index",
    "lift",
    "prime_linear_sup_norm",
    "sup_norm_polytorus",
    "sup_norm_search",
    "to_multi_index",
    # characters
    "Character",
    "GridRect",
    "GrowthExperimentReport",
    "KolmogorovCheck",
    "ZetaChiReport",
    "char_value",
    "derive_character_seed",
    "growth_experiment",
    "kronecker_flow",
    "prime_supported_experiment",
    "sample_character",
    "twist",
    "unit_character",
    "zeta_chi_explore",
    # dilation systems
    "AlternationCertificate",
    "CriterionVerdict",
    "FrameBounds",
    "GramSection",
    "SignChangeConstruction",
    "SineSystemSpec",
    "TailDeclaration",
    "VanishingInfimumReport",
    "biorthogonal_system",
    "completeness_check",
    "construct_sign_change_series",
    "construct_vanishing_infimum_spec",
    "dilate_expand",
    "frame_bounds_estimate",
    "gram_section",
    "multiplicative_spec",
    "reciprocal_multiplicative_spec",
    "riesz_check",
    "s_transform",
    # configuration
    "RunConfig",
    "make_config",
    "parse_config_file",
]
