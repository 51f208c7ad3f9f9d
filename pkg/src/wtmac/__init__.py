"""Secrecy rate regions and desk-scale random wiretap codes for the two-sender MAC."""

from .errors import (
    BlocklengthTooSmallError,
    CardinalityOverflowError,
    DegenerateTypicalityError,
    PreconditionError,
    ReductionInfeasibleError,
    ResourceBudgetError,
    ValidationError,
)
from .probkit import (
    Alphabet,
    Channel,
    Dist,
    FactoredInput,
    JointDist,
    SequenceDist,
    WiretapMAC,
    entropy,
    joint_from_factors,
    mutual_information,
    n_fold,
    truncated_typical_dist,
    typical_membership,
    variation_distance,
)
from .regions import (
    AlphaBounds,
    CaseLabel,
    CaseReport,
    InfoProfile,
    LemmaReport,
    RatePolytope,
    alpha_bounds_case1,
    alpha_bounds_case2,
    classify_case,
    classify_profile,
    elementary_region,
    info_profile,
    polytope_contains,
    region_common,
    verify_convexhull_lemma,
    verify_union_lemma,
)
from .conferencing import (
    BetaBounds,
    ConferencingCapacities,
    ConferencingRegion,
    RateSplit,
    WillemsConference,
    beta_bounds,
    build_conference,
    elementary_conf_region,
    j0_alpha,
    rate_split,
    region_conferencing,
)
from .optimizer import (
    CommonMode,
    ConferencingMode,
    RegionEstimate,
    SearchConfig,
    achievable_region_estimate,
    prefix_channel,
    single_sender_secrecy_capacity,
)
from .codesim import (
    CodeChain,
    CodebookFamily,
    ConcentrationReport,
    ErrorEstimate,
    SimReport,
    WiretapCode,
    average_error,
    build_wiretap_code,
    chernoff_bound,
    concentration_report,
    eve_map_error,
    exact_leakage,
    joint_typicality_decode,
    leakage_chain_check,
    mac_average_error,
    max_message_variation,
    sample_codebook_family,
    secrecy_from_variation,
    simulate_report,
)
from .casestudy import (
    bruteforce_search,
    concavity_scan,
    discussion_channels,
    equal_input_witness,
    example62,
    lessnoisy_gap,
)

__version__ = "0.1.0"
