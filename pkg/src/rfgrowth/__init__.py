"""Exact arithmetic for nilpotent Lie rings: group law, ideals, growth."""

from .bch import BCHTable, build_bch_table, group_commutator, star, star_inverse
from .correspond import (
    CosetCheck,
    LRGroup,
    NormalSubgroupWitness,
    TwoWayIndex,
    coset_equality_check,
    ideal_to_normal,
    ideal_to_normal_verdicts,
    index_two_ways,
    normal_to_ideal,
    normal_to_ideal_verdicts,
    validate_lr,
    validate_normal_subgroup,
)
from .errors import DimensionMismatch, DomainError, RFGrowthError
from .growth import (
    DivisibilityResult,
    ExponentFit,
    GrowthProfile,
    ProfileRow,
    SubringComparison,
    WitnessStep,
    divisibility,
    fit_exponent,
    rf_profile,
    subring_comparison,
    subring_restrict,
    witness_sequence,
)
from .guivarch import (
    GuivarchDecomposition,
    guivarch_ball_size,
    guivarch_decomposition,
    iter_guivarch_ball,
    iter_norm_ball,
    min_norm_radius,
    norm_ball_size,
)
from .ideals import (
    DeltaSweepReport,
    IdealModQ,
    delta_ideal_mod_p,
    delta_p,
    delta_sweep,
    enumerate_ideals,
    enumerate_ideals_prime_power,
    small_codim_intersection,
    verify_ideal_mod_q,
)
from .lattice import Lattice
from .liering import (
    FiniteLieAlgebra,
    LieRing,
    catalog,
    catalog_names,
    heisenberg_lr,
    load_ring,
    ring_from_dict,
)
from .serialize import TOOL_VERSION

__version__ = TOOL_VERSION

__all__ = [
    "BCHTable",
    "CosetCheck",
    "DeltaSweepReport",
    "DimensionMismatch",
    "DivisibilityResult",
    "DomainError",
    "ExponentFit",
    "FiniteLieAlgebra",
    "GrowthProfile",
    "GuivarchDecomposition",
    "IdealModQ",
    "Lattice",
    "LieRing",
    "LRGroup",
    "NormalSubgroupWitness",
    "ProfileRow",
    "RFGrowthError",
    "SubringComparison",
    "TwoWayIndex",
    "WitnessStep",
    "build_bch_table",
    "catalog",
    "catalog_names",
    "coset_equality_check",
    "delta_ideal_mod_p",
    "delta_p",
    "delta_sweep",
    "divisibility",
    "enumerate_ideals",
    "enumerate_ideals_prime_power",
    "fit_exponent",
    "group_commutator",
    "guivarch_ball_size",
    "guivarch_decomposition",
    "heisenberg_lr",
    "ideal_to_normal",
    "ideal_to_normal_verdicts",
    "index_two_ways",
    "iter_guivarch_ball",
    "iter_norm_ball",
    "load_ring",
    "min_norm_radius",
    "norm_ball_size",
    "normal_to_ideal",
    "normal_to_ideal_verdicts",
    "rf_profile",
    "ring_from_dict",
    "small_codim_intersection",
    "star",
    "star_inverse",
    "subring_comparison",
    "subring_restrict",
    "validate_lr",
    "validate_normal_subgroup",
    "verify_ideal_mod_q",
    "witness_sequence",
    "TOOL_VERSION",
]
