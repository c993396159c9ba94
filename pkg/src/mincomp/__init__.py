"""Minkowski sums and minimal additive complements of integer sets.

Windowed certificates for the infinite constructions, exhaustive solvers
for the cyclic instances, and a classifier for eventually periodic sets.
"""

from .construct import (
    CoMinimalPair,
    ConstructionError,
    ConstructionTrace,
    RemarkFamily,
    ThmSuffResult,
    build_cominimal,
    build_d,
    build_remark_family,
    build_thm_suff,
    build_w,
    finite_rest_cover,
)
from .cyclic import (
    BoundSweepReport,
    CayleyReport,
    CyclicMacAnswer,
    CyclicSet,
    LiftedPair,
    cayley_domination,
    check_minimal_sumset_bound,
    enumerate_minimal_complements,
    is_mac_cyclic,
    quotient_lift,
    solve_arises,
)
from .epclass import (
    CheckResult,
    ClassifierVerdict,
    SumsetCover,
    YPartition,
    check_density_cor,
    check_necessary,
    check_prime_bound,
    classify,
    is_sumset_representable,
    iter_y_partitions,
)
from .intset import (
    BudgetExceededError,
    DensityReport,
    EPSet,
    FiniteSet,
    IntegerSet,
    LazySet,
    Window,
    density,
    dilate,
    enumerate_window,
    gen_interval_union,
    gen_lacunary,
    gen_mersenne,
    gen_pow2,
    member,
    naturals,
    reflect,
    translate,
    union_of,
)
from .sumset import (
    RepCount,
    WindowedSum,
    covers,
    gap,
    minkowski_cyclic,
    minkowski_window,
    rep_count,
    representations,
)
from .verify import (
    DependenceWitness,
    MacReport,
    RefutationEvidence,
    dependents,
    prune_to_minimal,
    refute_mac_bounded,
    verify_mac,
)
from .cli import main, parse_set_expression, print_set_expression

__all__ = [
    "BoundSweepReport",
    "BudgetExceededError",
    "CayleyReport",
    "CheckResult",
    "ClassifierVerdict",
    "CoMinimalPair",
    "ConstructionError",
    "ConstructionTrace",
    "CyclicMacAnswer",
    "CyclicSet",
    "DensityReport",
    "DependenceWitness",
    "EPSet",
    "FiniteSet",
    "IntegerSet",
    "LazySet",
    "LiftedPair",
    "MacReport",
    "RefutationEvidence",
    "RemarkFamily",
    "RepCount",
    "SumsetCover",
    "ThmSuffResult",
    "Window",
    "WindowedSum",
    "YPartition",
    "build_cominimal",
    "build_d",
    "build_remark_family",
    "build_thm_suff",
    "build_w",
    "cayley_domination",
    "check_density_cor",
    "check_minimal_sumset_bound",
    "check_necessary",
    "check_prime_bound",
    "classify",
    "covers",
    "density",
    "dependents",
    "dilate",
    "enumerate_minimal_complements",
    "enumerate_window",
    "finite_rest_cover",
    "gap",
    "gen_interval_union",
    "gen_lacunary",
    "gen_mersenne",
    "gen_pow2",
    "is_mac_cyclic",
    "is_sumset_representable",
    "iter_y_partitions",
    "main",
    "member",
    "minkowski_cyclic",
    "minkowski_window",
    "naturals",
    "parse_set_expression",
    "print_set_expression",
    "prune_to_minimal",
    "quotient_lift",
    "refute_mac_bounded",
    "rep_count",
    "representations",
    "reflect",
    "solve_arises",
    "translate",
    "union_of",
    "verify_mac",
]
