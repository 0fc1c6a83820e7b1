"""Simultaneous minimum spanning trees on sunflower graph families."""

from .bench import gen_planted_sunflower
from .fixtures import fix1, fix1_minus_xz, fix2, fix3
from .forest import SimForest, simultaneously_acyclic
from .hardness import ThreeDMInstance, extract_matching, matching_to_solution, parse_3dm, reduce_3dm, serialize_3dm
from .instance import (
    CORE,
    Edge,
    Graph,
    InstanceFormatError,
    InvalidInstanceError,
    SunflowerInstance,
    ValidationReport,
    graph_view,
    parse_instance,
    parse_solution,
    restrict_by_weight,
    serialize_instance,
    serialize_solution,
    validate_sunflower,
)
from .matroid import ContractionMatroid, Matroid, OracleMatroid, brute_force_common_independent, matroid_intersection
from .oracle import (
    GenParams,
    GuardExceeded,
    brute_force_smst,
    enumerate_msts,
    gen_random_sunflower,
    verify_solution,
)
from .reduce import (
    ReductionTrace,
    build_01_subproblem,
    equalize_weight1_counts,
    lift_solution,
    pair_gadget_reduce,
    reduce_chain,
    shift_boundary_edges,
)
from .ska import (
    SkaOutcome,
    backtrack_search,
    backtrack_solve,
    kruskal_single,
    preferring_order,
    required_weight1_count,
    ska_run,
    stage_partition,
)
from .solve2 import SolveReport, solve_cap01, solve_cap01_acyclic, solve_smst_k2, solve_sst

__version__ = "0.1.0"
