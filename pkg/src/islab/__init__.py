"""Workbench for inner-segment analysis of context-free intersections.

Simulate normal-form pushdown machines, extract push-pop arc matchings,
measure cross-machine crossings, characterize block-counting
intersections, build the two bounded-resource product machines, and test
pump-sensitive linkages exhaustively against membership oracles.
"""

from .arcs import (
    Arc,
    CrossingAnalysis,
    CrossingMeasures,
    CrossingPair,
    InconclusiveRegime,
    Matching,
    PairAnalysis,
    RegimeReport,
    SegmentDecomposition,
    analyze_pair,
    classify_family,
    crossing_pairs,
    extract_matching,
    is_well_nested,
    measures_of,
    union_well_nested,
)
from .blocks import (
    BlockSpec,
    JointSpec,
    LinkagePackage,
    NoCrossing,
    Verdict,
    Violation,
    build_block_pda,
    build_joint_pda,
    characterize,
    is_jointly_well_nested,
    joint_from_json,
    joint_to_json,
    segments_and_linkages,
    witness_blocks,
    witness_decomposition,
    witness_string,
)
from .grammar import (
    Cfg,
    CnfGrammar,
    GnfGrammar,
    Production,
    cfg_from_json,
    cfg_to_json,
    cyk_membership,
    gnf_to_pda,
    to_cnf,
    to_gnf,
)
from .pda import (
    EPSILON,
    AcceptingRun,
    Configuration,
    LimitExceeded,
    Pda,
    SearchLimits,
    StackAction,
    Transition,
    accepts,
    enumerate_language,
    enumerate_runs,
    pda_from_json,
    pda_to_json,
    step,
    validate_normal_form,
)
from .products import (
    BufferedProduct,
    DisplacementProduct,
    buffer_high_water,
    buffered_arcs,
    fragment_to_json,
    max_displacement,
    reachable_composite_states,
    state_bound,
)
from .pumping import (
    Factorization,
    HypothesesReport,
    LinkageReport,
    case_trace,
    check_crossing_hypotheses,
    check_linkage,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "AcceptingRun",
    "BlockSpec",
    "BufferedProduct",
    "Cfg",
    "CnfGrammar",
    "Configuration",
    "CrossingAnalysis",
    "CrossingMeasures",
    "CrossingPair",
    "DisplacementProduct",
    "EPSILON",
    "Factorization",
    "GnfGrammar",
    "HypothesesReport",
    "InconclusiveRegime",
    "JointSpec",
    "LimitExceeded",
    "LinkagePackage",
    "LinkageReport",
    "Matching",
    "NoCrossing",
    "PairAnalysis",
    "Pda",
    "Production",
    "RegimeReport",
    "SearchLimits",
    "SegmentDecomposition",
    "StackAction",
    "Transition",
    "Verdict",
    "Violation",
    "accepts",
    "analyze_pair",
    "buffer_high_water",
    "buffered_arcs",
    "build_block_pda",
    "build_joint_pda",
    "case_trace",
    "cfg_from_json",
    "cfg_to_json",
    "characterize",
    "check_crossing_hypotheses",
    "check_linkage",
    "classify_family",
    "crossing_pairs",
    "cyk_membership",
    "enumerate_language",
    "enumerate_runs",
    "extract_matching",
    "fragment_to_json",
    "gnf_to_pda",
    "is_jointly_well_nested",
    "is_well_nested",
    "joint_from_json",
    "joint_to_json",
    "max_displacement",
    "measures_of",
    "pda_from_json",
    "pda_to_json",
    "reachable_composite_states",
    "segments_and_linkages",
    "state_bound",
    "step",
    "to_cnf",
    "to_gnf",
    "union_well_nested",
    "validate_normal_form",
    "witness_blocks",
    "witness_decomposition",
    "witness_string",
]
