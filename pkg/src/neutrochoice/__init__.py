"""Triplet-valued choice over finite structures.

Exact probability triplets (chosen / not chosen / indeterminate) drive
selection over set families, binary prefix trees, and inclusion families,
with a compensation discipline that lets sets nothing was chosen from
borrow a spare chosen element from elsewhere.
"""

from .errors import (
    BoundTooSmallError,
    CompensationExhaustedError,
    DepthExceededError,
    EmptyTreeError,
    IndexOutOfRangeError,
    InsufficientBranchingError,
    InvalidChoiceError,
    MissingAssignmentError,
    NeutroChoiceError,
    NodeNotInTreeError,
    NotAMemberError,
    OutOfRangeError,
    ParseError,
    PreconditionViolatedError,
    RetryLimitError,
    SchemaError,
    SumNotOneError,
    ThresholdOutOfRangeError,
    TieViolationError,
)
from .family import (
    CompensationPair,
    CompensationPlan,
    CompensationReport,
    NeutroChoice,
    Partition,
    ProductStatus,
    ProductStatusKind,
    SetFamily,
    allocate_compensators,
    build_choice,
    check_compensation,
    embed_classical,
    partition_set,
    product_status,
    verify_plan,
)
from .tree import (
    PathTrace,
    Stage,
    StepKind,
    StringRelation,
    Tree,
    TreeChoice,
    backward_tracking,
    build_tree,
    build_tree_choice,
    construct_path,
    dead_levels,
    enumerate_paths,
    extension_depth,
    forward_tracking,
    string_relation,
    verify_trace,
)
from .triplet import (
    MIN_DENOMINATOR_BOUND,
    ThresholdVerdict,
    Triplet,
    Verdict,
    as_rational,
    classify,
    classify_threshold,
    format_rational,
    make_triplet,
    parse_triplet,
    random_triplet,
)
from .zorn import (
    MaximalReport,
    Provenance,
    SuccessorEntry,
    SupersetFan,
    ZornFamily,
    check_chain_closed,
    find_maximal,
    superset_fan,
    verify_report,
)

__version__ = "0.1.0"

__all__ = [
    "BoundTooSmallError",
    "CompensationExhaustedError",
    "CompensationPair",
    "CompensationPlan",
    "CompensationReport",
    "DepthExceededError",
    "EmptyTreeError",
    "IndexOutOfRangeError",
    "InsufficientBranchingError",
    "InvalidChoiceError",
    "MIN_DENOMINATOR_BOUND",
    "MaximalReport",
    "MissingAssignmentError",
    "NeutroChoice",
    "NeutroChoiceError",
    "NodeNotInTreeError",
    "NotAMemberError",
    "OutOfRangeError",
    "ParseError",
    "Partition",
    "PathTrace",
    "PreconditionViolatedError",
    "ProductStatus",
    "ProductStatusKind",
    "Provenance",
    "RetryLimitError",
    "SchemaError",
    "SetFamily",
    "Stage",
    "StepKind",
    "StringRelation",
    "SuccessorEntry",
    "SumNotOneError",
    "SupersetFan",
    "ThresholdOutOfRangeError",
    "ThresholdVerdict",
    "TieViolationError",
    "Tree",
    "TreeChoice",
    "Triplet",
    "Verdict",
    "ZornFamily",
    "allocate_compensators",
    "as_rational",
    "backward_tracking",
    "build_choice",
    "build_tree",
    "build_tree_choice",
    "check_chain_closed",
    "check_compensation",
    "classify",
    "classify_threshold",
    "construct_path",
    "dead_levels",
    "embed_classical",
    "enumerate_paths",
    "extension_depth",
    "find_maximal",
    "format_rational",
    "forward_tracking",
    "make_triplet",
    "parse_triplet",
    "partition_set",
    "product_status",
    "random_triplet",
    "string_relation",
    "superset_fan",
    "verify_plan",
    "verify_report",
    "verify_trace",
]
