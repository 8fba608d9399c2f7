"""Rank-balanced AVL trees with exact rotation-cost instrumentation.

The package has three layers: :mod:`avlrot.core` is an instrumented
ranked AVL tree (compiled kernel with a pure-Python fallback),
:mod:`avlrot.expensive` generates and drives the tree family whose
deletions pay the maximal number of rotations, and
:mod:`avlrot.builder` rebuilds any tree with promotion-only insertions.
:mod:`avlrot.oracle` holds independent checking tools and
:mod:`avlrot.cli` the command-line harness.
"""

from avlrot._backend import BACKEND, available_backends
from avlrot.builder import (
    InsertionPlan,
    RebuildReport,
    build_from_plan,
    insertion_sequence,
    verify_promotion_only,
)
from avlrot.cases import Case
from avlrot.core import (
    RebalanceCounters,
    Tree,
    ValidationReport,
    Violation,
    deserialize,
    serialize,
    structural_equal,
)
from avlrot.errors import (
    AvlError,
    BoundExceededError,
    CapExceededError,
    DuplicateKeyError,
    EmptyTreeError,
    InvalidTargetError,
    KeyNotFoundError,
    MissingChildError,
    NotExpensiveError,
    OddRankError,
    ParseError,
    ValidationError,
    VerificationError,
)
from avlrot.expensive import (
    BPolicy,
    EClassification,
    EType,
    PairReport,
    classify_expensive,
    delete_reinsert_pair,
    expensive_size,
    gen_expensive,
    min_avl,
    min_avl_size,
    perfect_avl,
    period,
    run_pairs,
    shallow_leaf,
)
from avlrot.oracle import (
    ClassicAvlTree,
    ShapeCatalog,
    enumerate_avl_shapes,
    is_height_balanced,
)

__version__ = "0.1.0"

__all__ = [
    "AvlError",
    "BACKEND",
    "BPolicy",
    "BoundExceededError",
    "CapExceededError",
    "Case",
    "ClassicAvlTree",
    "DuplicateKeyError",
    "EClassification",
    "EType",
    "EmptyTreeError",
    "InsertionPlan",
    "InvalidTargetError",
    "KeyNotFoundError",
    "MissingChildError",
    "NotExpensiveError",
    "OddRankError",
    "PairReport",
    "ParseError",
    "RebalanceCounters",
    "RebuildReport",
    "ShapeCatalog",
    "Tree",
    "ValidationError",
    "ValidationReport",
    "VerificationError",
    "Violation",
    "available_backends",
    "build_from_plan",
    "classify_expensive",
    "delete_reinsert_pair",
    "deserialize",
    "enumerate_avl_shapes",
    "expensive_size",
    "gen_expensive",
    "insertion_sequence",
    "is_height_balanced",
    "min_avl",
    "min_avl_size",
    "perfect_avl",
    "period",
    "run_pairs",
    "serialize",
    "shallow_leaf",
    "structural_equal",
    "verify_promotion_only",
]
