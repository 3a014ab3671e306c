"""Witnesses and separability certificates for X-shaped multi-qubit matrices."""

from .exceptions import (
    InvalidBipartitionError,
    NotDecomposableError,
    NotFullyBiBlockPositiveError,
    PreconditionError,
    ValidationError,
    XWitnessError,
)
from .multiindex import (
    MultiIndex,
    PartySet,
    canonical_rep,
    diamond,
    enumerate_b0,
    enumerate_bipartitions,
    flip_on,
)
from .xcore import (
    BlockPair,
    Verdict,
    XMatrix,
    block_pair,
    build,
    from_dense,
    is_positive_semidefinite,
    pairing,
    partial_transpose,
    to_dense,
)
from .witness import (
    ClassificationReport,
    DecompositionCertificate,
    classify_witness,
    construct_optimal,
    decompose,
    decompose_bipartition,
    is_decomposable,
    is_fully_bi_block_positive,
    is_genuine_witness,
    is_optimal_gew,
    spanning_family,
)
from .xstate import (
    classify_state,
    detection_witness,
    ghz,
    is_bi_separable,
    is_fully_biseparable_ppt,
    is_st_biseparable,
    maximally_mixed,
)
from .estimators import StateClassifier, WitnessClassifier

__version__ = "0.1.0"
