"""Exact query-complexity workbench for Boolean functions on hypercube slices."""

ENGINE_VERSION = "1"

from .errors import (
    AdversaryExhaustedError,
    AdversaryInvalidError,
    DomainError,
    EmptyRestrictionError,
    FormatError,
    MatchProtocolError,
    MembershipError,
    ResourceCapError,
    SliceBenchError,
    VerificationError,
)
from .slicecore import (
    BOOLEAN,
    Assignment,
    Domain,
    LabeledFunction,
    SliceGraph,
    from_graph,
    mask_to_string,
    restrict,
    string_to_mask,
    to_graph,
)

__all__ = [
    "AdversaryExhaustedError",
    "AdversaryInvalidError",
    "Assignment",
    "BOOLEAN",
    "Domain",
    "DomainError",
    "EmptyRestrictionError",
    "ENGINE_VERSION",
    "FormatError",
    "LabeledFunction",
    "MatchProtocolError",
    "MembershipError",
    "ResourceCapError",
    "SliceBenchError",
    "SliceGraph",
    "VerificationError",
    "from_graph",
    "mask_to_string",
    "restrict",
    "string_to_mask",
    "to_graph",
]
