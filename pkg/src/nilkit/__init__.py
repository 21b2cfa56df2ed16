"""nilkit: exact tools for commutator collection, nilprogressions and approximate groups."""

__version__ = "0.1.0"

from .backends import (
    CosetQuotient,
    CyclicBackend,
    GroupBackend,
    GroupHomomorphism,
    NormalSubgroup,
    ProductBackend,
    Subset,
    SubgroupBackend,
    TableGroup,
    UnitriangularBackend,
    heisenberg,
    symmetric_group,
)
from .collection import CollectedForm, Word, collect
from .commutators import BasicCommutatorTable, Commutator, CommutatorForm, bracket, enumerate_basic, left_normed, x
from .errors import (
    InconsistencyError,
    InvalidParameterError,
    MalformedCommutatorError,
    MissingAssignmentError,
    NilkitError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedBackendError,
    WordSyntaxError,
)
from .parsing import parse_group, parse_word
from .progressions import ProgressionSpec

__all__ = [
    "__version__",
    "BasicCommutatorTable",
    "CollectedForm",
    "Commutator",
    "CommutatorForm",
    "CosetQuotient",
    "CyclicBackend",
    "GroupBackend",
    "GroupHomomorphism",
    "InconsistencyError",
    "InvalidParameterError",
    "MalformedCommutatorError",
    "MissingAssignmentError",
    "NilkitError",
    "NormalSubgroup",
    "PreconditionError",
    "ProductBackend",
    "ProgressionSpec",
    "ResourceLimitError",
    "SubgroupBackend",
    "Subset",
    "TableGroup",
    "UnitriangularBackend",
    "UnsupportedBackendError",
    "Word",
    "WordSyntaxError",
    "bracket",
    "collect",
    "enumerate_basic",
    "heisenberg",
    "left_normed",
    "parse_group",
    "parse_word",
    "symmetric_group",
    "x",
]
