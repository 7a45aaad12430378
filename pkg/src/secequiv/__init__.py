"""Secure network coding and secure index coding: mappings, code translations,
and exact certification on small instances."""

from .codes import IndexCode, NetworkCode
from .errors import (
    ArityError,
    CodeMismatchError,
    CycleError,
    DecodabilityPreconditionError,
    PreconditionError,
    SecEquivError,
    SizeBudgetError,
    SymbolRangeError,
    UnknownVariableError,
    ValidationError,
)
from .model import (
    Eavesdropper,
    Edge,
    IndexEavesdropper,
    IndexInstance,
    Message,
    NetworkInstance,
    Receiver,
    Source,
    ValidationReport,
    topological_order,
    validate_index,
    validate_network,
)
from .search import (
    EquivalenceReport,
    SearchBudget,
    SearchResult,
    feasibility_equivalence,
    network_feasibility_equivalence,
    search_index_codes,
    search_network_codes,
)
from .tables import FiniteFunction, global_encodings
from .transform import augment, index_to_network, network_to_index
from .translate import (
    augmented_to_randomized,
    randomized_to_augmented,
    t1_index_code_to_network_code,
    t1_network_code_to_index_code,
    t2_index_code_to_network_code,
    t2_network_code_to_index_code,
)
from .verify import (
    JointTable,
    build_joint,
    check_independent,
    check_index_decodable,
    check_index_secure,
    check_network_decodable,
    check_network_secure,
    check_source_recoverable,
    conditional_entropy_bits,
)

__version__ = "0.1.0"
