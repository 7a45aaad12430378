"""Finite functions stored as mixed-radix lookup tables.

A table row index is ``sum(arg_i * stride_i)`` with ``stride_0 = 1`` and
``stride_{i+1} = stride_i * size_i``: the first slot is the least
significant digit. The same little-endian packing is used wherever several
symbols are flattened into one (decoder outputs, broadcast words).
"""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ArityError, CodeMismatchError, SizeBudgetError, SymbolRangeError
from .model import IndexInstance, NetworkInstance, topological_order

DEFAULT_BUDGET = 2**24
BROADCAST = "broadcast"
SENDER_KEY = "key:sender"


def key_slot(node: str) -> str:
    return f"key:{node}"


def strides(sizes: Sequence[int]) -> list[int]:
    out, acc = [], 1
    for s in sizes:
        out.append(acc)
        acc *= s
    return out


def pack(values: Sequence[int], sizes: Sequence[int]) -> int:
    return sum(v * st for v, st in zip(values, strides(sizes)))


def unpack(index: int, sizes: Sequence[int]) -> tuple:
    out = []
    for s in sizes:
        out.append(index % s)
        index //= s
    return tuple(out)


def enumerate_inputs(slots, budget: int = DEFAULT_BUDGET) -> tuple[int, dict]:
    """All tuples of ``slots`` as columns, row ``i`` being tuple number ``i``."""
    sizes = [s for _, s in slots]
    total = math.prod(sizes)
    if total > budget:
        raise SizeBudgetError(f"input space of {total} tuples exceeds budget {budget}")
    idx = np.arange(total, dtype=np.int64)
    cols = {}
    for (name, size), st in zip(slots, strides(sizes)):
        cols[name] = (idx // st) % size
    return total, cols


class FiniteFunction:
    """A function from a product of finite alphabets to one finite alphabet."""

    __slots__ = ("slots", "output_size", "table")

    def __init__(self, slots, output_size: int, table):
        self.slots = tuple((str(n), int(s)) for n, s in slots)
        self.output_size = int(output_size)
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if any(s < 1 for _, s in self.slots) or self.output_size < 1:
            raise SymbolRangeError("alphabet sizes must be positive")
        if arr.size != self.n_rows:
            raise ArityError(f"table has {arr.size} entries, expected {self.n_rows}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.output_size):
            raise SymbolRangeError(f"table entry outside output alphabet {self.output_size}")
        arr.flags.writeable = False
        self.table = arr

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.slots]

    @property
    def sizes(self) -> list[int]:
        return [s for _, s in self.slots]

    @property
    def n_rows(self) -> int:
        return math.prod(s for _, s in self.slots)

    def evaluate(self, args: Sequence[int]) -> int:
        if len(args) != len(self.slots):
            raise ArityError(f"expected {len(self.slots)} arguments, got {len(args)}")
        idx = 0
        for a, (name, size), st in zip(args, self.slots, strides(self.sizes)):
            if not 0 <= a < size:
                raise SymbolRangeError(f"argument {a} outside alphabet of slot {name}")
            idx += a * st
        return int(self.table[idx])

    def __call__(self, *args: int) -> int:
        return self.evaluate(args)

    def apply(self, columns: Mapping[str, np.ndarray]) -> np.ndarray:
        """Vectorised evaluation; ``columns`` maps every slot name to an array."""
        idx = None
        for (name, _), st in zip(self.slots, strides(self.sizes)):
            term = columns[name] * st
            idx = term if idx is None else idx + term
        if idx is None:
            lengths = [np.size(c) for c in columns.values() if np.ndim(c)]
            return np.full(lengths[0] if lengths else 1, self.table[0], dtype=np.int64)
        return self.table[idx]

    @classmethod
    def from_callable(cls, slots, output_size: int, fn: Callable[..., int]) -> "FiniteFunction":
        sizes = [s for _, s in slots]
        n = math.prod(sizes)
        return cls(slots, output_size, [fn(*unpack(i, sizes)) for i in range(n)])

    @classmethod
    def constant(cls, value: int, output_size: int, slots=()) -> "FiniteFunction":
        n = math.prod(s for _, s in slots)
        return cls(slots, output_size, [value] * n)

    def __eq__(self, other):
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return (self.slots == other.slots and self.output_size == other.output_size
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.slots, self.output_size, self.table.tobytes()))

    def __repr__(self):
        body = self.table.tolist()
        if len(body) > 16:
            body = body[:16] + ["..."]
        return f"FiniteFunction(slots={list(self.slots)}, output_size={self.output_size}, table={body})"


# --- slot conventions ----------------------------------------------------

def edge_slots(instance: NetworkInstance, edge_id: str, key_size: int = 1) -> tuple:
    """In-edges of the tail by id, sources at the tail by id, then the key (if any)."""
    tail = instance.edge(edge_id).tail
    slots = [(e, instance.edge(e).alphabet) for e in instance.in_edges(tail)]
    slots += [(s, instance.source(s).alphabet) for s in instance.sources_at(tail)]
    if key_size > 1:
        slots.append((key_slot(tail), key_size))
    return tuple(slots)


def decoder_slots(instance: NetworkInstance, node: str) -> tuple:
    slots = [(e, instance.edge(e).alphabet) for e in instance.in_edges(node)]
    slots += [(s, instance.source(s).alphabet) for s in instance.sources_at(node)]
    return tuple(slots)


def decoder_output_size(instance: NetworkInstance, node: str) -> int:
    return math.prod(instance.source(s).alphabet for s in instance.required_at(node))


def encoder_slots(instance: IndexInstance, key_size: int = 1) -> tuple:
    slots = [(m, instance.message(m).alphabet) for m in instance.message_ids()]
    if key_size > 1:
        slots.append((SENDER_KEY, key_size))
    return tuple(slots)


def index_decoder_slots(instance: IndexInstance, receiver_id: str) -> tuple:
    r = instance.receiver(receiver_id)
    return ((BROADCAST, instance.broadcast_alphabet),) + tuple(
        (m, instance.message(m).alphabet) for m in sorted(r.has))


def index_decoder_output_size(instance: IndexInstance, receiver_id: str) -> int:
    r = instance.receiver(receiver_id)
    return math.prod(instance.message(m).alphabet for m in r.wants)


def global_input_slots(instance: NetworkInstance, key_alphabets: Mapping[str, int]) -> tuple:
    """Sources by id, then keys of randomised nodes by node id."""
    slots = [(s, instance.source(s).alphabet) for s in sorted(x.id for x in instance.sources)]
    taken = {n for n, _ in slots}
    for node in sorted(instance.nodes):
        k = key_alphabets.get(node, 1)
        if k > 1:
            if key_slot(node) in taken:
                raise CodeMismatchError(
                    f"key slot {key_slot(node)} collides with a source id")
            slots.append((key_slot(node), k))
    return tuple(slots)


def propagate(instance: NetworkInstance, code, budget: int = DEFAULT_BUDGET):
    """Run ``code`` on every input tuple.

    Returns ``(input_slots, columns)`` where ``columns`` holds one array per
    source, key and edge, each indexed by the global input tuple number.
    """
    from .codes import check_network_code

    check_network_code(instance, code)
    slots = global_input_slots(instance, code.key_alphabets)
    _, cols = enumerate_inputs(slots, budget)
    for eid in topological_order(instance):
        cols[eid] = code.edge_functions[eid].apply(cols)
    return slots, cols


def global_encodings(instance: NetworkInstance, code, budget: int = DEFAULT_BUDGET) -> dict:
    """Global encoding function of every edge, over the full (sources, keys) slot list."""
    slots, cols = propagate(instance, code, budget)
    return {e.id: FiniteFunction(slots, e.alphabet, cols[e.id]) for e in instance.edges}
