"""Network codes and index codes as collections of lookup tables."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CodeMismatchError
from .model import IndexInstance, NetworkInstance
from .tables import (
    FiniteFunction,
    decoder_output_size,
    decoder_slots,
    edge_slots,
    encoder_slots,
    index_decoder_output_size,
    index_decoder_slots,
)


@dataclass
class NetworkCode:
    """Local edge functions, destination decoders and per-node key sizes.

    A node missing from ``key_alphabets`` (or mapped to 1) encodes
    deterministically and its edge functions carry no key slot.
    """

    edge_functions: dict
    node_decoders: dict
    key_alphabets: dict = field(default_factory=dict)

    def key_size(self, node: str) -> int:
        return self.key_alphabets.get(node, 1)

    @property
    def is_deterministic(self) -> bool:
        return all(k == 1 for k in self.key_alphabets.values())


@dataclass
class IndexCode:
    encoder: FiniteFunction
    decoders: dict
    key_alphabet: int = 1

    @property
    def is_deterministic(self) -> bool:
        return self.key_alphabet == 1


def _expect(fn, slots, out, what):
    if fn.slots != tuple(slots):
        raise CodeMismatchError(f"{what}: slots {list(fn.slots)} != expected {list(slots)}")
    if fn.output_size != out:
        raise CodeMismatchError(f"{what}: output alphabet {fn.output_size} != expected {out}")


def check_network_code(instance: NetworkInstance, code: NetworkCode) -> None:
    """Raise CodeMismatchError unless ``code`` fits ``instance`` exactly."""
    nodes = set(instance.nodes)
    for node, k in code.key_alphabets.items():
        if node not in nodes:
            raise CodeMismatchError(f"key declared for unknown node {node}")
        if k < 1:
            raise CodeMismatchError(f"key alphabet of node {node} must be positive")
    edge_ids = {e.id for e in instance.edges}
    if set(code.edge_functions) != edge_ids:
        missing = sorted(edge_ids - set(code.edge_functions))
        extra = sorted(set(code.edge_functions) - edge_ids)
        raise CodeMismatchError(f"edge functions mismatch: missing {missing}, unexpected {extra}")
    for e in instance.edges:
        _expect(code.edge_functions[e.id], edge_slots(instance, e.id, code.key_size(e.tail)),
                e.alphabet, f"edge {e.id}")
    dests = set(instance.destination_nodes())
    if set(code.node_decoders) != dests:
        missing = sorted(dests - set(code.node_decoders))
        extra = sorted(set(code.node_decoders) - dests)
        raise CodeMismatchError(f"decoders mismatch: missing {missing}, unexpected {extra}")
    for u in dests:
        _expect(code.node_decoders[u], decoder_slots(instance, u),
                decoder_output_size(instance, u), f"decoder at {u}")


def check_index_code(instance: IndexInstance, code: IndexCode) -> None:
    if code.key_alphabet < 1:
        raise CodeMismatchError("key alphabet must be positive")
    _expect(code.encoder, encoder_slots(instance, code.key_alphabet),
            instance.broadcast_alphabet, "encoder")
    rids = {r.id for r in instance.receivers}
    if set(code.decoders) != rids:
        missing = sorted(rids - set(code.decoders))
        extra = sorted(set(code.decoders) - rids)
        raise CodeMismatchError(f"decoders mismatch: missing {missing}, unexpected {extra}")
    for r in instance.receivers:
        _expect(code.decoders[r.id], index_decoder_slots(instance, r.id),
                index_decoder_output_size(instance, r.id), f"decoder of {r.id}")
