"""Secure network-coding and secure index-coding instances.

Alphabets are plain positive integers (the number of symbols, values
``0..size-1``). Every identifier is a string; ``sorted()`` on Python strings
is code-point order, which coincides with UTF-8 byte order, so it is used
for every tie-break.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .errors import CycleError


def rate(size: int, n: int) -> float:
    """Rate in bits per block symbol of an alphabet of ``size`` at block size ``n``."""
    return math.log2(size) / n


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    alphabet: int


@dataclass(frozen=True)
class Source:
    id: str
    origin: str
    alphabet: int
    destinations: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "destinations", frozenset(self.destinations))


@dataclass(frozen=True)
class Eavesdropper:
    id: str
    tapped_edges: frozenset = frozenset()
    target_sources: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "tapped_edges", frozenset(self.tapped_edges))
        object.__setattr__(self, "target_sources", frozenset(self.target_sources))


@dataclass(frozen=True)
class NetworkInstance:
    nodes: tuple
    edges: tuple
    sources: tuple
    eavesdroppers: tuple = ()
    block_size_n: int = 1

    def __post_init__(self):
        for name in ("nodes", "edges", "sources", "eavesdroppers"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    # lookups -------------------------------------------------------------
    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def source(self, source_id: str) -> Source:
        for s in self.sources:
            if s.id == source_id:
                return s
        raise KeyError(source_id)

    def in_edges(self, node: str) -> list[str]:
        """Edge ids into ``node``, sorted."""
        return sorted(e.id for e in self.edges if e.head == node)

    def out_edges(self, node: str) -> list[str]:
        return sorted(e.id for e in self.edges if e.tail == node)

    def sources_at(self, node: str) -> list[str]:
        return sorted(s.id for s in self.sources if s.origin == node)

    def required_at(self, node: str) -> list[str]:
        """Source ids that ``node`` must decode, sorted."""
        return sorted(s.id for s in self.sources if node in s.destinations)

    def destination_nodes(self) -> list[str]:
        return sorted({d for s in self.sources for d in s.destinations})

    def rates(self) -> dict[str, float]:
        out = {s.id: rate(s.alphabet, self.block_size_n) for s in self.sources}
        out.update({e.id: rate(e.alphabet, self.block_size_n) for e in self.edges})
        return out


@dataclass(frozen=True)
class Message:
    id: str
    alphabet: int


@dataclass(frozen=True)
class Receiver:
    id: str
    wants: frozenset = frozenset()
    has: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "wants", frozenset(self.wants))
        object.__setattr__(self, "has", frozenset(self.has))


@dataclass(frozen=True)
class IndexEavesdropper:
    id: str
    side_info: frozenset = frozenset()
    target_messages: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "side_info", frozenset(self.side_info))
        object.__setattr__(self, "target_messages", frozenset(self.target_messages))


@dataclass(frozen=True)
class IndexInstance:
    messages: tuple
    receivers: tuple
    eavesdroppers: tuple = ()
    broadcast_alphabet: int = 2
    block_size_n: int = 1

    def __post_init__(self):
        for name in ("messages", "receivers", "eavesdroppers"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def message(self, message_id: str) -> Message:
        for m in self.messages:
            if m.id == message_id:
                return m
        raise KeyError(message_id)

    def receiver(self, receiver_id: str) -> Receiver:
        for r in self.receivers:
            if r.id == receiver_id:
                return r
        raise KeyError(receiver_id)

    def message_ids(self) -> list[str]:
        return sorted(m.id for m in self.messages)

    def rates(self) -> dict[str, float]:
        out = {m.id: rate(m.alphabet, self.block_size_n) for m in self.messages}
        out["broadcast"] = rate(self.broadcast_alphabet, self.block_size_n)
        return out


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(self.violations)


def _duplicates(ids):
    seen, dup = set(), []
    for i in ids:
        if i in seen and i not in dup:
            dup.append(i)
        seen.add(i)
    return dup


def _has_cycle(nodes, edges) -> bool:
    try:
        _edge_order(nodes, edges)
    except CycleError:
        return True
    return False


def validate_network(instance: NetworkInstance) -> ValidationReport:
    v = []
    node_set = set(instance.nodes)
    edge_ids = [e.id for e in instance.edges]
    source_ids = [s.id for s in instance.sources]
    for kind, ids in (("node", instance.nodes), ("edge", edge_ids),
                      ("source", source_ids),
                      ("eavesdropper", [r.id for r in instance.eavesdroppers])):
        for d in _duplicates(ids):
            v.append(f"duplicate {kind} id {d}")
    for d in sorted(set(edge_ids) & set(source_ids)):
        v.append(f"id {d} names both an edge and a source")
    if instance.block_size_n < 1:
        v.append("block size must be positive")

    for e in instance.edges:
        for end in (e.tail, e.head):
            if end not in node_set:
                v.append(f"unknown node {end} (edge {e.id})")
        if e.tail == e.head:
            v.append(f"self-loop on edge {e.id}")
        if e.alphabet < 1:
            v.append(f"alphabet of edge {e.id} must be positive")
    for s in instance.sources:
        if s.origin not in node_set:
            v.append(f"unknown node {s.origin} (origin of source {s.id})")
        for d in sorted(s.destinations):
            if d not in node_set:
                v.append(f"unknown node {d} (destination of source {s.id})")
        if s.origin in s.destinations:
            v.append(f"source {s.id} is destined for its own origin")
        if s.alphabet < 1:
            v.append(f"alphabet of source {s.id} must be positive")
    edge_set, source_set = set(edge_ids), set(source_ids)
    for r in instance.eavesdroppers:
        for e in sorted(r.tapped_edges - edge_set):
            v.append(f"unknown edge {e} (eavesdropper {r.id})")
        for s in sorted(r.target_sources - source_set):
            v.append(f"unknown source {s} (eavesdropper {r.id})")

    known = [e for e in instance.edges if e.tail in node_set and e.head in node_set]
    if _has_cycle(instance.nodes, known):
        v.append("graph contains a cycle")

    heads = {e.head for e in instance.edges}
    tails = {e.tail for e in instance.edges}
    origins = {s.origin for s in instance.sources}
    dests = {d for s in instance.sources for d in s.destinations}
    for n in instance.nodes:
        if n not in heads and n not in origins:
            v.append(f"node {n} has no incoming edge and originates no source")
        if n not in tails and n not in dests:
            v.append(f"node {n} has no outgoing edge and is no destination")
    return ValidationReport(v)


def validate_index(instance: IndexInstance) -> ValidationReport:
    v = []
    ids = {m.id for m in instance.messages}
    for kind, seq in (("message", [m.id for m in instance.messages]),
                      ("receiver", [r.id for r in instance.receivers]),
                      ("eavesdropper", [r.id for r in instance.eavesdroppers])):
        for d in _duplicates(seq):
            v.append(f"duplicate {kind} id {d}")
    for m in instance.messages:
        if m.alphabet < 1:
            v.append(f"alphabet of message {m.id} must be positive")
    if instance.broadcast_alphabet < 1:
        v.append("broadcast alphabet must be positive")
    if instance.block_size_n < 1:
        v.append("block size must be positive")
    for r in instance.receivers:
        for m in sorted((r.wants | r.has) - ids):
            v.append(f"unknown message {m} (receiver {r.id})")
        if r.wants & r.has:
            v.append(f"receiver {r.id}: wants overlaps has")
    for r in instance.eavesdroppers:
        for m in sorted((r.side_info | r.target_messages) - ids):
            v.append(f"unknown message {m} (eavesdropper {r.id})")
        if r.side_info & r.target_messages:
            v.append(f"eavesdropper {r.id}: target overlaps side information")
    return ValidationReport(v)


def _edge_order(nodes, edges) -> list[str]:
    # an edge is ready once every edge into its tail has been placed
    pending_in = {n: 0 for n in nodes}
    for e in edges:
        pending_in[e.head] = pending_in.get(e.head, 0) + 1
    by_tail: dict[str, list] = {}
    for e in edges:
        by_tail.setdefault(e.tail, []).append(e)
    ready = [e.id for e in edges if pending_in.get(e.tail, 0) == 0]
    heapq.heapify(ready)
    head_of = {e.id: e.head for e in edges}
    order = []
    while ready:
        eid = heapq.heappop(ready)
        order.append(eid)
        h = head_of[eid]
        pending_in[h] -= 1
        if pending_in[h] == 0:
            for e in by_tail.get(h, ()):
                heapq.heappush(ready, e.id)
    if len(order) != len(edges):
        raise CycleError("graph contains a cycle")
    return order


def topological_order(instance: NetworkInstance) -> list[str]:
    """Edge ids such that every edge follows all edges into its tail.

    Among edges that are simultaneously ready the smallest id goes first.
    """
    return _edge_order(instance.nodes, instance.edges)
