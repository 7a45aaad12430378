"""Instance-level mappings between secure index coding and secure network coding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .model import (
    Eavesdropper,
    Edge,
    IndexEavesdropper,
    IndexInstance,
    Message,
    NetworkInstance,
    Receiver,
    Source,
    validate_index,
    validate_network,
)

RELAY_IN = "1"
RELAY_OUT = "2"

SOURCE_TO_RELAY = "source-to-relay"
SOURCE_TO_RECEIVER = "source-to-receiver"
BOTTLENECK = "bottleneck"
FANOUT = "fanout"


def message_node(message_id: str) -> str:
    return f"s:{message_id}"


def receiver_node(receiver_id: str) -> str:
    return f"t:{receiver_id}"


def link_id(tail: str, head: str) -> str:
    return f"{tail}->{head}"


def edge_message(edge_id: str) -> str:
    return f"edge:{edge_id}"


def _require(report):
    if not report.ok:
        raise ValidationError(report.violations)


@dataclass(frozen=True)
class MappingRecord:
    """Where each index-coding entity lives in the mapped network."""

    node_for_message: dict
    receiver_node: dict
    relay_nodes: tuple = (RELAY_IN, RELAY_OUT)
    edge_roles: dict = field(default_factory=dict)

    @property
    def bottleneck(self) -> str:
        return link_id(*self.relay_nodes)

    def fanout_edge(self, receiver_id: str) -> str:
        return link_id(self.relay_nodes[1], self.receiver_node[receiver_id])

    def relay_edge(self, message_id: str) -> str:
        return link_id(self.node_for_message[message_id], self.relay_nodes[0])

    def side_edge(self, message_id: str, receiver_id: str) -> str:
        return link_id(self.node_for_message[message_id], self.receiver_node[receiver_id])


def index_to_network(instance: IndexInstance) -> tuple[NetworkInstance, MappingRecord]:
    """Network with one node per message, one per receiver, and two relays.

    Every message node feeds relay 1 and the receivers holding that message;
    relay 1 feeds relay 2 over one broadcast-sized link, and relay 2 fans
    out to every receiver. An eavesdropper taps the bottleneck plus every
    out-link of the message nodes in its side information.
    """
    _require(validate_index(instance))
    problems = []
    if not instance.messages:
        problems.append("mapping needs at least one message")
    if not instance.receivers:
        problems.append("mapping needs at least one receiver")
    for r in instance.receivers:
        if not r.wants:
            problems.append(f"receiver {r.id} wants nothing; its node would be a dead end")
    if problems:
        raise ValidationError(problems)

    b = instance.broadcast_alphabet
    msg_node = {m.id: message_node(m.id) for m in instance.messages}
    recv_node = {r.id: receiver_node(r.id) for r in instance.receivers}
    nodes = [msg_node[m.id] for m in instance.messages]
    nodes += [recv_node[r.id] for r in instance.receivers] + [RELAY_IN, RELAY_OUT]

    edges, roles = [], {}

    def add(tail, head, size, role):
        e = Edge(link_id(tail, head), tail, head, size)
        edges.append(e)
        roles[e.id] = role

    for m in instance.messages:
        add(msg_node[m.id], RELAY_IN, m.alphabet, SOURCE_TO_RELAY)
        for r in instance.receivers:
            if m.id in r.has:
                add(msg_node[m.id], recv_node[r.id], m.alphabet, SOURCE_TO_RECEIVER)
    add(RELAY_IN, RELAY_OUT, b, BOTTLENECK)
    for r in instance.receivers:
        add(RELAY_OUT, recv_node[r.id], b, FANOUT)

    sources = [Source(m.id, msg_node[m.id], m.alphabet,
                      {recv_node[r.id] for r in instance.receivers if m.id in r.wants})
               for m in instance.messages]
    bottleneck = link_id(RELAY_IN, RELAY_OUT)
    eaves = []
    for r in instance.eavesdroppers:
        taps = {bottleneck}
        taps |= {e.id for e in edges if e.tail in {msg_node[i] for i in r.side_info}}
        eaves.append(Eavesdropper(r.id, taps, r.target_messages))

    net = NetworkInstance(nodes, edges, sources, eaves, instance.block_size_n)
    report = validate_network(net)
    if not report.ok:
        # only reachable through identifier collisions
        raise ValidationError(report.violations)
    return net, MappingRecord(msg_node, recv_node, (RELAY_IN, RELAY_OUT), roles)


@dataclass(frozen=True)
class AugmentationRecord:
    key_source_ids: dict
    key_alphabets: dict


def _fresh(base: str, taken: set) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}#{k}" in taken:
        k += 1
    return f"{base}#{k}"


def augment(instance: NetworkInstance) -> tuple[NetworkInstance, AugmentationRecord]:
    """Materialise each node's random key as an extra source nobody demands.

    The key of node ``v`` ranges over the product of its out-edge alphabets
    (1 for sinks). Graph and eavesdroppers are untouched.
    """
    _require(validate_network(instance))
    taken = {s.id for s in instance.sources} | {e.id for e in instance.edges}
    ids, sizes, extra = {}, {}, []
    for v in instance.nodes:
        sid = _fresh(f"key:{v}", taken)
        taken.add(sid)
        size = math.prod(instance.edge(e).alphabet for e in instance.out_edges(v))
        ids[v], sizes[v] = sid, size
        extra.append(Source(sid, v, size, frozenset()))
    out = NetworkInstance(instance.nodes, instance.edges, tuple(instance.sources) + tuple(extra),
                          instance.eavesdroppers, instance.block_size_n)
    return out, AugmentationRecord(ids, sizes)


@dataclass(frozen=True)
class IndexBackMap:
    """Origin of every message and receiver of a network-to-index image.

    Values are ``("source", id)``/``("edge", id)`` for messages and
    ``("node", id)``/``("edge", id)`` for receivers.
    """

    message_origin: dict
    receiver_origin: dict

    def edge_message_ids(self) -> dict:
        return {v[1]: k for k, v in self.message_origin.items() if v[0] == "edge"}

    def edge_receiver_ids(self) -> dict:
        return {v[1]: k for k, v in self.receiver_origin.items() if v[0] == "edge"}

    def node_receiver_ids(self) -> dict:
        return {v[1]: k for k, v in self.receiver_origin.items() if v[0] == "node"}


def network_to_index(instance: NetworkInstance) -> tuple[IndexInstance, IndexBackMap]:
    """Index instance with one message per source and per edge.

    One receiver per destination node and one per edge; the broadcast
    alphabet is the product of all edge alphabets.
    """
    _require(validate_network(instance))
    source_ids = {s.id for s in instance.sources}
    emsg = {e.id: edge_message(e.id) for e in instance.edges}
    clash = sorted(set(emsg.values()) & source_ids)
    if clash:
        raise ValidationError([f"edge message id {c} collides with a source id" for c in clash])

    messages = [Message(s.id, s.alphabet) for s in instance.sources]
    messages += [Message(emsg[e.id], e.alphabet) for e in instance.edges]
    msg_origin = {s.id: ("source", s.id) for s in instance.sources}
    msg_origin.update({emsg[e.id]: ("edge", e.id) for e in instance.edges})

    receivers, recv_origin = [], {}
    for node in instance.destination_nodes():
        has = {emsg[e] for e in instance.in_edges(node)} | set(instance.sources_at(node))
        rid = f"node:{node}"
        receivers.append(Receiver(rid, set(instance.required_at(node)), has))
        recv_origin[rid] = ("node", node)
    for e in instance.edges:
        has = {emsg[x] for x in instance.in_edges(e.tail)} | set(instance.sources_at(e.tail))
        rid = f"edge:{e.id}"
        receivers.append(Receiver(rid, {emsg[e.id]}, has))
        recv_origin[rid] = ("edge", e.id)

    eaves = [IndexEavesdropper(r.id, {emsg[e] for e in r.tapped_edges}, r.target_sources)
             for r in instance.eavesdroppers]
    broadcast = math.prod(e.alphabet for e in instance.edges)
    idx = IndexInstance(messages, receivers, eaves, broadcast, instance.block_size_n)
    return idx, IndexBackMap(msg_origin, recv_origin)
