"""Code translations between mapped instances.

Every translation is rate-exact: alphabets of the produced tables are fixed
by the instance mapping. Tables are built by evaluating the source code's
tables on whole columns of inputs at once.
"""

from __future__ import annotations

import numpy as np

from .codes import IndexCode, NetworkCode, check_index_code, check_network_code
from .errors import CodeMismatchError, DecodabilityPreconditionError, PreconditionError
from .model import IndexInstance, NetworkInstance, topological_order
from .tables import (
    BROADCAST,
    SENDER_KEY,
    FiniteFunction,
    decoder_output_size,
    decoder_slots,
    edge_slots,
    encoder_slots,
    enumerate_inputs,
    index_decoder_output_size,
    index_decoder_slots,
    key_slot,
    strides,
)
from .transform import (
    BOTTLENECK,
    IndexBackMap,
    MappingRecord,
    augment,
    index_to_network,
    network_to_index,
)
from .verify import (
    check_index_decodable,
    check_network_decodable,
    check_source_recoverable,
)

__all__ = [
    "IndexCode",
    "NetworkCode",
    "augmented_to_randomized",
    "encoder_image",
    "randomized_to_augmented",
    "t1_index_code_to_network_code",
    "t1_network_code_to_index_code",
    "t2_index_code_to_network_code",
    "t2_network_code_to_index_code",
]


def _tabulate(slots, output_size, compute) -> FiniteFunction:
    """Table of ``compute(columns)`` over every tuple of ``slots``."""
    n, cols = enumerate_inputs(slots)
    values = np.broadcast_to(np.asarray(compute(cols), dtype=np.int64), (n,))
    return FiniteFunction(slots, output_size, values)


def _run(instance: NetworkInstance, code: NetworkCode, cols: dict) -> dict:
    """Edge columns of ``code`` given source and key columns in ``cols``."""
    cols = dict(cols)
    for eid in topological_order(instance):
        cols[eid] = code.edge_functions[eid].apply(cols)
    return cols


# --- randomised code <-> deterministic code on the augmented instance ------

def randomized_to_augmented(instance: NetworkInstance, code: NetworkCode) -> NetworkCode:
    """Deterministic code for ``augment(instance)`` with the same joint law.

    Node ``v``'s key becomes its key source, reduced modulo the key size the
    code declared; that size must divide the augmented key alphabet.
    """
    check_network_code(instance, code)
    aug, record = augment(instance)
    for v, k in code.key_alphabets.items():
        if k > 1 and instance.out_edges(v) and record.key_alphabets[v] % k:
            raise CodeMismatchError(
                f"key alphabet {k} at node {v} does not divide {record.key_alphabets[v]}")

    edges = {}
    for e in instance.edges:
        v, k = e.tail, code.key_size(e.tail)
        old = code.edge_functions[e.id]

        def compute(cols, old=old, v=v, k=k):
            if k > 1:
                cols = dict(cols)
                cols[key_slot(v)] = cols[record.key_source_ids[v]] % k
            return old.apply(cols)

        edges[e.id] = _tabulate(edge_slots(aug, e.id), e.alphabet, compute)
    decoders = {u: _tabulate(decoder_slots(aug, u), decoder_output_size(aug, u), fn.apply)
                for u, fn in code.node_decoders.items()}
    return NetworkCode(edges, decoders, {})


def augmented_to_randomized(instance: NetworkInstance, code: NetworkCode) -> NetworkCode:
    """Inverse of :func:`randomized_to_augmented` for the original ``instance``.

    Node ``v`` becomes randomised (key alphabet = its augmented key size)
    only if one of its edge tables actually reads its key source. Decoders
    read key source 0, which is harmless for zero-error decoders.
    """
    aug, record = augment(instance)
    check_network_code(aug, code)
    if not code.is_deterministic:
        raise PreconditionError("code not deterministic")

    keys = {}
    for v in instance.nodes:
        sid = record.key_source_ids[v]
        for eid in instance.out_edges(v):
            fn = code.edge_functions[eid]
            pos = fn.names.index(sid)
            shaped = fn.table.reshape(list(reversed(fn.sizes)))
            axis = len(fn.sizes) - 1 - pos
            if not np.all(shaped == np.take(shaped, [0], axis=axis)):
                keys[v] = record.key_alphabets[v]
                break

    edges = {}
    for e in instance.edges:
        v, sid = e.tail, record.key_source_ids[e.tail]
        fn = code.edge_functions[e.id]

        def compute(cols, fn=fn, v=v, sid=sid):
            cols = dict(cols)
            cols[sid] = cols[key_slot(v)] if v in keys else 0
            return fn.apply(cols)

        edges[e.id] = _tabulate(edge_slots(instance, e.id, keys.get(v, 1)), e.alphabet, compute)

    decoders = {}
    for u, fn in code.node_decoders.items():
        sid = record.key_source_ids[u]

        def compute(cols, fn=fn, sid=sid):
            cols = dict(cols)
            cols[sid] = 0
            return fn.apply(cols)

        decoders[u] = _tabulate(decoder_slots(instance, u), decoder_output_size(instance, u),
                                compute)
    return NetworkCode(edges, decoders, keys)


# --- index code <-> network code on the index-to-network image --------------

def _mapped_network(index: IndexInstance, mapping: MappingRecord) -> NetworkInstance:
    net, record = index_to_network(index)
    if record != mapping:
        raise CodeMismatchError("mapping record does not belong to this index instance")
    return net


def t1_index_code_to_network_code(index: IndexInstance, mapping: MappingRecord,
                                  code: IndexCode) -> NetworkCode:
    """Message nodes forward their message, relay 1 runs the index encoder
    (its key plays the sender key), relay 2 forwards, and every receiver node
    runs its index decoder."""
    net = _mapped_network(index, mapping)
    check_index_code(index, code)
    k = code.key_alphabet
    edges = {}
    for e in net.edges:
        role = mapping.edge_roles[e.id]
        slots = edge_slots(net, e.id, k if e.tail == mapping.relay_nodes[0] else 1)
        if role == BOTTLENECK:
            def compute(cols):
                args = {m: cols[mapping.relay_edge(m)] for m in index.message_ids()}
                if k > 1:
                    args[SENDER_KEY] = cols[key_slot(mapping.relay_nodes[0])]
                return code.encoder.apply(args)
        else:
            # message links carry their message, fanout links the broadcast word
            def compute(cols, name=slots[0][0]):
                return cols[name]
        edges[e.id] = _tabulate(slots, e.alphabet, compute)

    decoders = {}
    for r in index.receivers:
        node = mapping.receiver_node[r.id]
        dec = code.decoders[r.id]

        def compute(cols, r=r, dec=dec):
            args = {BROADCAST: cols[mapping.fanout_edge(r.id)]}
            args.update({m: cols[mapping.side_edge(m, r.id)] for m in r.has})
            return dec.apply(args)

        decoders[node] = _tabulate(decoder_slots(net, node), decoder_output_size(net, node),
                                   compute)
    keys = {mapping.relay_nodes[0]: k} if k > 1 else {}
    return NetworkCode(edges, decoders, keys)


def t1_network_code_to_index_code(index: IndexInstance, mapping: MappingRecord,
                                  code: NetworkCode) -> IndexCode:
    """Broadcast the bottleneck symbol computed with every key but relay 1's
    set to 0; receivers replay relay 2 and their side links with zero keys."""
    net = _mapped_network(index, mapping)
    check_network_code(net, code)
    dec = check_network_decodable(net, code)
    if not dec:
        raise PreconditionError("code not decodable", dec.culprit)
    rec = check_source_recoverable(net, code)
    if not rec:
        raise PreconditionError("source not recoverable", rec.culprit)

    relay_in, relay_out = mapping.relay_nodes
    k = code.key_size(relay_in)
    zero_keys = {key_slot(v): 0 for v in net.nodes}

    def encode(cols):
        run = dict(zero_keys)
        run.update({m: cols[m] for m in index.message_ids()})
        if k > 1:
            run[key_slot(relay_in)] = cols[SENDER_KEY]
        return _run(net, code, run)[mapping.bottleneck]

    encoder = _tabulate(encoder_slots(index, k), index.broadcast_alphabet, encode)

    decoders = {}
    for r in index.receivers:
        node = mapping.receiver_node[r.id]
        g = code.node_decoders[node]

        def compute(cols, r=r, g=g):
            run = dict(zero_keys)
            run[mapping.bottleneck] = cols[BROADCAST]
            fan = mapping.fanout_edge(r.id)
            args = {fan: code.edge_functions[fan].apply(run)}
            for m in r.has:
                side = mapping.side_edge(m, r.id)
                args[side] = code.edge_functions[side].apply({**zero_keys, m: cols[m]})
            return g.apply(args)

        decoders[r.id] = _tabulate(index_decoder_slots(index, r.id),
                                   index_decoder_output_size(index, r.id), compute)
    return IndexCode(encoder, decoders, k)


# --- network code on an augmented instance <-> index code on its image ------

def _mapped_index(instance: NetworkInstance, backmap: IndexBackMap) -> IndexInstance:
    idx, bm = network_to_index(instance)
    if bm != backmap:
        raise CodeMismatchError("back-map does not belong to this network instance")
    return idx


def _broadcast_layout(instance: NetworkInstance):
    ids = sorted(e.id for e in instance.edges)
    sizes = [instance.edge(e).alphabet for e in ids]
    return dict(zip(ids, sizes)), dict(zip(ids, strides(sizes)))


def t2_network_code_to_index_code(instance: NetworkInstance, code: NetworkCode,
                                  backmap: IndexBackMap) -> IndexCode:
    """Broadcast, per edge and packed by ascending edge id, the edge message
    plus the edge's global symbol; receivers peel off what they know."""
    idx = _mapped_index(instance, backmap)
    check_network_code(instance, code)
    if not code.is_deterministic:
        raise PreconditionError("code not deterministic")
    dec = check_network_decodable(instance, code)
    if not dec:
        raise PreconditionError("code not decodable", dec.culprit)

    emsg = backmap.edge_message_ids()
    size, stride = _broadcast_layout(instance)
    sources = [s.id for s in instance.sources]

    def encode(cols):
        run = _run(instance, code, {s: cols[s] for s in sources})
        b = 0
        for e in size:
            b = b + ((cols[emsg[e]] + run[e]) % size[e]) * stride[e]
        return b

    encoder = _tabulate(encoder_slots(idx), idx.broadcast_alphabet, encode)

    def edge_symbol(cols, e):
        digit = (cols[BROADCAST] // stride[e]) % size[e]
        return (digit - cols[emsg[e]]) % size[e]

    decoders = {}
    for rid, (kind, ent) in backmap.receiver_origin.items():
        if kind == "node":
            def compute(cols, node=ent):
                args = {e: edge_symbol(cols, e) for e in instance.in_edges(node)}
                args.update({s: cols[s] for s in instance.sources_at(node)})
                return code.node_decoders[node].apply(args)
        else:
            def compute(cols, e=ent):
                tail = instance.edge(e).tail
                args = {x: edge_symbol(cols, x) for x in instance.in_edges(tail)}
                args.update({s: cols[s] for s in instance.sources_at(tail)})
                local = code.edge_functions[e].apply(args)
                digit = (cols[BROADCAST] // stride[e]) % size[e]
                return (digit - local) % size[e]
        decoders[rid] = _tabulate(index_decoder_slots(idx, rid),
                                  index_decoder_output_size(idx, rid), compute)
    return IndexCode(encoder, decoders, 1)


def encoder_image(code: IndexCode) -> list[int]:
    return sorted(int(x) for x in np.unique(code.encoder.table))


def t2_index_code_to_network_code(instance: NetworkInstance, backmap: IndexBackMap,
                                  code: IndexCode, sigma: int | None = None) -> NetworkCode:
    """Freeze the broadcast word at ``sigma`` and let edge and destination
    receivers' decoders act as the network's edge functions and decoders.

    ``sigma`` defaults to the encoder's value at the all-zero input.
    """
    idx = _mapped_index(instance, backmap)
    check_index_code(idx, code)
    dec = check_index_decodable(idx, code)
    if not dec:
        raise DecodabilityPreconditionError("index code not decodable", dec.culprit)
    if sigma is None:
        sigma = int(code.encoder.table[0])
    elif sigma not in encoder_image(code):
        raise PreconditionError("broadcast value outside the encoder image", sigma)

    emsg = backmap.edge_message_ids()
    erecv = backmap.edge_receiver_ids()
    nrecv = backmap.node_receiver_ids()

    def view(cols, node):
        args = {BROADCAST: sigma}
        args.update({emsg[e]: cols[e] for e in instance.in_edges(node)})
        args.update({s: cols[s] for s in instance.sources_at(node)})
        return args

    edges = {}
    for e in instance.edges:
        g = code.decoders[erecv[e.id]]
        edges[e.id] = _tabulate(edge_slots(instance, e.id), e.alphabet,
                                lambda cols, g=g, t=e.tail: g.apply(view(cols, t)))
    decoders = {}
    for node in instance.destination_nodes():
        g = code.decoders[nrecv[node]]
        decoders[node] = _tabulate(decoder_slots(instance, node),
                                   decoder_output_size(instance, node),
                                   lambda cols, g=g, node=node: g.apply(view(cols, node)))
    return NetworkCode(edges, decoders, {})
