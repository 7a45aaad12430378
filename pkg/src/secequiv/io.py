"""Canonical JSON documents for instances, codes and mapping records.

Every document carries ``kind`` and ``format_version``. Emission is
canonical: keys appear in a fixed order, set-valued fields are sorted,
integer arrays are written inline without spaces, and the file ends with a
single newline. Two equal values therefore always produce identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .codes import IndexCode, NetworkCode
from .errors import SecEquivError
from .model import (
    Eavesdropper,
    Edge,
    IndexEavesdropper,
    IndexInstance,
    Message,
    NetworkInstance,
    Receiver,
    Source,
)
from .tables import FiniteFunction
from .transform import AugmentationRecord, IndexBackMap, MappingRecord

FORMAT_VERSION = 1

NETWORK_INSTANCE = "network-instance"
INDEX_INSTANCE = "index-instance"
NETWORK_CODE = "network-code"
INDEX_CODE = "index-code"
INDEX_TO_NETWORK_MAPPING = "index-to-network-mapping"
NETWORK_TO_INDEX_BACKMAP = "network-to-index-backmap"
AUGMENTATION = "augmentation-record"

KINDS = (NETWORK_INSTANCE, INDEX_INSTANCE, NETWORK_CODE, INDEX_CODE,
         INDEX_TO_NETWORK_MAPPING, NETWORK_TO_INDEX_BACKMAP, AUGMENTATION)


class FormatError(SecEquivError, ValueError):
    """A document is not valid JSON or does not have the expected shape."""


# --- emission --------------------------------------------------------------

def _emit(value, indent: int) -> str:
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_emit(v, indent + 2)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ",".join(json.dumps(v, ensure_ascii=False) for v in value) + "]"
        items = [inner + _emit(v, indent + 2) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(document: dict) -> str:
    return _emit(document, 0) + "\n"


def _header(kind: str) -> dict:
    return {"kind": kind, "format_version": FORMAT_VERSION}


def _function_doc(fn: FiniteFunction) -> dict:
    return {"slots": [[n, s] for n, s in fn.slots], "output_size": fn.output_size,
            "table": [int(x) for x in fn.table]}


def to_document(value) -> dict:
    """Plain-dict canonical form of a supported value."""
    if isinstance(value, NetworkInstance):
        doc = _header(NETWORK_INSTANCE)
        doc["nodes"] = list(value.nodes)
        doc["edges"] = [{"id": e.id, "tail": e.tail, "head": e.head, "alphabet": e.alphabet}
                        for e in value.edges]
        doc["sources"] = [{"id": s.id, "origin": s.origin, "alphabet": s.alphabet,
                           "destinations": sorted(s.destinations)} for s in value.sources]
        doc["eavesdroppers"] = [{"id": r.id, "tapped_edges": sorted(r.tapped_edges),
                                 "target_sources": sorted(r.target_sources)}
                                for r in value.eavesdroppers]
        doc["block_size_n"] = value.block_size_n
        return doc
    if isinstance(value, IndexInstance):
        doc = _header(INDEX_INSTANCE)
        doc["messages"] = [{"id": m.id, "alphabet": m.alphabet} for m in value.messages]
        doc["receivers"] = [{"id": r.id, "wants": sorted(r.wants), "has": sorted(r.has)}
                            for r in value.receivers]
        doc["eavesdroppers"] = [{"id": r.id, "side_info": sorted(r.side_info),
                                 "target_messages": sorted(r.target_messages)}
                                for r in value.eavesdroppers]
        doc["broadcast_alphabet"] = value.broadcast_alphabet
        doc["block_size_n"] = value.block_size_n
        return doc
    if isinstance(value, NetworkCode):
        doc = _header(NETWORK_CODE)
        doc["key_alphabets"] = {k: int(value.key_alphabets[k]) for k in sorted(value.key_alphabets)}
        doc["edge_functions"] = {k: _function_doc(value.edge_functions[k])
                                 for k in sorted(value.edge_functions)}
        doc["node_decoders"] = {k: _function_doc(value.node_decoders[k])
                                for k in sorted(value.node_decoders)}
        return doc
    if isinstance(value, IndexCode):
        doc = _header(INDEX_CODE)
        doc["key_alphabet"] = int(value.key_alphabet)
        doc["encoder"] = _function_doc(value.encoder)
        doc["decoders"] = {k: _function_doc(value.decoders[k]) for k in sorted(value.decoders)}
        return doc
    if isinstance(value, MappingRecord):
        doc = _header(INDEX_TO_NETWORK_MAPPING)
        doc["node_for_message"] = dict(sorted(value.node_for_message.items()))
        doc["receiver_node"] = dict(sorted(value.receiver_node.items()))
        doc["relay_nodes"] = list(value.relay_nodes)
        doc["edge_roles"] = dict(sorted(value.edge_roles.items()))
        return doc
    if isinstance(value, IndexBackMap):
        doc = _header(NETWORK_TO_INDEX_BACKMAP)
        doc["message_origin"] = {k: list(v) for k, v in sorted(value.message_origin.items())}
        doc["receiver_origin"] = {k: list(v) for k, v in sorted(value.receiver_origin.items())}
        return doc
    if isinstance(value, AugmentationRecord):
        doc = _header(AUGMENTATION)
        doc["key_source_ids"] = dict(sorted(value.key_source_ids.items()))
        doc["key_alphabets"] = {k: int(v) for k, v in sorted(value.key_alphabets.items())}
        return doc
    raise TypeError(f"cannot serialise {type(value).__name__}")


def emit(value) -> str:
    return dumps(to_document(value))


def save(value, path) -> None:
    Path(path).write_text(emit(value), encoding="utf-8")


# --- parsing ---------------------------------------------------------------

def _get(doc, key, kind=None):
    if not isinstance(doc, dict):
        raise FormatError(f"expected an object holding {key!r}")
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        raise FormatError(f"field {key!r} has the wrong type")
    return v


def _strs(doc, key) -> list:
    v = _get(doc, key, list)
    if not all(isinstance(x, str) for x in v):
        raise FormatError(f"field {key!r} must be a list of strings")
    return v


def _function(doc) -> FiniteFunction:
    slots = _get(doc, "slots", list)
    for s in slots:
        if not (isinstance(s, list) and len(s) == 2 and isinstance(s[0], str)
                and isinstance(s[1], int)):
            raise FormatError("each slot must be a [name, size] pair")
    table = _get(doc, "table", list)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in table):
        raise FormatError("tables must hold integers")
    try:
        return FiniteFunction(slots, _get(doc, "output_size", int), table)
    except (ValueError, TypeError, SecEquivError) as exc:
        raise FormatError(str(exc)) from exc


def from_document(doc: dict):
    """Inverse of :func:`to_document`; raises :class:`FormatError` on bad shape."""
    kind = _get(doc, "kind", str)
    version = _get(doc, "format_version", int)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version}")
    try:
        if kind == NETWORK_INSTANCE:
            edges = [Edge(_get(e, "id", str), _get(e, "tail", str), _get(e, "head", str),
                          _get(e, "alphabet", int)) for e in _get(doc, "edges", list)]
            sources = [Source(_get(s, "id", str), _get(s, "origin", str), _get(s, "alphabet", int),
                              frozenset(_strs(s, "destinations")))
                       for s in _get(doc, "sources", list)]
            eaves = [Eavesdropper(_get(r, "id", str), frozenset(_strs(r, "tapped_edges")),
                                  frozenset(_strs(r, "target_sources")))
                     for r in _get(doc, "eavesdroppers", list)]
            return NetworkInstance(tuple(_strs(doc, "nodes")), tuple(edges), tuple(sources),
                                   tuple(eaves), _get(doc, "block_size_n", int))
        if kind == INDEX_INSTANCE:
            messages = [Message(_get(m, "id", str), _get(m, "alphabet", int))
                        for m in _get(doc, "messages", list)]
            receivers = [Receiver(_get(r, "id", str), frozenset(_strs(r, "wants")),
                                  frozenset(_strs(r, "has")))
                         for r in _get(doc, "receivers", list)]
            eaves = [IndexEavesdropper(_get(r, "id", str), frozenset(_strs(r, "side_info")),
                                       frozenset(_strs(r, "target_messages")))
                     for r in _get(doc, "eavesdroppers", list)]
            return IndexInstance(tuple(messages), tuple(receivers), tuple(eaves),
                                 _get(doc, "broadcast_alphabet", int),
                                 _get(doc, "block_size_n", int))
        if kind == NETWORK_CODE:
            keys = _get(doc, "key_alphabets", dict)
            return NetworkCode({k: _function(v) for k, v in _get(doc, "edge_functions", dict).items()},
                               {k: _function(v) for k, v in _get(doc, "node_decoders", dict).items()},
                               {k: int(v) for k, v in keys.items()})
        if kind == INDEX_CODE:
            return IndexCode(_function(_get(doc, "encoder", dict)),
                             {k: _function(v) for k, v in _get(doc, "decoders", dict).items()},
                             _get(doc, "key_alphabet", int))
        if kind == INDEX_TO_NETWORK_MAPPING:
            return MappingRecord(dict(_get(doc, "node_for_message", dict)),
                                 dict(_get(doc, "receiver_node", dict)),
                                 tuple(_strs(doc, "relay_nodes")),
                                 dict(_get(doc, "edge_roles", dict)))
        if kind == NETWORK_TO_INDEX_BACKMAP:
            return IndexBackMap({k: tuple(v) for k, v in _get(doc, "message_origin", dict).items()},
                                {k: tuple(v) for k, v in _get(doc, "receiver_origin", dict).items()})
        if kind == AUGMENTATION:
            return AugmentationRecord(dict(_get(doc, "key_source_ids", dict)),
                                      {k: int(v) for k, v in _get(doc, "key_alphabets", dict).items()})
    except FormatError:
        raise
    except (ValueError, TypeError, AttributeError, SecEquivError) as exc:
        raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown document kind {kind!r}")


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not UTF-8") from exc
    return loads(text)
