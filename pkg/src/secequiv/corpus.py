"""Small hand-built instances shipped with the package.

Each builder returns a fresh value; the JSON files under ``data/`` are the
canonical emission of these builders and are checked byte-for-byte by the
test suite. Expected feasibility (at trivial sender key) is recorded next
to each index instance.
"""

from __future__ import annotations

from importlib import resources

from .codes import NetworkCode
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
from .tables import FiniteFunction, key_slot


def _idx(messages, receivers, eaves=(), broadcast=2, alphabet=2) -> IndexInstance:
    return IndexInstance(
        tuple(Message(m, alphabet) for m in messages),
        tuple(Receiver(r, set(w), set(h)) for r, w, h in receivers),
        tuple(IndexEavesdropper(e, set(s), set(t)) for e, s, t in eaves),
        broadcast,
    )


def twomsg() -> IndexInstance:
    """Receiver holds X2 and wants X1; a side-information-free eavesdropper targets X1."""
    return _idx(["1", "2"], [("r1", {"1"}, {"2"})], [("e1", set(), {"1"})])


def twomsg_leaky() -> IndexInstance:
    """As :func:`twomsg`, but the eavesdropper also holds X2, exactly like the receiver."""
    return _idx(["1", "2"], [("r1", {"1"}, {"2"})], [("e1", {"2"}, {"1"})])


def lone_receiver() -> IndexInstance:
    """A receiver without side information; the eavesdropper sees what it sees."""
    return _idx(["1"], [("r1", {"1"}, set())], [("e1", set(), {"1"})])


def plain_broadcast() -> IndexInstance:
    return _idx(["1", "2"], [("r1", {"1", "2"}, set())], broadcast=4)


def exposed_pair() -> IndexInstance:
    """Both messages must cross the broadcast in the clear."""
    return _idx(["1", "2"], [("r1", {"1", "2"}, set())], [("e1", set(), {"1"})], broadcast=4)


def swap_pair() -> IndexInstance:
    return _idx(["1", "2"], [("r1", {"1"}, {"2"}), ("r2", {"2"}, {"1"})],
                [("e1", set(), {"1"}), ("e2", set(), {"2"})])


def narrow_pair() -> IndexInstance:
    """One receiver needs two bits through a one-bit broadcast."""
    return _idx(["1", "2"], [("r1", {"1"}, {"2"}), ("r2", {"1", "2"}, set())])


def blind_second() -> IndexInstance:
    return _idx(["1", "2"], [("r1", {"1"}, {"2"}), ("r2", {"2"}, set())],
                [("e1", set(), {"1"})])


def parity_three() -> IndexInstance:
    return _idx(["1", "2", "3"],
                [("r1", {"1"}, {"2", "3"}), ("r2", {"2"}, {"1", "3"}), ("r3", {"3"}, {"1", "2"})],
                [("e1", set(), {"1"})])


def parity_three_exposed() -> IndexInstance:
    """As :func:`parity_three`, but the eavesdropper targets all three messages."""
    return _idx(["1", "2", "3"],
                [("r1", {"1"}, {"2", "3"}), ("r2", {"2"}, {"1", "3"}), ("r3", {"3"}, {"1", "2"})],
                [("e1", set(), {"1", "2", "3"})])


def chained_side() -> IndexInstance:
    return _idx(["1", "2", "3"], [("r1", {"1"}, {"2"}), ("r2", {"3"}, {"1"})],
                [("e1", set(), {"2"})], broadcast=4)


def ternary_pad() -> IndexInstance:
    return _idx(["1", "2"], [("r1", {"1"}, {"2"})], [("e1", set(), {"1"})],
                broadcast=3, alphabet=3)


# name -> (builder, feasible at trivial key)
INDEX_CORPUS = {
    "twomsg": (twomsg, True),
    "twomsg_leaky": (twomsg_leaky, False),
    "lone_receiver": (lone_receiver, False),
    "plain_broadcast": (plain_broadcast, True),
    "exposed_pair": (exposed_pair, False),
    "swap_pair": (swap_pair, True),
    "narrow_pair": (narrow_pair, False),
    "blind_second": (blind_second, False),
    "parity_three": (parity_three, True),
    "parity_three_exposed": (parity_three_exposed, False),
    "chained_side": (chained_side, True),
    "ternary_pad": (ternary_pad, True),
}


def shared_edge_wiretap() -> NetworkInstance:
    """One binary edge carries X, and the eavesdropper taps that edge."""
    return NetworkInstance(("s", "t"), (Edge("e1", "s", "t", 2),),
                           (Source("X", "s", 2, {"t"}),),
                           (Eavesdropper("r1", {"e1"}, {"X"}),))


def otp_parallel() -> NetworkInstance:
    """Two parallel binary edges; the eavesdropper taps only the first."""
    return NetworkInstance(("s", "t"), (Edge("e1", "s", "t", 2), Edge("e2", "s", "t", 2)),
                           (Source("X", "s", 2, {"t"}),),
                           (Eavesdropper("r1", {"e1"}, {"X"}),))


def chain() -> NetworkInstance:
    return NetworkInstance(("s", "a", "t"), (Edge("e1", "s", "a", 2), Edge("e2", "a", "t", 2)),
                           (Source("X", "s", 2, {"t"}),))


def relay_pad() -> NetworkInstance:
    """A relay forwards one of two parallel links; the eavesdropper taps the relayed hop."""
    return NetworkInstance(
        ("s", "a", "t"),
        (Edge("e1", "s", "a", 2), Edge("e2", "s", "t", 2), Edge("e3", "a", "t", 2)),
        (Source("X", "s", 2, {"t"}),),
        (Eavesdropper("r1", {"e3"}, {"X"}),))


def butterfly() -> NetworkInstance:
    edges = [("e1", "s1", "t1"), ("e2", "s1", "m"), ("e3", "s2", "m"), ("e4", "s2", "t2"),
             ("e5", "m", "w"), ("e6", "w", "t1"), ("e7", "w", "t2")]
    return NetworkInstance(("s1", "s2", "m", "w", "t1", "t2"),
                           tuple(Edge(i, a, b, 2) for i, a, b in edges),
                           (Source("A", "s1", 2, {"t2"}), Source("B", "s2", 2, {"t1"})))


def cyclic() -> NetworkInstance:
    """Deliberately invalid: a two-node loop."""
    return NetworkInstance(("s", "a", "t"),
                           (Edge("e1", "s", "a", 2), Edge("e2", "a", "s", 2), Edge("e3", "a", "t", 2)),
                           (Source("X", "s", 2, {"t"}),))


# name -> (builder, feasible with augmentation-sized keys); None when not searched
NETWORK_CORPUS = {
    "shared_edge_wiretap": (shared_edge_wiretap, False),
    "otp_parallel": (otp_parallel, True),
    "chain": (chain, True),
    "relay_pad": (relay_pad, True),
    "butterfly": (butterfly, None),
}

INVALID_CORPUS = {"cyclic": cyclic}


def otp_code() -> NetworkCode:
    """Binary key K at ``s``: e1 carries X+K, e2 carries K, ``t`` subtracts."""
    k = key_slot("s")
    e1 = FiniteFunction.from_callable([("X", 2), (k, 2)], 2, lambda x, key: (x + key) % 2)
    e2 = FiniteFunction.from_callable([("X", 2), (k, 2)], 2, lambda x, key: key)
    dec = FiniteFunction.from_callable([("e1", 2), ("e2", 2)], 2, lambda a, b: (a - b) % 2)
    return NetworkCode({"e1": e1, "e2": e2}, {"t": dec}, {"s": 2})


CODE_CORPUS = {"otp": (otp_code, "otp_parallel")}


def file_name(name: str) -> str:
    if name in INDEX_CORPUS:
        return f"{name}.idx.json"
    if name in NETWORK_CORPUS or name in INVALID_CORPUS:
        return f"{name}.net.json"
    if name in CODE_CORPUS:
        return f"{name}.code.json"
    raise KeyError(name)


def build(name: str):
    for table in (INDEX_CORPUS, NETWORK_CORPUS, CODE_CORPUS):
        if name in table:
            return table[name][0]()
    return INVALID_CORPUS[name]()


def names() -> list[str]:
    return [*INDEX_CORPUS, *NETWORK_CORPUS, *INVALID_CORPUS, *CODE_CORPUS]


def data_path(name: str):
    """Path of the bundled JSON file for ``name``."""
    return resources.files("secequiv") / "data" / file_name(name)


def write_all(directory) -> None:
    from pathlib import Path

    from .io import emit

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name in names():
        (out / file_name(name)).write_text(emit(build(name)), encoding="utf-8")
