"""Bounded exhaustive search for secure codes on tiny instances.

Candidate codes are ordered lexicographically over their concatenated table
entries: network edge tables in topological order, then decoders by node
id; for index codes the encoder, then decoders by receiver id. The search
returns the first candidate in that order passing every check, or proves
that none exists.

Two exact reductions keep the enumeration small without changing the
answer:

* decoders are never enumerated. A zero-error decoder exists iff the
  receiver's view determines what it wants, and the lexicographically
  first such decoder writes 0 on every row the view never produces.
* a partial code is abandoned as soon as a necessary condition fails.
  For network codes: an eavesdropper already sees a dependent subset of its links, or a
  destination cannot decode even from everything upstream of it that is
  still undetermined. For index codes: a receiver sees two different
  wanted values behind the same (side information, broadcast) pair, or an
  eavesdropper's counts can no longer even out. Table rows that no input
  reaches are fixed to 0 for the same lexicographic reason.

Optional symmetry pruning restricts every table to first-occurrence
(restricted growth) form. It is only used to certify infeasibility; a
feasible verdict is recomputed without it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .codes import IndexCode, NetworkCode
from .errors import SizeBudgetError, ValidationError
from .model import IndexInstance, NetworkInstance, topological_order, validate_index, validate_network
from .tables import (
    FiniteFunction,
    decoder_output_size,
    decoder_slots,
    edge_slots,
    encoder_slots,
    enumerate_inputs,
    global_input_slots,
    index_decoder_output_size,
    index_decoder_slots,
    key_slot,
)
from .transform import augment, index_to_network, network_to_index
from .verify import (
    check_index_decodable,
    check_index_secure,
    check_network_decodable,
    check_network_secure,
    combine,
    dense_ids,
    independent_ids,
    is_function_of,
)

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class SearchBudget:
    max_candidate_codes: int = 2**22
    max_joint_tuples: int = 2**20

    def __post_init__(self):
        if self.max_candidate_codes < 1 or self.max_joint_tuples < 1:
            raise ValueError("search budgets must be positive")


@dataclass
class SearchResult:
    status: str
    code: object = None
    explored: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    @property
    def infeasible(self) -> bool:
        return self.status == INFEASIBLE

    @property
    def exceeded(self) -> bool:
        return self.status == BUDGET_EXCEEDED


class BudgetExceededError(SizeBudgetError):
    pass


class _OutOfBudget(Exception):
    pass


def _candidates(n_rows: int, out: int, restricted: bool):
    """Value vectors in lexicographic order, optionally restricted growth."""
    if not restricted:
        yield from itertools.product(range(out), repeat=n_rows)
        return
    vec = [0] * n_rows

    def rec(i, top):
        if i == n_rows:
            yield tuple(vec)
            return
        for v in range(min(top + 2, out)):
            vec[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(0, -1)


# --- network codes ---------------------------------------------------------

@dataclass
class _Plan:
    order: list
    slots: dict                 # edge id -> local slots
    taps_at: list               # depth -> [(target ids, n targets, assigned taps)]
    views_at: list              # depth -> [(want column, view names)]
    initial_views: list = field(default_factory=list)


def _upstream(instance: NetworkInstance, node: str, open_edges: set) -> set:
    """Nodes reaching ``node`` through edges in ``open_edges`` (``node`` included)."""
    seen, stack = {node}, [node]
    while stack:
        x = stack.pop()
        for e in instance.edges:
            if e.id in open_edges and e.head == x and e.tail not in seen:
                seen.add(e.tail)
                stack.append(e.tail)
    return seen


def _view_names(instance, node, region, assigned, keys):
    names = [e.id for e in instance.edges if e.id in assigned and e.head in region]
    names += [s.id for s in instance.sources if s.origin in region]
    names += [key_slot(v) for v in sorted(region) if v != node and keys.get(v, 1) > 1]
    return names


def _plan(instance: NetworkInstance, keys: dict, cols: dict, n: int) -> _Plan:
    order = topological_order(instance)
    slots = {e: edge_slots(instance, e, keys.get(instance.edge(e).tail, 1)) for e in order}
    targets = {}
    for r in instance.eavesdroppers:
        ts = sorted(r.target_sources)
        targets[r.id] = dense_ids(combine([cols[s] for s in ts],
                                          [instance.source(s).alphabet for s in ts], n))
    wants = {}
    for u in instance.destination_nodes():
        req = instance.required_at(u)
        wants[u] = combine([cols[s] for s in req], [instance.source(s).alphabet for s in req], n)

    taps_at, views_at = [], []
    for d, e in enumerate(order):
        assigned = set(order[:d + 1])
        checks = []
        for r in sorted(instance.eavesdroppers, key=lambda r: r.id):
            if e in r.tapped_edges:
                a, na = targets[r.id]
                checks.append((a, na, sorted(r.tapped_edges & assigned)))
        taps_at.append(checks)
        open_edges = set(order[d + 1:])
        views = []
        head = instance.edge(e).head
        for u in wants:
            region = _upstream(instance, u, open_edges)
            if head in region:
                views.append((wants[u], _view_names(instance, u, region, assigned, keys)))
        views_at.append(views)
    initial = []
    all_open = set(order)
    for u in wants:
        region = _upstream(instance, u, all_open)
        initial.append((wants[u], _view_names(instance, u, region, set(), keys)))
    return _Plan(order, slots, taps_at, views_at, initial)


def _sizes_of(instance, keys, names):
    sizes = []
    for nm in names:
        if nm.startswith("key:") and nm not in {s.id for s in instance.sources}:
            sizes.append(keys[nm[4:]])
        else:
            try:
                sizes.append(instance.edge(nm).alphabet)
            except KeyError:
                sizes.append(instance.source(nm).alphabet)
    return sizes


def _derive_decoder(slots, out, cols, want) -> FiniteFunction:
    rows = combine([cols[nm] for nm, _ in slots], [s for _, s in slots], len(want))
    table = np.zeros(math.prod(s for _, s in slots), dtype=np.int64)
    table[rows] = want
    return FiniteFunction(slots, out, table)


def _network_search(instance, keys, budget, restricted) -> SearchResult:
    slots_in = global_input_slots(instance, keys)
    n = math.prod(s for _, s in slots_in)
    if n > budget.max_joint_tuples:
        return SearchResult(BUDGET_EXCEEDED)
    _, cols = enumerate_inputs(slots_in, budget.max_joint_tuples)
    plan = _plan(instance, keys, cols, n)
    size_cache = {}

    def sizes(names):
        key = tuple(names)
        if key not in size_cache:
            size_cache[key] = _sizes_of(instance, keys, names)
        return size_cache[key]

    def view_ok(checks):
        for want, names in checks:
            view = combine([cols[nm] for nm in names], sizes(names), n)
            if not is_function_of(want, view):
                return False
        return True

    if not view_ok(plan.initial_views):
        return SearchResult(INFEASIBLE)

    tables = {}
    explored = 0

    def rec(d):
        nonlocal explored
        if d == len(plan.order):
            return True
        e = plan.order[d]
        slots = plan.slots[e]
        out = instance.edge(e).alphabet
        row = combine([cols[nm] for nm, _ in slots], [s for _, s in slots], n)
        seen, inv = np.unique(row, return_inverse=True)
        inv = inv.reshape(-1)
        for proj in _candidates(len(seen), out, restricted):
            explored += 1
            if explored > budget.max_candidate_codes:
                raise _OutOfBudget
            proj = np.asarray(proj, dtype=np.int64)
            cols[e] = proj[inv]
            ok = True
            for a, na, taps in plan.taps_at[d]:
                b, nb = dense_ids(combine([cols[t] for t in taps], sizes(taps), n))
                if not independent_ids(a, na, b, nb):
                    ok = False
                    break
            if ok and view_ok(plan.views_at[d]) and rec(d + 1):
                table = np.zeros(math.prod(s for _, s in slots), dtype=np.int64)
                table[seen] = proj
                tables[e] = FiniteFunction(slots, out, table)
                return True
        del cols[e]
        return False

    try:
        found = rec(0)
    except _OutOfBudget:
        return SearchResult(BUDGET_EXCEEDED, explored=explored)
    if not found:
        return SearchResult(INFEASIBLE, explored=explored)
    decoders = {}
    for u in instance.destination_nodes():
        req = instance.required_at(u)
        want = combine([cols[s] for s in req], [instance.source(s).alphabet for s in req], n)
        decoders[u] = _derive_decoder(decoder_slots(instance, u),
                                      decoder_output_size(instance, u), cols, want)
    code = NetworkCode(tables, decoders, {v: k for v, k in keys.items() if k > 1})
    if not (check_network_decodable(instance, code) and check_network_secure(instance, code)):
        raise AssertionError("search produced a code the verifier rejects")
    return SearchResult(FEASIBLE, code, explored)


def search_network_codes(instance: NetworkInstance, key_alphabets=None,
                         budget: SearchBudget = SearchBudget(),
                         prune: bool = False) -> SearchResult:
    """First secure zero-error network code at the given key alphabets."""
    report = validate_network(instance)
    if not report.ok:
        raise ValidationError(report.violations)
    keys = {v: int(k) for v, k in (key_alphabets or {}).items()}
    unknown = sorted(set(keys) - set(instance.nodes))
    if unknown:
        raise ValidationError([f"key alphabet for unknown node {v}" for v in unknown])
    if prune:
        res = _network_search(instance, keys, budget, restricted=True)
        if not res.feasible:
            return res
    return _network_search(instance, keys, budget, restricted=False)


# --- index codes -----------------------------------------------------------

def _index_search(instance, key, budget, restricted) -> SearchResult:
    slots = encoder_slots(instance, key)
    n = math.prod(s for _, s in slots)
    if n > budget.max_joint_tuples:
        return SearchResult(BUDGET_EXCEEDED)
    _, cols = enumerate_inputs(slots, budget.max_joint_tuples)
    B = instance.broadcast_alphabet
    receivers = sorted(instance.receivers, key=lambda r: r.id)
    has_ids, want_ids, wants_packed = [], [], []
    for r in receivers:
        has = sorted(r.has)
        h, _ = dense_ids(combine([cols[m] for m in has],
                                 [instance.message(m).alphabet for m in has], n))
        wants = sorted(r.wants)
        w = combine([cols[m] for m in wants], [instance.message(m).alphabet for m in wants], n)
        has_ids.append(h.tolist())
        want_ids.append(w.tolist())
        wants_packed.append(w)
    eaves = []
    for r in sorted(instance.eavesdroppers, key=lambda r: r.id):
        ts, si = sorted(r.target_messages), sorted(r.side_info)
        a, na = dense_ids(combine([cols[m] for m in ts],
                                  [instance.message(m).alphabet for m in ts], n))
        side = combine([cols[m] for m in si], [instance.message(m).alphabet for m in si], n)
        s_ids, ns = dense_ids(side)
        eaves.append((a, na, side, a.tolist(), s_ids.tolist(), n // (na * ns)))

    # Secrecy needs count(a, s, b) to be the same for every target value a.
    # Each (a, s) pair covers ``quota`` rows, so for a fixed s the running
    # maxima over a, summed across b, can never exceed ``quota``.
    counts = [dict() for _ in eaves]   # (a, s, b) -> rows placed
    peaks = [dict() for _ in eaves]    # (s, b) -> max over a
    loads = [dict() for _ in eaves]    # s -> sum over b of peaks

    # (receiver, has id, broadcast value) -> [wants value, multiplicity]
    seen = [dict() for _ in receivers]
    vals = [-1] * n
    tops = [-1] * (n + 1)
    explored = 0

    def place(i, v):
        for k in range(len(receivers)):
            slot = seen[k].get((has_ids[k][i], v))
            if slot is not None and slot[0] != want_ids[k][i]:
                return False
        for k in range(len(receivers)):
            key_ = (has_ids[k][i], v)
            slot = seen[k].get(key_)
            if slot is None:
                seen[k][key_] = [want_ids[k][i], 1]
            else:
                slot[1] += 1
        ok = True
        for k, (_, _, _, a_ids, s_ids, quota) in enumerate(eaves):
            a, sv = a_ids[i], s_ids[i]
            c = counts[k].get((a, sv, v), 0) + 1
            counts[k][(a, sv, v)] = c
            peak = peaks[k].get((sv, v), 0)
            if c > peak:
                peaks[k][(sv, v)] = c
                loads[k][sv] = loads[k].get(sv, 0) + c - peak
                if loads[k][sv] > quota:
                    ok = False
        if not ok:
            unplace(i, v)
        return ok

    def unplace(i, v):
        for k in range(len(receivers)):
            key_ = (has_ids[k][i], v)
            slot = seen[k][key_]
            slot[1] -= 1
            if slot[1] == 0:
                del seen[k][key_]
        for k, (_, na, _, a_ids, s_ids, _) in enumerate(eaves):
            a, sv = a_ids[i], s_ids[i]
            c = counts[k][(a, sv, v)]
            counts[k][(a, sv, v)] = c - 1
            if c == peaks[k][(sv, v)]:
                peak = max(counts[k].get((x, sv, v), 0) for x in range(na))
                loads[k][sv] -= c - peak
                peaks[k][(sv, v)] = peak

    def secure(enc):
        for a, na, side, *_ in eaves:
            b, nb = dense_ids(side * B + enc)
            if not independent_ids(a, na, b, nb):
                return False
        return True

    i = 0
    found = False
    while i >= 0:
        if i == n:
            enc = np.asarray(vals, dtype=np.int64)
            if secure(enc):
                found = True
                break
            i -= 1
            continue
        if vals[i] >= 0:
            unplace(i, vals[i])
        limit = min(B, tops[i] + 2) if restricted else B
        v = vals[i] + 1
        while v < limit and not place(i, v):
            v += 1
        if v >= limit:
            vals[i] = -1
            i -= 1
            continue
        explored += 1
        if explored > budget.max_candidate_codes:
            return SearchResult(BUDGET_EXCEEDED, explored=explored)
        vals[i] = v
        tops[i + 1] = max(tops[i], v)
        i += 1

    if not found:
        return SearchResult(INFEASIBLE, explored=explored)
    encoder = FiniteFunction(slots, B, vals)
    cols = dict(cols)
    cols["broadcast"] = np.asarray(vals, dtype=np.int64)
    decoders = {}
    for r, want in zip(receivers, wants_packed):
        decoders[r.id] = _derive_decoder(index_decoder_slots(instance, r.id),
                                         index_decoder_output_size(instance, r.id), cols, want)
    code = IndexCode(encoder, decoders, key)
    if not (check_index_decodable(instance, code) and check_index_secure(instance, code)):
        raise AssertionError("search produced a code the verifier rejects")
    return SearchResult(FEASIBLE, code, explored)


def search_index_codes(instance: IndexInstance, key_alphabet: int = 1,
                       budget: SearchBudget = SearchBudget(),
                       prune: bool = False) -> SearchResult:
    """First secure zero-error index code at the given sender-key alphabet."""
    report = validate_index(instance)
    if not report.ok:
        raise ValidationError(report.violations)
    if prune:
        res = _index_search(instance, key_alphabet, budget, restricted=True)
        if not res.feasible:
            return res
    return _index_search(instance, key_alphabet, budget, restricted=False)


# --- feasibility equivalence ----------------------------------------------

@dataclass
class EquivalenceReport:
    index_feasible: bool
    network_feasible: bool
    index_code: object = None
    network_code: object = None

    @property
    def agree(self) -> bool:
        return self.index_feasible == self.network_feasible

    def __str__(self):
        yn = {True: "yes", False: "no"}
        return (f"index feasible: {yn[self.index_feasible]}, "
                f"network feasible: {yn[self.network_feasible]}, agree: {yn[self.agree]}")


def _settled(res: SearchResult, what: str) -> bool:
    if res.exceeded:
        raise BudgetExceededError(f"{what} search exceeded its budget")
    return res.feasible


def feasibility_equivalence(instance: IndexInstance, budget: SearchBudget = SearchBudget(),
                            key_alphabet: int = 1, prune: bool = False) -> EquivalenceReport:
    """Search the index instance and its index-to-network image.

    The network search gives relay 1 the sender's key alphabet; every
    other node encodes deterministically.
    """
    idx_res = search_index_codes(instance, key_alphabet, budget, prune)
    net, _ = index_to_network(instance)
    keys = {"1": key_alphabet} if key_alphabet > 1 else {}
    net_res = search_network_codes(net, keys, budget, prune)
    return EquivalenceReport(_settled(idx_res, "index"), _settled(net_res, "network"),
                             idx_res.code, net_res.code)


def network_feasibility_equivalence(instance: NetworkInstance,
                                    budget: SearchBudget = SearchBudget(),
                                    prune: bool = False) -> EquivalenceReport:
    """Search a network instance (keys sized as in its augmentation) and the
    index image of its augmentation (deterministic sender)."""
    aug, record = augment(instance)
    keys = {v: k for v, k in record.key_alphabets.items() if k > 1}
    net_res = search_network_codes(instance, keys, budget, prune)
    idx, _ = network_to_index(aug)
    idx_res = search_index_codes(idx, 1, budget, prune)
    return EquivalenceReport(_settled(idx_res, "index"), _settled(net_res, "network"),
                             idx_res.code, net_res.code)
