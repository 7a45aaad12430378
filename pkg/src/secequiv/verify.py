"""Exact certification of zero-error decodability and perfect secrecy.

All sources and keys are uniform and independent, so the joint law of any
collection of derived variables is obtained by enumerating every input
tuple once. Independence is decided with integer counts; entropies are only
ever reported.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .codes import IndexCode, NetworkCode, check_index_code
from .errors import UnknownVariableError
from .model import IndexInstance, NetworkInstance
from .tables import (
    BROADCAST,
    DEFAULT_BUDGET,
    encoder_slots,
    enumerate_inputs,
    propagate,
    strides,
)

_MAX_DIRECT_CODE = 2**62


class JointTable:
    """Joint law of named variables, one row per equiprobable input tuple."""

    def __init__(self, variables, columns, total=None):
        self.variables = [(str(n), int(s)) for n, s in variables]
        self.columns = dict(columns)
        if total is None:
            total = len(next(iter(self.columns.values()))) if self.columns else 1
        self.total = int(total)
        self._sizes = dict(self.variables)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.variables]

    @property
    def counts(self) -> Counter:
        if not self.variables:
            return Counter({(): self.total})
        stacked = np.stack([self.columns[n] for n in self.names], axis=1)
        return Counter(tuple(int(x) for x in row) for row in stacked)

    def marginal(self, names: Iterable[str]) -> Counter:
        names = self._ordered(names)
        if not names:
            return Counter({(): self.total})
        stacked = np.stack([self.columns[n] for n in names], axis=1)
        return Counter(tuple(int(x) for x in row) for row in stacked)

    def _ordered(self, names) -> list[str]:
        names = set(names)
        unknown = sorted(names - set(self._sizes))
        if unknown:
            raise UnknownVariableError(f"unknown variable(s) {unknown}")
        return [n for n in self.names if n in names]

    def group_ids(self, names) -> tuple[np.ndarray, int]:
        """Dense ids ``0..k-1`` of the realisations of ``names`` (k distinct)."""
        names = self._ordered(names)
        return _dense([self.columns[n] for n in names], [self._sizes[n] for n in names],
                      self.total)


def combine(arrays: Sequence[np.ndarray], sizes: Sequence[int], n: int) -> np.ndarray:
    if not arrays:
        return np.zeros(n, dtype=np.int64)
    if math.prod(sizes) < _MAX_DIRECT_CODE:
        code = np.zeros(n, dtype=np.int64)
        for a, st in zip(arrays, strides(sizes)):
            code += a * st
        return code
    _, inv = np.unique(np.stack(arrays, axis=1), axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _dense(arrays, sizes, n) -> tuple[np.ndarray, int]:
    return dense_ids(combine(arrays, sizes, n))


def is_function_of(target: np.ndarray, view: np.ndarray) -> bool:
    """True iff equal ``view`` codes always carry equal ``target`` values."""
    if len(view) == 0:
        return True
    order = np.argsort(view, kind="stable")
    v, t = view[order], target[order]
    same = v[1:] == v[:-1]
    return not np.any(same & (t[1:] != t[:-1]))


def build_joint(inputs, derived=(), budget: int = DEFAULT_BUDGET) -> JointTable:
    """Push uniform independent ``inputs`` through the ``derived`` functions.

    ``derived`` is a sequence of ``(name, FiniteFunction)``; a function may
    read any input or any earlier derived variable by slot name.
    """
    inputs = [(str(n), int(s)) for n, s in inputs]
    total, cols = enumerate_inputs(inputs, budget)
    variables = list(inputs)
    for name, fn in derived:
        missing = [n for n in fn.names if n not in cols]
        if missing:
            raise UnknownVariableError(f"{name} reads undeclared variable(s) {missing}")
        cols[name] = fn.apply(cols) if fn.slots else np.full(total, fn.table[0], dtype=np.int64)
        variables.append((name, fn.output_size))
    return JointTable(variables, cols, total)


def independent_ids(a: np.ndarray, na: int, b: np.ndarray, nb: int) -> bool:
    """Independence of two dense id columns over equiprobable rows."""
    total = len(a)
    pair = a * nb + b
    c_ab = np.bincount(pair, minlength=na * nb)
    # independence forces every (a, b) in the product of supports to occur
    if np.count_nonzero(c_ab) != na * nb:
        return False
    c_ab = c_ab.reshape(na, nb)
    c_a = np.bincount(a, minlength=na)
    c_b = np.bincount(b, minlength=nb)
    if total < 2**31:
        return bool(np.array_equal(c_ab * total, np.outer(c_a, c_b)))
    lhs = c_ab.astype(object) * total
    return bool(np.all(lhs == np.outer(c_a.astype(object), c_b.astype(object))))


def dense_ids(code: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inv = np.unique(code, return_inverse=True)
    return inv.reshape(-1), len(uniq)


def check_independent(j: JointTable, group_a, group_b) -> bool:
    """Exact test of ``A`` independent of ``B`` with integer counts."""
    a, na = j.group_ids(group_a)
    b, nb = j.group_ids(group_b)
    return independent_ids(a, na, b, nb)


def _entropy_of_counts(counts: np.ndarray, total: int) -> float:
    counts = counts[counts > 0].astype(np.float64)
    return math.log2(total) - math.fsum(counts * np.log2(counts)) / total


def entropy_bits(j: JointTable, group) -> float:
    ids, k = j.group_ids(group)
    return _entropy_of_counts(np.bincount(ids, minlength=k), j.total)


def conditional_entropy_bits(j: JointTable, group_a, group_b) -> float:
    """H(A | B) in bits; for reporting only."""
    group_a, group_b = set(group_a), set(group_b)
    h_ab = entropy_bits(j, group_a | group_b)
    h_b = entropy_bits(j, group_b)
    return max(0.0, h_ab - h_b)


@dataclass
class CheckResult:
    """Verdict of one check; ``witness`` maps input names to a failing tuple."""

    ok: bool
    witness: dict | None = None
    culprit: str | None = None

    def __bool__(self):
        return self.ok


def _smallest_witness(slots, cols, mask) -> dict:
    rows = np.flatnonzero(mask)
    if not slots:
        return {}
    keys = [cols[n][rows] for n, _ in reversed(slots)]
    best = rows[np.lexsort(keys)[0]]
    return {n: int(cols[n][best]) for n, _ in slots}


def _packed(cols, names, sizes, n):
    return combine([cols[m] for m in names], sizes, n)


def network_joint(instance: NetworkInstance, code: NetworkCode,
                  budget: int = DEFAULT_BUDGET) -> JointTable:
    """Joint of every source, key and edge symbol under ``code``."""
    slots, cols = propagate(instance, code, budget)
    variables = list(slots) + [(e.id, e.alphabet) for e in instance.edges]
    return JointTable(variables, cols)


def check_network_decodable(instance: NetworkInstance, code: NetworkCode,
                            budget: int = DEFAULT_BUDGET) -> CheckResult:
    slots, cols = propagate(instance, code, budget)
    n = len(cols[slots[0][0]]) if slots else 1
    fail = np.zeros(n, dtype=bool)
    bad_nodes = {}
    for u in instance.destination_nodes():
        req = instance.required_at(u)
        want = _packed(cols, req, [instance.source(s).alphabet for s in req], n)
        got = code.node_decoders[u].apply(cols)
        bad = got != want
        if bad.any():
            bad_nodes[u] = bad
            fail |= bad
    if not fail.any():
        return CheckResult(True)
    witness = _smallest_witness(slots, cols, fail)
    row = _row_of(slots, witness)
    culprit = min(u for u, bad in bad_nodes.items() if bad[row])
    return CheckResult(False, witness, culprit)


def _row_of(slots, witness) -> int:
    return sum(witness[n] * st for (n, _), st in zip(slots, strides([s for _, s in slots])))


def check_network_secure(instance: NetworkInstance, code: NetworkCode,
                         budget: int = DEFAULT_BUDGET) -> CheckResult:
    j = network_joint(instance, code, budget)
    for r in sorted(instance.eavesdroppers, key=lambda r: r.id):
        if not check_independent(j, r.target_sources, r.tapped_edges):
            return CheckResult(False, culprit=r.id)
    return CheckResult(True)


def check_source_recoverable(instance: NetworkInstance, code: NetworkCode,
                             budget: int = DEFAULT_BUDGET) -> CheckResult:
    """Every source is a function of the symbols on its origin's out-edges."""
    j = network_joint(instance, code, budget)
    for s in sorted(instance.sources, key=lambda s: s.id):
        view, _ = j.group_ids(instance.out_edges(s.origin))
        if not is_function_of(j.columns[s.id], view):
            return CheckResult(False, culprit=s.id)
    return CheckResult(True)


def index_joint(instance: IndexInstance, code: IndexCode,
                budget: int = DEFAULT_BUDGET) -> JointTable:
    """Joint of every message, the sender key (if any) and the broadcast word."""
    check_index_code(instance, code)
    slots = encoder_slots(instance, code.key_alphabet)
    return build_joint(slots, [(BROADCAST, code.encoder)], budget)


def check_index_decodable(instance: IndexInstance, code: IndexCode,
                          budget: int = DEFAULT_BUDGET) -> CheckResult:
    j = index_joint(instance, code, budget)
    slots = encoder_slots(instance, code.key_alphabet)
    cols, n = j.columns, j.total
    fail = np.zeros(n, dtype=bool)
    bad_recv = {}
    for r in sorted(instance.receivers, key=lambda r: r.id):
        wants = sorted(r.wants)
        want = _packed(cols, wants, [instance.message(m).alphabet for m in wants], n)
        got = code.decoders[r.id].apply(cols)
        bad = got != want
        if bad.any():
            bad_recv[r.id] = bad
            fail |= bad
    if not fail.any():
        return CheckResult(True)
    witness = _smallest_witness(slots, cols, fail)
    row = _row_of(slots, witness)
    culprit = min(r for r, bad in bad_recv.items() if bad[row])
    return CheckResult(False, witness, culprit)


def check_index_secure(instance: IndexInstance, code: IndexCode,
                       budget: int = DEFAULT_BUDGET) -> CheckResult:
    j = index_joint(instance, code, budget)
    for r in sorted(instance.eavesdroppers, key=lambda r: r.id):
        if not check_independent(j, r.target_messages, r.side_info | {BROADCAST}):
            return CheckResult(False, culprit=r.id)
    return CheckResult(True)

