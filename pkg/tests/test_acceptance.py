"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its measurements.
The lines show up in ``pytest tests/test_acceptance.py -v`` output; run
``python tests/test_acceptance.py`` to get the lines alone.
"""

from __future__ import annotations

import itertools
import math
import sys
import time

import numpy as np

from secequiv import corpus
from secequiv.cli import main as cli_main
from secequiv.codes import IndexCode
from secequiv.model import NetworkInstance
from secequiv.search import search_index_codes, search_network_codes
from secequiv.tables import FiniteFunction, encoder_slots, index_decoder_slots
from secequiv.transform import augment, index_to_network, link_id, network_to_index
from secequiv.translate import (
    encoder_image,
    randomized_to_augmented,
    t1_index_code_to_network_code,
    t1_network_code_to_index_code,
    t2_index_code_to_network_code,
    t2_network_code_to_index_code,
)
from secequiv.verify import (
    build_joint,
    check_independent,
    check_index_decodable,
    check_index_secure,
    check_network_decodable,
    check_network_secure,
    conditional_entropy_bits,
    entropy_bits,
)


def report(number: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
    if capsys is None:
        print(line, flush=True)
        return
    with capsys.disabled():
        print(f"\n{line}", flush=True)


def net_verdicts(net, code):
    return check_network_decodable(net, code).ok, check_network_secure(net, code).ok


def idx_verdicts(idx, code):
    return check_index_decodable(idx, code).ok, check_index_secure(idx, code).ok


# --- 1 --------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    idx = corpus.twomsg()
    _, mapping = index_to_network(idx)
    net, _ = index_to_network(idx)
    enc_slots = encoder_slots(idx)
    dec_slots = index_decoder_slots(idx, "r1")
    secure = good = 0
    for enc_t in itertools.product(range(2), repeat=4):
        enc = FiniteFunction(enc_slots, 2, enc_t)
        for dec_t in itertools.product(range(2), repeat=4):
            code = IndexCode(enc, {"r1": FiniteFunction(dec_slots, 2, dec_t)})
            if idx_verdicts(idx, code) != (True, True):
                continue
            secure += 1
            ncode = t1_index_code_to_network_code(idx, mapping, code)
            back = t1_network_code_to_index_code(idx, mapping, ncode)
            if net_verdicts(net, ncode) == (True, True) and back == code:
                good += 1
    elapsed = time.perf_counter() - start
    ok = secure > 0 and good == secure and elapsed < 60
    return ok, f"{good}/{secure} secure index codes round-trip ({256} enumerated), {elapsed:.2f}s < 60s"


def test_criterion_1_index_image_round_trip(capsys):
    ok, detail = criterion_1()
    report(1, ok, detail, capsys)
    assert ok, detail


# --- 2 --------------------------------------------------------------------

def criterion_2():
    start = time.perf_counter()
    net = corpus.otp_parallel()
    aug, _ = augment(net)
    code = randomized_to_augmented(net, corpus.otp_code())
    idx, back = network_to_index(aug)
    icode = t2_network_code_to_index_code(aug, code, back)
    index_ok = idx_verdicts(idx, icode)
    again = t2_index_code_to_network_code(aug, back, icode)
    before, after = net_verdicts(aug, code), net_verdicts(aug, again)
    elapsed = time.perf_counter() - start
    ok = index_ok == (True, True) and before == after and elapsed < 10
    return ok, (f"index (decodable, secure) = {index_ok}; network verdicts {before} -> {after}, "
                f"{elapsed:.2f}s < 10s")


def test_criterion_2_network_image_translation(capsys):
    ok, detail = criterion_2()
    report(2, ok, detail, capsys)
    assert ok, detail


# --- 3 --------------------------------------------------------------------

def joint_space(idx) -> int:
    return math.prod(m.alphabet for m in idx.messages)


def criterion_3():
    start = time.perf_counter()
    agree = infeasible = 0
    names = sorted(corpus.INDEX_CORPUS)
    failures = []
    for name in names:
        idx = corpus.build(name)
        if joint_space(idx) > 2**12:
            failures.append(f"{name} too large")
            continue
        code = cli_main(["equiv", "--instance", str(corpus.data_path(name))])
        if code == 0:
            agree += 1
            if not search_index_codes(idx).feasible:
                infeasible += 1
        else:
            failures.append(name)
    elapsed = time.perf_counter() - start
    ok = len(names) >= 10 and agree == len(names) and infeasible >= 2 and elapsed < 600
    detail = (f"agree on {agree}/{len(names)} index instances ({infeasible} infeasible), "
              f"{elapsed:.1f}s < 600s")
    if failures:
        detail += f"; failing: {', '.join(failures)}"
    return ok, detail


def test_criterion_3_feasibility_equivalence(capsys):
    ok, detail = criterion_3()
    capsys.readouterr()  # drop the per-instance equiv lines
    report(3, ok, detail, capsys)
    assert ok, detail


# --- 4 --------------------------------------------------------------------

def expected_edges(idx):
    out = set()
    for m in idx.messages:
        out.add((f"s:{m.id}", "1"))
        for r in idx.receivers:
            if m.id in r.has:
                out.add((f"s:{m.id}", f"t:{r.id}"))
    out.add(("1", "2"))
    out |= {("2", f"t:{r.id}") for r in idx.receivers}
    return out


def criterion_4():
    bad = []
    checked = 0
    for name in sorted(corpus.INDEX_CORPUS):
        idx = corpus.build(name)
        net, _ = index_to_network(idx)
        checked += 1
        edges = {(e.tail, e.head) for e in net.edges}
        ids_ok = all(e.id == link_id(e.tail, e.head) for e in net.edges)
        if (len(net.nodes) != len(idx.messages) + len(idx.receivers) + 2
                or edges != expected_edges(idx) or len(edges) != len(net.edges) or not ids_ok):
            bad.append(name)
    for name in sorted(corpus.NETWORK_CORPUS):
        base = corpus.build(name)
        for inst in (base, augment(base)[0]):
            idx, _ = network_to_index(inst)
            checked += 1
            if (len(idx.messages) != len(inst.sources) + len(inst.edges)
                    or len(idx.receivers) != len(inst.destination_nodes()) + len(inst.edges)
                    or idx.broadcast_alphabet != math.prod(e.alphabet for e in inst.edges)):
                bad.append(name)
    ok = not bad
    return ok, f"{checked - len(bad)}/{checked} mapped instances have the prescribed shape" + (
        f"; failing: {', '.join(bad)}" if bad else "")


def test_criterion_4_structural_mapping(capsys):
    ok, detail = criterion_4()
    report(4, ok, detail, capsys)
    assert ok, detail


# --- 5 --------------------------------------------------------------------

def random_joint(rng):
    inputs = []
    while True:
        size = int(rng.integers(1, 6))
        if math.prod(s for _, s in inputs) * size > 2**10 or len(inputs) >= 5:
            break
        inputs.append((f"x{len(inputs)}", size))
        if rng.random() < 0.3:
            break
    names = list(inputs)
    derived = []
    for k in range(int(rng.integers(1, 5))):
        arity = int(rng.integers(0, min(3, len(names)) + 1))
        picks = [names[i] for i in rng.choice(len(names), size=arity, replace=False)]
        out = int(rng.integers(1, 5))
        rows = math.prod(s for _, s in picks)
        if rng.random() < 0.5 and picks:
            # structured: sum modulo out, which is often independent of single inputs
            idx = np.indices([s for _, s in reversed(picks)]).reshape(len(picks), -1)[::-1]
            table = idx.sum(axis=0) % out
        else:
            table = rng.integers(0, out, rows)
        derived.append((f"d{k}", FiniteFunction(picks, out, table)))
        names.append((f"d{k}", out))
    return build_joint(inputs, derived), [n for n, _ in names]


def criterion_5(n_cases=200, seed=20240613):
    rng = np.random.default_rng(seed)
    agree = independent = 0
    for _ in range(n_cases):
        j, names = random_joint(rng)
        a = set(rng.choice(names, size=int(rng.integers(1, min(3, len(names)) + 1)), replace=False))
        b = set(rng.choice(names, size=int(rng.integers(0, min(3, len(names)) + 1)), replace=False))
        exact = check_independent(j, a, b)
        gap = abs(conditional_entropy_bits(j, a, b) - entropy_bits(j, a))
        independent += exact
        agree += exact == (gap < 1e-9)
    ok = agree == n_cases
    return ok, f"{agree}/{n_cases} random joints agree ({independent} independent pairs)"


def test_criterion_5_verifier_oracle(capsys):
    ok, detail = criterion_5()
    report(5, ok, detail, capsys)
    assert ok, detail


# --- 6 --------------------------------------------------------------------

def _strip(net):
    return NetworkInstance(net.nodes, net.edges, net.sources, (), net.block_size_n)


def sigma_cases():
    """(label, augmented network, back-map, index code) for every small enough instance."""
    nets = [(name, corpus.build(name)) for name in sorted(corpus.NETWORK_CORPUS)]
    nets += [(f"i2n({name})", index_to_network(corpus.build(name))[0])
             for name in sorted(corpus.INDEX_CORPUS)]
    cases = []
    for label, net in nets:
        aug, rec = augment(net)
        idx, back = network_to_index(aug)
        if joint_space(idx) > 2**10:
            continue
        keys = {v: k for v, k in rec.key_alphabets.items() if k > 1}
        found = search_network_codes(net, keys)
        if not found.feasible:
            # a decodable code that fails security still exercises the translation
            found = search_network_codes(_strip(net), keys)
        code = randomized_to_augmented(net, found.code)
        cases.append((label, aug, back, t2_network_code_to_index_code(aug, code, back)))
        # pruning only shortcuts infeasible images; a witness is always the unpruned one
        direct = search_index_codes(idx, prune=True)
        if direct.feasible:
            cases.append((f"{label} searched", aug, back, direct.code))
    return cases


def criterion_6():
    cases = sigma_cases()
    bad, total = [], 0
    for label, aug, back, icode in cases:
        seen = set()
        for sigma in encoder_image(icode):
            total += 1
            seen.add(net_verdicts(aug, t2_index_code_to_network_code(aug, back, icode, sigma)))
        if len(seen) != 1:
            bad.append(label)
    ok = bool(cases) and not bad
    return ok, (f"{len(cases) - len(bad)}/{len(cases)} codes give identical verdicts "
                f"across {total} broadcast values") + (f"; failing: {', '.join(bad)}" if bad else "")


def test_criterion_6_sigma_independence(capsys):
    ok, detail = criterion_6()
    report(6, ok, detail, capsys)
    assert ok, detail


# --- 7 --------------------------------------------------------------------

def criterion_7():
    start = time.perf_counter()
    net = corpus.shared_edge_wiretap()
    aug, rec = augment(net)
    keys = {v: k for v, k in rec.key_alphabets.items() if k > 1}
    net_res = search_network_codes(net, keys, prune=False)
    idx, _ = network_to_index(aug)
    idx_res = search_index_codes(idx, prune=False)
    elapsed = time.perf_counter() - start
    ok = net_res.infeasible and idx_res.infeasible and elapsed < 60
    return ok, (f"network search {net_res.status} (keys {keys}), index image search "
                f"{idx_res.status}, {elapsed:.2f}s < 60s")


def test_criterion_7_infeasible_certificate(capsys):
    ok, detail = criterion_7()
    report(7, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7], start=1):
        ok, detail = fn()
        report(n, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
