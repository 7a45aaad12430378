import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secequiv.codes import IndexCode, NetworkCode
from secequiv.corpus import (
    INDEX_CORPUS,
    NETWORK_CORPUS,
    lone_receiver,
    narrow_pair,
    otp_parallel,
    relay_pad,
    shared_edge_wiretap,
    swap_pair,
    twomsg,
    twomsg_leaky,
)
from secequiv.errors import ValidationError
from secequiv.model import (
    Eavesdropper,
    Edge,
    IndexEavesdropper,
    IndexInstance,
    Message,
    NetworkInstance,
    Receiver,
    Source,
    topological_order,
)
from secequiv.transform import augment
from secequiv.search import (
    BUDGET_EXCEEDED,
    FEASIBLE,
    INFEASIBLE,
    BudgetExceededError,
    SearchBudget,
    feasibility_equivalence,
    network_feasibility_equivalence,
    search_index_codes,
    search_network_codes,
)
from secequiv.tables import (
    FiniteFunction,
    decoder_output_size,
    decoder_slots,
    edge_slots,
    encoder_slots,
    index_decoder_output_size,
    index_decoder_slots,
)
from secequiv.verify import (
    check_index_decodable,
    check_index_secure,
    check_network_decodable,
    check_network_secure,
)


def _tables(slots, out):
    n = math.prod(s for _, s in slots)
    return [FiniteFunction(slots, out, t) for t in itertools.product(range(out), repeat=n)]


def naive_network(net, keys):
    """First secure code in plain lexicographic order over every table entry."""
    order = topological_order(net)
    edge_choices = [_tables(edge_slots(net, e, keys.get(net.edge(e).tail, 1)), net.edge(e).alphabet)
                    for e in order]
    dests = sorted(net.destination_nodes())
    dec_choices = [_tables(decoder_slots(net, u), decoder_output_size(net, u)) for u in dests]
    for edges in itertools.product(*edge_choices):
        for decs in itertools.product(*dec_choices):
            code = NetworkCode(dict(zip(order, edges)), dict(zip(dests, decs)), keys)
            if check_network_decodable(net, code) and check_network_secure(net, code):
                return code
    return None


def naive_index(idx, key=1):
    enc_choices = _tables(encoder_slots(idx, key), idx.broadcast_alphabet)
    rids = sorted(r.id for r in idx.receivers)
    dec_choices = [_tables(index_decoder_slots(idx, r), index_decoder_output_size(idx, r))
                   for r in rids]
    for enc in enc_choices:
        for decs in itertools.product(*dec_choices):
            code = IndexCode(enc, dict(zip(rids, decs)), key)
            if check_index_decodable(idx, code) and check_index_secure(idx, code):
                return code
    return None


@pytest.mark.parametrize("net, keys", [
    (shared_edge_wiretap(), {"s": 2}),
    (shared_edge_wiretap(), {}),
    (otp_parallel(), {}),
    (otp_parallel(), {"s": 2}),
])
def test_network_search_matches_naive(net, keys):
    res = search_network_codes(net, keys)
    expected = naive_network(net, keys)
    if expected is None:
        assert res.status == INFEASIBLE
    else:
        assert res.status == FEASIBLE
        assert res.code == expected


@pytest.mark.parametrize("idx", [twomsg(), twomsg_leaky(), lone_receiver(), narrow_pair(),
                                 swap_pair()])
def test_index_search_matches_naive(idx):
    res = search_index_codes(idx)
    expected = naive_index(idx)
    if expected is None:
        assert res.status == INFEASIBLE
    else:
        assert res.status == FEASIBLE
        assert res.code == expected


def test_index_search_with_key_matches_naive():
    res = search_index_codes(twomsg_leaky(), 2)
    assert res.status == INFEASIBLE and naive_index(twomsg_leaky(), 2) is None


def test_single_edge_wiretap_infeasible():
    assert search_network_codes(shared_edge_wiretap(), {"s": 2}).status == INFEASIBLE


def test_parallel_otp_found():
    res = search_network_codes(otp_parallel(), {"s": 2})
    assert res.feasible
    assert check_network_decodable(otp_parallel(), res.code)
    assert check_network_secure(otp_parallel(), res.code)


def test_plain_single_edge_identity():
    net = NetworkInstance(("s", "t"), (Edge("e1", "s", "t", 2),), (Source("X", "s", 2, {"t"}),))
    res = search_network_codes(net)
    assert res.feasible
    assert list(res.code.edge_functions["e1"].table) == [0, 1]
    assert list(res.code.node_decoders["t"].table) == [0, 1]


def test_index_examples():
    res = search_index_codes(twomsg())
    assert res.feasible and list(res.code.encoder.table) == [0, 1, 1, 0]
    assert search_index_codes(twomsg_leaky()).status == INFEASIBLE
    idle = IndexInstance((Message("1", 2),), (Receiver("r1", set(), {"1"}),))
    res = search_index_codes(idle)
    assert res.feasible and set(res.code.encoder.table) == {0}


def test_eavesdropper_order_does_not_matter():
    idx = swap_pair()
    flipped = IndexInstance(idx.messages, idx.receivers, tuple(reversed(idx.eavesdroppers)),
                            idx.broadcast_alphabet)
    assert search_index_codes(idx).status == search_index_codes(flipped).status
    base = otp_parallel()
    eaves = (Eavesdropper("r1", {"e1"}, {"X"}), Eavesdropper("r2", {"e2"}, {"X"}))
    for net in (base, relay_pad()):
        a = NetworkInstance(net.nodes, net.edges, net.sources, eaves if net is base else
                            net.eavesdroppers + (Eavesdropper("r9", {"e2"}, {"X"}),))
        b = NetworkInstance(a.nodes, a.edges, a.sources, tuple(reversed(a.eavesdroppers)))
        assert search_network_codes(a, {"s": 4}).status == search_network_codes(b, {"s": 4}).status


def test_budget_exceeded_is_a_result():
    res = search_index_codes(swap_pair(), budget=SearchBudget(max_candidate_codes=2))
    assert res.status == BUDGET_EXCEEDED
    res = search_network_codes(otp_parallel(), {"s": 2},
                               budget=SearchBudget(max_joint_tuples=2))
    assert res.status == BUDGET_EXCEEDED
    with pytest.raises(ValueError):
        SearchBudget(max_candidate_codes=0)


def test_equivalence_raises_on_budget():
    with pytest.raises(BudgetExceededError):
        feasibility_equivalence(swap_pair(), SearchBudget(max_candidate_codes=2))


@pytest.mark.parametrize("name", sorted(INDEX_CORPUS))
def test_pruning_keeps_verdicts(name):
    idx = INDEX_CORPUS[name][0]()
    plain = search_index_codes(idx)
    pruned = search_index_codes(idx, prune=True)
    assert plain.status == pruned.status
    assert plain.code == pruned.code


def test_search_is_deterministic():
    a = search_network_codes(otp_parallel(), {"s": 2})
    b = search_network_codes(otp_parallel(), {"s": 2})
    assert a.code == b.code and a.explored == b.explored


def test_invalid_inputs():
    with pytest.raises(ValidationError):
        search_network_codes(otp_parallel(), {"nowhere": 2})


def test_equivalence_examples():
    assert feasibility_equivalence(twomsg()).agree
    rep = feasibility_equivalence(twomsg_leaky())
    assert rep.agree and not rep.index_feasible
    plain = IndexInstance(twomsg().messages, twomsg().receivers, ())
    rep = feasibility_equivalence(plain)
    assert rep.agree and rep.index_feasible
    rep = feasibility_equivalence(twomsg_leaky(), key_alphabet=2)
    assert rep.agree


@pytest.mark.parametrize("net, feasible", [(shared_edge_wiretap(), False), (otp_parallel(), True)])
def test_network_equivalence(net, feasible):
    rep = network_feasibility_equivalence(net)
    assert rep.agree and rep.network_feasible == feasible


@pytest.mark.parametrize("name", sorted(INDEX_CORPUS))
def test_index_corpus_verdicts(name):
    builder, feasible = INDEX_CORPUS[name]
    assert search_index_codes(builder(), prune=True).feasible == feasible


@pytest.mark.parametrize("name", sorted(n for n, (_, f) in NETWORK_CORPUS.items() if f is not None))
def test_network_corpus_verdicts(name):
    builder, feasible = NETWORK_CORPUS[name]
    net = builder()
    keys = {v: k for v, k in augment(net)[1].key_alphabets.items() if k > 1}
    assert search_network_codes(net, keys).feasible == feasible


@st.composite
def tiny_index(draw):
    ids = ["1", "2"]
    subsets = [set(), {"1"}, {"2"}, {"1", "2"}]
    wants = draw(st.sampled_from([{"1"}, {"2"}, {"1", "2"}]))
    has = draw(st.sampled_from([s for s in subsets if not s & wants]))
    eaves = []
    for k in range(draw(st.integers(0, 2))):
        target = draw(st.sampled_from(subsets[1:]))
        side = draw(st.sampled_from([s for s in subsets if not s & target]))
        eaves.append(IndexEavesdropper(f"e{k}", side, target))
    return IndexInstance(tuple(Message(m, 2) for m in ids), (Receiver("r1", wants, has),),
                         tuple(eaves), draw(st.sampled_from([2, 4])) if wants == {"1", "2"} else 2)


@settings(max_examples=30, deadline=None)
@given(tiny_index())
def test_index_search_matches_naive_on_random_instances(idx):
    res = search_index_codes(idx)
    if idx.broadcast_alphabet == 2:  # the naive enumeration is too slow beyond this
        assert res.code == naive_index(idx)
    assert search_index_codes(idx, prune=True).status == res.status
