import json

import pytest

from secequiv import corpus, io
from secequiv.search import search_index_codes, search_network_codes
from secequiv.transform import augment, index_to_network, network_to_index


@pytest.mark.parametrize("name", corpus.names())
def test_bundled_files_are_canonical(name):
    """The shipped JSON equals the canonical emission of its builder, byte for byte."""
    on_disk = corpus.data_path(name).read_bytes()
    assert on_disk == io.emit(corpus.build(name)).encode("utf-8")


@pytest.mark.parametrize("name", corpus.names())
def test_round_trip(name):
    value = corpus.build(name)
    text = io.emit(value)
    again = io.loads(text)
    assert again == value
    assert io.emit(again) == text


def test_mapping_documents_round_trip():
    net, rec = index_to_network(corpus.twomsg())
    assert io.loads(io.emit(rec)) == rec
    aug, arec = augment(corpus.otp_parallel())
    assert io.loads(io.emit(arec)) == arec
    _, back = network_to_index(aug)
    assert io.loads(io.emit(back)) == back


def test_searched_codes_round_trip():
    code = search_index_codes(corpus.twomsg()).code
    assert io.loads(io.emit(code)) == code
    code = search_network_codes(corpus.otp_parallel(), {"s": 2}).code
    assert io.loads(io.emit(code)) == code


def test_arrays_inline_and_keys_ordered():
    text = io.emit(corpus.otp_code())
    assert '"table": [0,1,1,0]' in text
    doc = json.loads(text)
    assert list(doc)[:2] == ["kind", "format_version"]
    assert text.endswith("}\n")


@pytest.mark.parametrize("text", [
    "not json",
    '{"kind": "network-instance"}',
    '{"kind": "mystery", "format_version": 1}',
    '{"kind": "index-instance", "format_version": 2}',
    '{"kind": "index-code", "format_version": 1, "key_alphabet": 1, "decoders": {},'
    ' "encoder": {"slots": [["1", 2]], "output_size": 2, "table": [0, 5]}}',
    '{"kind": "index-code", "format_version": 1, "key_alphabet": 1, "decoders": {},'
    ' "encoder": {"slots": [["1", 2]], "output_size": 2, "table": [0]}}',
    '{"kind": "index-instance", "format_version": 1, "messages": [{"id": 1, "alphabet": 2}],'
    ' "receivers": [], "eavesdroppers": [], "broadcast_alphabet": 2, "block_size_n": 1}',
])
def test_malformed(text):
    with pytest.raises(io.FormatError):
        io.loads(text)
