import random

import pytest

from tempostego import (
    ERASURE,
    BitString,
    InsufficientCapacity,
    InvalidSymbol,
    bits_to_text,
    parse_bitstring,
    plan_spanning,
    text_to_bits,
)


def test_text_to_bits_msb_first():
    assert str(text_to_bits("A")) == "0 1 0 0 0 0 0 1"


def test_text_round_trip_all_byte_values():
    text = "".join(chr(v) for v in range(256))
    assert bits_to_text(text_to_bits(text)) == text


def test_text_to_bits_rejects_wide_characters():
    with pytest.raises(InvalidSymbol):
        text_to_bits("€")


@pytest.mark.parametrize("raw", ["1 1 0 1", "1101", "  1\t1 0 1\n"])
def test_parse_accepts_spaced_and_compact_forms(raw):
    assert parse_bitstring(raw) == BitString((1, 1, 0, 1))


def test_parse_rejects_foreign_characters():
    with pytest.raises(InvalidSymbol):
        parse_bitstring("10x1")


def test_parse_inverts_formatting():
    bs = parse_bitstring("1 0 0 1 1")
    assert parse_bitstring(str(bs)) == bs


def test_erasures_format_as_x():
    bs = BitString((1, 0, ERASURE, 1))
    assert str(bs) == "1 0 x 1"
    assert bs.has_erasures
    assert bs.erasure_count() == 1
    assert not parse_bitstring("1101").has_erasures


def test_bitstring_rejects_unknown_symbols():
    with pytest.raises(InvalidSymbol):
        BitString((0, 1, 7))


def test_indexing_slicing_concatenation():
    bs = parse_bitstring("110101")
    assert bs[2] == 0
    assert bs[:3] + bs[3:] == bs
    assert len(bs[1:4]) == 3


def test_bits_to_text_rejects_erasures():
    with pytest.raises(InvalidSymbol):
        bits_to_text(BitString((1, 0, ERASURE, 0, 1, 0, 1, 0)))


def test_bits_to_text_rejects_partial_bytes():
    with pytest.raises(InvalidSymbol):
        bits_to_text(parse_bitstring("101"))


def test_spanning_greedy_fill():
    msg = BitString.from_bits([1] * 21)
    segs = plan_spanning(msg, [17, 20])
    assert [len(s) for s in segs] == [17, 4]


def test_spanning_single_exact_fit():
    msg = parse_bitstring("10110")
    assert plan_spanning(msg, [5]) == [msg]


def test_spanning_trailing_carriers_get_nothing():
    msg = BitString.from_bits([1] * 21)
    segs = plan_spanning(msg, [30, 5])
    assert [len(s) for s in segs] == [21, 0]


def test_spanning_insufficient_capacity_reports_totals():
    msg = BitString.from_bits([0] * 21)
    with pytest.raises(InsufficientCapacity) as info:
        plan_spanning(msg, [10, 5])
    assert info.value.required == 21
    assert info.value.available == 15


def test_spanning_reassembles_message():
    rng = random.Random(11)
    for _ in range(50):
        msg = BitString.from_bits(rng.randrange(2) for _ in range(rng.randrange(0, 40)))
        caps = [rng.randrange(0, 12) for _ in range(rng.randrange(1, 6))]
        if sum(caps) < len(msg):
            with pytest.raises(InsufficientCapacity):
                plan_spanning(msg, caps)
            continue
        segs = plan_spanning(msg, caps)
        assert len(segs) == len(caps)
        joined = BitString(())
        for cap, seg in zip(caps, segs):
            assert len(seg) <= cap
            joined = joined + seg
        assert joined == msg
