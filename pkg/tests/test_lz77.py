import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzhybrid import Copy, Literal, Parse, decode, parse, phrase_starts
from oracles import naive_parse


def as_tuples(p: Parse):
    return [("L", ph.char) if isinstance(ph, Literal) else ("C", ph.src, ph.length) for ph in p]


def test_small_examples():
    assert parse(b"abab").phrases == [Literal(97), Literal(98), Copy(1, 2)]
    # self-overlapping copy
    assert parse(b"aaaa").phrases == [Literal(97), Copy(1, 3)]
    assert parse(b"a").phrases == [Literal(97)]
    assert parse(b"abcabcabcx").phrases == [Literal(97), Literal(98), Literal(99), Copy(1, 6),
                                           Literal(120)]


@pytest.mark.parametrize("alphabet", [b"ab", b"abcd"])
def test_matches_naive_parse(alphabet):
    rng = np.random.default_rng(1)
    for _ in range(60):
        n = int(rng.integers(1, 513))
        text = bytes(rng.choice(list(alphabet), n).tolist())
        assert as_tuples(parse(text)) == naive_parse(text)


def test_phrase_starts_and_length_sum():
    p = parse(b"mississippi")
    assert int(p.length.sum()) == 11
    assert phrase_starts(p).tolist() == [1, 2, 3, 4, 5, 9, 10, 11]


def test_leftmost_and_maximal():
    rng = np.random.default_rng(5)
    text = bytes(rng.choice(list(b"ab"), 400).tolist())
    p = parse(text)
    for start, ph in zip(phrase_starts(p).tolist(), p):
        if isinstance(ph, Literal):
            assert bytes([ph.char]) not in text[:start - 1]
            continue
        piece = text[start - 1:start - 1 + ph.length]
        # leftmost source anywhere in the text
        assert text.find(piece) + 1 == ph.src < start
        end = start - 1 + ph.length
        if end < len(text):
            longer = text[start - 1:end + 1]
            assert text.find(longer, 0, end) < 0


def test_dumps_loads_round_trip():
    p = parse(b"99-bottles-99-bottles")
    dump = p.dumps()
    assert dump.splitlines()[0] == "L 39"
    assert Parse.loads(dump) == p
    with pytest.raises(ValueError, match="malformed"):
        Parse.loads("X 1 2\n")


def test_decode_rejects_bad_parses():
    with pytest.raises(ValueError):
        decode(Parse.from_phrases([Literal(97), Copy(2, 1)]))
    with pytest.raises(ValueError):
        decode(Parse.from_phrases([Literal(97), Copy(1, 2)], n=5))


def test_input_validation():
    with pytest.raises(ValueError):
        parse(b"")
    with pytest.raises(TypeError):
        parse("text")
    assert parse(np.frombuffer(b"abab", np.uint8)) == parse(bytearray(b"abab"))


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=1, max_size=300))
def test_round_trip(text):
    assert decode(parse(text)) == text


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(b"ab"), min_size=1, max_size=200).map(bytes))
def test_round_trip_low_entropy(text):
    p = parse(text)
    assert decode(p) == text
    assert as_tuples(p) == naive_parse(text)
