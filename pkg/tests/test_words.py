import pytest
from hypothesis import given
from hypothesis import strategies as st

from tessella.words import (
    WordSyntaxError,
    conjugate,
    format_word,
    free_reduce,
    inverse,
    mul,
    parse_word,
    to_indices,
    word_ball,
)

letters = st.text(alphabet="PQR", max_size=30)


def test_parse_examples():
    assert parse_word("(RQ)^3R") == "RQRQRQR"
    assert parse_word("PRQRP") == "PRQRP"
    assert parse_word(" P R  Q ") == "PRQ"
    assert parse_word("((PQ)^2R)^2") == "PQPQRPQPQR"
    assert parse_word("PP") == ""
    for ident in ("", "1", "e"):
        assert parse_word(ident) == ""


@pytest.mark.parametrize("bad", ["PX", "(PQ", "PQ)", "^2", "P^", "()^2x"])
def test_parse_rejects(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_format_compresses_runs():
    assert format_word("RQRQRQR") == "(RQ)^3R"
    assert format_word("") == "1"
    assert format_word("PRQRP") == "PRQRP"
    assert format_word("PQPQ", compress=False) == "PQPQ"


@given(letters)
def test_reduce_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(a != b for a, b in zip(r, r[1:]))


@given(letters)
def test_format_parse_roundtrip(w):
    r = free_reduce(w)
    assert parse_word(format_word(r)) == r
    assert parse_word(format_word(r, compress=False)) == r


@given(letters, letters)
def test_inverse_of_product(a, b):
    assert mul(a, b, inverse(mul(a, b))) == ""
    assert inverse(mul(a, b)) == mul(inverse(b), inverse(a))


@given(letters, letters)
def test_conjugate_cancels(w, g):
    assert mul(inverse(g), conjugate(w, g), g) == free_reduce(w)


def test_word_ball_counts():
    # 1 + 3 + 3*2 + 3*4 reduced words of length <= 3
    ball = word_ball(3)
    assert len(ball) == 1 + 3 + 6 + 12
    assert len(set(ball)) == len(ball)
    assert all(free_reduce(w) == w for w in ball)


def test_indices():
    assert to_indices("PQR") == (0, 1, 2)
