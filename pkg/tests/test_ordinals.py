import pytest
from hypothesis import given
from hypothesis import strategies as st

from pa_embed.ordinals import NotALimit, Ordinal, fundamental_sequence, parse_ordinal

P = parse_ordinal


def test_fundamental_examples():
    assert fundamental_sequence(P("w"), 3) == P("4")
    assert fundamental_sequence(P("w^2"), 2) == P("w*3")
    assert fundamental_sequence(P("w*2"), 1) == P("w+2")


@pytest.mark.parametrize("text", ["0", "5", "w+1"])
def test_not_a_limit(text):
    with pytest.raises(NotALimit):
        fundamental_sequence(P(text), 0)


def test_parse_and_print():
    assert str(P("w^2*3+w*2+5")) == "w^2*3+w*2+5"
    assert P("ω+1") == P("w+1")
    assert P("0").is_zero
    with pytest.raises(ValueError):
        P("w+w^2")
    with pytest.raises(ValueError):
        P("v")


def test_classification_and_successor():
    assert P("w+3").is_successor and P("w+3").pred() == P("w+2")
    assert P("w*2").is_limit and P("w*2").succ() == P("w*2+1")
    assert Ordinal.finite(1).pred().is_zero


ordinals = st.lists(st.tuples(st.integers(0, 3), st.integers(1, 3)), max_size=3).map(
    lambda ts: Ordinal(tuple(sorted({e: c for e, c in ts}.items(), reverse=True)))
)


@given(ordinals)
def test_round_trip(a):
    assert P(str(a)) == a


@given(ordinals, st.integers(0, 20))
def test_fundamental_sequence_increasing_below(a, i):
    if not a.is_limit:
        return
    x, y = fundamental_sequence(a, i), fundamental_sequence(a, i + 1)
    assert x < y < a


@given(ordinals)
def test_successor_order(a):
    assert a < a.succ()
    assert a.succ().pred() == a
