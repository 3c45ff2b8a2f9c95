import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pa_embed.models import (
    ONE,
    X,
    ZERO,
    PolyElem,
    check_axioms,
    eval_at,
    get_model,
    nonneg_threshold,
    parse_poly,
    poly_le,
    poly_minus,
    random_poly,
)


def P(text):
    return parse_poly(text)


def test_arithmetic_examples():
    assert P("X+1") + X == P("2*X+1")
    assert ZERO + P("X^2+3") == P("X^2+3")
    assert P("X^2-X") + X == P("X^2")
    assert poly_le(P("5*X"), P("X^2"))
    assert poly_minus(X, P("X+3")) == PolyElem.const(3)
    assert poly_minus(P("X+3"), X) is None


def test_negative_leading_rejected():
    with pytest.raises(ValueError):
        PolyElem((1, -1))


def test_eval_examples():
    assert eval_at(P("X^2-X"), 1) == 0
    assert eval_at(P("X^2-X"), 0) == 0
    assert eval_at(P("2*X+1"), 10) == 21


def test_thresholds():
    n0 = nonneg_threshold([P("X-5")])
    assert n0 >= 5
    assert eval_at(P("X-5"), n0) >= 0 and eval_at(P("X-5"), n0 + 7) >= 0
    assert nonneg_threshold([ZERO, ONE, X]) == 0
    b = nonneg_threshold([P("X^2-3*X")])
    assert b == 4 and eval_at(P("X^2-3*X"), b) >= 0


def test_parse_forms():
    assert P("[1,2,3]") == PolyElem((1, 2, 3))
    assert P([0, 1]) == X
    assert P(7) == PolyElem.const(7)
    assert P("3*X^2+X+1") == PolyElem((1, 1, 3))
    assert str(P("X^2-X")) == "X^2-X"
    with pytest.raises(ValueError):
        P("X**")


def test_trichotomy_example():
    M = get_model("poly")
    three = PolyElem.const(3)
    assert [M.lt(X, three), X == three, M.lt(three, X)] == [False, False, True]


@pytest.mark.parametrize("name", ["nat", "poly"])
def test_axioms_pass(name):
    report = check_axioms(get_model(name), 300, seed=11)
    assert report["all_passed"], [a for a in report["axioms"] if a["failures"]]
    assert len(report["axioms"]) == 15


def test_axiom_report_is_deterministic():
    M = get_model("poly")
    assert check_axioms(M, 50, 3) == check_axioms(M, 50, 3)


def test_broken_model_is_caught():
    M = get_model("nat")
    broken = type(M)(M.kind, M.zero, M.one, lambda a, b: a + b + (a == 3), M.mul, M.le, M.minus, M.sample)
    report = check_axioms(broken, 500, seed=1)
    assert not report["all_passed"]


polys = st.builds(lambda seed: random_poly(random.Random(seed)), st.integers(0, 10**9))


@given(polys, polys)
def test_evaluation_is_a_homomorphism(p, q):
    N = nonneg_threshold([p, q, p + q, p * q])
    for M in (N, N + 3):
        assert eval_at(p + q, M) == eval_at(p, M) + eval_at(q, M)
        assert eval_at(p * q, M) == eval_at(p, M) * eval_at(q, M)
        assert eval_at(p, M) >= 0
    if p <= q:
        # order transfers only past the threshold of the difference as well
        N = max(N, nonneg_threshold([poly_minus(p, q)]))
        assert eval_at(p, N) <= eval_at(q, N)


@given(polys, polys)
def test_minus_witness(p, q):
    if p < q:
        z = poly_minus(p, q)
        assert z is not None and p + z == q
    elif q < p:
        assert poly_minus(p, q) is None


@given(polys)
def test_threshold_really_nonneg(p):
    n0 = nonneg_threshold([p])
    assert all(eval_at(p, n) >= 0 for n in range(n0, n0 + 20))
