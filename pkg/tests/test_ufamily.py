from fractions import Fraction

import pytest

from pa_embed.ordinals import parse_ordinal as P
from pa_embed.ufamily import UFamily

ALPHAS = ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2", "w^2+w+1"]


@pytest.fixture(scope="module")
def fam():
    return UFamily()


def names(s):
    return [str(x) for x in sorted(s)]


def test_base(fam):
    assert all(fam.u(P("0"), n) == {P("0")} for n in range(1, 100))


def test_u_one(fam):
    for n in range(1, 30):
        expected = ["1"] if n < 3 else ["0", "1"]
        assert names(fam.u(P("1"), n)) == expected


def test_successor_thresholds(fam):
    assert fam.construction(P("2"))["threshold"] == 5
    assert fam.construction(P("3"))["threshold"] == 7
    assert fam.construction(P("w+1"))["threshold"] == 7


def test_omega_blocks(fam):
    seq = fam.construction(P("w"))["sequence"]
    assert [s["n"] for s in seq[:3]] == [5, 16, 65]
    assert [s["delta"] for s in seq[:3]] == ["1", "2", "3"]
    for n in range(1, 65):
        s = fam.u(P("w"), n)
        if n < 5:
            assert names(s) == ["w"]
        elif n < 16:
            assert s == fam.u(P("1"), n) | {P("w")}
        else:
            assert s == fam.u(P("2"), n) | {P("w")}


def test_stage_zero_rejected(fam):
    with pytest.raises(ValueError):
        fam.u(P("1"), 0)


def test_within(fam):
    assert fam.u(P("w+1"), 30, within=[P("w"), P("w+1")]) == {P("w"), P("w+1")}


@pytest.mark.parametrize("alpha", ALPHAS)
def test_lemma_clauses(fam, alpha):
    a = P(alpha)
    betas = [P(b) for b in ALPHAS if P(b) <= a]
    report = fam.check_lemma_clauses(a, 64, betas)
    assert report["violations"] == []
    assert all(e["enters_at"] is not None for e in report["clause_iii"])
    quarter = next(r for r in report["clause_v"] if r["epsilon"] == "1/4")["from"]
    for n in range(quarter, 65):
        assert Fraction(len(fam.u(a, n)), n + 1) < Fraction(1, 4)


def test_clause_examples(fam):
    r = fam.check_lemma_clauses(P("1"), 10)
    assert r["ok"]
    assert {e["beta"]: e["enters_at"] for e in r["clause_iii"]}["0"] == 3
    r = fam.check_lemma_clauses(P("0"), 10)
    assert {e["epsilon"]: e["from"] for e in r["clause_v"]}["1/8"] == 8


def test_coherence_against_blocks(fam):
    # every member's own set is the initial segment, at every stage
    a = P("w+1")
    for n in range(1, 200):
        s = fam.u(a, n)
        for b in s:
            assert fam.u(b, n) == {x for x in s if x <= b}


def test_small_horizon_records_missing_stages():
    small = UFamily(horizon=20)
    seq = small.construction(P("w"))["sequence"]
    assert [s["n"] for s in seq] == [5, 16]
    r = small.check_lemma_clauses(P("w"), 19, [P("3")])
    assert r["clause_iii"][0]["enters_at"] is None and not r["ok"]
