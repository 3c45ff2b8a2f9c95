import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pa_embed.syntax import (
    DioFormula,
    One,
    ParseError,
    Plus,
    Times,
    Var,
    Zero,
    canonicalize,
    eval_form,
    eval_formula,
    formula_forms,
    is_canonical,
    length,
    parse_formula,
    parse_term,
    term_form,
    tokenize,
)


def test_parse_terms():
    assert parse_term("x0+x1") == Plus(Var(0), Var(1))
    assert parse_term("(x0*x0)+1") == Plus(Times(Var(0), Var(0)), One())


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        parse_term("x0++")
    assert err.value.position == 3


@pytest.mark.parametrize("text", ["", "x0+", "(x0", "x0)", "x0 x1", "2", "x"])
def test_bad_terms(text):
    with pytest.raises(ParseError):
        parse_term(text)


@pytest.mark.parametrize("text,expected", [
    ("1=1", "0=0"),
    ("x0+x1=x1+x0", "0=0"),
    ("x0=0", "0=x0"),
])
def test_canonical_examples(text, expected):
    assert str(canonicalize(parse_formula(text))) == expected


def test_side_order_irrelevant():
    assert canonicalize(parse_formula("x1+1=x0")) == canonicalize(parse_formula("x0=x1+1"))


def test_lengths():
    assert length(canonicalize(parse_formula("0=0"))) == 3
    assert length(canonicalize(parse_formula("x0=0"))) == 3
    phi = canonicalize(parse_formula("∃y0(y0+y0=x0)"))
    assert sorted(t for t, _ in tokenize(str(phi))) == sorted(["∃", "y0", "(", "y0", "+", "y0", "=", "x0", ")"])
    assert length(phi) == 9


def test_quantifier_parsing():
    phi = parse_formula("Ey3 Ey1 (y1*y3 = x0)")
    assert phi.bound_count == 2
    assert phi.free_vars == [0]
    with pytest.raises(ParseError):
        parse_formula("y0=x0")
    with pytest.raises(ParseError):
        parse_formula("∃y0∃y0(y0=x0)")


def test_unused_bound_variable_dropped():
    phi = canonicalize(parse_formula("∃y0∃y1(y1=x0+1)"))
    assert phi.bound_count == 1
    assert phi == canonicalize(parse_formula("∃y0(y0=x0+1)"))


def test_bound_renaming_is_canonical():
    a = canonicalize(parse_formula("∃y0∃y1(y0*y0=y1+x0)"))
    b = canonicalize(parse_formula("∃y0∃y1(y1*y1=y0+x0)"))
    assert a == b


# -- property tests -------------------------------------------------------------


def terms(n_free=3, n_bound=0):
    leaves = [st.just(Zero()), st.just(One())]
    leaves += [st.just(Var(i)) for i in range(n_free)]
    leaves += [st.just(Var(j, bound=True)) for j in range(n_bound)]
    return st.recursive(
        st.one_of(leaves),
        lambda kids: st.one_of(
            st.builds(Plus, kids, kids),
            st.builds(Times, kids, kids),
        ),
        max_leaves=8,
    )


@given(terms())
def test_term_round_trip(t):
    again = parse_term(str(t))
    assert term_form(again) == term_form(t)
    assert str(parse_term(str(again))) == str(again)


@given(terms(), terms())
def test_canonicalize_idempotent(a, b):
    phi = canonicalize(DioFormula(0, a, b))
    assert canonicalize(phi) == phi
    assert is_canonical(phi)
    assert length(phi) % 2 == 1


@given(terms(), terms(), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_canonicalize_preserves_truth(a, b, vals):
    phi = DioFormula(0, a, b)
    env = dict(enumerate(vals))
    assert eval_formula(phi, env) == eval_formula(canonicalize(phi), env)


@given(terms(2, 1), terms(2, 1), st.lists(st.integers(0, 4), min_size=2, max_size=2))
def test_canonicalize_preserves_truth_quantified(a, b, vals):
    phi = DioFormula(1, a, b)
    env = dict(enumerate(vals))
    assert eval_formula(phi, env, 12) == eval_formula(canonicalize(phi), env, 12)


@given(terms(), st.lists(st.integers(0, 9), min_size=3, max_size=3))
def test_form_evaluates_like_term(t, vals):
    def ev(node):
        if isinstance(node, Zero):
            return 0
        if isinstance(node, One):
            return 1
        if isinstance(node, Var):
            return vals[node.index]
        l, r = ev(node.left), ev(node.right)
        return l + r if isinstance(node, Plus) else l * r

    env = {(0, i): v for i, v in enumerate(vals)}
    assert eval_form(term_form(t), env) == ev(t)


def test_formula_forms_of_parsed():
    lhs, rhs = formula_forms(parse_formula("x0*(x1+1)=x0*x1+x0"))
    assert lhs == rhs
