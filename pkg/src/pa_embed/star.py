"""Componentwise witnesses ``f_α(n)`` against budget-bounded Diophantine facts.

For each index α and stage n the cell ``(α, n)`` looks at the restricted set
``U = u(α, n) ∩ I`` (I the index set), collects every canonical Diophantine
formula over the elements of U (variables named by sorted position) whose
length fits the budget and which is true of the assigned elements in ℤ[X]⁺,
and picks the least ``k`` making all of them true in ℕ with ``x_α = k`` and
the earlier coordinates fixed at their chosen values.

Truth in ℤ[X]⁺ is decided exactly for quantifier-free formulas and for one
bound variable (a polynomial in ``y`` over ℤ[X] needs a root in ℤ[X]⁺).
With more bound variables, all but the last are tried from a small candidate
pool; formulas that stay undecided are reported and left out.  In ℕ one
bound variable is again exact, more are box-searched.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .enumeration import DEFAULT_LIMIT, compute_g, iter_canonical_pairs
from .models import PolyElem, add_coeffs, mul_coeffs, operand, sub_coeffs
from .ordinals import Ordinal, parse_ordinal
from .reduced import eq_mod_regular, get_family
from .syntax import (
    BOUND,
    FREE,
    Form,
    canonical_pair,
    formula_from_forms,
    make_form,
    pair_length,
)
from .ufamily import DEFAULT_HORIZON, UFamily

Coeffs = Tuple[int, ...]
_X, _Y = sympy.symbols("X y")


class NoWitnessInBox(RuntimeError):
    """No ``k`` below the search bound satisfies the cell's formulas."""


# -- polynomials in one bound variable ---------------------------------------


def _y_coefficients(form: Form, env: Mapping, add, mul, one, zero) -> Dict[int, object]:
    """``form`` as ``Σ_j r_j y0^j`` with the free variables substituted."""
    out: Dict[int, object] = {}
    for (_, variables), c in form:
        power, value = 0, one
        for key in variables:
            if key == (BOUND, 0):
                power += 1
            else:
                value = mul(value, env[key])
        term = mul(value, c)
        out[power] = add(out.get(power, zero), term)
    return out


def _difference(a: Dict[int, Coeffs], b: Dict[int, Coeffs]) -> Dict[int, Coeffs]:
    out = {}
    for j in set(a) | set(b):
        d = sub_coeffs(a.get(j, ()), b.get(j, ()))
        if d:
            out[j] = d
    return out


def _is_nonneg(coeffs: Sequence[int]) -> bool:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return not c or c[-1] > 0


class PolyDecider:
    """Truth of Diophantine formulas in ℤ[X]⁺ for a fixed valuation."""

    def __init__(self, values: Sequence[PolyElem]):
        self.env = {(FREE, i): v.coeffs for i, v in enumerate(values)}
        self._forms: Dict[Form, Coeffs] = {}
        self._roots: Dict[tuple, bool] = {}
        self.pool = sorted({(), (1,)} | {v.coeffs for v in values})

    def _value(self, form: Form) -> Coeffs:
        v = self._forms.get(form)
        if v is None:
            v = ()
            for (_, variables), c in form:
                term = (c,)
                for key in variables:
                    term = mul_coeffs(term, self.env[key])
                v = add_coeffs(v, term)
            self._forms[form] = v
        return v

    def holds(self, k: int, a: Form, b: Form) -> Optional[bool]:
        if k == 0:
            return self._value(a) == self._value(b)
        if k == 1:
            return self._one_bound(a, b, self.env)
        # fix y0..y(k-2) from the pool, solve the last one exactly
        for combo in itertools.product(self.pool, repeat=k - 1):
            env = dict(self.env)
            mapping = {}
            for j, val in enumerate(combo):
                env[(FREE, -1 - j)] = val
                mapping[(BOUND, j)] = (FREE, -1 - j)
            mapping[(BOUND, k - 1)] = (BOUND, 0)
            ra = make_form(_relabel(a, mapping))
            rb = make_form(_relabel(b, mapping))
            if self._one_bound(ra, rb, env):
                return True
        return None

    def _one_bound(self, a: Form, b: Form, env) -> bool:
        add = lambda p, q: add_coeffs(p, q)  # noqa: E731
        mul = lambda p, q: mul_coeffs(p, (q,) if isinstance(q, int) else q)  # noqa: E731
        ra = _y_coefficients(a, env, add, mul, (1,), ())
        rb = _y_coefficients(b, env, add, mul, (1,), ())
        r = _difference(ra, rb)
        if not r or 0 not in r:
            return True  # identically zero, or y = 0 works
        key = tuple(sorted(r.items()))
        if key not in self._roots:
            self._roots[key] = _has_nonneg_root(r)
        return self._roots[key]


def _relabel(form: Form, mapping) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    for (_, variables), c in form:
        mono = tuple(sorted(mapping.get(k, k) for k in variables))
        out[mono] = out.get(mono, 0) + c
    return out


def _has_nonneg_root(r: Dict[int, Coeffs]) -> bool:
    """Does ``Σ r_j(X) y^j`` (with ``r_0 != 0``) vanish at some ``y ∈ ℤ[X]⁺``?"""
    degree = max(r)
    if degree == 0:
        return False
    if degree == 1:
        return _exact_quotient_nonneg([-c for c in r[0]], r[1])
    # a root y(X) gives an integer root y(t) at every t
    for t in (7, 11):
        if not _has_integer_root([_at(r.get(j, ()), t) for j in range(degree + 1)]):
            return False
    expr = sum(sympy.Poly(list(reversed(c)), _X).as_expr() * _Y**j for j, c in r.items())
    for factor, _ in sympy.factor_list(sympy.expand(expr), _Y, _X)[1]:
        p = sympy.Poly(factor, _Y)
        if p.degree() != 1:
            continue
        lead, rest = (sympy.Poly(c, _X).all_coeffs() for c in p.all_coeffs())
        if _exact_quotient_nonneg(
            [-int(c) for c in reversed(rest)], [int(c) for c in reversed(lead)]
        ):
            return True
    return False


def _at(coeffs: Sequence[int], t: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * t + c
    return v


def _has_integer_root(poly: Sequence[int]) -> bool:
    """Integer roots of ``Σ poly[j] y^j`` via divisors of the lowest nonzero coefficient."""
    p = list(poly)
    while p and p[-1] == 0:
        p.pop()
    if not p:
        return True
    low = next(j for j, c in enumerate(p) if c)
    if low > 0:
        return True  # y = 0
    for d in sympy.divisors(abs(p[0])):
        for y in (d, -d):
            if _at(p, y) == 0:
                return True
    return False


def _exact_quotient_nonneg(num: Sequence[int], den: Sequence[int]) -> bool:
    """Is ``num / den`` a polynomial in ℤ[X] with nonnegative leading coefficient?"""
    num = list(num)
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    while num and num[-1] == 0:
        num.pop()
    if not den:
        return not num
    q = [0] * max(len(num) - len(den) + 1, 0)
    while num and len(num) >= len(den):
        lead, rem = divmod(num[-1], den[-1])
        if rem:
            return False
        shift = len(num) - len(den)
        q[shift] = lead
        for i, c in enumerate(den):
            num[i + shift] -= lead * c
        while num and num[-1] == 0:
            num.pop()
    return not num and _is_nonneg(q)


# -- truth in ℕ --------------------------------------------------------------


def nat_holds(k: int, a: Form, b: Form, env: Mapping, box: int = 64) -> bool:
    """Truth in ℕ; exact for ``k <= 1``, box search over all but the last bound variable."""
    if k == 0:
        return _eval_int(a, env) == _eval_int(b, env)
    if k == 1:
        return _nat_one_bound(a, b, env)
    for combo in itertools.product(range(box + 1), repeat=k - 1):
        local = dict(env)
        mapping = {}
        for j, val in enumerate(combo):
            local[(FREE, -1 - j)] = val
            mapping[(BOUND, j)] = (FREE, -1 - j)
        mapping[(BOUND, k - 1)] = (BOUND, 0)
        if _nat_one_bound(make_form(_relabel(a, mapping)), make_form(_relabel(b, mapping)), local):
            return True
    return False


def _eval_int(form: Form, env: Mapping) -> int:
    total = 0
    for (_, variables), c in form:
        v = c
        for key in variables:
            v *= env[key]
        total += v
    return total


def _nat_one_bound(a: Form, b: Form, env: Mapping) -> bool:
    add = lambda p, q: p + q  # noqa: E731
    mul = lambda p, q: p * q  # noqa: E731
    ra = _y_coefficients(a, env, add, mul, 1, 0)
    rb = _y_coefficients(b, env, add, mul, 1, 0)
    degree = max(list(ra) + list(rb))
    r = [ra.get(j, 0) - rb.get(j, 0) for j in range(degree + 1)]
    if not any(r) or r[0] == 0:
        return True
    if not any(r[1:]):
        return False
    return any(_at(r, d) == 0 for d in sympy.divisors(abs(r[0])))


# -- the run -----------------------------------------------------------------


@dataclass
class StarRun:
    index: Tuple[Ordinal, ...]
    assignment: Dict[Ordinal, PolyElem]
    n_max: int
    cap: Optional[int]
    family: str = "tails"
    horizon: int = DEFAULT_HORIZON
    witness_limit: int = 10_000
    box: int = 64
    values: Dict[Ordinal, List[Optional[int]]] = field(default_factory=dict)
    cells: Dict[Tuple[Ordinal, int], dict] = field(default_factory=dict)
    errors: List[dict] = field(default_factory=list)
    certificates: List[dict] = field(default_factory=list)
    soundness: Optional[dict] = None
    _ufam: UFamily = field(default=None, repr=False)
    _phi: Dict[tuple, tuple] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = tuple(sorted(set(self.index)))
        missing = [a for a in self.index if a not in self.assignment]
        if missing:
            raise ValueError(f"no element assigned to index {missing[0]}")
        if self._ufam is None:
            self._ufam = UFamily(self.horizon)
        for a in self.index:
            self.values.setdefault(a, [0] + [None] * self.n_max)

    def u(self, alpha: Ordinal, n: int) -> List[Ordinal]:
        return sorted(self._ufam.u(alpha, n, within=self.index))

    def budget(self, n: int, m: int):
        return compute_g(n, m, self.cap)

    def formulas(self, members: Sequence[Ordinal], budget: int, fresh: bool = False):
        """``(k, lhs, rhs)`` true of the assigned elements, plus the undecided ones."""
        vals = tuple(self.assignment[b] for b in members)
        key = (vals, budget)
        if key in self._phi and not fresh:
            return self._phi[key]
        decider = PolyDecider(vals)
        true, undecided = [], []
        if budget >= 3:
            for k, a, b in iter_canonical_pairs(budget, len(vals), DEFAULT_LIMIT):
                verdict = decider.holds(k, a, b)
                if verdict is None:
                    undecided.append(str(formula_from_forms(k, a, b)))
                elif verdict:
                    true.append((k, a, b))
        out = (tuple(true), tuple(undecided))
        if not fresh:
            self._phi[key] = out
        return out

    def to_json(self) -> dict:
        cells = [
            {"alpha": str(a), "n": n, **cell}
            for (a, n), cell in sorted(self.cells.items())
        ]
        return {
            "index": [str(a) for a in self.index],
            "assignment": {str(a): self.assignment[a].to_json() for a in self.index},
            "n_max": self.n_max,
            "cap": self.cap,
            "family": self.family,
            "horizon": self.horizon,
            "values": {str(a): self.values[a] for a in self.index},
            "cells": cells,
            "errors": self.errors,
            "certificates": self.certificates,
            "soundness": self.soundness,
        }


def _env_for(run: StarRun, members: Sequence[Ordinal], n: int) -> Dict[tuple, int]:
    return {(FREE, i): run.values[b][n] for i, b in enumerate(members)}


def star_choose(run: StarRun, alpha: Ordinal, n: int) -> int:
    """Choose ``f_α(n)``: the least ``k`` satisfying every budget-bounded fact over ``u(α, n) ∩ I``."""
    members = run.u(alpha, n)
    m = len(members)
    pos = members.index(alpha)
    assert pos == m - 1
    earlier = members[:-1]
    for b in earlier:
        if run.values[b][n] is None:
            raise ValueError(f"f_{b}({n}) has not been chosen yet")
    if earlier:
        gamma = earlier[-1]
        if run.u(gamma, n) != earlier:
            raise AssertionError(f"u({gamma}, {n}) != u({alpha}, {n}) minus {alpha}")
    budget = run.budget(n, m)
    phi, undecided = run.formulas(members, budget.value)
    own = [(k, a, b) for k, a, b in phi if _mentions(a, b, pos)]
    prime_length = 2 + sum(pair_length(k, a, b) + 3 for k, a, b in phi)
    cell = {
        "u": [str(b) for b in members],
        "budget": budget.value,
        "capped": budget.capped,
        "phi": len(phi),
        "phi_with_alpha": len(own),
        "undecided": list(undecided),
        "phi_prime_length": prime_length,
    }
    if not budget.capped and m >= 1:
        previous = run.budget(n, m - 1)
        cell["phi_prime_bound"] = previous.value
        if not previous.capped and prime_length > previous.value:
            raise AssertionError(
                f"|φ'| = {prime_length} exceeds g({n},{m - 1}) = {previous.value}"
            )
    env = _env_for(run, earlier, n)
    own.sort(key=lambda t: t[0])  # quantifier-free first
    for k_value in range(run.witness_limit + 1):
        env[(FREE, pos)] = k_value
        if all(nat_holds(k, a, b, env, run.box) for k, a, b in own):
            run.values[alpha][n] = k_value
            cell["value"] = k_value
            run.cells[(alpha, n)] = cell
            return k_value
    cell["value"] = None
    run.cells[(alpha, n)] = cell
    raise NoWitnessInBox(f"no witness for {alpha} at stage {n} below {run.witness_limit}")


def _mentions(a: Form, b: Form, pos: int) -> bool:
    key = (FREE, pos)
    return any(key in variables for (_, variables), _ in a + b)


# -- preservation certificates -----------------------------------------------


def star_facts(run: StarRun) -> List[dict]:
    """Atomic ``a_α ∘ a_β = a_γ`` facts among assigned elements (α <= β)."""
    facts = []
    by_value: Dict[PolyElem, List[Ordinal]] = {}
    for a in run.index:
        by_value.setdefault(run.assignment[a], []).append(a)
    for i, a in enumerate(run.index):
        for b in run.index[i:]:
            for op in ("+", "*"):
                v = run.assignment[a] + run.assignment[b] if op == "+" else run.assignment[a] * run.assignment[b]
                for c in by_value.get(v, []):
                    facts.append({"op": op, "alpha": a, "beta": b, "gamma": c})
    return facts


def _fact_pair(members: List[Ordinal], fact: dict):
    x = {b: (FREE, i) for i, b in enumerate(members)}
    a, b = x[fact["alpha"]], x[fact["beta"]]
    if fact["op"] == "+":
        lhs = make_form({(a,): 1, (b,): 1} if a != b else {(a,): 2})
    else:
        lhs = make_form({tuple(sorted((a, b))): 1})
    return canonical_pair(lhs, make_form({(x[fact["gamma"]],): 1}))


def certify_fact(run: StarRun, fact: dict) -> dict:
    a, b, c, op = fact["alpha"], fact["beta"], fact["gamma"], fact["op"]
    label = f"{operand(run.assignment[a])} {op} {operand(run.assignment[b])} = {run.assignment[c]}"
    out = {
        "fact": label,
        "op": op,
        "indices": [str(a), str(b), str(c)],
        "n0": None,
        "delta": None,
    }
    for n in range(1, run.n_max + 1):
        for delta in run.index:
            members = run.u(delta, n)
            if not {a, b, c} <= set(members):
                continue
            k, lhs, rhs = _fact_pair(members, fact)
            if pair_length(k, lhs, rhs) <= run.budget(n, len(members)).value:
                out["n0"], out["delta"] = n, str(delta)
                break
        if out["n0"] is not None:
            break
    if out["n0"] is None:
        out["status"] = "no-stage"
        return out
    fa, fb, fc = run.values[a], run.values[b], run.values[c]
    if any(v is None for v in fa + fb + fc):
        out["status"] = "incomplete"
        return out
    combined = [x + y if op == "+" else x * y for x, y in zip(fa, fb)]
    bad = [n for n in range(out["n0"], run.n_max + 1) if combined[n] != fc[n]]
    if bad:
        out["status"] = "pointwise-failure"
        out["failing_stages"] = bad
        return out
    family = get_family(run.family)
    cert = eq_mod_regular(combined, fc, family, out["n0"])
    if cert is None:
        out["status"] = "no-family-member"
        return out
    out["n1"] = cert.n1
    out["member_prefix"] = [k for k in range(run.n_max + 1) if family.member(cert.n1, k)]
    out["disjoint_from_prefix"] = not any(family.member(cert.n1, k) for k in range(out["n0"] + 1))
    out["status"] = "certified"
    return out


def soundness_check(run: StarRun) -> dict:
    """Re-enumerate every cell's formulas from scratch and re-check them in ℕ."""
    failures = []
    checked = 0
    cache: Dict[tuple, tuple] = {}
    for (alpha, n), cell in sorted(run.cells.items()):
        if cell.get("value") is None:
            continue
        members = run.u(alpha, n)
        vals = (tuple(run.assignment[b] for b in members), cell["budget"])
        if vals not in cache:
            cache[vals] = run.formulas(members, cell["budget"], fresh=True)[0]
        env = _env_for(run, members, n)
        for k, a, b in cache[vals]:
            checked += 1
            if not nat_holds(k, a, b, env, run.box):
                failures.append({
                    "alpha": str(alpha),
                    "n": n,
                    "formula": str(formula_from_forms(k, a, b)),
                    "values": [run.values[x][n] for x in members],
                })
    return {"cells": sum(1 for c in run.cells.values() if c.get("value") is not None),
            "formulas_checked": checked, "failures": failures, "ok": not failures}


def run_star_construction(
    index: Sequence[Ordinal],
    assignment: Mapping[Ordinal, PolyElem],
    n_max: int,
    cap: Optional[int] = 12,
    family: str = "tails",
    horizon: int = DEFAULT_HORIZON,
    witness_limit: int = 10_000,
    box: int = 64,
) -> StarRun:
    """Fill ``f_α(n)`` for all α in the index set and ``1 <= n <= n_max``, then certify.

    ``f_α(0)`` is fixed at 0 and carries no constraint.  Cells that fail are
    recorded in ``errors`` and the rest of the run continues.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max >= horizon:
        raise ValueError("n_max must stay below the horizon")
    get_family(family)
    run = StarRun(tuple(index), dict(assignment), n_max, cap, family, horizon, witness_limit, box)
    for alpha in run.index:
        for n in range(1, n_max + 1):
            try:
                star_choose(run, alpha, n)
            except (NoWitnessInBox, ValueError, AssertionError) as exc:
                run.errors.append({"alpha": str(alpha), "n": n, "error": type(exc).__name__, "message": str(exc)})
    for fact in star_facts(run):
        run.certificates.append(certify_fact(run, fact))
    run.soundness = soundness_check(run)
    return run


def parse_index(text: str) -> List[Ordinal]:
    return [parse_ordinal(p) for p in text.split(",") if p.strip()]
