"""Bounded enumeration of canonical Diophantine formulas and the g/h budget.

``count_h(n, m)`` is the number of canonical formulas of length at most
``n`` whose free variables lie among ``x0..x(m-1)``.  Syntactic canonical
forms stand in for semantic equivalence classes (which are not decidable),
so this is an upper bound for the semantic count.

``compute_g`` runs the recurrence

    g(n, n)   = h(n, 0)
    g(n, m-1) = 2 + h(g(n, m), m) * (g(n, m) + 3)      (m <= n)
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .syntax import (
    BOUND,
    EXISTS,
    FREE,
    DioFormula,
    Form,
    ParseError,
    VarKey,
    canonical_pair,
    form_tokens,
    form_variables,
    formula_forms,
    formula_from_forms,
    parse_formula,
    parse_term,
    relabel_form,
)

DEFAULT_LIMIT = 10**7


class BudgetExceeded(RuntimeError):
    """The enumeration would examine more candidates than allowed."""


# -- grammar-directed generation ---------------------------------------------


def monomials(variables: Sequence[VarKey], max_tokens: int) -> List[Tuple]:
    """Monomials over ``variables`` whose single occurrence fits in ``max_tokens``."""
    out = [(0, ())]
    deg = 1
    while 2 * deg - 1 <= max_tokens:
        for combo in itertools.combinations_with_replacement(sorted(variables), deg):
            out.append((deg, combo))
        deg += 1
    return sorted(out)


def _weight(mono) -> int:
    return 2 * mono[0] if mono[0] else 2


def forms_up_to(variables: Sequence[VarKey], max_tokens: int) -> List[Form]:
    """All canonical polynomial forms over ``variables`` with at most ``max_tokens`` tokens."""
    if max_tokens < 1:
        return []
    monos = monomials(variables, max_tokens)
    cap = max_tokens + 1
    out: List[Form] = [()]

    def extend(start: int, used: int, acc: list):
        for i in range(start, len(monos)):
            w = _weight(monos[i])
            c = 1
            while used + c * w <= cap:
                acc.append((monos[i], c))
                out.append(tuple(acc))
                extend(i + 1, used + c * w, acc)
                acc.pop()
                c += 1

    extend(0, 0, [])
    return out


def _form_counts(n_vars: int, max_tokens: int) -> List[int]:
    """``counts[t]`` = number of forms with exactly ``t`` tokens (t <= max_tokens)."""
    cap = max_tokens + 1
    # multisets of monomials, by total weight
    series = [0] * (cap + 1)
    series[0] = 1
    deg = 0
    while True:
        w = 2 * deg if deg else 2
        if w > cap:
            break
        how_many = math.comb(n_vars + deg - 1, deg) if deg else 1
        if how_many == 0:
            break
        # multiply by (1 - z^w)^(-how_many)
        new = [0] * (cap + 1)
        for s in range(cap + 1):
            if series[s]:
                j = 0
                while s + w * j <= cap:
                    new[s + w * j] += series[s] * math.comb(how_many + j - 1, j)
                    j += 1
        series = new
        deg += 1
    counts = [0] * (max_tokens + 1)
    counts[1] += 1  # the zero form
    for s in range(2, cap + 1):
        counts[s - 1] += series[s]
    return counts


def candidate_count(max_len: int, free_vars: int) -> int:
    """Number of ordered side pairs the grammar-directed enumerator examines (an upper bound)."""
    total = 0
    for k in range(0, max_bound_vars(max_len) + 1):
        body = max_len - (2 * k + 2 if k else 0)
        if body < 3:
            break
        counts = _form_counts(free_vars + k, body - 2)
        prefix = list(itertools.accumulate(counts))
        for t1 in range(1, body - 1):
            t2max = body - 1 - t1
            if t2max >= 1:
                total += counts[t1] * prefix[min(t2max, len(prefix) - 1)]
    return total


def max_bound_vars(max_len: int) -> int:
    # k bound variables: 2k+2 overhead and a body mentioning all of them (>= max(3, 2k-1) tokens)
    k = 0
    while 2 * (k + 1) + 2 + max(3, 2 * (k + 1) - 1) <= max_len:
        k += 1
    return k


def _bound_canonical(k: int, a: Form, b: Form) -> bool:
    if k < 2:
        return True
    for perm in itertools.permutations(range(k)):
        if list(perm) == list(range(k)):
            continue
        mapping = {(BOUND, j): (BOUND, perm[j]) for j in range(k)}
        ra, rb = relabel_form(a, mapping), relabel_form(b, mapping)
        pair = (ra, rb) if ra <= rb else (rb, ra)
        if pair < (a, b):
            return False
    return True


def iter_canonical_pairs(
    max_len: int, free_vars: int, limit: Optional[int] = DEFAULT_LIMIT
) -> Iterator[Tuple[int, Form, Form]]:
    """Yield ``(bound_count, lhs_form, rhs_form)`` for every canonical formula.

    Order: by bound count, then by the token count of the smaller side.
    ``limit`` bounds the number of candidate side pairs examined.
    """
    examined = 0
    for k in range(0, max_bound_vars(max_len) + 1):
        body = max_len - (2 * k + 2 if k else 0)
        if body < 3:
            break
        variables = [(FREE, i) for i in range(free_vars)] + [(BOUND, j) for j in range(k)]
        if limit is not None and sum(_form_counts(len(variables), body - 2)) > limit:
            raise BudgetExceeded(
                f"more than {limit} polynomial forms with <= {body - 2} tokens "
                f"over {len(variables)} variables"
            )
        forms = forms_up_to(variables, body - 2)
        by_tokens: Dict[int, List[Tuple[Form, frozenset, int]]] = {}
        for f in forms:
            by_tokens.setdefault(form_tokens(f), []).append(
                (f, frozenset(m for m, _ in f), _bound_mask(f))
            )
        full_mask = (1 << k) - 1
        token_sizes = sorted(by_tokens)
        for t1 in token_sizes:
            for a, monos_a, mask_a in by_tokens[t1]:
                for t2 in token_sizes:
                    if t1 + t2 + 1 > body:
                        break
                    group = by_tokens[t2]
                    examined += len(group)
                    if limit is not None and examined > limit:
                        raise BudgetExceeded(
                            f"enumeration of formulas with length <= {max_len} over "
                            f"{free_vars} free variables exceeds {limit} candidates"
                        )
                    for b, monos_b, mask_b in group:
                        if not (a < b or (not a and not b)):
                            continue
                        if (mask_a | mask_b) != full_mask:
                            continue
                        if not monos_a.isdisjoint(monos_b):
                            continue
                        if not _bound_canonical(k, a, b):
                            continue
                        yield k, a, b


def _bound_mask(form: Form) -> int:
    mask = 0
    for k in form_variables(form):
        if k[0] == BOUND:
            mask |= 1 << k[1]
    return mask


def enumerate_formulas(
    max_len: int, free_vars: int, limit: Optional[int] = DEFAULT_LIMIT
) -> List[DioFormula]:
    """All canonical formulas of length ``<= max_len`` over ``x0..x(free_vars-1)``.

    Sorted by (length, bound count, sides).  Raises :class:`BudgetExceeded`
    rather than truncating.
    """
    if limit is not None and candidate_count(max_len, free_vars) > limit:
        raise BudgetExceeded(
            f"enumeration of formulas with length <= {max_len} over {free_vars} "
            f"free variables exceeds {limit} candidates"
        )
    from .syntax import pair_length

    triples = sorted(
        (pair_length(k, a, b), k, a, b) for k, a, b in iter_canonical_pairs(max_len, free_vars, limit)
    )
    return [formula_from_forms(k, a, b) for _, k, a, b in triples]


# -- independent oracle: filter all token strings ---------------------------


def brute_force_forms(max_len: int, free_vars: int) -> set:
    """Canonical ``(k, lhs, rhs)`` triples found by parsing every token string.

    Any formula string is ``Q (L = R)`` or ``L = R`` where ``Q`` is a run of
    ``∃ v`` pairs, so every string over the alphabet of length ``<= max_len``
    is visited by trying each quantifier run and each split at ``=``.  The
    term strings on either side are enumerated exhaustively and parsed.
    """
    from .syntax import pair_length

    max_q = max(0, (max_len - 5) // 2)
    var_tokens = [f"x{i}" for i in range(free_vars)] + [f"y{j}" for j in range(max_q)]
    term_alphabet = var_tokens + ["0", "1", "+", "*", "(", ")"]

    parsed_terms: Dict[int, List[str]] = {}

    def terms_of_length(n: int) -> List[str]:
        if n not in parsed_terms:
            got = []
            for toks in itertools.product(term_alphabet, repeat=n):
                s = " ".join(toks)
                try:
                    parse_term(s)
                except ParseError:
                    continue
                got.append(s)
            parsed_terms[n] = got
        return parsed_terms[n]

    found = set()
    for q in range(0, max_q + 1):
        overhead = 2 * q + 2 if q else 0
        for prefix in itertools.product(var_tokens, repeat=q):
            head = "".join(f"{EXISTS}{v} " for v in prefix)
            for total in range(3, max_len - overhead + 1):
                for left in range(1, total - 1):
                    right = total - 1 - left
                    for ls in terms_of_length(left):
                        for rs in terms_of_length(right):
                            text = f"{head}({ls} = {rs})" if q else f"{ls} = {rs}"
                            try:
                                phi = parse_formula(text)
                            except ParseError:
                                continue
                            k, a, b = canonical_pair(*formula_forms(phi))
                            if pair_length(k, a, b) > max_len:
                                continue
                            if any(v[0] == FREE and v[1] >= free_vars
                                   for v in form_variables(a) | form_variables(b)):
                                continue
                            found.add((k, a, b))
    return found


# -- h and g -----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _count_h_cached(n: int, m: int, limit: Optional[int]) -> int:
    if limit is not None and candidate_count(n, m) > limit:
        raise BudgetExceeded(
            f"h({n},{m}) needs more than {limit} candidate forms"
        )
    return sum(1 for _ in iter_canonical_pairs(n, m, limit))


def count_h(n: int, m: int, limit: Optional[int] = DEFAULT_LIMIT, stop_at: Optional[int] = None) -> int:
    """Number of canonical formulas of length ``<= n`` in ``m`` free variables.

    With ``stop_at`` the count stops as soon as it reaches that value, so the
    result is ``min(h(n, m), stop_at)``.
    """
    if n < 0 or m < 0:
        raise ValueError("h is defined for nonnegative arguments")
    if stop_at is None:
        return _count_h_cached(n, m, limit)
    seen = 0
    for _ in iter_canonical_pairs(n, m, limit):
        seen += 1
        if seen >= stop_at:
            break
    return seen


@dataclass
class FormulaBudget:
    """``value`` is g(n, m), or the cap when ``capped`` is set."""

    n: int
    m: int
    value: int
    capped: bool = False
    reason: str = ""
    h_calls: List[dict] = field(default_factory=list)
    chain: Dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "value": self.value,
            "capped": self.capped,
            "reason": self.reason,
            "h_calls": self.h_calls,
            "chain": {str(k): v for k, v in sorted(self.chain.items())},
        }


def compute_g(n: int, m: int, cap: Optional[int] = None, limit: Optional[int] = DEFAULT_LIMIT) -> FormulaBudget:
    """g(n, m) by descending the recurrence from g(n, n) = h(n, 0).

    With ``cap`` the result is ``min(g(n, m), cap)``.  Once an intermediate
    value G >= 3 is reached every later value exceeds it (h(G, ·) >= 1
    because ``0=0`` has length 3), which lets capped runs stop early; h is
    then only counted up to the point where the next value must reach the
    cap.  If an h call exceeds the enumeration limit, a capped run returns
    the cap (flagged); an uncapped run raises :class:`BudgetExceeded`.
    """
    if m < 0 or n < 0 or m > n:
        raise ValueError(f"compute_g needs 0 <= m <= n, got n={n}, m={m}")
    budget = FormulaBudget(n, m, 0)
    try:
        g = count_h(n, 0, limit)
    except BudgetExceeded as exc:
        return _capped(budget, cap, f"h({n},0): {exc}")
    budget.h_calls.append({"n": n, "m": 0, "h": g, "exact": True})
    budget.chain[n] = g
    j = n
    while j > m:
        if cap is not None and g >= cap and g >= 3:
            budget.value = cap
            budget.capped = True
            budget.reason = f"g({n},{j}) = {g} >= cap {cap}; g only grows as m decreases"
            return budget
        stop = None
        if cap is not None:
            stop = max(1, -(-(cap - 2) // (g + 3)))
        try:
            h = count_h(g, j, limit, stop_at=stop)
        except BudgetExceeded as exc:
            return _capped(budget, cap, f"h({g},{j}): {exc}")
        exact = stop is None or h < stop
        budget.h_calls.append({"n": g, "m": j, "h": h, "exact": exact})
        g = 2 + h * (g + 3)
        j -= 1
        if not exact:
            budget.value = cap
            budget.capped = True
            budget.reason = f"g({n},{j}) >= {g} >= cap {cap}"
            return budget
        budget.chain[j] = g
    if cap is not None and g > cap:
        budget.value, budget.capped = cap, True
        budget.reason = f"g({n},{m}) = {g} > cap {cap}"
    else:
        budget.value = g
    return budget


def _capped(budget: FormulaBudget, cap: Optional[int], why: str) -> FormulaBudget:
    if cap is None:
        raise BudgetExceeded(why)
    budget.value, budget.capped, budget.reason = cap, True, why
    return budget
