"""Embedding a countable Diophantine-correct model into ℕ^ω / cofinite.

Elements ``m_1, m_2, ...`` of ℤ[X]⁺ become variables ``x1, x2, ...``.  A
stream of equations true of them is fixed, and row ``n`` of the solution
table is an ℕ-solution of the first ``n`` equations obtained by evaluating
every element at a point ``N_n``.  Column ``i`` then represents ``m_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .enumeration import BudgetExceeded, iter_canonical_pairs
from .models import ONE, ZERO, PolyElem, nonneg_threshold, operand, parse_poly
from .reduced import agreement_start, eq_mod_cofinite, pointwise_le_start
from .solver import DioSystem, solve_by_evaluation, verify
from .syntax import (
    FREE,
    DioFormula,
    Var,
    One,
    Plus,
    Times,
    Zero,
    canonicalize,
    eval_form,
    formula_from_forms,
    length,
)

SCHEDULES = {
    "linear": lambda n: n,
    "square": lambda n: n * n,
    "exponential": lambda n: 2**n,
}


@dataclass(frozen=True)
class ElementEnumeration:
    elements: tuple

    def __post_init__(self):
        elems = tuple(parse_poly(e) for e in self.elements)
        if len(set(elems)) != len(elems):
            raise ValueError("enumerated elements must be pairwise distinct")
        object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> PolyElem:
        """1-based, matching the variable ``x_i``."""
        return self.elements[i - 1]

    def provenance(self) -> Dict[int, PolyElem]:
        return {i + 1: e for i, e in enumerate(self.elements)}


def default_order(elems: Sequence[PolyElem]) -> List[PolyElem]:
    """Degree first, then coefficients lexicographically from the top."""
    return sorted(elems, key=lambda p: (p.degree, tuple(reversed(p.coeffs))))


def _numeral(c: int):
    if c == 0:
        return Zero()
    node = One()
    for _ in range(c - 1):
        node = Plus(node, One())
    return node


def atomic_facts(elems: ElementEnumeration) -> List[dict]:
    """Every ``m_i + m_j = m_k`` and ``m_i * m_j = m_k`` among the elements (i <= j)."""
    index = {e: i + 1 for i, e in enumerate(elems.elements)}
    facts = []
    K = len(elems)
    for i in range(1, K + 1):
        for j in range(i, K + 1):
            for op, fn in (("+", lambda a, b: a + b), ("*", lambda a, b: a * b)):
                k = index.get(fn(elems[i], elems[j]))
                if k is not None:
                    facts.append({"op": op, "i": i, "j": j, "k": k})
    return facts


def order_facts(elems: ElementEnumeration) -> List[dict]:
    facts = []
    K = len(elems)
    for i in range(1, K + 1):
        for j in range(1, K + 1):
            if i != j and elems[i] <= elems[j]:
                facts.append({"i": i, "j": j})
    return facts


def fact_equation(fact: dict) -> DioFormula:
    a, b, c = Var(fact["i"]), Var(fact["j"]), Var(fact["k"])
    return DioFormula(0, Plus(a, b) if fact["op"] == "+" else Times(a, b), c)


def generate_true_equations(elems: ElementEnumeration, budget: int, max_len: int = 9) -> List[DioFormula]:
    """Canonical equations true of the elements, mandatory facts first.

    Mandatory: ``x_i = c`` for each standard element ``c`` and every atomic
    addition/multiplication fact.  The rest of the budget is filled with
    further true quantifier-free equations in (length, form) order.
    """
    K = len(elems)
    prov = elems.provenance()
    mandatory = []
    for i in range(1, K + 1):
        e = elems[i]
        if e.is_standard:
            c = e.coeffs[0] if e.coeffs else 0
            mandatory.append(DioFormula(0, Var(i), _numeral(c)))
    mandatory.extend(fact_equation(f) for f in atomic_facts(elems))
    seen = set()
    stream: List[DioFormula] = []
    for eq in sorted((canonicalize(e) for e in mandatory), key=lambda e: (length(e), str(e))):
        if eq not in seen:
            seen.add(eq)
            stream.append(eq)
    if len(stream) > budget:
        raise BudgetExceeded(f"{len(stream)} mandatory equations exceed the budget {budget}")
    env = {(FREE, i): p for i, p in prov.items()}
    for n in range(3, max_len + 1, 2):
        if len(stream) >= budget:
            break
        batch = []
        for k, a, b in iter_canonical_pairs(n, K + 1):
            if k:
                continue
            phi = formula_from_forms(k, a, b)
            if 0 in phi.free_vars or phi in seen or length(phi) != n:
                continue
            if eval_form(a, env, one=ONE, zero=ZERO) == eval_form(b, env, one=ONE, zero=ZERO):
                batch.append(phi)
        for phi in sorted(batch, key=str):
            if len(stream) >= budget:
                break
            seen.add(phi)
            stream.append(phi)
    return stream


@dataclass
class SolutionTable:
    elements: ElementEnumeration
    equations: List[DioFormula]
    rows: List[List[int]]  # rows[n-1][i-1] = v_i(n)
    points: List[int]  # N_n per row
    schedule: str
    threshold: int

    @property
    def depth(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.elements)

    def column(self, i: int) -> List[int]:
        return [row[i - 1] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "elements": [str(e) for e in self.elements.elements],
            "coefficients": [e.to_json() for e in self.elements.elements],
            "equations": [str(e) for e in self.equations],
            "depth": self.depth,
            "width": self.width,
            "schedule": self.schedule,
            "threshold": self.threshold,
            "points": self.points,
            "rows": self.rows,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SolutionTable":
        from .syntax import parse_formula

        return cls(
            ElementEnumeration(tuple(tuple(c) for c in data["coefficients"])),
            [parse_formula(e) for e in data["equations"]],
            [list(r) for r in data["rows"]],
            list(data["points"]),
            data["schedule"],
            data["threshold"],
        )


def build_table(
    elems: ElementEnumeration,
    stream: Sequence[DioFormula],
    depth: int,
    schedule: str = "square",
) -> SolutionTable:
    """Row ``n`` solves ``P_1 ∧ … ∧ P_n`` by evaluation at ``N_n = max(threshold, s(n))``.

    Variables that do not occur in the first ``n`` equations are still
    evaluated, which fixes the otherwise arbitrary choice.
    """
    point_of = SCHEDULES[schedule]
    threshold = nonneg_threshold(elems.elements)
    prov = elems.provenance()
    rows, points = [], []
    for n in range(1, depth + 1):
        N = max(threshold, point_of(n))
        system = DioSystem.of(stream[:n])
        sigma = solve_by_evaluation(system, prov, N)
        rows.append([sigma[i] for i in range(1, len(elems) + 1)])
        points.append(N)
    return SolutionTable(elems, list(stream), rows, points, schedule, threshold)


def _row(n0_index: Optional[int]) -> Optional[int]:
    return None if n0_index is None else n0_index + 1


def verify_embedding(table: SolutionTable) -> dict:
    """Certificates (as 1-based row numbers) for facts, order and injectivity.

    Every row is also re-checked against its equations with the solver's
    independent ``verify``.
    """
    elems = table.elements
    failures = []
    bad_rows = []
    for n, row in enumerate(table.rows, start=1):
        sigma = {i: v for i, v in enumerate(row, start=1)}
        if not verify(DioSystem.of(table.equations[:n]), sigma):
            bad_rows.append(n)
            failures.append({"kind": "row", "row": n})

    facts = []
    for fact in atomic_facts(elems):
        a, b, c = table.column(fact["i"]), table.column(fact["j"]), table.column(fact["k"])
        combined = [x + y if fact["op"] == "+" else x * y for x, y in zip(a, b)]
        cert = eq_mod_cofinite(combined, c)
        entry = {
            **fact,
            "fact": f"{operand(elems[fact['i']])} {fact['op']} {operand(elems[fact['j']])} = {elems[fact['k']]}",
            "n0": None if cert is None else cert.n0 + 1,
        }
        facts.append(entry)
        if cert is None:
            failures.append({"kind": "fact", **entry})

    order = []
    for fact in order_facts(elems):
        n0 = _row(pointwise_le_start(table.column(fact["i"]), table.column(fact["j"])))
        entry = {**fact, "fact": f"{elems[fact['i']]} <= {elems[fact['j']]}", "n0": n0}
        order.append(entry)
        if n0 is None:
            failures.append({"kind": "order", **entry})

    injective = []
    for i, j in itertools.combinations(range(1, len(elems) + 1), 2):
        ci, cj = table.column(i), table.column(j)
        n0 = len(ci)
        while n0 > 0 and ci[n0 - 1] != cj[n0 - 1]:
            n0 -= 1
        differ_from = n0 + 1 if n0 < len(ci) else None
        entry = {"i": i, "j": j, "pair": f"{elems[i]} / {elems[j]}", "differ_from": differ_from}
        injective.append(entry)
        if differ_from is None:
            failures.append({"kind": "injectivity", **entry})

    return {
        "depth": table.depth,
        "width": table.width,
        "rows_valid": not bad_rows,
        "facts": facts,
        "order": order,
        "injectivity": injective,
        "failures": failures,
        "ok": not failures,
    }


def check_growth(table: SolutionTable, bound: int) -> dict:
    """Nonstandard columns eventually stay above ``bound``; standard ones settle on their value."""
    out = []
    for i, e in enumerate(table.elements.elements, start=1):
        col = table.column(i)
        if e.is_standard:
            value = e.coeffs[0] if e.coeffs else 0
            start = agreement_start(col, [value] * len(col))
            out.append({
                "element": str(e),
                "standard": True,
                "stabilizes_to": col[-1],
                "from_row": _row(start),
                "ok": start is not None and col[-1] == value,
            })
        else:
            k = len(col)
            while k > 0 and col[k - 1] > bound:
                k -= 1
            exceeds_from = k + 1 if k < len(col) else None
            out.append({
                "element": str(e),
                "standard": False,
                "bound": bound,
                "exceeds_from_row": exceeds_from,
                "ok": exceeds_from is not None,
            })
    return {"bound": bound, "elements": out, "ok": all(r["ok"] for r in out)}


def render_table(table: SolutionTable, max_rows: Optional[int] = None, csv: bool = False) -> str:
    """The solution table laid out with rows ``P_n`` and columns ``m_i``."""
    header = [""] + [f"m{i}={e}" for i, e in enumerate(table.elements.elements, start=1)]
    rows = table.rows if max_rows is None else table.rows[:max_rows]
    body = [[f"P{n}"] + [str(v) for v in row] for n, row in enumerate(rows, start=1)]
    if csv:
        return "\n".join(",".join(r) for r in [header] + body) + "\n"
    widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]
    lines = [" ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines[0] = lines[0][: widths[0]] + " |" + lines[0][widths[0]:]
    lines.append("-" * (widths[0] + 1) + "+" + "-" * (sum(widths[1:]) + len(widths) - 1))
    for r in body:
        line = " ".join(v.rjust(w) for v, w in zip(r, widths))
        lines.append(line[: widths[0]] + " |" + line[widths[0]:])
    return "\n".join(lines) + "\n"
