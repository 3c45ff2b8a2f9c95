"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line; the lines
are printed as they happen and repeated in the pytest terminal summary.
Run ``python3 tests/test_acceptance.py`` to get only the lines.
"""
import random
import time

import pytest

from pa_embed.cli import dump_json
from pa_embed.countable import (
    ElementEnumeration,
    build_table,
    check_growth,
    generate_true_equations,
    verify_embedding,
)
from pa_embed.enumeration import brute_force_forms, compute_g, count_h, iter_canonical_pairs
from pa_embed.models import check_axioms, get_model, nonneg_threshold, parse_poly, random_poly
from pa_embed.ordinals import parse_ordinal
from pa_embed.solver import DioSystem, solve_brute, solve_by_evaluation, verify
from pa_embed.star import run_star_construction
from pa_embed.syntax import DioFormula, One, Plus, Times, Var, Zero, form_term, term_form
from pa_embed.ufamily import UFamily

RESULTS = []


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# -- shared runs ---------------------------------------------------------------

ELEMENTS = ["0", "1", "2", "X", "X+1", "2*X"]
STAR_INDEX = ["0", "1", "2", "w", "w+1"]
STAR_VALUES = ["0", "1", "2", "X", "X+1"]


def countable_run():
    elems = ElementEnumeration(tuple(parse_poly(e) for e in ELEMENTS))
    stream = generate_true_equations(elems, 60)
    table = build_table(elems, stream, 40)
    return table, verify_embedding(table), check_growth(table, 1000)


def star_run():
    idx = [parse_ordinal(a) for a in STAR_INDEX]
    assignment = dict(zip(idx, (parse_poly(v) for v in STAR_VALUES)))
    return run_star_construction(idx, assignment, n_max=20, cap=12, family="tails")


@pytest.fixture(scope="module")
def countable():
    return timed(countable_run)


@pytest.fixture(scope="module")
def star():
    return timed(star_run)


# -- criteria ------------------------------------------------------------------


def test_criterion_1_axioms():
    def both():
        return [check_axioms(get_model(m), 1000, seed=2024) for m in ("nat", "poly")]

    reports, secs = timed(both)
    counts = [sum(a["passed"] == a["tested"] for a in r["axioms"]) for r in reports]
    ok = all(r["all_passed"] for r in reports) and secs < 10
    report(1, ok, f"axioms nat {counts[0]}/15, poly {counts[1]}/15 on 1000 samples each ({secs:.2f}s < 10s)")


def test_criterion_2_countable(countable):
    (table, rep, growth), secs = countable
    n0s = [f["n0"] for f in rep["facts"]]
    facts_ok = all(n is not None and n <= 40 for n in n0s)
    inj_ok = len(rep["injectivity"]) == 15 and all(p["differ_from"] is not None for p in rep["injectivity"])
    consts = {e["element"]: e for e in growth["elements"] if e["standard"]}
    const_ok = all(consts[c]["ok"] and consts[c]["stabilizes_to"] == int(c) for c in ("0", "1", "2"))
    ok = rep["rows_valid"] and facts_ok and inj_ok and const_ok and secs < 30
    report(2, ok, f"{len(n0s)} facts certified (max n0={max(n0s)}), {len(rep['injectivity'])} pairs injective, "
                  f"constants stabilize ({secs:.2f}s < 30s)")


def test_criterion_3_growth(countable):
    (table, _, growth), _ = countable
    rows = {e["element"]: e for e in growth["elements"] if not e["standard"]}
    ok = True
    for name in ("X", "X+1", "2*X"):
        start = rows[name]["exceeds_from_row"]
        col = table.column(ELEMENTS.index(name) + 1)
        ok &= start is not None and all(v > 1000 for v in col[start - 1:])
    detail = ", ".join(f"{n} > 1000 from row {rows[n]['exceeds_from_row']}" for n in ("X", "X+1", "2*X"))
    report(3, ok, detail)


def _random_term(rng, variables, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([Zero(), One()] + [Var(v) for v in variables])
    cls = rng.choice([Plus, Times])
    return cls(_random_term(rng, variables, depth - 1), _random_term(rng, variables, depth - 1))


def test_criterion_4_solver_oracles():
    def work():
        rng = random.Random(4)
        brute_found = brute_ok = 0
        for _ in range(200):
            nv = rng.randint(1, 3)
            eqs = [DioFormula(0, _random_term(rng, range(nv), 2), _random_term(rng, range(nv), 2))
                   for _ in range(rng.randint(1, 3))]
            system = DioSystem.of(eqs)
            sol = solve_brute(system, 30)
            if sol is not None:
                brute_found += 1
                brute_ok += verify(system, sol)
        eval_ok = 0
        for _ in range(200):
            prov = {0: random_poly(rng, 2, 5), 1: random_poly(rng, 2, 5)}
            t = _random_term(rng, [0, 1], 3)
            prov[2] = _value(t, prov)
            eqs = [DioFormula(0, Var(2), t), DioFormula(0, form_term(term_form(t)), t)][: rng.randint(1, 2)]
            system = DioSystem.of(eqs)
            N = nonneg_threshold(prov.values()) + rng.randint(0, 5)
            eval_ok += verify(system, solve_by_evaluation(system, prov, N))
        return brute_found, brute_ok, eval_ok

    (found, good, ev), secs = timed(work)
    ok = good == found and ev == 200 and secs < 60
    report(4, ok, f"brute solutions verified {good}/{found}, evaluation solutions verified {ev}/200 ({secs:.2f}s < 60s)")


def _value(t, prov):
    from pa_embed.models import ONE, ZERO

    if isinstance(t, Zero):
        return ZERO
    if isinstance(t, One):
        return ONE
    if isinstance(t, Var):
        return prov[t.index]
    l, r = _value(t.left, prov), _value(t.right, prov)
    return l + r if isinstance(t, Plus) else l * r


def test_criterion_5_h_cross_validation():
    def work():
        mismatches = []
        for n in range(0, 7):
            for m in range(0, 3):
                if set(iter_canonical_pairs(n, m)) != brute_force_forms(n, m):
                    mismatches.append((n, m))
        zeros = all(count_h(2, m) == 0 for m in range(0, 8))
        return mismatches, zeros

    (mismatches, zeros), secs = timed(work)
    ok = not mismatches and zeros and secs < 60
    report(5, ok, f"enumerators agree on all n<=6, m<=2 (mismatches: {mismatches}); h(2,m)=0 ({secs:.2f}s < 60s)")


def test_criterion_6_g_recurrence():
    def work():
        terms_ok = True
        values = []
        for m in range(4):
            b = compute_g(3, m)
            values.append(b.value)
            terms_ok &= not b.capped and b.chain[3] == count_h(3, 0)
            for j in range(m, 3):
                g_next = b.chain[j + 1]
                terms_ok &= b.chain[j] == 2 + count_h(g_next, j + 1) * (g_next + 3)
        capped = compute_g(5, 3, cap=12)
        return terms_ok, values, capped

    (terms_ok, values, capped), secs = timed(work)
    ok = terms_ok and capped.capped and capped.value == 12 and secs < 30
    report(6, ok, f"g(3,0..3)={values} match the recurrence; g(5,3) capped at {capped.value} ({secs:.2f}s < 30s)")


def test_criterion_7_family_clauses():
    names = ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2", "w^2+w+1"]

    def work():
        fam = UFamily()
        ords = [parse_ordinal(a) for a in names]
        out = []
        for a in ords:
            r = fam.check_lemma_clauses(a, 64, [b for b in ords if b <= a])
            quarter = next(x for x in r["clause_v"] if x["epsilon"] == "1/4")["from"]
            v_ok = quarter is not None and all(4 * len(fam.u(a, n)) <= n + 1 for n in range(quarter, 65))
            iii = [e["enters_at"] for e in r["clause_iii"]]
            late = [f"{e['beta']} in u({a}) at {e['enters_at']}" for e in r["clause_iii"]
                    if e["enters_at"] is not None and not e["within_n_max"]]
            out.append((str(a), not r["violations"], all(s is not None for s in iii), v_ok, late))
        return out

    rows, secs = timed(work)
    ok = all(r[1] and r[2] and r[3] for r in rows) and secs < 30
    late = [x for r in rows for x in r[4]]
    report(7, ok, f"(i),(ii),(iv) hold for {len(rows)} ordinals up to n=64; (iii) stages found, "
                  f"past 64: {late or 'none'}; (v) ratio <= 1/4 from its threshold ({secs:.2f}s < 30s)")


def test_criterion_8_star_run(star):
    run, secs = star
    wanted = {"0 + 1 = 1", "1 + 1 = 2", "1 * X = X"}
    certs = {c["fact"]: c for c in run.certificates}
    ok = run.soundness["ok"] and not run.errors and secs < 300
    for fact in wanted:
        c = certs.get(fact)
        ok &= c is not None and c["status"] == "certified" and c["disjoint_from_prefix"]
    detail = "; ".join(f"{f} n0={certs[f]['n0']} n1={certs[f]['n1']}" for f in sorted(wanted) if f in certs)
    report(8, ok, f"soundness re-check {run.soundness['formulas_checked']} formulas over "
                  f"{run.soundness['cells']} cells, {len(run.errors)} errors; {detail} ({secs:.2f}s < 300s)")


def test_criterion_9_determinism(countable, star):
    (table, rep, growth), _ = countable
    first_table = dump_json({"table": table.to_json(), "report": rep, "growth": growth})
    table2, rep2, growth2 = countable_run()
    second_table = dump_json({"table": table2.to_json(), "report": rep2, "growth": growth2})
    first_star = dump_json(star[0].to_json())
    second_star = dump_json(star_run().to_json())
    ok = first_table == second_table and first_star == second_star
    report(9, ok, f"countable artifact ({len(first_table)} bytes) and star artifact ({len(first_star)} bytes) "
                  f"byte-identical on re-run")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
