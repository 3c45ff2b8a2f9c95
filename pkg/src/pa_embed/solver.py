"""Finite systems of polynomial equations over ℕ.

Two independent routes produce solutions: a bounded lexicographic box
search, and evaluation of ℤ[X]⁺ provenance polynomials at a natural number.
A solver is anything with ``solve(system, context) -> assignment | None``;
only ℕ-valued solvers are provided.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Protocol, Sequence

from .models import PolyElem, eval_at, nonneg_threshold
from .syntax import FREE, DioFormula, eval_form, formula_forms, parse_formula

Assignment = Dict[int, int]


class SearchLimitExceeded(RuntimeError):
    """The box search visited more nodes than allowed."""


class PreconditionViolation(ValueError):
    """Provenance does not satisfy an equation identically in ℤ[X]."""

    def __init__(self, equation: DioFormula, message: str):
        super().__init__(f"{equation}: {message}")
        self.equation = equation


@dataclass(frozen=True)
class DioSystem:
    equations: tuple = ()
    var_map: tuple = field(init=False)

    def __post_init__(self):
        eqs = tuple(parse_formula(e) if isinstance(e, str) else e for e in self.equations)
        for e in eqs:
            if e.bound_count:
                raise ValueError(f"systems are quantifier-free, got {e}")
        object.__setattr__(self, "equations", eqs)
        seen = set()
        for e in eqs:
            seen.update(e.free_vars)
        object.__setattr__(self, "var_map", tuple(sorted(seen)))

    @classmethod
    def of(cls, equations: Sequence) -> "DioSystem":
        return cls(tuple(equations))

    def forms(self) -> List[tuple]:
        return [formula_forms(e) for e in self.equations]

    def __len__(self) -> int:
        return len(self.equations)


def _holds(forms: tuple, env: Mapping) -> bool:
    lhs, rhs = forms
    return eval_form(lhs, env) == eval_form(rhs, env)


def verify(system: DioSystem, sigma: Mapping[int, int]) -> bool:
    """Every equation of ``system`` holds in ℕ under ``sigma``."""
    missing = [i for i in system.var_map if i not in sigma]
    if missing:
        raise ValueError(f"assignment does not cover x{missing[0]}")
    if any(v < 0 for v in sigma.values()):
        return False
    env = {(FREE, i): v for i, v in sigma.items()}
    return all(_holds(f, env) for f in system.forms())


def solve_brute(system: DioSystem, bound: int, node_limit: int = 10**7) -> Optional[Assignment]:
    """Lexicographically least solution with every variable in ``[0, bound]``.

    ``None`` means only that the box contains no solution.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    variables = list(system.var_map)
    forms = system.forms()
    # check each equation as soon as its last variable is assigned
    last_pos: Dict[int, List[tuple]] = {}
    for e, f in zip(system.equations, forms):
        pos = max((variables.index(v) for v in e.free_vars), default=-1)
        last_pos.setdefault(pos, []).append(f)
    if any(not _holds(f, {}) for f in last_pos.get(-1, [])):
        return None
    env: Dict = {}
    nodes = 0

    def search(depth: int) -> bool:
        nonlocal nodes
        if depth == len(variables):
            return True
        key = (FREE, variables[depth])
        for value in range(bound + 1):
            nodes += 1
            if nodes > node_limit:
                raise SearchLimitExceeded(f"box search exceeded {node_limit} nodes")
            env[key] = value
            if all(_holds(f, env) for f in last_pos.get(depth, ())) and search(depth + 1):
                return True
        del env[key]
        return False

    if search(0):
        return {v: env[(FREE, v)] for v in variables}
    return None


def identically_true(equation: DioFormula, provenance: Mapping[int, PolyElem]) -> bool:
    from .models import ONE, ZERO

    lhs, rhs = formula_forms(equation)
    env = {(FREE, i): p for i, p in provenance.items()}
    return eval_form(lhs, env, one=ONE, zero=ZERO) == eval_form(rhs, env, one=ONE, zero=ZERO)


def solve_by_evaluation(
    system: DioSystem, provenance: Mapping[int, PolyElem], N: int
) -> Assignment:
    """``x_i -> eval_at(provenance[i], N)``; valid because evaluation is a homomorphism."""
    missing = [i for i in system.var_map if i not in provenance]
    if missing:
        raise ValueError(f"no provenance for x{missing[0]}")
    threshold = nonneg_threshold(provenance.values())
    if N < threshold:
        raise ValueError(f"evaluation point {N} below the nonnegativity threshold {threshold}")
    for e in system.equations:
        if not identically_true(e, provenance):
            raise PreconditionViolation(e, "not an identity in ℤ[X] under the provenance")
    return {i: eval_at(p, N) for i, p in sorted(provenance.items())}


class Solver(Protocol):
    def solve(self, system: DioSystem, context) -> Optional[Assignment]:
        ...


@dataclass
class BoxSolver:
    bound: int
    node_limit: int = 10**7

    def solve(self, system: DioSystem, context=None) -> Optional[Assignment]:
        return solve_brute(system, self.bound, self.node_limit)


@dataclass
class EvaluationSolver:
    """``context`` is ``(provenance, N)``."""

    def solve(self, system: DioSystem, context) -> Optional[Assignment]:
        provenance, N = context
        return solve_by_evaluation(system, provenance, N)
