"""The coherent family of finite ordinal sets ``u(α, n)``.

For every notation α and stage ``n >= 1`` the family provides a finite set
with

  (i)   |u(α, n)| < n + 1
  (ii)  α ∈ u(α, n) ⊆ u(α, n + 1)
  (iii) every β <= α enters u(α, n) for some n
  (iv)  β ∈ u(α, n)  implies  u(β, n) = u(α, n) ∩ [0, β]
  (v)   |u(α, n)| / (n + 1) -> 0

built by recursion on α:

* ``u(0, n) = {0}``.
* successor ``α = β + 1``: with ``n0`` least such that every ``n >= n0`` has
  ``|u(β, n)| / n < 1/2``, ``u(α, n) = {α}`` below ``n0`` and
  ``u(β, n) ∪ {α}`` from ``n0`` on.
* limit α with fundamental sequence ``δ_i``: stages ``n_0 < n_1 < ...`` are
  taken least with ``δ_i ∈ u(δ_(i+1), n_i)`` and, for ``n >= n_(i+1)``,
  ``n_i * |u(δ_(i+1), n)| < n``; then ``u(α, n) = u(δ_i, n) ∪ {α}`` on
  ``[n_i, n_(i+1))`` and ``{α}`` below ``n_0``.

Stages run from 1 (clause (i) cannot hold at n = 0).  Everything is
materialized on ``[1, horizon]``; "for every n >= n0" conditions are checked
up to the horizon, and a stage that cannot be found below it is recorded
as ``None``.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .ordinals import Ordinal, fundamental_sequence

DEFAULT_HORIZON = 4096
EPSILONS = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))

Pieces = List[Tuple[int, FrozenSet[Ordinal]]]


@dataclass
class _Entry:
    pieces: Pieces
    kind: str
    threshold: Optional[int] = None  # successor n0
    sequence: List[Tuple[Ordinal, int]] = field(default_factory=list)  # limit (δ_i, n_i)


class UFamily:
    def __init__(self, horizon: int = DEFAULT_HORIZON):
        if horizon < 2:
            raise ValueError("horizon must be at least 2")
        self.horizon = horizon
        self._memo: Dict[Ordinal, _Entry] = {}

    # -- construction -------------------------------------------------------

    def _entry(self, alpha: Ordinal) -> _Entry:
        entry = self._memo.get(alpha)
        if entry is None:
            if alpha.is_zero:
                entry = _Entry([(1, frozenset([alpha]))], "zero")
            elif alpha.is_successor:
                entry = self._successor(alpha)
            else:
                entry = self._limit(alpha)
            self._memo[alpha] = entry
        return entry

    def _segments(self, alpha: Ordinal):
        """``(start, end_exclusive, set)`` triples covering ``[1, horizon]``."""
        pieces = self._entry(alpha).pieces
        for idx, (start, s) in enumerate(pieces):
            end = pieces[idx + 1][0] if idx + 1 < len(pieces) else self.horizon + 1
            yield start, end, s

    def _last_violation(self, alpha: Ordinal, factor: int) -> int:
        """Largest ``n <= horizon`` with ``factor * |u(alpha, n)| >= n`` (0 if none)."""
        last = 0
        for start, end, s in self._segments(alpha):
            top = min(end - 1, factor * len(s))
            if top >= start:
                last = max(last, top)
        return last

    def first_stage(self, beta: Ordinal, alpha: Ordinal) -> Optional[int]:
        """Least ``n <= horizon`` with ``beta ∈ u(alpha, n)``."""
        for start, _, s in self._segments(alpha):
            if beta in s:
                return start
        return None

    def _restrict(self, alpha: Ordinal, lo: int, hi: int, extra: Ordinal) -> Pieces:
        out = []
        for start, end, s in self._segments(alpha):
            a, b = max(start, lo), min(end, hi)
            if a < b:
                out.append((a, s | {extra}))
        return out

    def _successor(self, alpha: Ordinal) -> _Entry:
        beta = alpha.pred()
        n0 = self._last_violation(beta, 2) + 1
        single = frozenset([alpha])
        if n0 > self.horizon:
            return _Entry([(1, single)], "successor", None)
        pieces = [(1, single)] if n0 > 1 else []
        pieces += self._restrict(beta, n0, self.horizon + 1, alpha)
        return _Entry(_merge(pieces), "successor", n0)

    def _limit(self, alpha: Ordinal) -> _Entry:
        H = self.horizon
        d = lambda i: fundamental_sequence(alpha, i)  # noqa: E731
        sequence: List[Tuple[Ordinal, int]] = []
        n_first = self.first_stage(d(0), d(1))
        if n_first is not None:
            sequence.append((d(0), n_first))
            i = 0
            while True:
                n_i = sequence[-1][1]
                enters = self.first_stage(d(i + 1), d(i + 2))
                if enters is None:
                    break
                n_next = max(n_i + 1, enters, self._last_violation(d(i + 1), n_i) + 1)
                if n_next > H:
                    break
                sequence.append((d(i + 1), n_next))
                i += 1
        pieces: Pieces = []
        first = sequence[0][1] if sequence else H + 1
        if first > 1:
            pieces.append((1, frozenset([alpha])))
        for idx, (delta, n_i) in enumerate(sequence):
            end = sequence[idx + 1][1] if idx + 1 < len(sequence) else H + 1
            pieces += self._restrict(delta, n_i, end, alpha)
        return _Entry(_merge(pieces), "limit", None, sequence)

    # -- queries ------------------------------------------------------------

    def u(self, alpha: Ordinal, n: int, within: Optional[Iterable[Ordinal]] = None) -> FrozenSet[Ordinal]:
        """``u(alpha, n)``, optionally intersected with an index set."""
        if not 1 <= n <= self.horizon:
            raise ValueError(f"stage {n} outside [1, {self.horizon}]")
        pieces = self._entry(alpha).pieces
        pos = bisect.bisect_right([p[0] for p in pieces], n) - 1
        s = pieces[pos][1]
        if within is not None:
            keep = set(within)
            s = frozenset(x for x in s if x in keep)
        return s

    def materialized(self) -> List[Ordinal]:
        return sorted(self._memo)

    def construction(self, alpha: Ordinal) -> dict:
        e = self._entry(alpha)
        out = {"alpha": str(alpha), "kind": e.kind}
        if e.kind == "successor":
            out["threshold"] = e.threshold
        if e.kind == "limit":
            out["sequence"] = [{"delta": str(dl), "n": n} for dl, n in e.sequence]
        return out

    def size_profile(self, alpha: Ordinal) -> List[dict]:
        return [
            {"from": start, "to": end - 1, "size": len(s)}
            for start, end, s in self._segments(alpha)
        ]

    # -- clause checks ------------------------------------------------------

    def check_lemma_clauses(
        self,
        alpha: Ordinal,
        n_max: int,
        betas: Optional[Sequence[Ordinal]] = None,
        epsilons: Sequence[Fraction] = EPSILONS,
    ) -> dict:
        """Check (i), (ii), (iv) at every ``1 <= n <= n_max``; report (iii) and (v).

        (iii): for each β <= α the first stage at which β enters, searched up
        to the horizon.  The default βs are 0..3, ω and the partial sums of the
        normal form of α.
        (v): for each ε the least stage from which ``|u|/(n+1) < ε`` holds
        through the horizon.
        """
        if n_max + 1 > self.horizon:
            raise ValueError("n_max must stay below the horizon")
        violations = []
        for n in range(1, n_max + 1):
            s = self.u(alpha, n)
            if not len(s) < n + 1:
                violations.append({"clause": "i", "n": n, "size": len(s)})
            if alpha not in s or not s <= self.u(alpha, n + 1):
                violations.append({"clause": "ii", "n": n})
            for beta in s:
                expect = frozenset(x for x in s if x <= beta)
                if self.u(beta, n) != expect:
                    violations.append({
                        "clause": "iv", "n": n, "beta": str(beta),
                        "u_beta": _show(self.u(beta, n)), "expected": _show(expect),
                    })
        if betas is None:
            betas = default_betas(alpha)
        entries = []
        for beta in sorted(set(betas)):
            if beta > alpha:
                continue
            stage = self.first_stage(beta, alpha)
            entries.append({
                "beta": str(beta),
                "enters_at": stage,
                "within_n_max": stage is not None and stage <= n_max,
            })
        ratios = []
        for eps in epsilons:
            last_bad = 0
            for start, end, s in self._segments(alpha):
                top = min(end - 1, _last_above(len(s), eps))
                if top >= start:
                    last_bad = max(last_bad, top)
            threshold = last_bad + 1 if last_bad < self.horizon else None
            ratios.append({"epsilon": str(eps), "from": threshold})
        return {
            "alpha": str(alpha),
            "n_max": n_max,
            "horizon": self.horizon,
            "construction": self.construction(alpha),
            "violations": violations,
            "clause_iii": entries,
            "clause_v": ratios,
            "ok": not violations
            and all(r["from"] is not None for r in ratios)
            and all(e["enters_at"] is not None for e in entries),
        }


def default_betas(alpha: Ordinal) -> List[Ordinal]:
    picks = [Ordinal.finite(k) for k in range(4)] + [Ordinal(((1, 1),))]
    picks += [Ordinal(alpha.terms[:i]) for i in range(1, len(alpha.terms) + 1)]
    return sorted({b for b in picks if b <= alpha})


def _last_above(size: int, eps: Fraction) -> int:
    """Largest ``n`` with ``size / (n + 1) >= eps``."""
    q = Fraction(size) / eps
    return q.numerator // q.denominator - 1


def _merge(pieces: Pieces) -> Pieces:
    out: Pieces = []
    for start, s in pieces:
        if out and out[-1][1] == s:
            continue
        out.append((start, s))
    return out


def _show(s) -> List[str]:
    return [str(x) for x in sorted(s)]
