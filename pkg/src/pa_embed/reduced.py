"""Sequences modulo the cofinite filter or a regular filter on ω.

Only finite prefixes are ever inspected, so every judgment here is relative
to the prefix length it carries.  A regular filter is presented by its
witnessing family ``{A_n}``: members of the filter such that each point of ω
lies in only finitely many of them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence


@dataclass(frozen=True)
class EqCertificate:
    kind: str  # "cofinite-tail" or "regular-family"
    n0: int
    prefix_length: int
    n1: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "n0": self.n0, "prefix_length": self.prefix_length}
        if self.n1 is not None:
            out["n1"] = self.n1
        return out


def _check_lengths(f: Sequence[int], g: Sequence[int]):
    if len(f) != len(g):
        raise ValueError(f"prefix lengths differ: {len(f)} vs {len(g)}")
    if not f:
        raise ValueError("prefixes must be nonempty")


def agreement_start(f: Sequence[int], g: Sequence[int]) -> Optional[int]:
    """Least ``n0`` with ``f[n] == g[n]`` for all ``n0 <= n < L``; None if they differ at the end."""
    _check_lengths(f, g)
    n0 = len(f)
    while n0 > 0 and f[n0 - 1] == g[n0 - 1]:
        n0 -= 1
    return None if n0 == len(f) else n0


def pointwise_le_start(f: Sequence[int], g: Sequence[int]) -> Optional[int]:
    """Least ``n0`` with ``f[n] <= g[n]`` on the rest of the prefix."""
    _check_lengths(f, g)
    n0 = len(f)
    while n0 > 0 and f[n0 - 1] <= g[n0 - 1]:
        n0 -= 1
    return None if n0 == len(f) else n0


def eq_mod_cofinite(f: Sequence[int], g: Sequence[int]) -> Optional[EqCertificate]:
    n0 = agreement_start(f, g)
    if n0 is None:
        return None
    return EqCertificate("cofinite-tail", n0, len(f))


# -- witnessing families -----------------------------------------------------


def nth_prime(n: int) -> int:
    """0-indexed: nth_prime(0) == 2."""
    count, k = -1, 1
    while count < n:
        k += 1
        if all(k % p for p in range(2, int(k**0.5) + 1)):
            count += 1
    return k


@dataclass(frozen=True)
class RegularFamily:
    """``member(n, k)`` decides ``k in A_n``."""

    name: str
    member: Callable[[int, int], bool]
    params: tuple = ()

    def bitmap(self, n: int, length: int) -> List[bool]:
        return [self.member(n, k) for k in range(length)]

    def spec(self) -> dict:
        return {"family": self.name, "params": list(self.params)}


def tails_family() -> RegularFamily:
    return RegularFamily("tails", lambda n, k: k >= n)


def diagonal_family() -> RegularFamily:
    return RegularFamily("diagonal", lambda n, k: k == n or k >= 2 * n)


def arithmetic_family(cutoff: int) -> RegularFamily:
    """``A_n = {k >= cutoff : p_n divides k}``; point-finite when ``cutoff >= 1``."""
    primes: dict = {}

    def member(n: int, k: int) -> bool:
        if n not in primes:
            primes[n] = nth_prime(n)
        return k >= cutoff and k % primes[n] == 0

    return RegularFamily("arithmetic", member, (cutoff,))


def full_family() -> RegularFamily:
    """``A_n = ω`` for every n: not point-finite (a negative example)."""
    return RegularFamily("full", lambda n, k: True)


def custom_family(sets: Sequence[Sequence[int]], tail: Optional[dict] = None) -> RegularFamily:
    """``A_n = sets[n] ∪ [scale*n + offset, ∞)``.

    Without ``tail`` the listed sets are the whole family and ``A_n`` is
    empty past the end of the list.
    """
    explicit = [frozenset(s) for s in sets]
    scale = offset = None
    if tail is not None:
        scale, offset = int(tail.get("scale", 1)), int(tail.get("offset", 0))

    def member(n: int, k: int) -> bool:
        if n < len(explicit) and k in explicit[n]:
            return True
        return scale is not None and k >= scale * n + offset

    params = ([sorted(s) for s in explicit], None if tail is None else [scale, offset])
    return RegularFamily("custom", member, (json.dumps(params),))


def get_family(spec: str) -> RegularFamily:
    """``tails``, ``diagonal``, ``full``, ``arithmetic:k`` or ``custom:<file.json>``."""
    name, _, arg = spec.partition(":")
    if name == "tails":
        return tails_family()
    if name == "diagonal":
        return diagonal_family()
    if name == "full":
        return full_family()
    if name == "arithmetic":
        return arithmetic_family(int(arg) if arg else 1)
    if name == "custom":
        with open(arg) as fh:
            data = json.load(fh)
        return custom_family(data["sets"], data.get("tail"))
    raise ValueError(f"unknown family {spec!r}")


def eq_mod_regular(
    f: Sequence[int],
    g: Sequence[int],
    family: RegularFamily,
    n0: int,
    search_limit: int = 10_000,
) -> Optional[EqCertificate]:
    """Certificate that ``f`` and ``g`` agree on a family member avoiding ``{0..n0}``.

    Given agreement from ``n0`` on, any ``A_{n1}`` disjoint from
    ``{0, ..., n0}`` witnesses equality modulo the filter.  ``n1`` is searched
    upward to ``search_limit``; ``None`` means none was found, not that the
    sequences differ.
    """
    _check_lengths(f, g)
    if any(f[k] != g[k] for k in range(n0, len(f))):
        raise ValueError(f"sequences do not agree from index {n0}")
    for n1 in range(search_limit + 1):
        if not any(family.member(n1, k) for k in range(n0 + 1)):
            members = [k for k in range(len(f)) if family.member(n1, k)]
            if all(f[k] == g[k] for k in members):
                return EqCertificate("regular-family", n0, len(f), n1)
    return None


def check_point_finiteness(family: RegularFamily, length: int, n_max: int) -> dict:
    """Which ``A_n`` (n <= n_max) contain each ``k < length``.

    A point is flagged when it still belongs to ``A_{n_max}``, i.e. its
    membership list might keep growing.  Empty members on the prefix are
    listed too.
    """
    points = []
    for k in range(length):
        ns = [n for n in range(n_max + 1) if family.member(n, k)]
        points.append({
            "k": k,
            "members": ns,
            "count": len(ns),
            "flagged": family.member(n_max, k),
        })
    empty = [n for n in range(n_max + 1) if not any(family.member(n, k) for k in range(length))]
    return {
        **family.spec(),
        "length": length,
        "n_max": n_max,
        "points": points,
        "flagged": [p["k"] for p in points if p["flagged"]],
        "empty_on_prefix": empty,
        "point_finite_on_prefix": not any(p["flagged"] for p in points),
    }
