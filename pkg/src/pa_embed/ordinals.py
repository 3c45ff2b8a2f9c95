"""Ordinal notations below ω^ω in Cantor normal form."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple


class NotALimit(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Ordinal:
    """``sum(ω**e * c for e, c in terms)`` with strictly decreasing exponents.

    Tuple order on ``terms`` is the ordinal order.
    """

    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        terms = tuple((int(e), int(c)) for e, c in self.terms)
        for e, c in terms:
            if e < 0 or c <= 0:
                raise ValueError(f"bad Cantor normal form term ω^{e}·{c}")
        if any(terms[i][0] <= terms[i + 1][0] for i in range(len(terms) - 1)):
            raise ValueError("exponents must be strictly decreasing")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        return cls(((0, n),)) if n else cls()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    def succ(self) -> "Ordinal":
        if self.is_successor:
            e, c = self.terms[-1]
            return Ordinal(self.terms[:-1] + ((0, c + 1),))
        return Ordinal(self.terms + ((0, 1),))

    def pred(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} has no predecessor")
        c = self.terms[-1][1]
        return Ordinal(self.terms[:-1] + (((0, c - 1),) if c > 1 else ()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Ordinal({self})"


def fundamental_sequence(delta: Ordinal, i: int) -> Ordinal:
    """``δ[i]``: the last term ``ω^e·c`` becomes ``ω^e·(c-1) + ω^(e-1)·(i+1)``."""
    if not delta.is_limit:
        raise NotALimit(f"{delta} is not a limit ordinal")
    if i < 0:
        raise ValueError("index must be nonnegative")
    e, c = delta.terms[-1]
    head = delta.terms[:-1] + (((e, c - 1),) if c > 1 else ())
    return Ordinal(head + ((e - 1, i + 1),))


_TERM = re.compile(r"^(?:(w|ω)(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_ordinal(text: str) -> Ordinal:
    """``w^2*3+w*2+5`` style notation (``ω`` also accepted)."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty ordinal notation")
    terms = []
    for piece in s.split("+"):
        m = _TERM.match(piece)
        if m is None:
            raise ValueError(f"cannot parse ordinal term {piece!r}")
        if m.group(4) is not None:
            e, c = 0, int(m.group(4))
        else:
            e = int(m.group(2)) if m.group(2) else 1
            c = int(m.group(3)) if m.group(3) else 1
        if c == 0:
            continue
        terms.append((e, c))
    if any(terms[i][0] <= terms[i + 1][0] for i in range(len(terms) - 1)):
        raise ValueError(f"exponents must be strictly decreasing in {text!r}")
    return Ordinal(tuple(terms))
