"""Concrete models of PA⁻: the standard naturals and ℤ[X]⁺.

ℤ[X]⁺ is the nonnegative part of the discretely ordered ring ℤ[X], ordered
by the sign of the leading coefficient.  It is a Diophantine-correct model:
any polynomial identity among its elements survives evaluation at a large
enough natural number.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True, order=False)
class PolyElem:
    """Integer polynomial ``sum(coeffs[i] * X**i)``; zero or positive leading coefficient."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(v) for v in c))
        if self.coeffs and self.coeffs[-1] < 0:
            raise ValueError(f"{self.coeffs} is negative in ℤ[X]")

    @classmethod
    def const(cls, n: int) -> "PolyElem":
        return cls((n,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_standard(self) -> bool:
        return self.degree <= 0

    def __add__(self, other: "PolyElem") -> "PolyElem":
        return poly_add(self, other)

    def __mul__(self, other: "PolyElem") -> "PolyElem":
        return poly_mul(self, other)

    def __le__(self, other: "PolyElem") -> bool:
        return poly_le(self, other)

    def __lt__(self, other: "PolyElem") -> bool:
        return poly_le(self, other) and self != other

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def to_json(self) -> List[int]:
        return list(self.coeffs)


X = PolyElem((0, 1))
ZERO = PolyElem()
ONE = PolyElem((1,))


def _trim(c: List[int]) -> Tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def sub_coeffs(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def add_coeffs(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def mul_coeffs(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_add(a: PolyElem, b: PolyElem) -> PolyElem:
    return PolyElem(add_coeffs(a.coeffs, b.coeffs))


def poly_mul(a: PolyElem, b: PolyElem) -> PolyElem:
    return PolyElem(mul_coeffs(a.coeffs, b.coeffs))


def poly_le(a: PolyElem, b: PolyElem) -> bool:
    """``a <= b`` iff ``b - a`` is zero or has positive leading coefficient."""
    d = sub_coeffs(b.coeffs, a.coeffs)
    return not d or d[-1] > 0


def poly_minus(a: PolyElem, b: PolyElem) -> Optional[PolyElem]:
    """The ``z`` with ``a + z = b`` when ``a <= b``, else ``None``."""
    d = sub_coeffs(b.coeffs, a.coeffs)
    if d and d[-1] < 0:
        return None
    return PolyElem(d)


def eval_at(p, N: int) -> int:
    """Value of ``p`` (a :class:`PolyElem` or coefficient sequence) at ``X = N``."""
    coeffs = p.coeffs if isinstance(p, PolyElem) else p
    v = 0
    for c in reversed(coeffs):
        v = v * N + c
    return v


def nonneg_threshold(elems: Iterable[PolyElem]) -> int:
    """An ``N0`` with ``eval_at(p, N) >= 0`` for every ``N >= N0`` and ``p`` in ``elems``.

    For a polynomial with negative coefficients, every positive root is below
    ``1 + max|c_i| / c_lead`` taken over the negative ``c_i``.
    """
    best = 0
    for p in elems:
        coeffs = p.coeffs if isinstance(p, PolyElem) else tuple(p)
        neg = [-c for c in coeffs[:-1] if c < 0]
        if not neg:
            continue
        bound = 1 + Fraction(max(neg), coeffs[-1])
        best = max(best, math.ceil(bound))
    return best


def operand(p) -> str:
    """``str(p)``, parenthesized when it is a sum."""
    text = str(p)
    return f"({text})" if "+" in text else text


def format_poly(coeffs: Sequence[int]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            xp = "X" if i == 1 else f"X^{i}"
            body = xp if mag == 1 else f"{mag}*{xp}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


_MONO = re.compile(r"^(?:(\d+)\*?)?(X)(?:\^(\d+))?$|^(\d+)$")


def parse_poly(text) -> PolyElem:
    """Accepts ``[c0, c1, ...]`` lists or text like ``3*X^2+X+1`` / ``X^2-X``."""
    if isinstance(text, PolyElem):
        return text
    if isinstance(text, (list, tuple)):
        return PolyElem(tuple(int(c) for c in text))
    if isinstance(text, int):
        return PolyElem.const(text)
    s = str(text).replace(" ", "")
    if s.startswith("["):
        return PolyElem(tuple(int(c) for c in s.strip("[]").split(",") if c))
    if not s:
        raise ValueError("empty polynomial")
    coeffs: Dict[int, int] = {}
    for sign, term in re.findall(r"([+-]?)([^+-]+)", s):
        m = _MONO.match(term)
        if m is None:
            raise ValueError(f"cannot parse polynomial term {term!r} in {text!r}")
        if m.group(4) is not None:
            c, e = int(m.group(4)), 0
        else:
            c = int(m.group(1)) if m.group(1) else 1
            e = int(m.group(3)) if m.group(3) else 1
        coeffs[e] = coeffs.get(e, 0) + (-c if sign == "-" else c)
    top = max(coeffs) if coeffs else -1
    return PolyElem(tuple(coeffs.get(i, 0) for i in range(top + 1)))


# -- models -----------------------------------------------------------------


@dataclass(frozen=True)
class ModelHandle:
    """An LA structure given by its operations and an element sampler."""

    kind: str
    zero: object
    one: object
    add: Callable
    mul: Callable
    le: Callable
    minus: Callable  # witness z with a + z = b, or None
    sample: Callable[[random.Random], object]

    def lt(self, a, b) -> bool:
        return self.le(a, b) and a != b


def _nat_minus(a: int, b: int) -> Optional[int]:
    return b - a if a <= b else None


def standard_nat(max_value: int = 1000) -> ModelHandle:
    def sample(rng: random.Random) -> int:
        return rng.choice((0, 1, 2)) if rng.random() < 0.1 else rng.randint(0, max_value)

    return ModelHandle(
        "standard-nat", 0, 1,
        lambda a, b: a + b, lambda a, b: a * b, lambda a, b: a <= b,
        _nat_minus, sample,
    )


def random_poly(rng: random.Random, max_degree: int = 4, max_coeff: int = 20) -> PolyElem:
    """Rejection sample ``deg <= max_degree``, coefficients in ``[-max_coeff, max_coeff]``."""
    while True:
        deg = rng.randint(0, max_degree)
        coeffs = [rng.randint(-max_coeff, max_coeff) for _ in range(deg + 1)]
        coeffs = list(_trim(coeffs))
        if not coeffs or coeffs[-1] > 0:
            return PolyElem(tuple(coeffs))


def poly_semiring(max_degree: int = 4, max_coeff: int = 20) -> ModelHandle:
    specials = (ZERO, ONE, PolyElem((2,)), X, PolyElem((1, 1)))

    def sample(rng: random.Random) -> PolyElem:
        if rng.random() < 0.1:
            return rng.choice(specials)
        return random_poly(rng, max_degree, max_coeff)

    return ModelHandle(
        "poly-semiring", ZERO, ONE, poly_add, poly_mul, poly_le, poly_minus, sample
    )


def get_model(name: str) -> ModelHandle:
    if name in ("nat", "standard-nat", "N"):
        return standard_nat()
    if name in ("poly", "poly-semiring"):
        return poly_semiring()
    raise ValueError(f"unknown model {name!r} (expected 'nat' or 'poly')")


AXIOMS = {
    1: "∀x,y,z((x+y)+z=x+(y+z))",
    2: "∀x,y(x+y=y+x)",
    3: "∀x,y,z((x·y)·z=x·(y·z))",
    4: "∀x,y(x·y=y·x)",
    5: "∀x,y,z(x·(y+z)=x·y+x·z)",
    6: "∀x((x+0=x)∧(x·0=0))",
    7: "∀x(x·1=x)",
    8: "∀x,y,z((x<y∧y<z)→x<z)",
    9: "∀x x≤x",
    10: "∀x,y(x<y∨x=y∨y<x)",
    11: "∀x,y,z(x<y→x+z<y+z)",
    12: "∀x,y,z(0<z∧x<y→x·z<y·z)",
    13: "∀x,y(x<y→∃z(x+z=y))",
    14: "0<1∧∀x(x>0→x≥1)",
    15: "∀x(x≥0)",
}


def _axiom_checks(M: ModelHandle) -> Dict[int, Callable]:
    add, mul, le, lt = M.add, M.mul, M.le, M.lt
    zero, one = M.zero, M.one

    def ax13(x, y, z):
        if not lt(x, y):
            return True
        w = M.minus(x, y)
        return w is not None and add(x, w) == y

    def ax10(x, y, z):
        # exactly one of the three alternatives
        return [lt(x, y), x == y, lt(y, x)].count(True) == 1

    return {
        1: lambda x, y, z: add(add(x, y), z) == add(x, add(y, z)),
        2: lambda x, y, z: add(x, y) == add(y, x),
        3: lambda x, y, z: mul(mul(x, y), z) == mul(x, mul(y, z)),
        4: lambda x, y, z: mul(x, y) == mul(y, x),
        5: lambda x, y, z: mul(x, add(y, z)) == add(mul(x, y), mul(x, z)),
        6: lambda x, y, z: add(x, zero) == x and mul(x, zero) == zero,
        7: lambda x, y, z: mul(x, one) == x,
        8: lambda x, y, z: not (lt(x, y) and lt(y, z)) or lt(x, z),
        9: lambda x, y, z: le(x, x),
        10: ax10,
        11: lambda x, y, z: not lt(x, y) or lt(add(x, z), add(y, z)),
        12: lambda x, y, z: not (lt(zero, z) and lt(x, y)) or lt(mul(x, z), mul(y, z)),
        13: ax13,
        14: lambda x, y, z: lt(zero, one) and (not lt(zero, x) or le(one, x)),
        15: lambda x, y, z: le(zero, x),
    }


def check_axioms(model: ModelHandle, samples: int, seed: int) -> dict:
    """Test each of the 15 PA⁻ axioms on ``samples`` seeded instantiations.

    Failures are reported with the offending elements, never raised.
    """
    rng = random.Random(seed)
    checks = _axiom_checks(model)
    report = {"model": model.kind, "samples": samples, "seed": seed, "axioms": []}
    for number in sorted(checks):
        passed = 0
        failures = []
        for _ in range(samples):
            x, y, z = model.sample(rng), model.sample(rng), model.sample(rng)
            # half the time make the antecedent of an implication likely to hold
            if number in (8, 11, 12, 13) and rng.random() < 0.5:
                x, y, z = _ordered(model, x, y, z)
            if checks[number](x, y, z):
                passed += 1
            elif len(failures) < 5:
                failures.append([_show(v) for v in (x, y, z)])
        report["axioms"].append({
            "axiom": number,
            "statement": AXIOMS[number],
            "tested": samples,
            "passed": passed,
            "failures": failures,
        })
    report["all_passed"] = all(a["passed"] == a["tested"] for a in report["axioms"])
    return report


def _ordered(M: ModelHandle, *vals):
    out = list(vals)
    for i in range(len(out)):
        for j in range(len(out) - 1 - i):
            if M.lt(out[j + 1], out[j]):
                out[j], out[j + 1] = out[j + 1], out[j]
    return tuple(out)


def _show(v):
    return str(v) if isinstance(v, PolyElem) else v
