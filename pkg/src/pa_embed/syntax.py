"""Terms and Diophantine formulas of the language of arithmetic.

A term is a tree over ``0``, ``1``, variables, ``+`` and ``*``.  Free
variables are written ``x<i>`` and existentially bound ones ``y<j>``; a
Diophantine formula is ``∃y0∃y1(t1=t2)`` (or just ``t1=t2``).

Every term has a polynomial *form*: a tuple of ``(monomial, coefficient)``
pairs sorted by the degree-lexicographic monomial order, where a monomial is
``(degree, variables)`` and ``variables`` is a sorted tuple of variable keys.
The variable key of ``x<i>`` is ``(0, i)`` and of ``y<j>`` is ``(1, j)``.
Forms compare as plain tuples, which gives the total order used to put the
two sides of a canonical equation in order.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

VarKey = Tuple[int, int]
Monomial = Tuple[int, Tuple[VarKey, ...]]
Form = Tuple[Tuple[Monomial, int], ...]

FREE, BOUND = 0, 1
EXISTS = "∃"
ZERO_FORM: Form = ()
ONE_MONOMIAL: Monomial = (0, ())


class ParseError(ValueError):
    """Malformed term or formula text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Var:
    index: int
    bound: bool = False

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable indices are nonnegative")

    @property
    def key(self) -> VarKey:
        return (BOUND if self.bound else FREE, self.index)

    def __str__(self) -> str:
        return f"{'y' if self.bound else 'x'}{self.index}"


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, Plus) else str(self.right)
        return f"{self.left}+{right}"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        left = f"({self.left})" if isinstance(self.left, Plus) else str(self.left)
        right = (
            f"({self.right})" if isinstance(self.right, (Plus, Times)) else str(self.right)
        )
        return f"{left}*{right}"


Term = Union[Zero, One, Var, Plus, Times]


def var_from_key(key: VarKey) -> Var:
    return Var(key[1], bound=key[0] == BOUND)


def key_name(key: VarKey) -> str:
    return str(var_from_key(key))


# -- tokenizer / parser ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(∃|E)|([xy])(\d+)|([01+*=()]))")


def tokenize(text: str) -> List[Tuple[str, int]]:
    """Split ``text`` into ``(token, offset)`` pairs."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append((EXISTS, start))
        elif m.group(2):
            tokens.append((m.group(2) + str(int(m.group(3))), start))
        else:
            tokens.append((m.group(4), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def expect(self, tok: str):
        if self.peek() != tok:
            found = self.peek()
            raise ParseError(
                f"expected {tok!r}, found {'end of input' if found is None else repr(found)}",
                self.offset(),
            )
        self.i += 1

    def expr(self) -> Term:
        node = self.term()
        while self.peek() == "+":
            self.i += 1
            node = Plus(node, self.term())
        return node

    def term(self) -> Term:
        node = self.factor()
        while self.peek() == "*":
            self.i += 1
            node = Times(node, self.factor())
        return node

    def factor(self) -> Term:
        tok = self.peek()
        if tok == "0":
            self.i += 1
            return Zero()
        if tok == "1":
            self.i += 1
            return One()
        if tok is not None and tok[0] in "xy":
            self.i += 1
            return Var(int(tok[1:]), bound=tok[0] == "y")
        if tok == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok is None else repr(tok)
        raise ParseError(f"expected a term, found {found}", self.offset())

    def done(self):
        if self.i != len(self.tokens):
            raise ParseError(f"unexpected {self.peek()!r}", self.offset())


def parse_term(text: str) -> Term:
    """Parse ``x<digits>``/``0``/``1`` terms built with ``+``, ``*`` and parentheses."""
    p = _Parser(text)
    t = p.expr()
    p.done()
    return t


# -- polynomial forms -------------------------------------------------------


def _form_mul(a: Dict[Tuple[VarKey, ...], int], b: Dict[Tuple[VarKey, ...], int]):
    out: Dict[Tuple[VarKey, ...], int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(sorted(ma + mb))
            out[m] = out.get(m, 0) + ca * cb
    return out


def _term_dict(t: Term) -> Dict[Tuple[VarKey, ...], int]:
    if isinstance(t, Zero):
        return {}
    if isinstance(t, One):
        return {(): 1}
    if isinstance(t, Var):
        return {(t.key,): 1}
    a, b = _term_dict(t.left), _term_dict(t.right)
    if isinstance(t, Plus):
        out = dict(a)
        for m, c in b.items():
            out[m] = out.get(m, 0) + c
        return out
    return _form_mul(a, b)


def make_form(coeffs: Mapping[Tuple[VarKey, ...], int]) -> Form:
    """Canonical form from a ``variables -> coefficient`` map (zeros dropped)."""
    return tuple(sorted(((len(m), m), c) for m, c in coeffs.items() if c))


def term_form(t: Term) -> Form:
    return make_form(_term_dict(t))


def form_tokens(form: Form) -> int:
    """Token count of the flat serialization of ``form``."""
    if not form:
        return 1
    weight = sum(c * (2 * deg if deg else 2) for (deg, _), c in form)
    return weight - 1


def form_term(form: Form) -> Term:
    """Flat term for a form: monomials in decreasing order, each repeated."""
    if not form:
        return Zero()
    pieces: List[Term] = []
    for (deg, variables), c in reversed(form):
        if deg == 0:
            mono: Term = One()
        else:
            mono = var_from_key(variables[0])
            for k in variables[1:]:
                mono = Times(mono, var_from_key(k))
        pieces.extend([mono] * c)
    node = pieces[0]
    for p in pieces[1:]:
        node = Plus(node, p)
    return node


def form_variables(form: Form) -> set:
    return {k for (_, variables), _ in form for k in variables}


def relabel_form(form: Form, mapping: Mapping[VarKey, VarKey]) -> Form:
    out: Dict[Tuple[VarKey, ...], int] = {}
    for (_, variables), c in form:
        m = tuple(sorted(mapping.get(k, k) for k in variables))
        out[m] = out.get(m, 0) + c
    return make_form(out)


def cancel_common(a: Form, b: Form) -> Tuple[Form, Form]:
    da, db = dict(a), dict(b)
    for m in set(da) & set(db):
        low = min(da[m], db[m])
        da[m] -= low
        db[m] -= low
    return (
        tuple(sorted((m, c) for m, c in da.items() if c)),
        tuple(sorted((m, c) for m, c in db.items() if c)),
    )


def eval_form(form: Form, env: Mapping[VarKey, object], one=1, zero=0):
    """Evaluate ``form`` with ``env`` giving values for its variable keys.

    Works for any commutative semiring values supporting ``+`` and ``*``.
    """
    total = zero
    for (_, variables), c in form:
        v = one
        for k in variables:
            v = v * env[k]
        for _ in range(c):
            total = total + v
    return total


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class DioFormula:
    """``∃y0…∃y(k-1) (lhs = rhs)`` with ``k = bound_count``."""

    bound_count: int
    lhs: Term
    rhs: Term

    @property
    def free_vars(self) -> List[int]:
        return sorted(
            k[1] for k in form_variables(term_form(self.lhs)) | form_variables(term_form(self.rhs))
            if k[0] == FREE
        )

    def __str__(self) -> str:
        body = f"{self.lhs}={self.rhs}"
        if not self.bound_count:
            return body
        prefix = "".join(f"{EXISTS}y{j}" for j in range(self.bound_count))
        return f"{prefix}({body})"


def parse_formula(text: str) -> DioFormula:
    """Parse ``t1=t2`` or ``∃y0∃y1(t1=t2)``; ``E`` may stand for ``∃``.

    Quantified variables must be distinct ``y`` variables.  They are
    renumbered ``y0, y1, ...`` in prefix order, and every ``y`` in the body
    must be bound.
    """
    p = _Parser(text)
    bound: List[int] = []
    while p.peek() == EXISTS:
        p.i += 1
        tok = p.peek()
        if tok is None or tok[0] != "y":
            raise ParseError("expected a y variable after the quantifier", p.offset())
        j = int(tok[1:])
        if j in bound:
            raise ParseError(f"y{j} quantified twice", p.offset())
        bound.append(j)
        p.i += 1
    if bound:
        p.expect("(")
    lhs_at = p.offset()
    lhs = p.expr()
    p.expect("=")
    rhs = p.expr()
    if bound:
        p.expect(")")
    p.done()
    rename = {(BOUND, j): (BOUND, i) for i, j in enumerate(bound)}
    used = {k for k in _term_keys(lhs) | _term_keys(rhs) if k[0] == BOUND}
    stray = used - set(rename)
    if stray:
        raise ParseError(f"unbound variable {key_name(min(stray))}", lhs_at)
    return DioFormula(len(bound), _rename_term(lhs, rename), _rename_term(rhs, rename))


def _term_keys(t: Term) -> set:
    if isinstance(t, Var):
        return {t.key}
    if isinstance(t, (Plus, Times)):
        return _term_keys(t.left) | _term_keys(t.right)
    return set()


def _rename_term(t: Term, mapping: Mapping[VarKey, VarKey]) -> Term:
    if isinstance(t, Var):
        return var_from_key(mapping.get(t.key, t.key))
    if isinstance(t, Plus):
        return Plus(_rename_term(t.left, mapping), _rename_term(t.right, mapping))
    if isinstance(t, Times):
        return Times(_rename_term(t.left, mapping), _rename_term(t.right, mapping))
    return t


def canonical_pair(lhs: Form, rhs: Form) -> Tuple[int, Form, Form]:
    """Canonical ``(bound_count, smaller side, larger side)`` of an equation.

    Common monomials are cancelled, unused bound variables are dropped, and
    the remaining bound variables are renumbered by the renaming that gives
    the smallest ordered pair of sides.
    """
    lhs, rhs = cancel_common(lhs, rhs)
    used = sorted(k for k in form_variables(lhs) | form_variables(rhs) if k[0] == BOUND)
    best = None
    for perm in itertools.permutations(range(len(used))):
        mapping = {k: (BOUND, perm[i]) for i, k in enumerate(used)}
        a, b = relabel_form(lhs, mapping), relabel_form(rhs, mapping)
        pair = (a, b) if a <= b else (b, a)
        if best is None or pair < best:
            best = pair
    return len(used), best[0], best[1]


def formula_from_forms(bound_count: int, lhs: Form, rhs: Form) -> DioFormula:
    return DioFormula(bound_count, form_term(lhs), form_term(rhs))


def formula_forms(phi: DioFormula) -> Tuple[Form, Form]:
    return term_form(phi.lhs), term_form(phi.rhs)


def canonicalize(phi: DioFormula) -> DioFormula:
    """Idempotent normal form; see :func:`canonical_pair`."""
    return formula_from_forms(*canonical_pair(*formula_forms(phi)))


def is_canonical(phi: DioFormula) -> bool:
    return canonicalize(phi) == phi


def length(phi: DioFormula) -> int:
    """Token count of the serialization of ``phi``.

    Alphabet: ``∃``, variables, ``0``, ``1``, ``+``, ``*``, ``=``, ``(``, ``)``.
    """
    return len(tokenize(str(phi)))


def pair_length(bound_count: int, lhs: Form, rhs: Form) -> int:
    """:func:`length` of ``formula_from_forms(...)`` computed from the forms."""
    overhead = 2 * bound_count + 2 if bound_count else 0
    return form_tokens(lhs) + 1 + form_tokens(rhs) + overhead


def eval_formula(phi: DioFormula, env: Mapping[int, int], witness_bound: int = 20) -> bool:
    """Truth of ``phi`` in ℕ under ``env`` (free index -> value).

    Quantifier-free formulas are evaluated exactly; bound variables are
    searched in the box ``[0, witness_bound]``, so ``False`` for a quantified
    formula only means "no witness in the box".
    """
    lhs, rhs = formula_forms(phi)
    base = {(FREE, i): v for i, v in env.items()}
    for ys in itertools.product(range(witness_bound + 1), repeat=phi.bound_count):
        full = dict(base)
        full.update({(BOUND, j): y for j, y in enumerate(ys)})
        if eval_form(lhs, full) == eval_form(rhs, full):
            return True
    return False


def iter_subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, (Plus, Times)):
        yield from iter_subterms(t.left)
        yield from iter_subterms(t.right)


def system_variables(formulas: Iterable[DioFormula]) -> List[int]:
    out = set()
    for phi in formulas:
        out.update(phi.free_vars)
    return sorted(out)
