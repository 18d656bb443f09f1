"""Parsers and printers for the small wedge/tensor expression grammar.

Grammar (shared by documents and the CLI):

    rational   := 123 | 1/2           (sign comes from +/- between terms)
    label      := ident['*'] | pi(ident['*'])
    combo      := ['-'] term (('+'|'-') term)*
    form term  := [rational] label* W label*          W in { ∧, ^, /\\ }
    endo term  := [rational] label T label*  |  [rational] ad(label)
    gamma term := [rational] label* T label* T label* (l-arg, a-arg, value)
    tau term   := [rational] label T label*           (value, l-arg)
    eps        := entry table, or sum of  [rational] label* W (label* W label*)

with T in { ⊗, (x) }.  Starred wedge pairs expand through the dual-pairing
convention <ei*⊗ej*, ek⊗el> = (-1)^{|ek||ej|} dik djl, i.e.

    (ei*∧ej*)(ek,el) = <ei*⊗ej*, ek⊗el> - (-1)^{|ei||ej|} <ej*⊗ei*, ek⊗el>

so odd-odd wedges have symmetric values and ei*∧ei* is nonzero for odd i.
The eps wedge V∧(A∧B) is the shuffle-wedge of the curried 2-form (A∧B)(x,·)
with the scalar 1-form V, in that order (see the format docs).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .superlinalg import (
    ONE, ZERO, GradedLinearMap, SuperSpace, Vector, zero_vector,
)
from .liesuper import LieSuperAlgebra

__all__ = [
    "ExpressionError", "parse_combo", "parse_wedge_form", "parse_endo",
    "parse_gamma_tensor", "parse_tau_map", "parse_eps_wedge",
    "format_gamma_tensor", "format_endo", "format_tau_map",
]


class ExpressionError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1} in {text!r}")


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<num>\d+(?:/\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<tensor>⊗|\(x\))
      | (?P<wedge>∧|\^|/\\)
      | (?P<op>[+\-()*,])
    )""",
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExpressionError("unrecognized token", text, pos)
        if m.lastgroup is None:
            break
        tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression",
                                  self.text, len(self.text))
        self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            raise ExpressionError(f"expected {value or kind}", self.text, tok.pos)
        return tok

    def done(self) -> bool:
        return self.i >= len(self.tokens)


def _read_label(s: _Stream) -> str:
    """A basis label, optionally starred and optionally pi(...)-wrapped.

    A dual star must be glued to the label (no intervening whitespace);
    a free-standing '*' is the explicit multiplication operator.
    """
    tok = s.expect("ident")
    name = tok.value
    end = tok.pos + len(name)
    if name == "pi":
        s.expect("op", "(")
        inner = _read_label(s)
        closing = s.expect("op", ")")
        name = f"pi({inner})"
        end = closing.pos + 1
    nxt = s.peek()
    if nxt is not None and nxt.kind == "op" and nxt.value == "*" and nxt.pos == end:
        s.next()
        name += "*"
    return name


def _read_sign(s: _Stream, first: bool) -> Fraction | None:
    tok = s.peek()
    if tok is None:
        return None
    if tok.kind == "op" and tok.value in "+-":
        s.next()
        return Fraction(-1) if tok.value == "-" else ONE
    if first:
        return ONE
    raise ExpressionError("expected '+' or '-' between terms", s.text, tok.pos)


def _read_coeff(s: _Stream) -> Fraction:
    tok = s.peek()
    coeff = ONE
    if tok is not None and tok.kind == "num":
        s.next()
        coeff = Fraction(tok.value)
        nxt = s.peek()
        if nxt is not None and nxt.kind == "op" and nxt.value == "*":
            # explicit multiplication star, e.g. "2*e1"; a glued dual star
            # never follows a number
            s.next()
    return coeff


def _terms(s: _Stream):
    first = True
    while not s.done():
        sign = _read_sign(s, first)
        if sign is None:
            return
        first = False
        yield sign * _read_coeff(s)


def _index_of(space: SuperSpace, label: str, s: _Stream, starred: bool) -> int:
    stem = label[:-1] if label.endswith("*") else label
    if starred and not label.endswith("*"):
        raise ExpressionError(f"expected a dual label, got {label!r}", s.text, 0)
    if not starred and label.endswith("*"):
        stem = label
    try:
        return space.index(stem)
    except KeyError:
        raise ExpressionError(f"unknown basis label {stem!r}", s.text, 0) from None


def parse_combo(text: str, space: SuperSpace) -> Vector:
    """Linear combination of basis labels, e.g. ``e3 + 2 L2*`` or ``0``."""
    s = _Stream(text)
    out = list(zero_vector(space.dim))
    if [t.value for t in s.tokens] == ["0"]:
        return tuple(out)
    for coeff in _terms(s):
        label = _read_label(s)
        out[space.index(label)] += coeff
    return tuple(out)


def parse_wedge_form(text: str, space: SuperSpace) -> tuple[Vector, ...]:
    """Gram matrix of a sum of starred wedges, footnote convention."""
    s = _Stream(text)
    par = space.parities
    gram = [[ZERO] * space.dim for _ in range(space.dim)]
    for coeff in _terms(s):
        i = _index_of(space, _read_label(s), s, starred=True)
        s.expect("wedge")
        j = _index_of(space, _read_label(s), s, starred=True)
        sign = -1 if (par[i] * par[j]) % 2 else 1
        gram[i][j] += coeff * sign
        gram[j][i] -= coeff
    return tuple(tuple(r) for r in gram)


def parse_endo(text: str, algebra: LieSuperAlgebra) -> GradedLinearMap:
    """Endomorphism terms ``c e_i(x)e_j*`` and ``c ad(e_k)``."""
    space = algebra.space
    s = _Stream(text)
    rows = [list(zero_vector(space.dim)) for _ in range(space.dim)]
    if [t.value for t in s.tokens] == ["0"]:
        return GradedLinearMap.zero(space, space)
    for coeff in _terms(s):
        tok = s.peek()
        if tok is not None and tok.kind == "ident" and tok.value == "ad":
            s.next()
            s.expect("op", "(")
            x = _read_label(s)
            s.expect("op", ")")
            ad = algebra.ad(tuple(ONE if t == space.index(x) else ZERO
                                  for t in range(space.dim)))
            for r in range(space.dim):
                for c in range(space.dim):
                    rows[r][c] += coeff * ad.rows[r][c]
            continue
        value_idx = _index_of(space, _read_label(s), s, starred=False)
        s.expect("tensor")
        arg_idx = _index_of(space, _read_label(s), s, starred=True)
        rows[arg_idx][value_idx] += coeff
    return GradedLinearMap(space, space, tuple(tuple(r) for r in rows))


def parse_gamma_tensor(text: str, ell: SuperSpace, base: SuperSpace
                       ) -> tuple[tuple[Vector, ...], ...]:
    """Triple tensors L*(x)e*(x)L'*: first two slots are the l and base
    arguments, the third is the l* value; gamma(L)(e) = L'*."""
    s = _Stream(text)
    out = [[list(zero_vector(ell.dim)) for _ in range(base.dim)]
           for _ in range(ell.dim)]
    if [t.value for t in s.tokens] == ["0"]:
        return tuple(tuple(tuple(v) for v in row) for row in out)
    for coeff in _terms(s):
        l_arg = _index_of(ell, _read_label(s), s, starred=True)
        s.expect("tensor")
        a_arg = _index_of(base, _read_label(s), s, starred=True)
        s.expect("tensor")
        value = _index_of(ell, _read_label(s), s, starred=True)
        out[l_arg][a_arg][value] += coeff
    return tuple(tuple(tuple(v) for v in row) for row in out)


def parse_tau_map(text: str, ell: SuperSpace, base: SuperSpace) -> GradedLinearMap:
    """Terms ``c e_i(x)L_k*`` meaning tau(L_k) = c e_i."""
    s = _Stream(text)
    rows = [list(zero_vector(base.dim)) for _ in range(ell.dim)]
    if [t.value for t in s.tokens] == ["0"]:
        return GradedLinearMap.zero(ell, base)
    for coeff in _terms(s):
        value = _index_of(base, _read_label(s), s, starred=False)
        s.expect("tensor")
        l_arg = _index_of(ell, _read_label(s), s, starred=True)
        rows[l_arg][value] += coeff
    return GradedLinearMap(ell, base, tuple(tuple(r) for r in rows))


def parse_eps_wedge(text: str, ell: SuperSpace) -> tuple[tuple[Vector, ...], ...]:
    """Sum of terms V∧(A∧B) for l-duals V, A, B.

    Each term is the shuffle-wedge of the curried 2-form (A∧B)(x, ·) with
    the scalar 1-form V, in that order:

        eps(x, y) = (A∧B)(x, ·) V(y) - (-1)^{|x||y|} (A∧B)(y, ·) V(x)
    """
    s = _Stream(text)
    m = ell.dim
    par = ell.parities
    eps = [[list(zero_vector(m)) for _ in range(m)] for _ in range(m)]
    if [t.value for t in s.tokens] == ["0"]:
        return tuple(tuple(tuple(v) for v in row) for row in eps)
    for coeff in _terms(s):
        v_idx = _index_of(ell, _read_label(s), s, starred=True)
        s.expect("wedge")
        s.expect("op", "(")
        a_idx = _index_of(ell, _read_label(s), s, starred=True)
        s.expect("wedge")
        b_idx = _index_of(ell, _read_label(s), s, starred=True)
        s.expect("op", ")")
        inner = [[ZERO] * m for _ in range(m)]
        sign = -1 if (par[a_idx] * par[b_idx]) % 2 else 1
        inner[a_idx][b_idx] += Fraction(sign)
        inner[b_idx][a_idx] -= ONE
        for x in range(m):
            for y in range(m):
                swap = -1 if (par[x] * par[y]) % 2 else 1
                for k in range(m):
                    val = ZERO
                    if y == v_idx:
                        val += inner[x][k]
                    if x == v_idx:
                        val -= swap * inner[y][k]
                    if val != 0:
                        eps[x][y][k] += coeff * val
    return tuple(tuple(tuple(v) for v in row) for row in eps)


# ---------------------------------------------------------------------------
# printers (inverses of the parsers on canonical content)
# ---------------------------------------------------------------------------

def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _coeff_prefix(c: Fraction) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    return f"{c} "


def format_gamma_tensor(gamma, ell: SuperSpace, base: SuperSpace) -> str:
    terms = []
    for i in range(ell.dim):
        for j in range(base.dim):
            for k in range(ell.dim):
                c = gamma[i][j][k]
                if c != 0:
                    terms.append(f"{_coeff_prefix(c)}{ell.labels[i]}*(x)"
                                 f"{base.labels[j]}*(x){ell.labels[k]}*")
    return _join_terms(terms)


def format_endo(m: GradedLinearMap) -> str:
    terms = []
    for j in range(m.source.dim):
        for i in range(m.target.dim):
            c = m.rows[j][i]
            if c != 0:
                terms.append(f"{_coeff_prefix(c)}{m.target.labels[i]}(x)"
                             f"{m.source.labels[j]}*")
    return _join_terms(terms)


def format_tau_map(m: GradedLinearMap) -> str:
    return format_endo(m)
