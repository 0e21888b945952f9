"""Deterministic text rendering of differential polynomials and forms, and its inverse."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Dict, List, Optional

from sympy import QQ

from plurilag.algebra.diffpoly import DiffPoly, as_rational
from plurilag.algebra.jets import JetSpace, Monomial, MultiIndex, make_monomial

if TYPE_CHECKING:
    from plurilag.algebra.bicomplex import BiForm


def default_space(n: int) -> JetSpace:
    return JetSpace.pkdv(n, "u")


def render_jet(index: MultiIndex, space: JetSpace, field: Optional[str] = None) -> str:
    """u, u_x, u_xx, u_x,t2, u_xxy ..."""
    name = field or space.field
    parts = [space.coordinate(k) * e for k, e in enumerate(index, start=1) if e]
    if not parts:
        return name
    sep = "" if space.compact else ","
    return f"{name}_{sep.join(parts)}"


def render_coefficient(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def render_monomial(mono: Monomial, space: JetSpace) -> str:
    factors: List[str] = []
    for var, e in mono.jets:
        text = render_jet(var, space)
        factors.append(text if e == 1 else f"{text}^{e}")
    if mono.trig is not None:
        if mono.trig.sin:
            factors.append(f"sin({space.field})")
        if mono.trig.cos:
            cos = f"cos({space.field})"
            factors.append(cos if mono.trig.cos == 1 else f"{cos}^{mono.trig.cos}")
    return "*".join(factors)


def render(p: DiffPoly, space: Optional[JetSpace] = None) -> str:
    """Canonical rendering: highest monomial first, explicit signs between terms.

    A unit coefficient is omitted unless the monomial is empty; zero renders as "0".
    """
    space = space or default_space(p.n)
    if space.n != p.n:
        raise ValueError(f"jet space of dimension {space.n} for polynomial of dimension {p.n}")
    if not p.terms:
        return "0"
    out: List[str] = []
    for mono, c in p.sorted_terms():
        negative = c < 0
        magnitude = -c if negative else c
        body = render_monomial(mono, space)
        if not body:
            text = render_coefficient(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{render_coefficient(magnitude)}*{body}"
        if not out:
            out.append(f"-{text}" if negative else text)
        else:
            out.append(f"{'-' if negative else '+'} {text}")
    return " ".join(out)


def render_form(form: "BiForm", space: Optional[JetSpace] = None) -> str:
    """Sum of (coefficient) δu_I ∧ ... ∧ dt_j terms in canonical generator order."""
    space = space or default_space(form.n)
    if not form.terms:
        return "0"
    pieces = []
    for (vertical, horizontal), coeff in sorted(form.terms.items(), key=lambda t: form.word_key(t[0])):
        gens = [render_jet(v, space, field=f"δ{space.field}") for v in vertical]
        gens += [f"d{space.coordinate(j)}" for j in horizontal]
        wedge = " ∧ ".join(gens)
        pieces.append(f"({render(coeff, space)})" + (f" {wedge}" if wedge else ""))
    return " + ".join(pieces)


# -- parsing ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+(?:/\d+)?)"
    r"|(?P<trig>sin|cos)\(\s*(?P<arg>[A-Za-z]+)\s*\)"
    r"|(?P<var>[A-Za-z]+(?:_[A-Za-z0-9,]+)?)"
    r"|(?P<op>[-+*^])"
    r")"
)


class _Tokens:
    def __init__(self, text: str):
        self.items = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text[pos:]!r}")
            kind = m.lastgroup if m.lastgroup != "arg" else "trig"
            if m.group("trig"):
                self.items.append(("trig", (m.group("trig"), m.group("arg"))))
            else:
                self.items.append((kind, m.group(kind)))
            pos = m.end()
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def take(self):
        item = self.peek()
        self.pos += 1
        return item


def parse_jet(text: str, space: JetSpace) -> MultiIndex:
    """Inverse of render_jet; subscripts match the longest coordinate name first."""
    field, _, subscript = text.partition("_")
    if field != space.field:
        raise ValueError(f"unknown field {field!r} (expected {space.field!r})")
    exps = [0] * space.n
    names = sorted(space.coordinates, key=len, reverse=True)
    for part in filter(None, subscript.split(",")):
        pos = 0
        while pos < len(part):
            for name in names:
                if part.startswith(name, pos):
                    exps[space.index_of(name) - 1] += 1
                    pos += len(name)
                    break
            else:
                raise ValueError(f"cannot read subscript {part!r}")
    return MultiIndex(exps)


def parse(text: str, space: JetSpace) -> DiffPoly:
    """Read a polynomial in the canonical grammar (implicit products allowed)."""
    tokens = _Tokens(text)
    result = DiffPoly.zero(space.n)
    sign = 1
    kind, value = tokens.peek()
    if kind == "op" and value in "+-":
        tokens.take()
        sign = -1 if value == "-" else 1
    while True:
        term = _parse_term(tokens, space)
        result = result + term if sign == 1 else result - term
        kind, value = tokens.take()
        if kind is None:
            break
        if kind != "op" or value not in "+-":
            raise ValueError(f"unexpected token {value!r} in {text!r}")
        sign = -1 if value == "-" else 1
    return result


def _parse_term(tokens: _Tokens, space: JetSpace) -> DiffPoly:
    coeff = QQ(1)
    jets: Dict[MultiIndex, int] = {}
    sin = cos = 0
    seen = False
    while True:
        kind, value = tokens.peek()
        if kind == "op" and value == "*" and seen:
            tokens.take()
            continue
        if kind not in ("num", "var", "trig"):
            break
        tokens.take()
        seen = True
        power = 1
        if tokens.peek() == ("op", "^"):
            tokens.take()
            k, v = tokens.take()
            if k != "num" or "/" in v:
                raise ValueError("exponent must be a non-negative integer")
            power = int(v)
        if kind == "num":
            coeff *= as_rational(value) ** power
        elif kind == "var":
            idx = parse_jet(value, space)
            jets[idx] = jets.get(idx, 0) + power
        else:
            fn, arg = value
            if arg != space.field:
                raise ValueError(f"trig argument {arg!r} is not the field {space.field!r}")
            if fn == "sin":
                sin += power
            else:
                cos += power
    if not seen:
        raise ValueError("empty term")
    term = DiffPoly(space.n, {make_monomial(jets, 0, cos): coeff})
    if sin:
        term = term * DiffPoly.sin_u(space.n) ** sin
    return term
