"""The variational bicomplex: (p,q)-forms with vertical generators δu_I and
horizontal generators dt_j, and the derivations d, δ, ι and D_i acting on them."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.combinatorics.permutations import Permutation

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.operators import EvolutionaryVF, total_derivative
from plurilag.core.exceptions import DimensionError

# A generator is ("v", MultiIndex) for δu_I or ("h", j) for dt_j.
Generator = Tuple[str, Union[MultiIndex, int]]
Word = Tuple[Tuple[MultiIndex, ...], Tuple[int, ...]]


def _generator_key(gen: Generator):
    kind, value = gen
    if kind == "v":
        return (0, value.order, tuple(value))
    return (1, value, ())


def normalize_word(raw: Sequence[Generator]) -> Optional[Tuple[int, Word]]:
    """Sort a wedge word into canonical order (vertical before horizontal).

    Returns (sign, word), or None when a generator repeats.
    """
    keys = [_generator_key(g) for g in raw]
    if len(set(keys)) != len(keys):
        return None
    order = sorted(range(len(raw)), key=keys.__getitem__)
    sign = -1 if len(order) > 1 and Permutation(order).parity() else 1
    ordered = [raw[k] for k in order]
    vertical = tuple(v for kind, v in ordered if kind == "v")
    horizontal = tuple(v for kind, v in ordered if kind == "h")
    return sign, (vertical, horizontal)


def _raw_word(word: Word) -> List[Generator]:
    vertical, horizontal = word
    return [("v", v) for v in vertical] + [("h", j) for j in horizontal]


class BiForm:
    """A (p,q)-form: canonical sum of coefficient * δu_I1 ∧ ... ∧ δu_Ip ∧ dt_j1 ∧ ... ∧ dt_jq."""

    __slots__ = ("n", "bidegree", "terms")

    def __init__(self, n: int, bidegree: Tuple[int, int], terms: Optional[Dict[Word, DiffPoly]] = None):
        self.n = n
        self.bidegree = bidegree
        clean: Dict[Word, DiffPoly] = {}
        for word, coeff in (terms or {}).items():
            if coeff.n != n:
                raise DimensionError(f"coefficient of dimension {coeff.n} in a form of dimension {n}")
            if (len(word[0]), len(word[1])) != bidegree:
                raise ValueError(f"term of bidegree {(len(word[0]), len(word[1]))} in a {bidegree}-form")
            if coeff:
                clean[word] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int = 0, q: int = 0) -> "BiForm":
        return cls(n, (p, q))

    @classmethod
    def function(cls, f: DiffPoly) -> "BiForm":
        return cls(f.n, (0, 0), {((), ()): f})

    @classmethod
    def vertical(cls, n: int, index) -> "BiForm":
        """δu_I"""
        idx = index if isinstance(index, MultiIndex) else MultiIndex(index)
        return cls(n, (1, 0), {((idx,), ()): DiffPoly.one(n)})

    @classmethod
    def horizontal(cls, n: int, j: int) -> "BiForm":
        """dt_j"""
        if not 1 <= j <= n:
            raise DimensionError(f"coordinate index {j} outside 1..{n}")
        return cls(n, (0, 1), {((), (j,)): DiffPoly.one(n)})

    @classmethod
    def from_raw(cls, n: int, bidegree: Tuple[int, int], raw_terms: Iterable[Tuple[DiffPoly, Sequence[Generator]]]) -> "BiForm":
        """Sum of coefficient * raw word, normalising every word."""
        acc: Dict[Word, DiffPoly] = {}
        for coeff, raw in raw_terms:
            if not coeff:
                continue
            normal = normalize_word(raw)
            if normal is None:
                continue
            sign, word = normal
            value = coeff if sign == 1 else -coeff
            acc[word] = acc[word] + value if word in acc else value
        return cls(n, bidegree, acc)

    # -- queries --------------------------------------------------------------

    @property
    def p(self) -> int:
        return self.bidegree[0]

    @property
    def q(self) -> int:
        return self.bidegree[1]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @staticmethod
    def word_key(word: Word):
        vertical, horizontal = word
        return (tuple(v.sort_key() for v in vertical), horizontal)

    def coefficient(self, vertical: Sequence, horizontal: Sequence[int]) -> DiffPoly:
        word = (tuple(v if isinstance(v, MultiIndex) else MultiIndex(v) for v in vertical), tuple(horizontal))
        return self.terms.get(word, DiffPoly.zero(self.n))

    # -- linear structure ---------------------------------------------------------

    def _check(self, other: "BiForm") -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.bidegree != self.bidegree:
            raise ValueError(f"cannot add a {other.bidegree}-form to a {self.bidegree}-form")

    def __add__(self, other: "BiForm") -> "BiForm":
        self._check(other)
        terms = dict(self.terms)
        for word, c in other.terms.items():
            terms[word] = terms[word] + c if word in terms else c
        return BiForm(self.n, self.bidegree, terms)

    def __neg__(self) -> "BiForm":
        return BiForm(self.n, self.bidegree, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "BiForm") -> "BiForm":
        return self + (-other)

    def __mul__(self, f) -> "BiForm":
        """Multiply every coefficient by a function (or rational)."""
        return BiForm(self.n, self.bidegree, {w: c * f for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiForm):
            return NotImplemented
        return self.n == other.n and self.bidegree == other.bidegree and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        from plurilag.algebra.render import render_form

        return f"BiForm{self.bidegree}({render_form(self)})"


def wedge(a: BiForm, b: BiForm) -> BiForm:
    """Graded-commutative exterior product."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    raw = []
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            raw.append((ca * cb, _raw_word(wa) + _raw_word(wb)))
    return BiForm.from_raw(a.n, (a.p + b.p, a.q + b.q), raw)


def d_horizontal(w: BiForm) -> BiForm:
    """d: df = sum_j D_j f dt_j, d(δu_I) = -sum_j δu_{Ij} ∧ dt_j, d(dt_j) = 0."""
    raw = []
    for word, c in w.terms.items():
        gens = _raw_word(word)
        for j in range(1, w.n + 1):
            raw.append((total_derivative(c, j), [("h", j)] + gens))
        vertical = word[0]
        for k, index in enumerate(vertical):
            sign = -1 if k % 2 == 0 else 1  # leading minus of the rule times (-1)^k
            for j in range(1, w.n + 1):
                replaced = gens[:k] + [("v", index.shift(j)), ("h", j)] + gens[k + 1:]
                raw.append((c if sign == 1 else -c, replaced))
    return BiForm.from_raw(w.n, (w.p, w.q + 1), raw)


def delta_vertical(w: BiForm) -> BiForm:
    """δ: δf = sum_I df/du_I δu_I, δ(δu_I) = 0, δ(dt_j) = 0."""
    raw = []
    for word, c in w.terms.items():
        gens = _raw_word(word)
        for var, dc in c.gradient().items():
            raw.append((dc, [("v", var)] + gens))
    return BiForm.from_raw(w.n, (w.p + 1, w.q), raw)


def contract(vf: EvolutionaryVF, w: BiForm) -> BiForm:
    """Interior product with the prolonged field: δu_I -> D_I phi with the graded sign.

    A (0,q)-form contracts to the zero (0,q)-form.
    """
    if vf.n != w.n:
        raise DimensionError(f"dimension mismatch: {vf.n} vs {w.n}")
    if w.p == 0:
        return BiForm.zero(w.n, 0, w.q)
    raw = []
    for (vertical, horizontal), c in w.terms.items():
        for k, index in enumerate(vertical):
            rest = [("v", v) for v in vertical[:k] + vertical[k + 1:]] + [("h", j) for j in horizontal]
            value = c * vf.coefficient(index)
            raw.append((value if k % 2 == 0 else -value, rest))
    return BiForm.from_raw(w.n, (w.p - 1, w.q), raw)


def total_derivative_form(w: BiForm, i: int) -> BiForm:
    """D_i acting on forms: Leibniz over the coefficient and every δu_I (δu_I -> δu_{Ii})."""
    if not 1 <= i <= w.n:
        raise DimensionError(f"coordinate index {i} outside 1..{w.n}")
    raw = []
    for word, c in w.terms.items():
        gens = _raw_word(word)
        raw.append((total_derivative(c, i), gens))
        for k, index in enumerate(word[0]):
            raw.append((c, gens[:k] + [("v", index.shift(i))] + gens[k + 1:]))
    return BiForm.from_raw(w.n, w.bidegree, raw)
