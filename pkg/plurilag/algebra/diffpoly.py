"""Canonical sparse differential polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import QQ

from plurilag.algebra.jets import ONE, Monomial, MultiIndex, TrigFactor, make_monomial
from plurilag.core.exceptions import DimensionError

Rational = Union[int, Fraction, "QQ.dtype"]


def as_rational(value) -> "QQ.dtype":
    """Coerce ints, fractions, QQ elements and 'p/q' strings to QQ."""
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        num, _, den = value.partition("/")
        den = int(den or 1)
        if den == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return QQ(int(num), den)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, QQ.dtype)) and not isinstance(value, bool)


def mul_monomials(a: Monomial, b: Monomial) -> List[Tuple[Monomial, int]]:
    """Product of two monomials in trig normal form (sin^2 = 1 - cos^2)."""
    jets = dict(a.jets)
    for var, e in b.jets:
        jets[var] = jets.get(var, 0) + e
    ta = a.trig or TrigFactor(0, 0)
    tb = b.trig or TrigFactor(0, 0)
    sin, cos = ta.sin + tb.sin, ta.cos + tb.cos
    if sin < 2:
        return [(make_monomial(jets, sin, cos), 1)]
    return [(make_monomial(jets, 0, cos), 1), (make_monomial(jets, 0, cos + 2), -1)]


def monomial_partials(
    mono: Monomial, n: int
) -> Iterator[Tuple[MultiIndex, List[Tuple[Monomial, int]]]]:
    """Yield (variable, d mono / d variable) for every variable the monomial depends on.

    The trig factor depends on the order-zero variable.
    """
    jets = dict(mono.jets)
    trig = mono.trig or TrigFactor(0, 0)
    trig_done = mono.trig is None
    for var, e in mono.jets:
        reduced = dict(jets)
        reduced[var] = e - 1
        pieces = [(make_monomial(reduced, trig.sin, trig.cos), e)]
        if not trig_done and var.order == 0:
            trig_done = True
            pieces.extend(_trig_du(jets, trig))
        yield var, pieces
    if not trig_done:
        yield MultiIndex.zero(n), _trig_du(jets, trig)


def _trig_du(jets: dict, trig: TrigFactor) -> List[Tuple[Monomial, int]]:
    # d/du sin^s cos^k with s in {0, 1}
    k = trig.cos
    if trig.sin:
        out = [(make_monomial(jets, 0, k + 1), k + 1)]
        if k:
            out.append((make_monomial(jets, 0, k - 1), -k))
        return out
    if not k:
        return []
    return [(make_monomial(jets, 1, k - 1), -k)]


class DiffPoly:
    """Differential polynomial in the jet variables of one field over N-dimensional multi-time.

    Terms map canonical monomials to nonzero QQ coefficients. Instances are immutable.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Monomial, Rational]] = None):
        if n < 1:
            raise DimensionError("dimension must be positive")
        self.n = n
        clean: Dict[Monomial, "QQ.dtype"] = {}
        for mono, coeff in (terms or {}).items():
            c = as_rational(coeff)
            if c:
                clean[mono] = c
        self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def _raw(cls, n: int, terms: Dict[Monomial, "QQ.dtype"]) -> "DiffPoly":
        poly = cls.__new__(cls)
        poly.n = n
        poly.terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, n: int) -> "DiffPoly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, value: Rational) -> "DiffPoly":
        return cls(n, {ONE: value})

    @classmethod
    def one(cls, n: int) -> "DiffPoly":
        return cls.constant(n, 1)

    @classmethod
    def var(cls, n: int, index: Iterable[int], power: int = 1) -> "DiffPoly":
        idx = index if isinstance(index, MultiIndex) else MultiIndex(index)
        if idx.n != n:
            raise DimensionError(f"multi-index of length {idx.n} in dimension {n}")
        if power == 0:
            return cls.one(n)
        return cls._raw(n, {make_monomial({idx: power}): QQ(1)})

    @classmethod
    def x_var(cls, n: int, order: int, power: int = 1) -> "DiffPoly":
        """u_{x^order}"""
        return cls.var(n, MultiIndex.pure_x(n, order), power)

    @classmethod
    def sin_u(cls, n: int) -> "DiffPoly":
        return cls._raw(n, {make_monomial({}, 1, 0): QQ(1)})

    @classmethod
    def cos_u(cls, n: int) -> "DiffPoly":
        return cls._raw(n, {make_monomial({}, 0, 1): QQ(1)})

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def sorted_terms(self) -> List[Tuple[Monomial, "QQ.dtype"]]:
        """Terms ordered graded-lexicographically, highest first."""
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key(), reverse=True)

    def coefficient(self, mono: Monomial) -> "QQ.dtype":
        return self.terms.get(mono, QQ(0))

    def constant_term(self) -> "QQ.dtype":
        return self.coefficient(ONE)

    def has_trig(self) -> bool:
        return any(m.trig is not None for m in self.terms)

    def jet_variables(self) -> List[MultiIndex]:
        """Variables occurring in the polynomial, sorted; the trig factor counts as u."""
        seen = set()
        for mono in self.terms:
            for var, _ in mono.jets:
                seen.add(var)
            if mono.trig is not None:
                seen.add(MultiIndex.zero(self.n))
        return sorted(seen, key=MultiIndex.sort_key)

    def max_order(self) -> int:
        """Largest |I| among occurring variables; 0 for constants."""
        return max((v.order for v in self.jet_variables()), default=0)

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def is_pure_x(self) -> bool:
        return all(var.is_pure_x() for mono in self.terms for var, _ in mono.jets)

    def depends_on(self, index: MultiIndex) -> bool:
        if index.order == 0 and self.has_trig():
            return True
        return any(mono.exponent(index) for mono in self.terms)

    def weight(self, base: int) -> Optional[int]:
        """Common scaling weight of all terms, or None when not homogeneous.

        The order-zero variable weighs `base`; a derivative in t_k adds 2k-1 (1 for x).
        Trig factors and constants weigh 0; the zero polynomial has weight 0.
        """
        weights = set()
        for mono in self.terms:
            w = 0
            for var, e in mono.jets:
                w += e * (base + sum(ik * (2 * k - 1) for k, ik in enumerate(var, start=1)))
            weights.add(w)
            if len(weights) > 1:
                return None
        return weights.pop() if weights else 0

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "DiffPoly") -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> Optional["DiffPoly"]:
        if isinstance(other, DiffPoly):
            self._check(other)
            return other
        if _is_scalar(other):
            return DiffPoly.constant(self.n, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono, 0) + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return DiffPoly._raw(self.n, terms)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, factor: Rational) -> "DiffPoly":
        c = as_rational(factor)
        if not c:
            return DiffPoly.zero(self.n)
        return DiffPoly._raw(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        self._check(other)
        terms: Dict[Monomial, "QQ.dtype"] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                c = ca * cb
                for mono, sign in mul_monomials(ma, mb):
                    terms[mono] = terms.get(mono, 0) + (c if sign == 1 else -c)
        return DiffPoly._raw(self.n, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self.scale(QQ(1) / as_rational(other))

    def __pow__(self, exponent: int) -> "DiffPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer powers")
        result = DiffPoly.one(self.n)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- structural maps ------------------------------------------------------

    def map_jets(self, fn: Callable[[MultiIndex], MultiIndex], n: Optional[int] = None) -> "DiffPoly":
        """Rename every jet variable through fn (monomials merge where fn collides)."""
        target_n = n or self.n
        terms: Dict[Monomial, "QQ.dtype"] = {}
        for mono, c in self.terms.items():
            jets: Dict[MultiIndex, int] = {}
            for var, e in mono.jets:
                new = fn(var)
                jets[new] = jets.get(new, 0) + e
            trig = mono.trig or TrigFactor(0, 0)
            key = make_monomial(jets, trig.sin, trig.cos)
            terms[key] = terms.get(key, 0) + c
        return DiffPoly._raw(target_n, {m: c for m, c in terms.items() if c})

    def substitute(self, rule: Callable[[MultiIndex], Optional["DiffPoly"]]) -> "DiffPoly":
        """Replace each jet variable by rule(var); None keeps the variable.

        Trig factors are left alone, so rules must not rewrite the order-zero variable
        of a trig-extended polynomial.
        """
        images: Dict[MultiIndex, Optional[DiffPoly]] = {}
        powers: Dict[Tuple[MultiIndex, int], DiffPoly] = {}

        def power(var: MultiIndex, e: int) -> DiffPoly:
            key = (var, e)
            if key not in powers:
                powers[key] = images[var] ** e
            return powers[key]

        result: Dict[Monomial, "QQ.dtype"] = {}
        for mono, c in self.terms.items():
            kept: Dict[MultiIndex, int] = {}
            factors: List[DiffPoly] = []
            for var, e in mono.jets:
                if var not in images:
                    images[var] = rule(var)
                if images[var] is None:
                    kept[var] = e
                else:
                    factors.append(power(var, e))
            trig = mono.trig or TrigFactor(0, 0)
            if not factors:
                key = make_monomial(kept, trig.sin, trig.cos)
                result[key] = result.get(key, 0) + c
                continue
            product = DiffPoly._raw(self.n, {make_monomial(kept, trig.sin, trig.cos): c})
            for f in sorted(factors, key=len):
                product = product * f
            for m, v in product.terms.items():
                result[m] = result.get(m, 0) + v
        return DiffPoly._raw(self.n, {m: c for m, c in result.items() if c})

    # -- calculus primitives ---------------------------------------------------

    def partial(self, index: MultiIndex) -> "DiffPoly":
        """Formal partial derivative by the jet variable u_index."""
        if index.n != self.n:
            raise DimensionError(f"multi-index of length {index.n} in dimension {self.n}")
        terms: Dict[Monomial, "QQ.dtype"] = {}
        for mono, c in self.terms.items():
            for var, pieces in self._partials_of(mono):
                if var != index:
                    continue
                for m, k in pieces:
                    terms[m] = terms.get(m, 0) + c * k
        return DiffPoly._raw(self.n, {m: c for m, c in terms.items() if c})

    def gradient(self) -> Dict[MultiIndex, "DiffPoly"]:
        """All nonzero partial derivatives in one pass."""
        acc: Dict[MultiIndex, Dict[Monomial, "QQ.dtype"]] = {}
        for mono, c in self.terms.items():
            for var, pieces in self._partials_of(mono):
                bucket = acc.setdefault(var, {})
                for m, k in pieces:
                    bucket[m] = bucket.get(m, 0) + c * k
        out = {}
        for var, bucket in acc.items():
            poly = DiffPoly._raw(self.n, {m: c for m, c in bucket.items() if c})
            if poly:
                out[var] = poly
        return out

    def _partials_of(self, mono: Monomial):
        return monomial_partials(mono, self.n)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPoly):
            return self.n == other.n and self.terms == other.terms
        if _is_scalar(other):
            c = as_rational(other)
            if not c:
                return not self.terms
            return self.terms == {ONE: c}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        from plurilag.algebra.render import render

        return render(self)

    def __repr__(self) -> str:
        return f"DiffPoly(n={self.n}, {self})"
