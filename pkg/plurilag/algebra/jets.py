"""Jet variables over N-dimensional multi-time.

A jet variable u_I of the single dependent field is addressed by its multi-index
I = (i_1, ..., i_N); coordinate 1 is x. Coordinates are 1-based everywhere in the
public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from plurilag.core.exceptions import DimensionError


class MultiIndex(tuple):
    """Exponent vector of a jet variable, one entry per coordinate."""

    __slots__ = ()

    def __new__(cls, exponents=()):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in multi-index {exps}")
        return super().__new__(cls, exps)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int, times: int = 1) -> "MultiIndex":
        _check_coordinate(n, i)
        exps = [0] * n
        exps[i - 1] = times
        return cls(exps)

    @classmethod
    def pure_x(cls, n: int, order: int) -> "MultiIndex":
        return cls.unit(n, 1, order)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        """|I|"""
        return sum(self)

    @property
    def time_order(self) -> int:
        """Order in the coordinates t_2..t_N."""
        return sum(self[1:])

    def exponent(self, i: int) -> int:
        _check_coordinate(self.n, i)
        return self[i - 1]

    def contains(self, i: int) -> bool:
        return self.exponent(i) > 0

    def is_pure_x(self) -> bool:
        return self.time_order == 0

    def shift(self, i: int, times: int = 1) -> "MultiIndex":
        """I + times * e_i"""
        _check_coordinate(self.n, i)
        exps = list(self)
        exps[i - 1] += times
        return MultiIndex(exps)

    def drop(self, i: int) -> "MultiIndex":
        """I - e_i; the coordinate must be present."""
        if not self.contains(i):
            raise ValueError(f"coordinate {i} not contained in {tuple(self)}")
        return self.shift(i, -1)

    def __add__(self, other):
        if isinstance(other, MultiIndex):
            if other.n != self.n:
                raise DimensionError(f"multi-indices of length {self.n} and {other.n}")
            return MultiIndex(a + b for a, b in zip(self, other))
        return NotImplemented

    def __sub__(self, other: "MultiIndex") -> Optional["MultiIndex"]:
        """Componentwise difference, or None when other is not below self."""
        if other.n != self.n:
            raise DimensionError(f"multi-indices of length {self.n} and {other.n}")
        diff = [a - b for a, b in zip(self, other)]
        if any(d < 0 for d in diff):
            return None
        return MultiIndex(diff)

    def support(self) -> Tuple[int, ...]:
        """Coordinates with a nonzero exponent."""
        return tuple(i + 1 for i, e in enumerate(self) if e)

    def sort_key(self):
        return (self.order, tuple(self))

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


# A jet variable is fully determined by its multi-index.
JetVar = MultiIndex


class TrigFactor(NamedTuple):
    """sin(u)^sin * cos(u)^cos with sin in {0, 1}."""

    sin: int
    cos: int


class Monomial(NamedTuple):
    """Product of jet-variable powers, optionally times a trig factor.

    jets is sorted by variable order and never holds zero exponents; a unit trig
    factor is stored as None.
    """

    jets: Tuple[Tuple[MultiIndex, int], ...]
    trig: Optional[TrigFactor] = None

    @property
    def degree(self) -> int:
        jet_degree = sum(e for _, e in self.jets)
        if self.trig is None:
            return jet_degree
        return jet_degree + self.trig.sin + self.trig.cos

    @property
    def jet_degree(self) -> int:
        return sum(e for _, e in self.jets)

    def exponent(self, index: MultiIndex) -> int:
        for var, e in self.jets:
            if var == index:
                return e
        return 0

    def sort_key(self):
        trig = self.trig or TrigFactor(0, 0)
        return (
            self.degree,
            tuple((var.order, tuple(var), e) for var, e in self.jets),
            (trig.sin, trig.cos),
        )


ONE = Monomial(())


def make_monomial(jets: dict, sin: int = 0, cos: int = 0) -> Monomial:
    """Build a canonical monomial from a variable->exponent mapping."""
    items = tuple(sorted(((v, e) for v, e in jets.items() if e), key=lambda p: p[0].sort_key()))
    trig = TrigFactor(sin, cos) if (sin or cos) else None
    return Monomial(items, trig)


@dataclass(frozen=True)
class JetSpace:
    """Naming context of a computation: dimension, coordinate names and field name."""

    n: int
    coordinates: Tuple[str, ...]
    field: str = "u"

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("dimension must be positive")
        if len(self.coordinates) != self.n:
            raise DimensionError(
                f"{len(self.coordinates)} coordinate names for dimension {self.n}"
            )
        if len(set(self.coordinates)) != self.n:
            raise ValueError(f"duplicate coordinate names in {self.coordinates}")

    @classmethod
    def pkdv(cls, n: int, field: str = "v") -> "JetSpace":
        """Coordinates x, t2, ..., tN."""
        return cls(n, ("x",) + tuple(f"t{k}" for k in range(2, n + 1)), field)

    @classmethod
    def sine_gordon(cls) -> "JetSpace":
        return cls(3, ("x", "y", "z"), "u")

    def with_field(self, field: str) -> "JetSpace":
        return JetSpace(self.n, self.coordinates, field)

    def coordinate(self, i: int) -> str:
        _check_coordinate(self.n, i)
        return self.coordinates[i - 1]

    def index_of(self, name: str) -> int:
        try:
            return self.coordinates.index(name) + 1
        except ValueError:
            raise ValueError(f"unknown coordinate {name!r}") from None

    @property
    def compact(self) -> bool:
        """Single-character coordinate names render without separators."""
        return all(len(c) == 1 for c in self.coordinates)


def _check_coordinate(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise DimensionError(f"coordinate index {i} outside 1..{n}")
