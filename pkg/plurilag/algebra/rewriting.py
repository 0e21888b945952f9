"""Rewriting systems that eliminate jet variables modulo differential equations."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.operators import total_derivative
from plurilag.core.exceptions import DimensionError, UnknownFlow
from plurilag.core.logging import get_logger

logger = get_logger(__name__)

STRATEGIES = ("largest", "smallest")


class RewritingSystem(ABC):
    """Base of the rewriting systems: memoised normal forms of single jet variables.

    A polynomial is reduced by substituting the normal form of every variable it
    contains. Subclasses decide one elimination step per variable.
    """

    def __init__(self, n: int):
        self.n = n
        self._normal_forms: Dict[Tuple[MultiIndex, FrozenSet[int]], Optional[DiffPoly]] = {}

    @abstractmethod
    def eliminate(self, index: MultiIndex, omit: FrozenSet[int]) -> Optional[DiffPoly]:
        """Polynomial equal to u_index modulo the system, or None if u_index is irreducible."""

    @abstractmethod
    def relations(self) -> Dict[str, DiffPoly]:
        """Defining relations, label -> polynomial that vanishes on solutions."""

    def normal_form(self, index: MultiIndex, omit: FrozenSet[int] = frozenset()) -> Optional[DiffPoly]:
        key = (index, omit)
        if key not in self._normal_forms:
            step = self.eliminate(index, omit)
            self._normal_forms[key] = None if step is None else self.reduce(step, omit)
        return self._normal_forms[key]

    def reduce(self, p: DiffPoly, omit: Iterable[int] = ()) -> DiffPoly:
        if p.n != self.n:
            raise DimensionError(f"polynomial of dimension {p.n} for a system of dimension {self.n}")
        omit = frozenset(omit)
        return p.substitute(lambda var: self.normal_form(var, omit))

    def derive(self, p: DiffPoly, index: MultiIndex, omit: FrozenSet[int]) -> DiffPoly:
        """Reduced D_index p, reducing after every derivative outside x."""
        for k, e in enumerate(index, start=1):
            for _ in range(e):
                p = total_derivative(p, k)
                if k != 1:
                    p = self.reduce(p, omit)
        return p

    def cache_size(self) -> int:
        return len(self._normal_forms)


class EvolutionSystem(RewritingSystem):
    """Flows v_{t_j} = g_j with pure-x right-hand sides, j in 2..N.

    A variable with time support is rewritten through the largest (or smallest)
    eliminable time index j as D_{I - e_j} g_j.
    """

    def __init__(self, rhs: Mapping[int, DiffPoly], n: Optional[int] = None, strategy: str = "largest"):
        if not rhs and n is None:
            raise ValueError("empty evolution system needs an explicit dimension")
        n = n or next(iter(rhs.values())).n
        super().__init__(n)
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown elimination strategy {strategy!r}")
        for j, g in rhs.items():
            if not 2 <= j <= n:
                raise DimensionError(f"flow index {j} outside 2..{n}")
            if g.n != n:
                raise DimensionError(f"flow {j} has dimension {g.n}, expected {n}")
            if not g.is_pure_x():
                raise ValueError(f"right-hand side of flow {j} is not pure-x")
        self.rhs: Dict[int, DiffPoly] = dict(rhs)
        self.strategy = strategy

    def eliminate(self, index: MultiIndex, omit: FrozenSet[int]) -> Optional[DiffPoly]:
        candidates = [j for j in index.support() if j >= 2 and j not in omit]
        if not candidates:
            return None
        j = max(candidates) if self.strategy == "largest" else min(candidates)
        if j not in self.rhs:
            raise UnknownFlow(j)
        return self.derive(self.rhs[j], index.drop(j), omit)

    def relations(self) -> Dict[str, DiffPoly]:
        return {
            f"t{j}": DiffPoly.var(self.n, MultiIndex.unit(self.n, j)) - g
            for j, g in sorted(self.rhs.items())
        }

    def with_strategy(self, strategy: str) -> "EvolutionSystem":
        return EvolutionSystem(self.rhs, self.n, strategy)


class SineGordonSystem(RewritingSystem):
    """u_z -> u_xxx + u_x^3/2 and u_{x^a y^b} -> D_x^{a-1} D_y^{b-1} sin u in (x, y, z).

    z-variables are eliminated first, then mixed xy-variables. Either rule can be
    switched off; omitting coordinate 3 (resp. 2) disables the mKdV (resp. sine-Gordon)
    rule for one reduction.
    """

    def __init__(self, mkdv: bool = True, sine_gordon: bool = True):
        super().__init__(3)
        self.mkdv = mkdv
        self.sine_gordon = sine_gordon
        u_x = DiffPoly.x_var(3, 1)
        self.mkdv_rhs = DiffPoly.x_var(3, 3) + u_x ** 3 / 2

    def eliminate(self, index: MultiIndex, omit: FrozenSet[int]) -> Optional[DiffPoly]:
        a, b, c = index
        if c and self.mkdv and 3 not in omit:
            return self.derive(self.mkdv_rhs, index.drop(3), omit)
        if a and b and self.sine_gordon and 2 not in omit:
            rest = index.drop(1).drop(2)
            return self.derive(DiffPoly.sin_u(3), rest, omit)
        return None

    def relations(self) -> Dict[str, DiffPoly]:
        out = {}
        if self.sine_gordon:
            out["sine-gordon"] = DiffPoly.var(3, (1, 1, 0)) - DiffPoly.sin_u(3)
        if self.mkdv:
            out["mkdv"] = DiffPoly.var(3, (0, 0, 1)) - self.mkdv_rhs
        return out


def reduce_mod_system(
    p: DiffPoly, system: RewritingSystem, omit: Optional[Iterable[int]] = None
) -> DiffPoly:
    """Eliminate every reducible jet variable of p; variables carrying only omitted
    time indices stay."""
    result = system.reduce(p, omit or ())
    logger.debug(f"reduced {len(p)} terms to {len(result)} (cache {system.cache_size()})")
    return result


def substitute_flow(p: DiffPoly, system: EvolutionSystem, j: int) -> DiffPoly:
    """Apply only the flow v_{t_j} = g_j (and its x-prolongations)."""
    if j not in system.rhs:
        raise UnknownFlow(j)
    omit = frozenset(k for k in range(2, system.n + 1) if k != j)
    return system.reduce(p, omit)
