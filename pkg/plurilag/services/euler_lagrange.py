"""Multi-time Euler-Lagrange equations of Lagrangian one- and two-forms, their
classification modulo a rewriting system, and exterior-derivative coefficients."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.operators import VariationalDerivative, total_derivative
from plurilag.algebra.rewriting import EvolutionSystem, RewritingSystem
from plurilag.core.exceptions import UnknownFlow
from plurilag.core.logging import get_logger
from plurilag.models.responses import EquationStatus
from plurilag.services.kdv_hierarchy import LagrangianTwoForm

logger = get_logger(__name__)


class ELFamily(str, Enum):
    """Equation families of Lagrangian one-forms (curves) and two-forms (surfaces)."""
    CURVES_0 = "pEL-1-0"
    CURVES_1 = "pEL-1-1"
    SURFACES_0 = "pEL-2-0"
    SURFACES_1 = "pEL-2-1"
    SURFACES_2 = "pEL-2-2"


_FAMILY_ORDER = {family: k for k, family in enumerate(ELFamily)}


@dataclass(frozen=True)
class ELEquation:
    family: ELFamily
    indices: Tuple[int, ...]
    multi_index: MultiIndex
    residual: DiffPoly

    @property
    def key(self):
        return (_FAMILY_ORDER[self.family], self.indices, self.multi_index.sort_key())


@dataclass(frozen=True)
class ClassifiedEquation:
    equation: ELEquation
    status: EquationStatus
    reduced: DiffPoly
    flow: Optional[str] = None


@dataclass
class ELReport:
    entries: List[ClassifiedEquation]

    @property
    def passed(self) -> bool:
        return all(e.status != EquationStatus.NONZERO_RESIDUAL for e in self.entries)

    def counts(self) -> Dict[str, int]:
        counter = Counter(e.status.value for e in self.entries)
        return {status.value: counter.get(status.value, 0) for status in EquationStatus}

    def evolution_flows(self) -> set:
        return {e.flow for e in self.entries if e.status == EquationStatus.EVOLUTION_EQUATION}

    def failures(self) -> List[ClassifiedEquation]:
        return [e for e in self.entries if e.status == EquationStatus.NONZERO_RESIDUAL]

    def find(self, family: ELFamily, indices: Sequence[int], multi_index: Sequence[int]) -> ClassifiedEquation:
        target = (family, tuple(indices), tuple(multi_index))
        for e in self.entries:
            eq = e.equation
            if (eq.family, eq.indices, tuple(eq.multi_index)) == target:
                return e
        raise KeyError(target)


def multi_indices(n: int, bound: int, exclude: Sequence[int] = ()) -> Iterator[MultiIndex]:
    """All I with |I| <= bound and I_k = 0 for k in exclude, ordered by (|I|, I)."""
    ranges = [range(1) if k in exclude else range(bound + 1) for k in range(1, n + 1)]
    found = [MultiIndex(e) for e in product(*ranges) if sum(e) <= bound]
    return iter(sorted(found, key=MultiIndex.sort_key))


# -- generation ---------------------------------------------------------------------------


def el_curves(lagrangians: Sequence[DiffPoly]) -> List[ELEquation]:
    """Equations of the one-form L = sum L_i dt_i (L_i at position i-1)."""
    n = len(lagrangians)
    if not n or any(p.n != n for p in lagrangians):
        raise ValueError("one-form needs exactly N coefficients of dimension N")
    bound = max(p.max_order() for p in lagrangians)
    var = [VariationalDerivative(p) for p in lagrangians]
    eqs: List[ELEquation] = []
    for i in range(1, n + 1):
        for index in multi_indices(n, bound, exclude=(i,)):
            eqs.append(ELEquation(ELFamily.CURVES_0, (i,), index, var[i - 1].directional(index, i)))
    for i, j in combinations(range(1, n + 1), 2):
        for index in multi_indices(n, bound):
            residual = var[i - 1].directional(index.shift(i), i) - var[j - 1].directional(index.shift(j), j)
            eqs.append(ELEquation(ELFamily.CURVES_1, (i, j), index, residual))
    logger.debug(f"generated {len(eqs)} curve equations (bound {bound})")
    return eqs


class _Planar:
    """delta_ij L_ij / delta u_I for the antisymmetric table, any ordering of (i, j)."""

    def __init__(self, form: LagrangianTwoForm):
        self.form = form
        self._cache: Dict[Tuple[int, int], VariationalDerivative] = {}

    def __call__(self, index: MultiIndex, i: int, j: int) -> DiffPoly:
        lo, hi = min(i, j), max(i, j)
        if (lo, hi) not in self._cache:
            self._cache[(lo, hi)] = VariationalDerivative(self.form[(lo, hi)])
        value = self._cache[(lo, hi)].planar(index, lo, hi)
        return value if i < j else -value


def el_surfaces(form: LagrangianTwoForm) -> List[ELEquation]:
    """Equations of the two-form for every index family and every I up to maxOrder(L)."""
    n = form.n
    bound = form.max_order()
    planar = _Planar(form)
    eqs: List[ELEquation] = []
    for i, j in combinations(range(1, n + 1), 2):
        for index in multi_indices(n, bound, exclude=(i, j)):
            eqs.append(ELEquation(ELFamily.SURFACES_0, (i, j), index, planar(index, i, j)))
    for i in range(1, n + 1):
        others = [k for k in range(1, n + 1) if k != i]
        for j, k in combinations(others, 2):
            for index in multi_indices(n, bound, exclude=(i,)):
                residual = planar(index.shift(j), i, j) - planar(index.shift(k), i, k)
                eqs.append(ELEquation(ELFamily.SURFACES_1, (i, j, k), index, residual))
    for i, j, k in combinations(range(1, n + 1), 3):
        for index in multi_indices(n, bound):
            residual = (
                planar(index.shift(i).shift(j), i, j)
                + planar(index.shift(j).shift(k), j, k)
                + planar(index.shift(k).shift(i), k, i)
            )
            eqs.append(ELEquation(ELFamily.SURFACES_2, (i, j, k), index, residual))
    logger.debug(f"generated {len(eqs)} surface equations (bound {bound})")
    return eqs


# -- classification -------------------------------------------------------------------------


def relation_multiple(residual: DiffPoly, relations: Dict[str, DiffPoly]) -> Optional[str]:
    """Label of the relation that residual is a nonzero rational multiple of."""
    for label, relation in relations.items():
        if not relation or set(residual.terms) != set(relation.terms):
            continue
        mono = next(iter(relation.terms))
        factor = residual.terms[mono] / relation.terms[mono]
        if residual == relation.scale(factor):
            return label
    return None


def classify_equation(
    eq: ELEquation, system: RewritingSystem, relations: Optional[Dict[str, DiffPoly]] = None
) -> ClassifiedEquation:
    residual = eq.residual
    if not residual:
        return ClassifiedEquation(eq, EquationStatus.IDENTICALLY_ZERO, residual)
    reduced = system.reduce(residual)
    flow = relation_multiple(residual, relations if relations is not None else system.relations())
    if flow is not None:
        return ClassifiedEquation(eq, EquationStatus.EVOLUTION_EQUATION, reduced, flow)
    if not reduced:
        return ClassifiedEquation(eq, EquationStatus.CONSEQUENCE_OF_FLOWS, reduced)
    logger.error(f"{eq.family.value} {eq.indices} {tuple(eq.multi_index)}: nonzero residual after reduction")
    return ClassifiedEquation(eq, EquationStatus.NONZERO_RESIDUAL, reduced)


def classify(eqs: Sequence[ELEquation], system: RewritingSystem) -> ELReport:
    relations = system.relations()
    entries = [classify_equation(eq, system, relations) for eq in eqs]
    entries.sort(key=lambda e: e.equation.key)
    return ELReport(entries)


# -- exterior derivative ----------------------------------------------------------------------


def dL_coefficients(form: LagrangianTwoForm) -> Dict[Tuple[int, int, int], DiffPoly]:
    """M_ijk = D_k L_ij - D_j L_ik + D_i L_jk for i < j < k."""
    if form.n < 3:
        raise ValueError("dL needs N >= 3")
    out = {}
    for i, j, k in combinations(range(1, form.n + 1), 3):
        out[(i, j, k)] = (
            total_derivative(form[(i, j)], k)
            - total_derivative(form[(i, k)], j)
            + total_derivative(form[(j, k)], i)
        )
    return out


@dataclass(frozen=True)
class ClosednessResidual:
    reduced: DiffPoly
    reduced_x_derivative: DiffPoly

    @property
    def vanishes(self) -> bool:
        return not self.reduced and not self.reduced_x_derivative


def closedness_check(
    form: LagrangianTwoForm, system: RewritingSystem, omit: Optional[int] = None
) -> Dict[Tuple[int, int, int], ClosednessResidual]:
    """Every M_ijk and D_x M_ijk reduced modulo all flows except `omit`."""
    if omit is not None and isinstance(system, EvolutionSystem) and omit not in system.rhs:
        raise UnknownFlow(omit)
    skip = () if omit is None else (omit,)
    out = {}
    for key, m in dL_coefficients(form).items():
        out[key] = ClosednessResidual(
            system.reduce(m, skip),
            system.reduce(total_derivative(m, 1), skip),
        )
    return out


# -- first-jet curve system ----------------------------------------------------------------------


def first_jet_system(lagrangians: Sequence[DiffPoly]) -> Dict[Tuple[ELFamily, Tuple[int, ...], Tuple[int, ...]], DiffPoly]:
    """For first-jet L_i: dL_i/du - D_i dL_i/du_i, dL_i/du_j (j != i) and dL_i/du_i - dL_j/du_j."""
    n = len(lagrangians)
    zero = MultiIndex.zero(n)
    unit = [MultiIndex.unit(n, k) for k in range(1, n + 1)]
    out = {}
    for i in range(1, n + 1):
        li = lagrangians[i - 1]
        out[(ELFamily.CURVES_0, (i,), tuple(zero))] = li.partial(zero) - total_derivative(li.partial(unit[i - 1]), i)
        for j in range(1, n + 1):
            if j != i:
                out[(ELFamily.CURVES_0, (i,), tuple(unit[j - 1]))] = li.partial(unit[j - 1])
    for i, j in combinations(range(1, n + 1), 2):
        out[(ELFamily.CURVES_1, (i, j), tuple(zero))] = (
            lagrangians[i - 1].partial(unit[i - 1]) - lagrangians[j - 1].partial(unit[j - 1])
        )
    return out
