"""Total and partial derivatives, variational derivatives, x-antiderivatives and
evolutionary vector fields."""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import Monomial, MultiIndex, make_monomial
from plurilag.core.exceptions import DimensionError, NotExact, UnsupportedPolynomial
from plurilag.core.logging import get_logger

logger = get_logger(__name__)


def _check_coordinate(p: DiffPoly, i: int) -> None:
    if not 1 <= i <= p.n:
        raise DimensionError(f"coordinate index {i} outside 1..{p.n}")


def _as_index(p: DiffPoly, index) -> MultiIndex:
    idx = index if isinstance(index, MultiIndex) else MultiIndex(index)
    if idx.n != p.n:
        raise DimensionError(f"multi-index of length {idx.n} in dimension {p.n}")
    return idx


def total_derivative(p: DiffPoly, i: int) -> DiffPoly:
    """D_i p = sum_I u_{I+e_i} dp/du_I."""
    _check_coordinate(p, i)
    terms: Dict[Monomial, object] = {}
    for mono, c in p.terms.items():
        for var, pieces in p._partials_of(mono):
            shifted = var.shift(i)
            for m, k in pieces:
                jets = dict(m.jets)
                jets[shifted] = jets.get(shifted, 0) + 1
                trig = m.trig
                key = make_monomial(jets, trig.sin if trig else 0, trig.cos if trig else 0)
                terms[key] = terms.get(key, 0) + c * k
    return DiffPoly._raw(p.n, {m: c for m, c in terms.items() if c})


def total_derivative_multi(p: DiffPoly, index) -> DiffPoly:
    """D_I p, one coordinate at a time (total derivatives commute)."""
    idx = _as_index(p, index)
    for k, e in enumerate(idx, start=1):
        for _ in range(e):
            p = total_derivative(p, k)
    return p


def partial(p: DiffPoly, index) -> DiffPoly:
    """dp/du_I with distinct jet variables independent."""
    return p.partial(_as_index(p, index))


class VariationalDerivative:
    """Variational derivatives of one polynomial over many multi-indices.

    The gradient and every chain D_i^a D_j^b dp/du_J are computed once; only
    variables occurring in p contribute.
    """

    def __init__(self, p: DiffPoly):
        self.p = p
        self.n = p.n
        self.gradient = p.gradient()
        self._chains: Dict[tuple, DiffPoly] = {}

    def _chain(self, var: MultiIndex, i: int, alpha: int, j: int, beta: int) -> DiffPoly:
        key = (var, i, alpha, j if beta else 0, beta)
        cached = self._chains.get(key)
        if cached is not None:
            return cached
        if beta:
            value = total_derivative(self._chain(var, i, alpha, j, beta - 1), j)
        elif alpha:
            value = total_derivative(self._chain(var, i, alpha - 1, j, 0), i)
        else:
            value = self.gradient[var]
        self._chains[key] = value
        return value

    def directional(self, index, i: int) -> DiffPoly:
        """delta_i p / delta u_I"""
        idx = _as_index(self.p, index)
        _check_coordinate(self.p, i)
        result = DiffPoly.zero(self.n)
        for var in self.gradient:
            diff = var - idx
            if diff is None or diff.order != diff.exponent(i):
                continue
            alpha = diff.order
            term = self._chain(var, i, alpha, i, 0)
            result = result + term if alpha % 2 == 0 else result - term
        return result

    def planar(self, index, i: int, j: int) -> DiffPoly:
        """delta_ij p / delta u_I"""
        idx = _as_index(self.p, index)
        _check_coordinate(self.p, i)
        _check_coordinate(self.p, j)
        if i == j:
            raise ValueError("two-direction variational derivative needs i != j")
        result = DiffPoly.zero(self.n)
        for var in self.gradient:
            diff = var - idx
            if diff is None:
                continue
            alpha, beta = diff.exponent(i), diff.exponent(j)
            if alpha + beta != diff.order:
                continue
            term = self._chain(var, i, alpha, j, beta)
            result = result + term if (alpha + beta) % 2 == 0 else result - term
        return result


def var_derivative_1d(p: DiffPoly, index, i: int, bound: Optional[int] = None) -> DiffPoly:
    """delta_i p / delta u_I = sum_a (-1)^a D_i^a dp/du_{I i^a}.

    Without `bound` the sum runs over the variables that actually occur in p;
    with it, over a <= bound literally.
    """
    if bound is None:
        return VariationalDerivative(p).directional(index, i)
    idx = _as_index(p, index)
    _check_coordinate(p, i)
    result = DiffPoly.zero(p.n)
    for alpha in range(bound + 1):
        term = partial(p, idx.shift(i, alpha))
        for _ in range(alpha):
            term = total_derivative(term, i)
        result = result + term if alpha % 2 == 0 else result - term
    return result


def var_derivative_2d(p: DiffPoly, index, i: int, j: int, bound: Optional[int] = None) -> DiffPoly:
    """delta_ij p / delta u_I = sum_{a,b} (-1)^{a+b} D_i^a D_j^b dp/du_{I i^a j^b}.

    Support-based like var_derivative_1d unless `bound` truncates a + b explicitly.
    """
    if bound is None:
        return VariationalDerivative(p).planar(index, i, j)
    idx = _as_index(p, index)
    _check_coordinate(p, i)
    _check_coordinate(p, j)
    if i == j:
        raise ValueError("two-direction variational derivative needs i != j")
    result = DiffPoly.zero(p.n)
    pairs = [
        (alpha, total - alpha, partial(p, idx.shift(i, alpha).shift(j, total - alpha)))
        for total in range(bound + 1)
        for alpha in range(total + 1)
    ]
    for alpha, beta, dp in pairs:
        if not dp:
            continue
        term = dp
        for _ in range(alpha):
            term = total_derivative(term, i)
        for _ in range(beta):
            term = total_derivative(term, j)
        result = result + term if (alpha + beta) % 2 == 0 else result - term
    return result


def euler_operator(p: DiffPoly) -> DiffPoly:
    """Classical delta/delta u in the x-direction."""
    return var_derivative_1d(p, MultiIndex.zero(p.n), 1)


# -- x-antiderivative ----------------------------------------------------------------


def _x_order_profile(mono: Monomial) -> Tuple[int, int]:
    """(degree, sum of orders) -- D_x keeps the first and raises the second by one."""
    return mono.jet_degree, sum(var.order * e for var, e in mono.jets)


def _basis(n: int, degree: int, order_sum: int, max_order: int) -> List[Monomial]:
    """Pure-x monomials of the given degree and order sum, orders capped at max_order."""
    out = []
    for orders in combinations_with_replacement(range(max_order + 1), degree):
        if sum(orders) != order_sum:
            continue
        jets: Dict[MultiIndex, int] = defaultdict(int)
        for o in orders:
            jets[MultiIndex.pure_x(n, o)] += 1
        out.append(make_monomial(jets))
    return out


def x_antiderivative(p: DiffPoly) -> DiffPoly:
    """q with D_x q = p and zero constant term.

    Solved as a linear system over QQ per (degree, order-sum) block of the monomial
    basis; D_x is homogeneous for both gradings.
    """
    if not p.is_pure_x():
        raise DimensionError("x-antiderivative needs pure-x input")
    if p.has_trig():
        raise UnsupportedPolynomial("x-antiderivative of a trig-extended polynomial")
    if not p:
        return p
    if p.constant_term():
        raise NotExact("nonzero constant term")
    if euler_operator(p):
        raise NotExact("Euler operator does not vanish")

    blocks: Dict[Tuple[int, int], Dict[Monomial, object]] = defaultdict(dict)
    for mono, c in p.terms.items():
        blocks[_x_order_profile(mono)][mono] = c

    top = p.max_order() - 1
    result = DiffPoly.zero(p.n)
    for (degree, order_sum), target in sorted(blocks.items()):
        basis = _basis(p.n, degree, order_sum - 1, top)
        result = result + _solve_block(p.n, basis, target)
    logger.debug(f"x-antiderivative: {len(p)} terms -> {len(result)} terms")
    return result


def _solve_block(n: int, basis: List[Monomial], target: Dict[Monomial, object]) -> DiffPoly:
    images = [total_derivative(DiffPoly._raw(n, {m: QQ(1)}), 1) for m in basis]
    rows_index: Dict[Monomial, int] = {}
    for image in images:
        for m in image.terms:
            rows_index.setdefault(m, len(rows_index))
    for m in target:
        if m not in rows_index:
            raise NotExact("target monomial outside the image of D_x")
    width = len(basis) + 1
    rows = [[QQ(0)] * width for _ in rows_index]
    for col, image in enumerate(images):
        for m, c in image.terms.items():
            rows[rows_index[m]][col] = c
    for m, c in target.items():
        rows[rows_index[m]][-1] = c
    if not rows:
        raise NotExact("empty antiderivative basis")
    reduced, pivots = DomainMatrix(rows, (len(rows), width), QQ).rref()
    if len(basis) in pivots:
        raise NotExact("inconsistent antiderivative system")
    solved = reduced.to_list()
    terms = {}
    for row, col in enumerate(pivots):
        terms[basis[col]] = solved[row][-1]
    return DiffPoly(n, terms)


# -- evolutionary vector fields --------------------------------------------------------


class EvolutionaryVF:
    """Evolutionary vector field with characteristic phi; prolongation coefficients D_I phi
    are derived on demand and memoised."""

    __slots__ = ("characteristic", "_coefficients")

    def __init__(self, characteristic: DiffPoly):
        self.characteristic = characteristic
        self._coefficients: Dict[MultiIndex, DiffPoly] = {MultiIndex.zero(characteristic.n): characteristic}

    @property
    def n(self) -> int:
        return self.characteristic.n

    def coefficient(self, index: MultiIndex) -> DiffPoly:
        """phi_I = D_I phi"""
        cached = self._coefficients.get(index)
        if cached is not None:
            return cached
        k = index.support()[-1]
        value = total_derivative(self.coefficient(index.drop(k)), k)
        self._coefficients[index] = value
        return value

    def __call__(self, p: DiffPoly, skip: Optional[int] = None) -> DiffPoly:
        return prolong_vf(self, p, skip=skip)


def prolong_vf(vf: EvolutionaryVF, p: DiffPoly, skip: Optional[int] = None) -> DiffPoly:
    """sum_I (D_I phi) dp/du_I; with `skip`, only over I not containing that coordinate."""
    if vf.n != p.n:
        raise DimensionError(f"dimension mismatch: {vf.n} vs {p.n}")
    result = DiffPoly.zero(p.n)
    for var, dp in p.gradient().items():
        if skip is not None and var.contains(skip):
            continue
        result = result + vf.coefficient(var) * dp
    return result
