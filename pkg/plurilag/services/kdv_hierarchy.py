"""KdV/PKdV data: resolvent coefficients r_k, flows g_k, Hamiltonian densities h_k,
the tables a_ij and b_ij, and the pluri-Lagrangian two-form."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from sympy import QQ

from plurilag.algebra.bicomplex import BiForm
from plurilag.algebra.diffpoly import DiffPoly, as_rational
from plurilag.algebra.jets import JetSpace, MultiIndex
from plurilag.algebra.operators import (
    EvolutionaryVF,
    prolong_vf,
    total_derivative,
    var_derivative_1d,
    x_antiderivative,
)
from plurilag.algebra.rewriting import EvolutionSystem, substitute_flow
from plurilag.core.exceptions import DimensionError, PotentialDependence
from plurilag.core.logging import get_logger

logger = get_logger(__name__)

# z^0 coefficient of R R_xx - R_x^2/2 + 2(u - z^2/4) R^2 for r_0 = 1/2
FIRST_INTEGRAL_CONSTANT = QQ(-1, 8)


# -- index shift between the u- and v-conventions -------------------------------------


def shift_to_potential(p: DiffPoly) -> DiffPoly:
    """f[u] -> f[v_x]: every u_{x^m} becomes v_{x^{m+1}}."""
    if not p.is_pure_x():
        raise DimensionError("index shift needs pure-x input")
    return p.map_jets(lambda var: var.shift(1))


def shift_to_field(p: DiffPoly) -> DiffPoly:
    """Inverse shift v_{x^{m+1}} -> u_{x^m}; v itself must not occur."""
    if not p.is_pure_x():
        raise DimensionError("index shift needs pure-x input")
    if p.depends_on(MultiIndex.zero(p.n)):
        raise PotentialDependence("polynomial depends on v itself")
    return p.map_jets(lambda var: var.drop(1))


# -- resolvent --------------------------------------------------------------------------


def resolvent_coeffs(n: int, k_max: int) -> List[DiffPoly]:
    """r_0 = 1/2 and D_x r_k = (r_{k-1})_xxx + 4u (r_{k-1})_x + 2u_x r_{k-1}."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    u = DiffPoly.x_var(n, 0)
    u_x = DiffPoly.x_var(n, 1)
    r = [DiffPoly.constant(n, QQ(1, 2))]
    for k in range(1, k_max + 1):
        prev = r[-1]
        prev_x = total_derivative(prev, 1)
        prev_xxx = total_derivative(total_derivative(prev_x, 1), 1)
        rhs = prev_xxx + u * prev_x * 4 + u_x * prev * 2
        r.append(x_antiderivative(rhs))
        logger.debug(f"r_{k}: {len(r[-1])} terms")
    return r


@dataclass(frozen=True)
class FirstIntegral:
    """Coefficients of z^0, z^-2, ..., z^-2k of the resolvent first integral."""

    coefficients: Tuple[DiffPoly, ...]
    expected: Tuple[DiffPoly, ...]

    @property
    def residuals(self) -> List[DiffPoly]:
        return [c - e for c, e in zip(self.coefficients, self.expected)]

    @property
    def holds(self) -> bool:
        return not any(self.residuals)


def check_first_integral(r: List[DiffPoly], k_max: int) -> FirstIntegral:
    """Expand R R_xx - R_x^2/2 + 2(u - z^2/4) R^2 with R = sum r_k z^{-2k-1}.

    The coefficient of z^{-2m} is
    sum_{a+b=m-1} (r_a r_b'' - r_a' r_b'/2 + 2u r_a r_b) - sum_{a+b=m} r_a r_b / 2;
    only m <= k_max is fully determined by r_0..r_kmax.
    """
    if len(r) < k_max + 1:
        raise ValueError(f"need r_0..r_{k_max}, got {len(r)} coefficients")
    n = r[0].n
    u = DiffPoly.x_var(n, 0)
    d1 = [total_derivative(p, 1) for p in r[: k_max + 1]]
    d2 = [total_derivative(p, 1) for p in d1]
    coefficients = []
    for m in range(k_max + 1):
        c = DiffPoly.zero(n)
        for a in range(m):
            b = m - 1 - a
            c = c + r[a] * d2[b] - d1[a] * d1[b] / 2 + u * r[a] * r[b] * 2
        for a in range(m + 1):
            c = c - r[a] * r[m - a] / 2
        coefficients.append(c)
    expected = [DiffPoly.constant(n, FIRST_INTEGRAL_CONSTANT)] + [DiffPoly.zero(n)] * k_max
    return FirstIntegral(tuple(coefficients), tuple(expected))


# -- a_ij, b_ij -------------------------------------------------------------------------


def compute_a(h_i: DiffPoly, j: int) -> DiffPoly:
    """a_ij = sum_alpha v_{x^alpha t_j} * delta h_i / delta v_{x^(alpha+1)}."""
    n = h_i.n
    result = DiffPoly.zero(n)
    for alpha in range(h_i.max_order()):
        coeff = var_derivative_1d(h_i, MultiIndex.pure_x(n, alpha + 1), 1)
        if coeff:
            index = MultiIndex.pure_x(n, alpha).shift(j)
            result = result + DiffPoly.var(n, index) * coeff
    return result


def compute_b(g_i: DiffPoly, g_j: DiffPoly) -> DiffPoly:
    """b_ij: the x-antiderivative of D_x(g_i) g_j with zero constant term."""
    return x_antiderivative(total_derivative(g_i, 1) * g_j)


# -- context ------------------------------------------------------------------------------


@dataclass
class HierarchyContext:
    """The hierarchy data for N-dimensional multi-time, flows up to k_max.

    r holds r_0..r_{k_max+1} (u-convention); g holds g_1..g_{k_max+1} and h holds
    h_1..h_{k_max} (v-convention); a is indexed by i <= k_max, j <= N and b by
    i, j <= k_max.
    """

    n: int
    k_max: int
    r: List[DiffPoly]
    g: Dict[int, DiffPoly]
    h: Dict[int, DiffPoly]
    a: Dict[Tuple[int, int], DiffPoly] = field(default_factory=dict)
    b: Dict[Tuple[int, int], DiffPoly] = field(default_factory=dict)

    @classmethod
    def build(cls, n: int, k_max: Optional[int] = None) -> "HierarchyContext":
        k_max = n if k_max is None else k_max
        logger.info(f"Building KdV hierarchy context (N={n}, k_max={k_max})")
        r = resolvent_coeffs(n, k_max + 1)
        g = {k: shift_to_potential(r[k]) for k in range(1, k_max + 2)}
        h = {k: g[k + 1] / (4 * k + 2) for k in range(1, k_max + 1)}
        a = {(i, j): compute_a(h[i], j) for i in range(1, k_max + 1) for j in range(1, n + 1)}
        b = {
            (i, j): compute_b(g[i], g[j])
            for i in range(1, k_max + 1)
            for j in range(1, k_max + 1)
        }
        logger.info(f"Hierarchy context ready: {sum(len(p) for p in g.values())} flow terms")
        return cls(n, k_max, r, g, h, a, b)

    @property
    def field_space(self) -> JetSpace:
        return JetSpace.pkdv(self.n, "u")

    @property
    def space(self) -> JetSpace:
        return JetSpace.pkdv(self.n, "v")

    def pkdv_rhs(self, k: int) -> DiffPoly:
        return self.g[k]

    def hamiltonian_density(self, k: int) -> DiffPoly:
        return self.h[k]

    @cached_property
    def system(self) -> EvolutionSystem:
        """The PKdV flows v_{t_j} = g_j, 2 <= j <= N."""
        return EvolutionSystem({j: self.g[j] for j in range(2, self.n + 1)}, self.n)

    def v_time(self, j: int, x_order: int = 0) -> DiffPoly:
        """v_{x^x_order t_j}"""
        return DiffPoly.var(self.n, MultiIndex.pure_x(self.n, x_order).shift(j))

    def v_x(self, order: int = 1) -> DiffPoly:
        return DiffPoly.x_var(self.n, order)

    def named_polynomials(self) -> Iterator[Tuple[str, DiffPoly]]:
        """Every cached polynomial under its symbol, in a fixed order."""
        for k, p in enumerate(self.r):
            yield f"r_{k}", p
        for k, p in sorted(self.g.items()):
            yield f"g_{k}", p
        for k, p in sorted(self.h.items()):
            yield f"h_{k}", p
        for (i, j), p in sorted(self.a.items()):
            yield f"a_{i}{j}", p
        for (i, j), p in sorted(self.b.items()):
            yield f"b_{i}{j}", p


# -- the two-form ----------------------------------------------------------------------


class LagrangianTwoForm:
    """Coefficients L_ij, i < j, of L = sum L_ij dt_i ∧ dt_j; L_ji = -L_ij on access."""

    def __init__(self, n: int, table: Mapping[Tuple[int, int], DiffPoly]):
        self.n = n
        self.table: Dict[Tuple[int, int], DiffPoly] = {}
        for (i, j), p in table.items():
            if not (1 <= i < j <= n):
                raise DimensionError(f"two-form index ({i}, {j}) outside 1 <= i < j <= {n}")
            if p.n != n:
                raise DimensionError(f"L_{i}{j} has dimension {p.n}, expected {n}")
            self.table[(i, j)] = p

    def __getitem__(self, key: Tuple[int, int]) -> DiffPoly:
        i, j = key
        if i == j:
            return DiffPoly.zero(self.n)
        if i < j:
            return self.table.get((i, j), DiffPoly.zero(self.n))
        return -self.table.get((j, i), DiffPoly.zero(self.n))

    def items(self) -> List[Tuple[Tuple[int, int], DiffPoly]]:
        return sorted(self.table.items())

    def max_order(self) -> int:
        return max((p.max_order() for p in self.table.values()), default=0)

    def to_form(self) -> BiForm:
        """L as a (0,2)-form of the bicomplex."""
        return BiForm(self.n, (0, 2), {((), (i, j)): p for (i, j), p in self.table.items()})


def lagrangian_1i(ctx: HierarchyContext, i: int) -> DiffPoly:
    """L_1i = v_x v_{t_i} / 2 - h_i"""
    return ctx.v_x() * ctx.v_time(i) / 2 - ctx.h[i]


def lagrangian_ij(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """L_ij = (v_{t_i} g_j - v_{t_j} g_i)/2 + (a_ij - a_ji) - (b_ij - b_ji)/2"""
    g, a, b = ctx.g, ctx.a, ctx.b
    return (
        (ctx.v_time(i) * g[j] - ctx.v_time(j) * g[i]) / 2
        + (a[(i, j)] - a[(j, i)])
        - (b[(i, j)] - b[(j, i)]) / 2
    )


def build_two_form(ctx: HierarchyContext) -> LagrangianTwoForm:
    if ctx.k_max < ctx.n:
        raise ValueError(f"two-form in dimension {ctx.n} needs k_max >= {ctx.n}")
    table = {}
    for j in range(2, ctx.n + 1):
        table[(1, j)] = lagrangian_1i(ctx, j)
    for i in range(2, ctx.n + 1):
        for j in range(i + 1, ctx.n + 1):
            table[(i, j)] = lagrangian_ij(ctx, i, j)
    return LagrangianTwoForm(ctx.n, table)


def c_family_member(ctx: HierarchyContext, i: int, j: int, c) -> DiffPoly:
    """c v_ti v_tj + (a_ij - a_ji) + (1/2 - c) v_ti g_j - (1/2 + c) v_tj g_i
    + (b_ji - b_ij)/2 + c g_i g_j"""
    if i == j or min(i, j) < 2:
        raise ValueError("c-family needs distinct time indices >= 2")
    c = as_rational(c)
    half = QQ(1, 2)
    g, a, b = ctx.g, ctx.a, ctx.b
    vi, vj = ctx.v_time(i), ctx.v_time(j)
    return (
        vi * vj * c
        + (a[(i, j)] - a[(j, i)])
        + vi * g[j] * (half - c)
        - vj * g[i] * (half + c)
        + (b[(j, i)] - b[(i, j)]) / 2
        + g[i] * g[j] * c
    )


def a_substituted(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """a_ij with v_{x^alpha t_j} replaced by D_x^alpha g_j."""
    return substitute_flow(ctx.a[(i, j)], ctx.system, j)


def lagrangian_ij_i(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """L_ij^(i) = v_ti g_j / 2 + (a_ij^(g_j) - a_ji) - b_ij"""
    return ctx.v_time(i) * ctx.g[j] / 2 + (a_substituted(ctx, i, j) - ctx.a[(j, i)]) - ctx.b[(i, j)]


def lagrangian_ij_j(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """L_ij^(j) = -v_tj g_i / 2 + (a_ij - a_ji^(g_i)) + b_ji"""
    return -ctx.v_time(j) * ctx.g[i] / 2 + (ctx.a[(i, j)] - a_substituted(ctx, j, i)) + ctx.b[(j, i)]


def lagrangian_1i_on_flow(ctx: HierarchyContext, i: int) -> DiffPoly:
    """L_1i^(g_i) = v_x g_i / 2 - h_i"""
    return ctx.v_x() * ctx.g[i] / 2 - ctx.h[i]


def varsym_residual(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """D_{g_j}(L_1i) - D_i(L_1j^(g_j)) + D_x(L_ij^(i)), with D_{g_j} summing over I not containing t_j."""
    flow = EvolutionaryVF(ctx.g[j])
    return (
        prolong_vf(flow, lagrangian_1i(ctx, i), skip=j)
        - total_derivative(lagrangian_1i_on_flow(ctx, j), i)
        + total_derivative(lagrangian_ij_i(ctx, i, j), 1)
    )


def varsym_residual_j(ctx: HierarchyContext, i: int, j: int) -> DiffPoly:
    """D_{g_i}(L_1j) - D_j(L_1i^(g_i)) - D_x(L_ij^(j))"""
    flow = EvolutionaryVF(ctx.g[i])
    return (
        prolong_vf(flow, lagrangian_1i(ctx, j), skip=i)
        - total_derivative(lagrangian_1i_on_flow(ctx, i), j)
        - total_derivative(lagrangian_ij_j(ctx, i, j), 1)
    )


def closedness_factor(ctx: HierarchyContext, j: int, k: int) -> DiffPoly:
    """(v_tj - g_j) D_x(v_tk - g_k)/2 - (v_tk - g_k) D_x(v_tj - g_j)/2"""
    ej = ctx.v_time(j) - ctx.g[j]
    ek = ctx.v_time(k) - ctx.g[k]
    return (ej * total_derivative(ek, 1) - ek * total_derivative(ej, 1)) / 2
