"""Formal integrals, the Poisson bracket on them, and involutivity of the KdV Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.operators import euler_operator, total_derivative, var_derivative_1d
from plurilag.core.exceptions import MixedDirections, PotentialDependence
from plurilag.core.logging import get_logger
from plurilag.services.kdv_hierarchy import HierarchyContext, lagrangian_1i, shift_to_field

logger = get_logger(__name__)


class FormalIntegral:
    """∫F: a pure-x differential polynomial taken modulo x-derivatives."""

    __slots__ = ("representative",)

    def __init__(self, representative: DiffPoly):
        if not representative.is_pure_x():
            raise MixedDirections("formal integrals need pure-x representatives")
        self.representative = representative

    @classmethod
    def zero(cls, n: int) -> "FormalIntegral":
        return cls(DiffPoly.zero(n))

    @property
    def n(self) -> int:
        return self.representative.n

    def __add__(self, other: "FormalIntegral") -> "FormalIntegral":
        return FormalIntegral(self.representative + other.representative)

    def __neg__(self) -> "FormalIntegral":
        return FormalIntegral(-self.representative)

    def __sub__(self, other: "FormalIntegral") -> "FormalIntegral":
        return FormalIntegral(self.representative - other.representative)

    def is_zero(self) -> bool:
        return integral_equals(self, FormalIntegral.zero(self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalIntegral):
            return NotImplemented
        return integral_equals(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"∫({self.representative})"


def integral_equals(f: FormalIntegral, g: FormalIntegral) -> bool:
    """True iff F - G has vanishing Euler operator and no constant term."""
    diff = f.representative - g.representative
    return not euler_operator(diff) and not diff.constant_term()


def poisson_bracket(f: FormalIntegral, g: FormalIntegral) -> FormalIntegral:
    """{∫F, ∫G} = ∫(D_x δF/δu) δG/δu"""
    return FormalIntegral(
        total_derivative(euler_operator(f.representative), 1) * euler_operator(g.representative)
    )


def poisson_bracket_potential(f: FormalIntegral, g: FormalIntegral) -> FormalIntegral:
    """{∫F, ∫G} = -∫(δF/δv)(δG/δv_x) for F, G free of v itself."""
    zero = MultiIndex.zero(f.n)
    for integral in (f, g):
        if integral.representative.depends_on(zero):
            raise PotentialDependence("bracket in potential form needs v-independent densities")
    rep_g = g.representative
    return FormalIntegral(
        -(euler_operator(f.representative) * var_derivative_1d(rep_g, MultiIndex.pure_x(rep_g.n, 1), 1))
    )


def hamiltonian(ctx: HierarchyContext, k: int) -> FormalIntegral:
    """∫h_k in the u-convention (v_{x^(m+1)} -> u_{x^m})."""
    return FormalIntegral(shift_to_field(ctx.h[k]))


def involutivity_matrix(ctx: HierarchyContext, k_max: Optional[int] = None) -> List[List[bool]]:
    """Entry (i, j) is True iff {∫h_i, ∫h_j} = ∫0."""
    k_max = k_max or ctx.k_max
    densities = [hamiltonian(ctx, k) for k in range(1, k_max + 1)]
    matrix = [[poisson_bracket(hi, hj).is_zero() for hj in densities] for hi in densities]
    logger.info(f"involutivity matrix {k_max}x{k_max}: {sum(map(sum, matrix))} vanishing brackets")
    return matrix


def hamiltonian_flow_residual(ctx: HierarchyContext, k: int) -> DiffPoly:
    """δh_k/δv + D_x g_k, which vanishes identically."""
    return euler_operator(ctx.h[k]) + total_derivative(ctx.g[k], 1)


@dataclass(frozen=True)
class BracketChain:
    """∫M_1jk (with D_x L_jk dropped and the flows substituted), ∫g_k D_x g_j and {∫h_j, ∫h_k}."""

    closedness: FormalIntegral
    intermediate: FormalIntegral
    bracket: FormalIntegral

    @property
    def difference(self) -> FormalIntegral:
        return self.closedness - self.bracket

    @property
    def consistent(self) -> bool:
        return self.closedness == self.intermediate and self.closedness == self.bracket


def closedness_chain(ctx: HierarchyContext, j: int, k: int) -> BracketChain:
    m = total_derivative(lagrangian_1i(ctx, j), k) - total_derivative(lagrangian_1i(ctx, k), j)
    reduced = ctx.system.reduce(m)
    intermediate = ctx.g[k] * total_derivative(ctx.g[j], 1)
    bracket = poisson_bracket_potential(FormalIntegral(ctx.h[j]), FormalIntegral(ctx.h[k]))
    return BracketChain(FormalIntegral(reduced), FormalIntegral(intermediate), bracket)


def bracket_from_closedness(ctx: HierarchyContext, j: int, k: int) -> FormalIntegral:
    """∫M_1jk - {∫h_j, ∫h_k}; the class of zero when the proof chain holds."""
    if j == k or min(j, k) < 2:
        raise ValueError("needs distinct flow indices >= 2")
    return closedness_chain(ctx, j, k).difference
