"""The sine-Gordon/mKdV two-form in (x, y, z) and the identities it satisfies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import JetSpace, MultiIndex
from plurilag.algebra.operators import EvolutionaryVF, prolong_vf, total_derivative, var_derivative_2d
from plurilag.algebra.render import parse
from plurilag.algebra.rewriting import SineGordonSystem
from plurilag.core.logging import get_logger
from plurilag.services.euler_lagrange import ELEquation, ELReport, classify, dL_coefficients, el_surfaces
from plurilag.services.kdv_hierarchy import LagrangianTwoForm

logger = get_logger(__name__)

SPACE = JetSpace.sine_gordon()

L12 = "1/2*u_y*u_x - cos(u)"
L13 = "-1/8*u_x^4 + 1/2*u_xx^2 + 1/2*u_z*u_x"
L23 = "1/2*u_x^2*cos(u) - u_xx*sin(u) + u_xy*u_xx - 1/2*u_z*u_y"

# characteristic of the mKdV flow, a variational symmetry of L_12
PHI = "u_xxx + 1/2*u_x^3"


def poly(text: str) -> DiffPoly:
    return parse(text, SPACE)


def symmetry_fluxes(phi: DiffPoly) -> Tuple[DiffPoly, DiffPoly]:
    """M = phi u_x/2 - u_x^4/8 + u_xx^2/2 and N = phi u_y/2 - u_x^2 cos(u)/2 - u_xx(u_xy - sin u)."""
    flux_m = phi * poly("u_x") / 2 + poly("-1/8*u_x^4 + 1/2*u_xx^2")
    flux_n = phi * poly("u_y") / 2 - poly("1/2*u_x^2*cos(u)") - poly("u_xx") * poly("u_xy - sin(u)")
    return flux_m, flux_n


def sg_two_form() -> LagrangianTwoForm:
    return LagrangianTwoForm(3, {(1, 2): poly(L12), (1, 3): poly(L13), (2, 3): poly(L23)})


def dl_expected() -> DiffPoly:
    """-(u_z - u_x^3/2 - u_xxx)(u_xy - sin u)"""
    mkdv = poly("u_z - 1/2*u_x^3 - u_xxx")
    sine_gordon = poly("u_xy - sin(u)")
    return -(mkdv * sine_gordon)


def variational_symmetry_residual(
    characteristic: Optional[DiffPoly] = None, lagrangian: Optional[DiffPoly] = None
) -> DiffPoly:
    """D_phi L_12 - D_x N - D_y M, the fluxes always those of the mKdV characteristic."""
    phi = poly(PHI) if characteristic is None else characteristic
    lag = poly(L12) if lagrangian is None else lagrangian
    flux_m, flux_n = symmetry_fluxes(poly(PHI))
    return prolong_vf(EvolutionaryVF(phi), lag) - total_derivative(flux_n, 1) - total_derivative(flux_m, 2)


@dataclass(frozen=True)
class ChecklistItem:
    """One itemised variational derivative (or difference of two) with its expected value."""

    name: str
    computed: DiffPoly
    expected: DiffPoly

    @property
    def passed(self) -> bool:
        return self.computed == self.expected


def _delta(form: LagrangianTwoForm, i: int, j: int, index) -> DiffPoly:
    return var_derivative_2d(form[(i, j)], MultiIndex(index), i, j)


def proof_checklist(form: LagrangianTwoForm = None) -> List[ChecklistItem]:
    """The itemised multi-time Euler-Lagrange equations of the sine-Gordon two-form."""
    L = form or sg_two_form()
    items = [
        ("δ12L12/δu", _delta(L, 1, 2, (0, 0, 0)), "sin(u) - u_xy"),
        ("δ13L13/δu", _delta(L, 1, 3, (0, 0, 0)), "-u_xz + 3/2*u_x^2*u_xx + u_xxxx"),
        ("δ23L23/δu", _delta(L, 2, 3, (0, 0, 0)), "u_yz - 1/2*u_x^2*sin(u) - u_xx*cos(u)"),
        ("δ23L23/δu_x", _delta(L, 2, 3, (1, 0, 0)), "u_x*cos(u) - u_xxy"),
        ("δ23L23/δu_xx", _delta(L, 2, 3, (2, 0, 0)), "u_xy - sin(u)"),
        ("δ13L13/δu_x", _delta(L, 1, 3, (1, 0, 0)), "1/2*u_z - 1/2*u_x^3 - u_xxx"),
        ("δ23L23/δu_y", _delta(L, 2, 3, (0, 1, 0)), "-1/2*u_z"),
        ("δ13L13/δu_xx - δ23L23/δu_xy", _delta(L, 1, 3, (2, 0, 0)) - _delta(L, 2, 3, (1, 1, 0)), "0"),
        ("δ12L12/δu_y - δ13L13/δu_z", _delta(L, 1, 2, (0, 1, 0)) - _delta(L, 1, 3, (0, 0, 1)), "0"),
        ("δ13L13/δu_xx", _delta(L, 1, 3, (2, 0, 0)), "u_xx"),
        ("δ12L12/δu_y", _delta(L, 1, 2, (0, 1, 0)), "1/2*u_x"),
        ("δ12L12/δu_x", _delta(L, 1, 2, (1, 0, 0)), "1/2*u_y"),
        ("δ32L32/δu_z", _delta(L, 3, 2, (0, 0, 1)), "1/2*u_y"),
        ("δ12L12/δu_x - δ32L32/δu_z", _delta(L, 1, 2, (1, 0, 0)) - _delta(L, 3, 2, (0, 0, 1)), "0"),
    ]
    return [ChecklistItem(name, computed, poly(expected)) for name, computed, expected in items]


@dataclass
class SineGordonVerification:
    report: ELReport
    checklist: List[ChecklistItem]
    dl: DiffPoly
    dl_expected: DiffPoly
    varsym: DiffPoly
    closed_on_either: Dict[str, DiffPoly]

    @property
    def dl_factorizes(self) -> bool:
        return self.dl == self.dl_expected

    @property
    def passed(self) -> bool:
        return (
            self.report.passed
            and all(item.passed for item in self.checklist)
            and self.dl_factorizes
            and not self.varsym
            and not any(self.closed_on_either.values())
        )


def closed_on_either() -> Dict[str, DiffPoly]:
    """dL reduced by the sine-Gordon rule alone and by the mKdV rule alone."""
    dl = dL_coefficients(sg_two_form())[(1, 2, 3)]
    return {
        "sine-gordon": SineGordonSystem(mkdv=False).reduce(dl),
        "mkdv": SineGordonSystem(sine_gordon=False).reduce(dl),
    }


def verify_sg(classifier: Callable[[List[ELEquation], SineGordonSystem], ELReport] = classify) -> SineGordonVerification:
    """Run every check; `classifier` defaults to the serial classify()."""
    form = sg_two_form()
    system = SineGordonSystem()
    eqs = el_surfaces(form)
    report = classifier(eqs, system)
    logger.info(f"sine-Gordon: {len(eqs)} equations, counts {report.counts()}")
    dl = dL_coefficients(form)[(1, 2, 3)]
    return SineGordonVerification(
        report=report,
        checklist=proof_checklist(form),
        dl=dl,
        dl_expected=dl_expected(),
        varsym=variational_symmetry_residual(),
        closed_on_either=closed_on_either(),
    )
