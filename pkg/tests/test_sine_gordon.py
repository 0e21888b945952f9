import pytest

from plurilag.algebra.render import render
from plurilag.models.responses import EquationStatus
from plurilag.services.euler_lagrange import ELFamily
from plurilag.services.sine_gordon import (
    SPACE,
    closed_on_either,
    dl_expected,
    poly,
    proof_checklist,
    sg_two_form,
    symmetry_fluxes,
    variational_symmetry_residual,
    verify_sg,
)


@pytest.fixture(scope="module")
def verification():
    return verify_sg()


def test_two_form_coefficients_are_canonical():
    form = sg_two_form()
    assert render(form[(1, 2)], SPACE) == "1/2*u_y*u_x - cos(u)"
    assert render(form[(1, 3)], SPACE) == "-1/8*u_x^4 + 1/2*u_xx^2 + 1/2*u_z*u_x"
    assert render(form[(2, 3)], SPACE) == "1/2*u_x^2*cos(u) - u_xx*sin(u) + u_xy*u_xx - 1/2*u_z*u_y"
    assert form[(2, 1)] == -form[(1, 2)]


@pytest.mark.parametrize("item", proof_checklist(), ids=lambda item: item.name)
def test_checklist_item(item):
    assert item.computed == item.expected


def test_checklist_pairs_the_x_and_z_corner_equations():
    items = {item.name: item for item in proof_checklist()}
    pair = items["δ12L12/δu_x - δ32L32/δu_z"]
    assert pair.passed
    assert items["δ32L32/δu_z"].computed == poly("1/2*u_y")


def test_all_equations_hold_on_solutions(verification):
    report = verification.report
    assert report.passed
    assert report.evolution_flows() == {"sine-gordon", "mkdv"}


def test_named_evolution_equations(verification):
    report = verification.report
    sine_gordon = report.find(ELFamily.SURFACES_0, (1, 2), (0, 0, 0))
    assert sine_gordon.status == EquationStatus.EVOLUTION_EQUATION
    assert sine_gordon.flow == "sine-gordon"
    mkdv = report.find(ELFamily.SURFACES_1, (3, 1, 2), (0, 0, 0))
    assert mkdv.flow == "mkdv"


def test_exterior_derivative_factorises(verification):
    assert verification.dl == dl_expected()
    assert verification.dl_factorizes


def test_closed_on_either_equation():
    residuals = closed_on_either()
    assert set(residuals) == {"sine-gordon", "mkdv"}
    assert all(not r for r in residuals.values())


def test_mkdv_is_a_variational_symmetry():
    assert variational_symmetry_residual() == 0
    flux_m, flux_n = symmetry_fluxes(poly("u_xxx + 1/2*u_x^3"))
    assert flux_m == poly("1/2*u_x*u_xxx + 1/8*u_x^4 + 1/2*u_xx^2")
    assert flux_n.has_trig()


def test_other_characteristics_are_not_symmetries_with_these_fluxes():
    assert variational_symmetry_residual(characteristic=poly("u_x")) != 0


def test_verification_passes(verification):
    assert verification.passed
