import pytest

from plurilag.algebra.bicomplex import BiForm, wedge
from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.render import parse, parse_jet, render, render_form, render_jet
from plurilag.services.sampling import random_poly


def test_render_orders_highest_monomial_first(u3):
    u = DiffPoly.x_var(3, 0)
    r3 = DiffPoly.x_var(3, 4) + u * DiffPoly.x_var(3, 2) * 10 + DiffPoly.x_var(3, 1) ** 2 * 5 + u ** 3 * 10
    assert render(r3, u3) == "10*u^3 + 5*u_x^2 + 10*u*u_xx + u_xxxx"


def test_render_signs_and_constants(u3):
    assert render(DiffPoly.zero(3), u3) == "0"
    assert render(DiffPoly.constant(3, "1/2"), u3) == "1/2"
    assert render(-DiffPoly.x_var(3, 0), u3) == "-u"
    assert render(DiffPoly.x_var(3, 1) - 1, u3) == "u_x - 1"


@pytest.mark.parametrize(
    "index, text",
    [((0, 0, 0), "u"), ((2, 0, 0), "u_xx"), ((0, 2, 0), "u_t2t2"), ((1, 1, 0), "u_x,t2"), ((0, 1, 1), "u_t2,t3")],
)
def test_jets_in_pkdv_coordinates(u3, index, text):
    assert render_jet(MultiIndex(index), u3) == text
    assert parse_jet(text, u3) == MultiIndex(index)


def test_jets_in_compact_coordinates(sg):
    assert render_jet(MultiIndex((2, 1, 0)), sg) == "u_xxy"
    assert parse_jet("u_xxy", sg) == MultiIndex((2, 1, 0))


def test_render_trig(sg):
    p = DiffPoly.x_var(3, 1) ** 2 * DiffPoly.cos_u(3) / 2 - DiffPoly.var(3, (2, 0, 0)) * DiffPoly.sin_u(3)
    assert render(p, sg) == "1/2*u_x^2*cos(u) - u_xx*sin(u)"


def test_parse_accepts_implicit_products(u3):
    assert parse("2 u u_x", u3) == DiffPoly.x_var(3, 0) * DiffPoly.x_var(3, 1) * 2
    assert parse("-u_x,t2 + 1/3*u^2", u3) == DiffPoly.x_var(3, 0) ** 2 / 3 - DiffPoly.var(3, (1, 1, 0))


def test_parse_normalises_trig(sg):
    cos = DiffPoly.cos_u(3)
    assert parse("sin(u)^2", sg) == 1 - cos ** 2
    assert render(parse("sin(u)^2", sg), sg) == "-cos(u)^2 + 1"


@pytest.mark.parametrize(
    "text",
    ["10*u^3 + 5*u_x^2 + 10*u*u_xx + u_xxxx", "u_x*cos(u) - u_xxy", "-1/2*u_z*u_y", "1/2*u_x^2*cos(u) - u_xx*sin(u)"],
)
def test_canonical_text_is_a_fixed_point(sg, text):
    assert render(parse(text, sg), sg) == text


@pytest.mark.parametrize("text", ["w", "u_q", "u +", "u ^ 1/2", "sin(v)"])
def test_parse_errors(u3, text):
    with pytest.raises(ValueError):
        parse(text, u3)


def test_parse_inverts_render(u3, rng):
    for _ in range(50):
        p = random_poly(rng, 3, max_order=3, max_degree=3)
        assert parse(render(p, u3), u3) == p


def test_render_rejects_foreign_space(sg):
    with pytest.raises(ValueError):
        render(DiffPoly.x_var(2, 1), sg)


def test_render_form(u3):
    form = wedge(BiForm.vertical(3, (1, 0, 0)), BiForm.horizontal(3, 2)) * DiffPoly.x_var(3, 0)
    assert render_form(form, u3) == "(u) δu_x ∧ dt2"
    assert render_form(BiForm.zero(3, 1, 1), u3) == "0"
