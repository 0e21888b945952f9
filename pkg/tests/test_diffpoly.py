from fractions import Fraction

import pytest
from sympy import QQ

from plurilag.algebra.diffpoly import DiffPoly, as_rational
from plurilag.algebra.jets import JetSpace, MultiIndex
from plurilag.algebra.render import render
from plurilag.core.exceptions import DimensionError
from plurilag.services.sampling import random_poly


def u(n=1, order=0, power=1):
    return DiffPoly.x_var(n, order, power)


# -- multi-indices and jet spaces ----------------------------------------------------


def test_multi_index_shift_and_drop():
    idx = MultiIndex((1, 0, 2))
    assert idx.shift(2) == MultiIndex((1, 1, 2))
    assert idx.drop(3) == MultiIndex((1, 0, 1))
    assert idx.order == 3
    assert idx.time_order == 2
    assert idx.support() == (1, 3)
    with pytest.raises(ValueError):
        idx.drop(2)


def test_multi_index_difference_is_none_when_not_below():
    assert MultiIndex((2, 1)) - MultiIndex((1, 1)) == MultiIndex((1, 0))
    assert MultiIndex((0, 1)) - MultiIndex((1, 0)) is None


def test_multi_index_rejects_negative_and_foreign_coordinates():
    with pytest.raises(ValueError):
        MultiIndex((0, -1))
    with pytest.raises(DimensionError):
        MultiIndex.unit(2, 3)
    with pytest.raises(DimensionError):
        MultiIndex((1, 0)) + MultiIndex((1, 0, 0))


def test_jet_spaces():
    pkdv = JetSpace.pkdv(4)
    assert pkdv.coordinates == ("x", "t2", "t3", "t4")
    assert pkdv.field == "v"
    assert not pkdv.compact
    assert JetSpace.sine_gordon().compact
    assert pkdv.index_of("t3") == 3
    with pytest.raises(DimensionError):
        JetSpace(2, ("x",))
    with pytest.raises(ValueError):
        JetSpace(2, ("x", "x"))


# -- coefficients and arithmetic -------------------------------------------------------


@pytest.mark.parametrize(
    "value, expected",
    [(3, QQ(3)), (Fraction(2, 6), QQ(1, 3)), ("-5/10", QQ(-1, 2)), (QQ(7, 2), QQ(7, 2))],
)
def test_as_rational(value, expected):
    assert as_rational(value) == expected


def test_float_and_bool_coefficients_are_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


def test_zero_denominators_are_rejected():
    with pytest.raises(ValueError, match="zero denominator"):
        as_rational("1/0")


def test_zero_coefficients_are_dropped():
    p = u() * 2 - u() - u()
    assert p.is_zero()
    assert p == 0
    assert len(p) == 0


def test_arithmetic_is_exact():
    p = (u(order=1) + u()) ** 2 / 3
    assert p.coefficient(next(iter((u() * u(order=1)).terms))) == QQ(2, 3)
    assert p - p == DiffPoly.zero(1)
    assert DiffPoly.constant(2, QQ(1, 2)) == Fraction(1, 2)
    assert 1 - u() == -(u() - 1)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        u(1) + u(2)
    with pytest.raises(DimensionError):
        DiffPoly.var(2, (1, 0, 0))


def test_negative_powers_are_rejected():
    with pytest.raises(ValueError):
        u() ** -1


def test_trig_normal_form():
    sin, cos = DiffPoly.sin_u(1), DiffPoly.cos_u(1)
    assert sin * sin == 1 - cos ** 2
    assert sin ** 3 == sin - sin * cos ** 2
    assert (sin * cos).has_trig()
    assert sin * cos * sin == cos - cos ** 3


def test_queries():
    p = u(order=3) * u() + u(order=1) ** 2 + 5
    assert p.max_order() == 3
    assert p.degree() == 2
    assert p.constant_term() == 5
    assert p.jet_variables() == [MultiIndex((0,)), MultiIndex((1,)), MultiIndex((3,))]
    assert p.depends_on(MultiIndex((1,)))
    assert not p.depends_on(MultiIndex((2,)))
    assert DiffPoly.sin_u(1).depends_on(MultiIndex((0,)))


def test_pure_x():
    assert (u(2, 3) * u(2)).is_pure_x()
    assert not DiffPoly.var(2, (1, 1)).is_pure_x()


def test_weight():
    r2 = u(order=2) + u() ** 2 * 3
    assert r2.weight(2) == 4
    assert (u() + u(order=1)).weight(2) is None
    # a t_k derivative weighs 2k - 1
    assert DiffPoly.var(3, (1, 0, 1)).weight(1) == 7
    assert DiffPoly.zero(1).weight(2) == 0


def test_partial_derivatives():
    p = u() ** 2 * u(order=1) + u(order=2)
    assert p.partial(MultiIndex((0,))) == u() * u(order=1) * 2
    assert p.partial(MultiIndex((1,))) == u() ** 2
    assert p.partial(MultiIndex((3,))) == 0
    grad = p.gradient()
    assert set(grad) == {MultiIndex((0,)), MultiIndex((1,)), MultiIndex((2,))}


def test_partial_derivatives_of_trig_factors():
    zero = MultiIndex((0,))
    sin, cos = DiffPoly.sin_u(1), DiffPoly.cos_u(1)
    assert sin.partial(zero) == cos
    assert cos.partial(zero) == -sin
    assert (sin * cos).partial(zero) == cos ** 2 * 2 - 1
    assert (u() * sin).partial(zero) == sin + u() * cos


def test_substitute_and_map_jets():
    p = u(order=1) ** 2 + u(order=2)
    swapped = p.substitute(lambda var: u() if var == MultiIndex((1,)) else None)
    assert swapped == u() ** 2 + u(order=2)
    shifted = p.map_jets(lambda var: var.shift(1))
    assert shifted == u(order=2) ** 2 + u(order=3)


def test_equal_polynomials_hash_alike():
    a = u() * u(order=1) + 1
    b = 1 + u(order=1) * u()
    assert a == b
    assert hash(a) == hash(b)
    assert len({a, b}) == 1


# -- random properties ---------------------------------------------------------------


def trig_poly(rng, n=2):
    """Random polynomial with trig factors in every normal-form shape."""
    sin, cos = DiffPoly.sin_u(n), DiffPoly.cos_u(n)
    factors = [DiffPoly.one(n), sin, cos, sin * cos, cos ** 2]
    out = DiffPoly.zero(n)
    for _ in range(rng.randint(1, 3)):
        out = out + random_poly(rng, n, max_order=2, max_degree=2, terms=2) * rng.choice(factors)
    return out


def test_sums_stay_canonical(rng):
    for _ in range(100):
        p, q = trig_poly(rng), trig_poly(rng)
        back = p + q - q
        assert back == p
        assert render(back) == render(p)
        assert (p - p).is_zero()


def test_ring_laws(rng):
    for _ in range(100):
        p, q, r = trig_poly(rng), trig_poly(rng), trig_poly(rng)
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r


def test_products_keep_the_trig_normal_form(rng):
    for _ in range(100):
        product = trig_poly(rng) * trig_poly(rng) * DiffPoly.sin_u(2)
        for mono in product.terms:
            assert mono.trig is None or mono.trig.sin <= 1


def test_weight_is_additive(rng):
    for _ in range(100):
        p = random_poly(rng, 3, max_order=2, terms=1)
        q = random_poly(rng, 3, max_order=2, terms=1)
        for base in (1, 2):
            assert (p * q).weight(base) == p.weight(base) + q.weight(base)
