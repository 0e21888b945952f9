import pytest

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex
from plurilag.algebra.operators import total_derivative
from plurilag.algebra.rewriting import EvolutionSystem, SineGordonSystem, reduce_mod_system, substitute_flow
from plurilag.core.exceptions import DimensionError, UnknownFlow
from plurilag.services.sampling import random_poly


def var(*index):
    return DiffPoly.var(len(index), index)


# -- PKdV flows ---------------------------------------------------------------------------


def test_time_derivative_reduces_to_flow(ctx3):
    system = ctx3.system
    assert system.reduce(var(0, 1, 0)) == ctx3.g[2]
    assert system.reduce(var(0, 0, 1)) == ctx3.g[3]
    assert system.reduce(var(1, 1, 0)) == total_derivative(ctx3.g[2], 1)


def test_pure_x_polynomials_are_normal_forms(ctx3):
    p = ctx3.g[3] * ctx3.v_x()
    assert ctx3.system.reduce(p) == p


def test_elimination_strategies_agree(ctx3):
    # v_t2t3 via D_t3 g_2 or via D_t2 g_3: the flows commute
    largest = ctx3.system
    smallest = ctx3.system.with_strategy("smallest")
    for index in [(0, 1, 1), (1, 1, 1), (0, 2, 1)]:
        assert largest.reduce(var(*index)) == smallest.reduce(var(*index))
    assert largest.reduce(var(0, 1, 1)).is_pure_x()


def test_elimination_strategies_agree_on_random_polynomials(ctx3, rng):
    largest = ctx3.system
    smallest = ctx3.system.with_strategy("smallest")
    for _ in range(60):
        p = random_poly(rng, 3, max_order=2, max_degree=2)
        normal = largest.reduce(p)
        assert normal == smallest.reduce(p)
        assert normal.is_pure_x()


def test_omitted_flow_stays(ctx3):
    p = var(0, 1, 0) * var(0, 0, 1)
    assert ctx3.system.reduce(p, omit=[3]) == ctx3.g[2] * var(0, 0, 1)
    assert reduce_mod_system(p, ctx3.system, [2]) == var(0, 1, 0) * ctx3.g[3]


def test_substitute_flow(ctx3):
    p = var(1, 1, 0) + var(0, 0, 1)
    assert substitute_flow(p, ctx3.system, 2) == total_derivative(ctx3.g[2], 1) + var(0, 0, 1)
    with pytest.raises(UnknownFlow):
        substitute_flow(p, ctx3.system, 4)


def test_missing_flow_raises(ctx3):
    system = EvolutionSystem({2: ctx3.g[2]}, 3)
    with pytest.raises(UnknownFlow) as excinfo:
        system.reduce(var(0, 0, 1))
    assert excinfo.value.index == 3


def test_relations(ctx3):
    relations = ctx3.system.relations()
    assert sorted(relations) == ["t2", "t3"]
    assert relations["t2"] == var(0, 1, 0) - ctx3.g[2]


def test_invalid_systems(ctx3):
    with pytest.raises(ValueError):
        EvolutionSystem({2: var(0, 1, 0)}, 3)
    with pytest.raises(DimensionError):
        EvolutionSystem({1: ctx3.g[1]}, 3)
    with pytest.raises(ValueError):
        EvolutionSystem({2: ctx3.g[2]}, 3, strategy="random")
    with pytest.raises(ValueError):
        EvolutionSystem({})
    with pytest.raises(DimensionError):
        ctx3.system.reduce(DiffPoly.x_var(2, 1))


# -- sine-Gordon / mKdV ---------------------------------------------------------------------


def test_sine_gordon_rule():
    system = SineGordonSystem()
    sin, cos = DiffPoly.sin_u(3), DiffPoly.cos_u(3)
    assert system.reduce(var(1, 1, 0)) == sin
    assert system.reduce(var(2, 1, 0)) == var(1, 0, 0) * cos
    assert system.reduce(var(1, 2, 0)) == var(0, 1, 0) * cos


def test_mkdv_rule():
    system = SineGordonSystem()
    u_x = DiffPoly.x_var(3, 1)
    assert system.reduce(var(0, 0, 1)) == DiffPoly.x_var(3, 3) + u_x ** 3 / 2
    assert system.reduce(var(1, 0, 1)) == DiffPoly.x_var(3, 4) + u_x ** 2 * DiffPoly.x_var(3, 2) * 3 / 2


def test_rules_can_be_switched_off():
    assert SineGordonSystem(mkdv=False).reduce(var(0, 0, 1)) == var(0, 0, 1)
    assert SineGordonSystem(sine_gordon=False).reduce(var(1, 1, 0)) == var(1, 1, 0)
    assert sorted(SineGordonSystem().relations()) == ["mkdv", "sine-gordon"]
    assert list(SineGordonSystem(mkdv=False).relations()) == ["sine-gordon"]
