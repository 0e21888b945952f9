import random

import pytest

from plurilag.algebra.jets import JetSpace
from plurilag.algebra.render import parse
from plurilag.services.kdv_hierarchy import HierarchyContext


@pytest.fixture
def u3():
    """x, t2, t3 with field u"""
    return JetSpace.pkdv(3, "u")


@pytest.fixture
def v3():
    return JetSpace.pkdv(3, "v")


@pytest.fixture
def sg():
    return JetSpace.sine_gordon()


@pytest.fixture
def P():
    """Shorthand: P("u_xx + 3*u^2", space)"""
    return parse


@pytest.fixture(scope="session")
def ctx3():
    return HierarchyContext.build(3, 3)


@pytest.fixture(scope="session")
def ctx4():
    return HierarchyContext.build(4, 4)


@pytest.fixture
def rng():
    return random.Random(20240607)
