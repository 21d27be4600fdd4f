import numpy as np
import pytest

from algebra.heart import heart_object_from_module, shifted_heart_object
from algebra.quiver_rep import AlgebraContext, Arrow, Quiver, direct_sum, hom_basis, standard_module
from algebra.torsion import TorsionPair


@pytest.fixture
def a2_ctx():
    return AlgebraContext(Quiver(2, (Arrow(0, 1, "a"),)), 5)


@pytest.fixture
def S1(a2_ctx):
    return standard_module(a2_ctx, "S", 0)


@pytest.fixture
def S2(a2_ctx):
    return standard_module(a2_ctx, "S", 1)


@pytest.fixture
def P1(a2_ctx):
    return standard_module(a2_ctx, "P", 0)


@pytest.fixture
def P2(a2_ctx):
    return standard_module(a2_ctx, "P", 1)


@pytest.fixture
def top_map(P1, S1):
    """The nonzero map P1 -> S1."""
    return hom_basis(P1, S1)[0]


@pytest.fixture
def a2_pair(a2_ctx, P1, S1):
    return TorsionPair(a2_ctx, direct_sum([P1, S1]).sum, "FIXTURE-A2")


@pytest.fixture
def a3_ctx():
    return AlgebraContext(Quiver.linear(3), 5)


@pytest.fixture
def a3_pair(a3_ctx):
    injectives = [standard_module(a3_ctx, "I", v) for v in range(3)]
    return TorsionPair(a3_ctx, direct_sum(injectives).sum, "A3")


@pytest.fixture
def heart_objects(a2_pair, S1, S2, P1):
    """S2[1], P1, S1 in the heart of FIXTURE-A2."""
    return [shifted_heart_object(a2_pair, S2), heart_object_from_module(a2_pair, P1),
            heart_object_from_module(a2_pair, S1)]


@pytest.fixture
def rng():
    return np.random.default_rng(7)
