import numpy as np
import pytest

from algebra.complexes import is_acyclic
from algebra.sampling import (
    HEART_KINDS,
    random_complex,
    random_heart_morphism,
    random_heart_object,
    random_representation,
    random_torsion_complex,
    random_torsion_free_module,
    random_torsion_module,
)
from algebra.torsion import is_torsion, is_torsion_free


def test_same_seed_same_module(a2_ctx):
    first = random_representation(a2_ctx, np.random.default_rng(3))
    second = random_representation(a2_ctx, np.random.default_rng(3))
    assert first == second


def test_dimension_bound(a3_ctx, rng):
    for _ in range(10):
        assert max(random_representation(a3_ctx, rng, 2).dims) <= 2


def test_torsion_and_torsion_free_samples(a2_pair, rng):
    for _ in range(5):
        T = random_torsion_module(a2_pair, rng)
        assert not T.is_zero() and is_torsion(a2_pair, T)
        assert is_torsion_free(a2_pair, random_torsion_free_module(a2_pair, rng))


def test_random_complex_length(a2_ctx, rng):
    X = random_complex(a2_ctx, rng, length=3, lo=-1)
    assert all(-1 <= n <= 1 for n in X.degrees)


def test_forced_exact_and_non_exact_torsion_complexes(a2_pair, rng):
    for _ in range(3):
        exact = random_torsion_complex(a2_pair, rng, 3, mode="exact")
        assert is_acyclic(exact)
        assert all(is_torsion(a2_pair, M) for M in exact.terms.values())
        assert not is_acyclic(random_torsion_complex(a2_pair, rng, 3, mode="non-exact"))


def test_unknown_mode_is_rejected(a2_pair, rng):
    with pytest.raises(ValueError):
        random_torsion_complex(a2_pair, rng, mode="sometimes")


@pytest.mark.parametrize("kind", HEART_KINDS)
def test_heart_objects_of_every_kind(a2_pair, rng, kind):
    B = random_heart_object(a2_pair, rng, kind=kind)
    assert is_torsion(a2_pair, B.h0)
    assert is_torsion_free(a2_pair, B.h_minus1)


def test_random_heart_morphism(heart_objects, rng):
    shifted, _, S1obj = heart_objects
    f = random_heart_morphism(S1obj, shifted, rng)
    assert f.source == S1obj and f.target == shifted
