import pytest

from algebra.errors import NotTilting
from algebra.quiver_rep import direct_sum, hom_dimension, is_epi, is_mono, standard_module
from algebra.sampling import random_representation
from algebra.torsion import (
    TorsionKind,
    TorsionPair,
    classify,
    is_degenerate,
    is_tilting,
    is_torsion,
    is_torsion_free,
    require_tilting,
    t_coresolution,
    torsion_quotient,
    torsion_radical,
    trace,
)


def test_generator_is_torsion(a2_pair):
    G = a2_pair.generator
    assert trace(a2_pair, G).source.dims == G.dims
    assert torsion_radical(a2_pair, G).source.dims == G.dims


def test_radical_of_mixed_module(a2_pair, P1, S2):
    X = direct_sum([P1, S2]).sum
    assert torsion_radical(a2_pair, X).source.dims == (1, 1)
    assert torsion_quotient(a2_pair, X).target.dims == (0, 1)


def test_radical_of_zero(a2_ctx, a2_pair):
    assert torsion_radical(a2_pair, a2_ctx.zero()).source.is_zero()


def test_classify(a2_ctx, a2_pair, S1, S2, P1):
    assert classify(a2_pair, S1).kind is TorsionKind.TORSION
    assert classify(a2_pair, S2).kind is TorsionKind.TORSION_FREE
    assert classify(a2_pair, direct_sum([P1, S2]).sum).kind is TorsionKind.MIXED
    assert classify(a2_pair, a2_ctx.zero()).kind is TorsionKind.TORSION


def test_tilting_test(a2_ctx, a2_pair):
    assert is_tilting(a2_pair)
    report = is_tilting(TorsionPair.nothing(a2_ctx))
    assert not report
    assert report.failing == ["I1", "I2"]


def test_require_tilting(a2_ctx, a2_pair):
    require_tilting(a2_pair)
    with pytest.raises(NotTilting) as excinfo:
        require_tilting(TorsionPair.nothing(a2_ctx))
    assert excinfo.value.failing == ["I1", "I2"]


def test_degenerate_pairs(a2_ctx, a2_pair):
    assert is_degenerate(a2_pair) is None
    assert is_degenerate(TorsionPair.nothing(a2_ctx)) == "torsion class is zero"
    everything = TorsionPair.everything(a2_ctx)
    assert is_degenerate(everything) == "torsion-free class is zero"
    assert is_tilting(everything)


def test_coresolution_of_torsion_free_simple(a2_pair, S2):
    c = t_coresolution(a2_pair, S2)
    assert is_mono(c.mono) and is_epi(c.epi)
    assert c.mono.target.dims == (1, 1)
    assert c.epi.target.dims == (1, 0)
    assert (c.epi @ c.mono).is_zero()


def test_coresolution_of_injective(a2_pair, P1):
    c = t_coresolution(a2_pair, P1)
    assert c.mono.is_iso()
    assert c.epi.target.is_zero()


def test_coresolution_needs_tilting(a2_ctx, S2):
    with pytest.raises(NotTilting):
        t_coresolution(TorsionPair.nothing(a2_ctx), S2)


def test_a3_injective_pair(a3_ctx, a3_pair):
    assert is_tilting(a3_pair)
    S3 = standard_module(a3_ctx, "S", 2)
    P2 = standard_module(a3_ctx, "P", 1)
    assert is_torsion_free(a3_pair, S3)
    assert is_torsion_free(a3_pair, P2)
    assert is_torsion(a3_pair, standard_module(a3_ctx, "S", 0))


@pytest.mark.parametrize("pair_name", ["a2_pair", "a3_pair"])
def test_torsion_axioms_on_random_modules(pair_name, request, rng):
    TP = request.getfixturevalue(pair_name)
    for _ in range(10):
        X = random_representation(TP.context, rng, 3)
        t = torsion_radical(TP, X)
        q = torsion_quotient(TP, X)
        T, F = t.source, q.target
        assert is_torsion(TP, T)
        assert is_torsion_free(TP, F)
        assert tuple(a + b for a, b in zip(T.dims, F.dims)) == X.dims
        assert hom_dimension(T, F) == 0
        assert torsion_radical(TP, T).source.dims == T.dims


@pytest.mark.parametrize("pair_name", ["a2_pair", "a3_pair"])
def test_radical_is_the_largest_torsion_submodule(pair_name, request, rng):
    TP = request.getfixturevalue(pair_name)
    for _ in range(10):
        X = random_representation(TP.context, rng, 3)
        t = torsion_radical(TP, X)
        assert is_mono(t)
        assert (torsion_quotient(TP, X) @ t).is_zero()
        assert trace(TP, torsion_quotient(TP, X).target).source.is_zero()


def test_coresolution_is_cached_per_module(a2_pair, S2):
    assert t_coresolution(a2_pair, S2) is t_coresolution(a2_pair, S2)
