import numpy as np
import pytest

from algebra.complexes import ComplexA, cohomology_dims, shift
from algebra.errors import NotInHeart
from algebra.heart import (
    add,
    coimage_to_image,
    compose,
    heart_cokernel,
    heart_direct_sum,
    heart_hom_basis,
    heart_hom_space,
    heart_kernel,
    heart_object_from_module,
    heart_to_module_morphism,
    hrs_h0,
    hrs_truncate_le0,
    identity,
    is_exact_over_heart,
    is_heart_epi,
    is_heart_iso,
    is_heart_mono,
    make_heart_object,
    module_morphism_to_heart,
    scale,
    shifted_heart_object,
    split_object,
    subtract,
    torsion_decomposition,
    zero_heart_object,
    zero_morphism,
)
from algebra.quiver_rep import RepMorphism, direct_sum, map_into_sum
from algebra.sampling import random_heart_morphism, random_heart_object


@pytest.fixture
def mixed(a2_pair, S1, top_map):
    """[P1 -> S1 ⊕ S1] with both components the top map: H^-1 = S2, H^0 = S1."""
    summed = direct_sum([S1, S1])
    d = map_into_sum(summed, [top_map, top_map])
    return make_heart_object(a2_pair, ComplexA.two_term(d, -1))


def test_torsion_stalk_is_in_heart(a2_pair, P1):
    B = heart_object_from_module(a2_pair, P1)
    assert B.h_minus1.is_zero()
    assert B.h0.dims == (1, 1)


def test_shifted_torsion_free_is_in_heart(a2_pair, S2):
    B = shifted_heart_object(a2_pair, S2)
    assert B.h_minus1.dims == (0, 1)
    assert B.h0.is_zero()
    assert str(B) == "S2[1]"


def test_unshifted_torsion_free_is_rejected(a2_pair, S2):
    with pytest.raises(NotInHeart) as excinfo:
        make_heart_object(a2_pair, ComplexA.stalk(S2))
    assert excinfo.value.degree == 0


def test_cohomology_outside_window_is_rejected(a2_pair, S1):
    with pytest.raises(NotInHeart):
        make_heart_object(a2_pair, ComplexA.stalk(S1, 1))


def test_longer_complexes_are_normalized(a2_pair, S1, S2, P1):
    X = ComplexA(a2_pair.context, {-2: P1, -1: S2, 0: S1})
    with pytest.raises(NotInHeart):
        make_heart_object(a2_pair, X)
    contractible = ComplexA(P1.context, {-2: P1, -1: P1, 0: S1}, {-2: RepMorphism.identity(P1)})
    B = make_heart_object(a2_pair, contractible)
    assert B.cx.lo >= -1
    assert cohomology_dims(B.cx) == {0: (1, 0)}


def test_heart_hom_table(heart_objects):
    table = [[heart_hom_space(B1, B2).dim for B2 in heart_objects] for B1 in heart_objects]
    assert table == [[1, 0, 0], [0, 1, 1], [1, 0, 1]]


def test_full_embedding_of_torsion_modules(a2_pair, P1, S1, top_map):
    B1, B2 = heart_object_from_module(a2_pair, P1), heart_object_from_module(a2_pair, S1)
    f = module_morphism_to_heart(B1, B2, top_map)
    assert not f.is_zero()
    assert heart_to_module_morphism(f) == top_map


def test_morphism_arithmetic(heart_objects):
    _, P1obj, S1obj = heart_objects
    f = heart_hom_basis(P1obj, S1obj)[0]
    assert add(f, f) == scale(f, 2)
    assert subtract(f, f).is_zero()
    assert compose(identity(S1obj), f) == f
    assert compose(f, identity(P1obj)) == f
    assert compose(zero_morphism(S1obj, S1obj), f).is_zero()


def test_ext_generator_composes_with_identity(heart_objects):
    shifted, _, S1obj = heart_objects
    e = heart_hom_basis(S1obj, shifted)[0]
    assert not e.is_zero()
    assert compose(identity(shifted), e) == e


def test_kernel_and_cokernel_of_identity(heart_objects):
    for B in heart_objects:
        assert heart_kernel(identity(B))[0].is_zero()
        assert heart_cokernel(identity(B))[0].is_zero()


def test_kernel_and_cokernel_of_zero(heart_objects):
    shifted, P1obj, _ = heart_objects
    K, k = heart_kernel(zero_morphism(P1obj, shifted))
    C, c = heart_cokernel(zero_morphism(P1obj, shifted))
    assert cohomology_dims(K.cx) == cohomology_dims(P1obj.cx)
    assert is_heart_iso(k)
    assert cohomology_dims(C.cx) == cohomology_dims(shifted.cx)
    assert is_heart_iso(c)


def test_top_map_is_a_mono_in_the_heart(a2_pair, P1, S1, top_map):
    f = module_morphism_to_heart(heart_object_from_module(a2_pair, P1), heart_object_from_module(a2_pair, S1),
                                 top_map)
    assert is_heart_mono(f)
    assert not is_heart_epi(f)
    C, pi = heart_cokernel(f)
    assert C.h_minus1.dims == (0, 1)
    assert C.h0.is_zero()
    assert compose(pi, f).is_zero()


def test_coimage_to_image_is_iso(heart_objects):
    _, P1obj, S1obj = heart_objects
    f = heart_hom_basis(P1obj, S1obj)[0]
    assert is_heart_iso(coimage_to_image(f))


def test_torsion_decomposition(heart_objects, mixed):
    shifted, P1obj, _ = heart_objects
    dec = torsion_decomposition(P1obj)
    assert dec.first.is_zero()
    assert dec.third.h0.dims == (1, 1)
    assert dec.verify()
    dec = torsion_decomposition(shifted)
    assert dec.first.h_minus1.dims == (0, 1)
    assert dec.third.is_zero()
    assert dec.verify()
    dec = torsion_decomposition(mixed)
    assert dec.first.h_minus1.dims == (0, 1)
    assert dec.third.h0.dims == (1, 0)
    assert dec.verify()


def test_split_mixed_object(a2_pair, mixed):
    assert mixed.h_minus1.dims == (0, 1)
    assert mixed.h0.dims == (1, 0)
    split = split_object(a2_pair, mixed)
    dec = split.decomposition
    assert compose(dec.epi, split.section) == identity(dec.third)
    assert compose(split.retraction, dec.mono) == identity(dec.first)
    _, iso = split.isomorphism()
    assert is_heart_iso(iso)


def test_heart_direct_sum(heart_objects):
    shifted, P1obj, _ = heart_objects
    s = heart_direct_sum([shifted, P1obj])
    assert s.object.h_minus1.dims == (0, 1)
    assert s.object.h0.dims == (1, 1)
    assert compose(s.projections[1], s.injections[1]) == identity(P1obj)
    assert compose(s.projections[0], s.injections[1]).is_zero()


def test_hrs_truncation_of_torsion_free_stalk(a2_pair, S2):
    sub = hrs_truncate_le0(a2_pair, ComplexA.stalk(S2)).complex
    assert cohomology_dims(sub) == {}


def test_hrs_truncation_of_mixed_stalk(a2_pair, P1, S2):
    sub = hrs_truncate_le0(a2_pair, ComplexA.stalk(direct_sum([P1, S2]).sum)).complex
    assert cohomology_dims(sub) == {0: (1, 1)}


def test_heart_cohomology(a2_pair, heart_objects, P1, S2):
    shifted, _, S1obj = heart_objects
    assert cohomology_dims(hrs_h0(a2_pair, shifted.cx).cx) == cohomology_dims(shifted.cx)
    assert hrs_h0(a2_pair, shift(S1obj.cx, 1)).is_zero()
    B = hrs_h0(a2_pair, ComplexA.stalk(direct_sum([P1, S2]).sum))
    assert B.h0.dims == (1, 1)
    assert B.h_minus1.is_zero()


def test_rotated_short_exact_sequence_is_exact(a2_pair, P1, S1, top_map):
    P1obj, S1obj = heart_object_from_module(a2_pair, P1), heart_object_from_module(a2_pair, S1)
    f = module_morphism_to_heart(P1obj, S1obj, top_map)
    C, pi = heart_cokernel(f)
    assert is_exact_over_heart(a2_pair, [P1obj, S1obj, C], [f, pi])


def test_exactness_edge_cases(a2_pair, heart_objects):
    _, P1obj, _ = heart_objects
    assert is_exact_over_heart(a2_pair, [], [])
    assert not is_exact_over_heart(a2_pair, [P1obj], [])
    zero = zero_heart_object(a2_pair)
    assert is_exact_over_heart(a2_pair, [zero, zero], [zero_morphism(zero, zero)])
    with pytest.raises(ValueError):
        is_exact_over_heart(a2_pair, [P1obj], [identity(P1obj)])


@pytest.mark.parametrize("seed", range(5))
def test_mono_and_epi_tests_agree_with_kernel_and_cokernel(a2_pair, seed):
    rng = np.random.default_rng(seed)
    for _ in range(6):
        f = random_heart_morphism(random_heart_object(a2_pair, rng), random_heart_object(a2_pair, rng), rng)
        assert is_heart_mono(f) == heart_kernel(f)[0].is_zero()
        assert is_heart_epi(f) == heart_cokernel(f)[0].is_zero()


def test_decomposition_is_cached_per_object(mixed):
    assert torsion_decomposition(mixed) is torsion_decomposition(mixed)
