import pytest

from algebra.complexes import (
    ChainMap,
    ComplexA,
    cohomology,
    cohomology_dims,
    complex_direct_sum,
    cone,
    derived_hom,
    derived_hom_dim,
    homotopic,
    homotopy_hom_dim,
    induced_map,
    is_acyclic,
    is_quasi_iso,
    lift_through_quasi_iso,
    proj_replacement,
    shift,
    standard_truncation_ge,
    standard_truncation_le,
)
from algebra.quiver_rep import RepMorphism, proj_presentation


@pytest.fixture
def contractible(P1):
    """[P1 --id--> P1] in degrees -1, 0."""
    return ComplexA.two_term(RepMorphism.identity(P1), -1)


def test_stalk_cohomology(P1):
    X = ComplexA.stalk(P1)
    assert cohomology(X, 0).module == P1
    assert cohomology_dims(X) == {0: (1, 1)}
    assert cohomology(X, 1).module.is_zero()


def test_identity_differential_is_acyclic(contractible):
    assert is_acyclic(contractible)
    assert cohomology_dims(contractible) == {}


def test_presentation_complex_computes_its_cokernel(S1):
    pres = proj_presentation(S1)
    X = ComplexA.two_term(pres.mono, -1)
    assert cohomology_dims(X) == {0: (1, 0)}


def test_square_zero_is_enforced(P1, top_map):
    with pytest.raises(ValueError):
        ComplexA(P1.context, {0: P1, 1: P1, 2: top_map.target},
                 {0: RepMorphism.identity(P1), 1: top_map})


def test_zero_terms_are_dropped(a2_ctx, S1):
    X = ComplexA(a2_ctx, {0: S1, 3: a2_ctx.zero()})
    assert X.degrees == (0,)
    assert X == ComplexA.stalk(S1)


def test_shift(S1, contractible):
    assert shift(ComplexA.stalk(S1), 1).degrees == (-1,)
    assert shift(contractible, 0) == contractible
    assert shift(contractible, 1).d(-2) == RepMorphism.identity(contractible.term(-1)).scale(-1)


def test_cone_of_identity_is_acyclic(contractible, P1):
    assert is_acyclic(cone(ChainMap.identity(ComplexA.stalk(P1))).complex)
    assert is_acyclic(cone(ChainMap.identity(contractible)).complex)


def test_cone_of_zero_map_is_a_sum(S1, S2):
    X, Y = ComplexA.stalk(S1), ComplexA.stalk(S2)
    C = cone(ChainMap.zero(X, Y)).complex
    assert {n: M.dims for n, M in C.terms.items()} == {-1: (1, 0), 0: (0, 1)}
    assert C.differentials == {}


def test_cone_of_top_map(top_map):
    C = cone(ChainMap.stalk(top_map)).complex
    assert cohomology_dims(C) == {-1: (0, 1)}


def test_triangle_maps_are_chain_maps(top_map):
    c = cone(ChainMap.stalk(top_map))
    assert c.inclusion.target == c.complex
    assert (c.projection @ c.inclusion).is_zero()


def test_standard_truncations(S2):
    X = ComplexA(S2.context, {0: S2, 1: S2})
    le = standard_truncation_le(X, 0)
    assert le.complex == ComplexA.stalk(S2, 0)
    assert not is_quasi_iso(le.map)
    ge = standard_truncation_ge(X, 1)
    assert ge.complex == ComplexA.stalk(S2, 1)


def test_projective_replacement_of_projective(P1):
    rep = proj_replacement(ComplexA.stalk(P1))
    assert rep.complex.degrees == (0,)
    assert is_quasi_iso(rep.qis)


def test_projective_replacement_of_simple(S1):
    rep = proj_replacement(ComplexA.stalk(S1))
    P = rep.complex
    assert P.degrees == (-1, 0)
    assert P.term(-1).dims == (0, 1)
    assert P.term(0).dims == (1, 1)
    assert is_quasi_iso(rep.qis)


def test_projective_replacement_of_contractible(contractible):
    rep = proj_replacement(contractible)
    assert is_quasi_iso(rep.qis)
    assert is_acyclic(rep.complex)


def test_projective_replacement_of_longer_complex(S1, S2):
    X = ComplexA(S1.context, {-1: S2, 0: S1, 1: S2})
    rep = proj_replacement(X)
    assert is_quasi_iso(rep.qis)
    assert cohomology_dims(rep.complex) == cohomology_dims(X)


def test_ext_between_simples(S1, S2, P1):
    assert derived_hom(ComplexA.stalk(S1), ComplexA.stalk(S2), 1).dim == 1
    assert derived_hom(ComplexA.stalk(P1), ComplexA.stalk(S2), 1).dim == 0
    assert derived_hom(ComplexA.stalk(S2), ComplexA.stalk(S1), 1).dim == 0
    assert derived_hom(ComplexA.stalk(P1), ComplexA.stalk(S1), 0).dim == 1


def test_derived_hom_is_invariant_under_replacement(S1, S2):
    X, Y = ComplexA.stalk(S1), ComplexA.stalk(S2)
    P = proj_replacement(X).complex
    assert derived_hom(P, Y, 1).dim == derived_hom(X, Y, 1).dim


def test_homotopy_hom_without_replacement_misses_ext(S1, S2):
    # S1 is not projective, so Hom in K differs from Hom in D
    assert homotopy_hom_dim(ComplexA.stalk(S1), shift(ComplexA.stalk(S2), 1)) == 0


def test_homotopic(contractible, S1):
    ident = ChainMap.identity(contractible)
    assert homotopic(ident, ident) is not None
    assert homotopic(ident, ChainMap.zero(contractible, contractible)) is not None
    X = ComplexA.stalk(S1)
    assert homotopic(ChainMap.identity(X), ChainMap.zero(X, X)) is None


def test_quasi_isomorphisms(a2_ctx, contractible, S1):
    X = ComplexA.stalk(S1)
    assert is_quasi_iso(ChainMap.identity(X))
    assert is_quasi_iso(ChainMap.zero(contractible, ComplexA.zero(a2_ctx)))
    assert not is_quasi_iso(ChainMap.zero(X, X))
    assert is_quasi_iso(proj_replacement(X).qis)


def test_induced_map_on_cohomology(S1):
    X = ComplexA.stalk(S1)
    assert induced_map(ChainMap.identity(X), 0).is_iso()


def test_lift_through_quasi_iso(S1):
    rep = proj_replacement(ComplexA.stalk(S1))
    lifted = lift_through_quasi_iso(rep.qis, rep.qis)
    assert homotopic(rep.qis @ lifted, rep.qis) is not None


def test_complex_direct_sum(S1, S2):
    X, Y = ComplexA.stalk(S1), ComplexA.stalk(S2, 1)
    s = complex_direct_sum([X, Y], S1.context)
    assert s.complex.degrees == (0, 1)
    assert s.projections[0] @ s.injections[0] == ChainMap.identity(X)


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_derived_hom_dim_matches_basis(S1, S2, P1, n):
    X = ComplexA(S1.context, {-1: S2, 0: S1})
    for Y in (ComplexA.stalk(S1), ComplexA.stalk(S2), ComplexA.stalk(P1), X):
        assert derived_hom_dim(X, Y, n) == derived_hom(X, Y, n).dim


def test_repeated_lifts_reuse_the_same_system(S1, S2):
    X = ComplexA(S1.context, {-1: S2, 0: S1})
    rep = proj_replacement(X)
    first = lift_through_quasi_iso(rep.qis, rep.qis)
    for _ in range(3):
        again = lift_through_quasi_iso(rep.qis, rep.qis)
        assert again == first
    assert homotopic(rep.qis @ first, rep.qis) is not None


def test_homotopy_classes_are_stable_across_calls(contractible):
    ident = ChainMap.identity(contractible)
    zero = ChainMap.zero(contractible, contractible)
    DH = derived_hom(contractible, contractible)
    assert DH.dim == 0
    for _ in range(3):
        assert homotopic(ident, zero) is not None
        assert homotopic(zero, zero) is not None
