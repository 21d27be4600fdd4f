"""Seeded random generators for modules, complexes and heart objects.

Every generator takes a ``numpy.random.Generator`` so a run is reproduced
exactly by its seed.
"""

from __future__ import annotations

import numpy as np

from algebra.complexes import ChainMap, ComplexA, cone, is_acyclic
from algebra.errors import NotInHeart
from algebra.exact_linalg import FpMatrix
from algebra.heart import (
    HeartMorphism,
    HeartObject,
    heart_hom_space,
    heart_object_from_module,
    make_heart_object,
    shifted_heart_object,
)
from algebra.quiver_rep import (
    AlgebraContext,
    RepMorphism,
    Representation,
    cokernel,
    direct_sum,
    hom_basis,
    linear_combination,
    map_into_sum,
)
from algebra.torsion import TorsionPair, t_coresolution, torsion_quotient, torsion_radical
from constants import COMPLEX_MAX_DIM, COMPLEX_MAX_LENGTH, RANDOM_MAX_DIM
from logger_config import get_logger

logger = get_logger(__name__)

ATTEMPTS = 20
HEART_KINDS = ("torsion", "shifted", "mixed", "complex")
COMPLEX_MODES = ("any", "exact", "non-exact")


def _random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> FpMatrix:
    return FpMatrix(rng.integers(0, p, size=(rows, cols)), p, shape=(rows, cols))


def random_representation(context: AlgebraContext, rng: np.random.Generator,
                          max_dim: int = RANDOM_MAX_DIM) -> Representation:
    dims = tuple(int(d) for d in rng.integers(0, max_dim + 1, size=context.vertex_count))
    mats = tuple(_random_matrix(rng, dims[a.target], dims[a.source], context.prime) for a in context.quiver.arrows)
    return Representation(context, dims, mats)


def random_morphism(M: Representation, N: Representation, rng: np.random.Generator) -> RepMorphism:
    """A uniformly random element of Hom(M, N)."""
    basis = hom_basis(M, N)
    coeffs = rng.integers(0, M.p, size=len(basis))
    return linear_combination(coeffs, basis, M, N)


def random_torsion_module(TP: TorsionPair, rng: np.random.Generator, max_dim: int = RANDOM_MAX_DIM) -> Representation:
    """t(X) for a random X, retried until nonzero; falls back to the generator."""
    for _ in range(ATTEMPTS):
        T = torsion_radical(TP, random_representation(TP.context, rng, max_dim)).source
        if not T.is_zero():
            return T
    return TP.generator


def random_torsion_free_module(TP: TorsionPair, rng: np.random.Generator,
                               max_dim: int = RANDOM_MAX_DIM) -> Representation:
    """X / t(X) for a random X, retried until nonzero."""
    F = TP.context.zero()
    for _ in range(ATTEMPTS):
        F = torsion_quotient(TP, random_representation(TP.context, rng, max_dim)).target
        if not F.is_zero():
            break
    return F


def _random_differentials(terms: list[Representation], rng: np.random.Generator) -> list[RepMorphism]:
    """``d^n = h ∘ (X^n -> coker d^{n-1})`` with h random, so consecutive composites vanish."""
    diffs: list[RepMorphism] = []
    for i in range(len(terms) - 1):
        if diffs:
            Q, pi = cokernel(diffs[-1])
        else:
            Q, pi = terms[i], RepMorphism.identity(terms[i])
        diffs.append(random_morphism(Q, terms[i + 1], rng) @ pi)
    return diffs


def _assemble(context: AlgebraContext, terms: list[Representation], diffs: list[RepMorphism], lo: int) -> ComplexA:
    return ComplexA(context, {lo + i: M for i, M in enumerate(terms)}, {lo + i: d for i, d in enumerate(diffs)})


def random_complex(context: AlgebraContext, rng: np.random.Generator, length: int = COMPLEX_MAX_LENGTH,
                   max_dim: int = COMPLEX_MAX_DIM, lo: int | None = None) -> ComplexA:
    if lo is None:
        lo = int(rng.integers(-2, 2))
    terms = [random_representation(context, rng, max_dim) for _ in range(length)]
    return _assemble(context, terms, _random_differentials(terms, rng), lo)


def random_torsion_complex(TP: TorsionPair, rng: np.random.Generator, length: int = COMPLEX_MAX_LENGTH,
                           max_dim: int = COMPLEX_MAX_DIM, mode: str = "any", lo: int = 0) -> ComplexA:
    """A complex with torsion terms.

    ``exact`` builds the cone of an identity, ``non-exact`` rejects acyclic
    samples and falls back to a torsion stalk.
    """
    if mode not in COMPLEX_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {COMPLEX_MODES}")
    if mode == "exact":
        inner = random_torsion_complex(TP, rng, max(length - 1, 1), max_dim, "any", lo)
        return cone(ChainMap.identity(inner)).complex

    def sample() -> ComplexA:
        terms = [random_torsion_module(TP, rng, max_dim) for _ in range(length)]
        return _assemble(TP.context, terms, _random_differentials(terms, rng), lo)

    if mode == "any":
        return sample()
    for _ in range(ATTEMPTS):
        X = sample()
        if not is_acyclic(X):
            return X
    return ComplexA.stalk(random_torsion_module(TP, rng, max_dim), lo)


def _mixed_object(TP: TorsionPair, rng: np.random.Generator, max_dim: int) -> HeartObject:
    """``[E --(g, φ)--> G ⊕ T]`` over a torsion coresolution ``F -> E -> G``.

    H^-1 is a submodule of F and H^0 a quotient of G ⊕ T, so the complex lies
    in the heart for every φ.
    """
    F = random_torsion_free_module(TP, rng, max_dim)
    T = random_torsion_module(TP, rng, max_dim)
    cores = t_coresolution(TP, F)
    E, G = cores.mono.target, cores.epi.target
    summed = direct_sum([G, T], TP.context)
    d = map_into_sum(summed, [cores.epi, random_morphism(E, T, rng)])
    return make_heart_object(TP, ComplexA.two_term(d, -1))


def _two_term_object(TP: TorsionPair, rng: np.random.Generator, max_dim: int) -> HeartObject | None:
    for _ in range(ATTEMPTS):
        M = random_representation(TP.context, rng, max_dim)
        N = random_representation(TP.context, rng, max_dim)
        try:
            return make_heart_object(TP, ComplexA.two_term(random_morphism(M, N, rng), -1))
        except NotInHeart:
            continue
    return None


def random_heart_object(TP: TorsionPair, rng: np.random.Generator, max_dim: int = COMPLEX_MAX_DIM,
                        kind: str | None = None) -> HeartObject:
    """Torsion stalks, shifted torsion-free stalks, extensions, and filtered random two-term complexes."""
    kind = kind or HEART_KINDS[int(rng.integers(0, len(HEART_KINDS)))]
    if kind == "torsion":
        return heart_object_from_module(TP, random_torsion_module(TP, rng, max_dim))
    if kind == "shifted":
        return shifted_heart_object(TP, random_torsion_free_module(TP, rng, max_dim))
    if kind == "mixed":
        return _mixed_object(TP, rng, max_dim)
    if kind == "complex":
        B = _two_term_object(TP, rng, max_dim)
        if B is not None:
            return B
        logger.debug("no random two-term complex landed in the heart; using a torsion stalk")
        return heart_object_from_module(TP, random_torsion_module(TP, rng, max_dim))
    raise ValueError(f"unknown heart object kind {kind!r}")


def random_heart_morphism(B1: HeartObject, B2: HeartObject, rng: np.random.Generator) -> HeartMorphism:
    space = heart_hom_space(B1, B2)
    return space.element(rng.integers(0, B1.pair.context.prime, size=space.dim))
