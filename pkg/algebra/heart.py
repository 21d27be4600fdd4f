"""The tilted heart: complexes with H^0 torsion, H^-1 torsion-free, nothing else.

Objects are stored as two-term complexes in degrees -1 and 0. A morphism
``B1 -> B2`` is a chain map from the projective replacement of ``B1`` to
``B2.cx``; two morphisms are equal when their chain maps are homotopic. With
this representation composition, equality, kernels and cokernels all reduce to
linear systems over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from algebra.complexes import (
    ChainMap,
    ComplexA,
    DerivedHom,
    ProjectiveReplacement,
    cohomology,
    complex_direct_sum,
    cone,
    derived_hom,
    homotopic,
    is_acyclic,
    lift_chain_map,
    lift_through_quasi_iso,
    proj_replacement,
    quotient_complex,
    shift,
    shift_map,
    standard_truncation_ge,
    standard_truncation_le,
)
from algebra.errors import ContextMismatch, NotAComplex, NotInHeart, SplitFailed
from algebra.exact_linalg import FpMatrix, solve_vector
from algebra.quiver_rep import RepMorphism, Representation, cokernel, factor_through_epi, factor_through_mono, kernel
from algebra.torsion import TorsionPair, classify, is_torsion, is_torsion_free, torsion_radical
from logger_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class HeartObject:
    pair: TorsionPair
    cx: ComplexA
    name: str = field(default="", compare=False, hash=False)

    @cached_property
    def replacement(self) -> ProjectiveReplacement:
        return proj_replacement(self.cx)

    @property
    def epsilon(self) -> ChainMap:
        """The quasi-isomorphism ``P(B) -> B.cx``."""
        return self.replacement.qis

    @cached_property
    def h_minus1(self) -> Representation:
        return cohomology(self.cx, -1).module

    @cached_property
    def h0(self) -> Representation:
        return cohomology(self.cx, 0).module

    def is_zero(self) -> bool:
        return self.h_minus1.is_zero() and self.h0.is_zero()

    def __str__(self) -> str:
        return self.name or f"B(H-1={list(self.h_minus1.dims)}, H0={list(self.h0.dims)})"


@dataclass(frozen=True, eq=False)
class HeartMorphism:
    source: HeartObject
    target: HeartObject
    rep: ChainMap

    def __post_init__(self):
        if self.rep.source != self.source.replacement.complex or self.rep.target != self.target.cx:
            raise ValueError("representative must map the source replacement to the target complex")

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeartMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return homotopic(self.rep, other.rep) is not None

    __hash__ = None

    def is_zero(self) -> bool:
        return homotopic(self.rep, ChainMap.zero(self.rep.source, self.rep.target)) is not None


# ---------------------------------------------------------------------------
# Objects


@dataclass(frozen=True)
class _Roof:
    """``X <-incl- S -proj-> N`` with both legs quasi-isomorphisms and N two-term."""

    source: ComplexA
    incl: ChainMap
    proj: ChainMap

    @property
    def normal(self) -> ComplexA:
        return self.proj.target


def _normalize(X: ComplexA) -> _Roof:
    if X.is_zero() or (X.lo >= -1 and X.hi <= 0):
        ident = ChainMap.identity(X)
        return _Roof(X, ident, ident)
    le = standard_truncation_le(X, 0)
    ge = standard_truncation_ge(le.complex, -1)
    return _Roof(le.complex, le.map, ge.map)


def _check_membership(TP: TorsionPair, X: ComplexA) -> None:
    if X.is_zero():
        return
    for n in range(X.lo, X.hi + 1):
        H = cohomology(X, n).module
        if n not in (-1, 0) and not H.is_zero():
            raise NotInHeart("cohomology outside degrees -1 and 0", n, H)
    H0 = cohomology(X, 0).module
    if not classify(TP, H0).is_torsion:
        raise NotInHeart("H^0 is not torsion", 0, H0)
    Hm1 = cohomology(X, -1).module
    if not classify(TP, Hm1).is_torsion_free:
        raise NotInHeart("H^-1 is not torsion-free", -1, Hm1)


def make_heart_object(TP: TorsionPair, X: ComplexA, name: str = "") -> HeartObject:
    """Normalize ``X`` to degrees {-1, 0} and check both cohomology constraints."""
    if X.context != TP.context:
        raise ContextMismatch("complex and torsion pair belong to different contexts")
    _check_membership(TP, X)
    return HeartObject(TP, _normalize(X).normal, name)


def heart_object_from_module(TP: TorsionPair, T: Representation, name: str = "") -> HeartObject:
    """A torsion module as a stalk in degree 0."""
    return make_heart_object(TP, ComplexA.stalk(T, 0), name or T.name)


def shifted_heart_object(TP: TorsionPair, F: Representation, name: str = "") -> HeartObject:
    """``F[1]`` for a torsion-free module F."""
    return make_heart_object(TP, ComplexA.stalk(F, -1), name or (f"{F.name}[1]" if F.name else ""))


def zero_heart_object(TP: TorsionPair) -> HeartObject:
    return HeartObject(TP, ComplexA.zero(TP.context), "0")


def is_stalk(B: HeartObject) -> bool:
    """True when B is a torsion module sitting in degree 0."""
    return B.cx.term(-1).is_zero()


def stalk_module(B: HeartObject) -> Representation:
    if not is_stalk(B):
        raise ValueError(f"{B} is not a stalk in degree 0")
    return B.cx.term(0)


# ---------------------------------------------------------------------------
# Morphisms


def from_chain_map(source: HeartObject, target: HeartObject, f: ChainMap) -> HeartMorphism:
    """The heart morphism of an honest chain map ``source.cx -> target.cx``."""
    return HeartMorphism(source, target, f @ source.epsilon)


def identity(B: HeartObject) -> HeartMorphism:
    return HeartMorphism(B, B, B.epsilon)


def zero_morphism(B1: HeartObject, B2: HeartObject) -> HeartMorphism:
    return HeartMorphism(B1, B2, ChainMap.zero(B1.replacement.complex, B2.cx))


def add(f: HeartMorphism, g: HeartMorphism) -> HeartMorphism:
    if f.source != g.source or f.target != g.target:
        raise ValueError("heart morphisms are not parallel")
    return HeartMorphism(f.source, f.target, f.rep + g.rep)


def scale(f: HeartMorphism, c: int) -> HeartMorphism:
    return HeartMorphism(f.source, f.target, f.rep.scale(c))


def subtract(f: HeartMorphism, g: HeartMorphism) -> HeartMorphism:
    return add(f, scale(g, -1))


def compose(g: HeartMorphism, f: HeartMorphism) -> HeartMorphism:
    """``g ∘ f``: lift ``f`` through ``P(B2) -> B2`` and follow with ``g``."""
    if f.target != g.source:
        raise ValueError("cannot compose: target of f is not the source of g")
    lifted = lift_through_quasi_iso(f.rep, f.target.epsilon)
    return HeartMorphism(f.source, g.target, g.rep @ lifted)


def module_morphism_to_heart(source: HeartObject, target: HeartObject, h: RepMorphism) -> HeartMorphism:
    """A module map between torsion modules, seen between their stalks."""
    return from_chain_map(source, target, ChainMap(source.cx, target.cx, {0: h}))


def heart_to_module_morphism(f: HeartMorphism) -> RepMorphism:
    """The module map underlying a morphism between degree-0 stalks."""
    src, tgt = stalk_module(f.source), stalk_module(f.target)
    eps0 = f.source.epsilon.component(0)
    h = factor_through_epi(eps0, f.rep.component(0))
    if h is None:
        raise RuntimeError("representative does not descend to the stalk")
    return RepMorphism(src, tgt, h.components)


@dataclass(frozen=True, eq=False)
class HeartHomSpace:
    source: HeartObject
    target: HeartObject
    derived: DerivedHom

    @cached_property
    def basis(self) -> tuple[HeartMorphism, ...]:
        return tuple(HeartMorphism(self.source, self.target, b) for b in self.derived.basis)

    @property
    def dim(self) -> int:
        return self.derived.dim

    def coordinates(self, f: HeartMorphism) -> np.ndarray:
        return self.derived.coordinates(f.rep)

    def element(self, coeffs: Sequence[int]) -> HeartMorphism:
        return HeartMorphism(self.source, self.target, self.derived.element(coeffs))


@lru_cache(maxsize=2048)
def heart_hom_space(B1: HeartObject, B2: HeartObject) -> HeartHomSpace:
    if B1.pair != B2.pair:
        raise ContextMismatch("heart objects belong to different torsion pairs")
    return HeartHomSpace(B1, B2, derived_hom(B1.cx, B2.cx, 0))


def heart_hom_basis(B1: HeartObject, B2: HeartObject) -> list[HeartMorphism]:
    return list(heart_hom_space(B1, B2).basis)


def _solve_post(m: HeartMorphism, h: HeartMorphism) -> HeartMorphism | None:
    """g with ``m ∘ g == h``, or None."""
    space = heart_hom_space(h.source, m.source)
    goal = heart_hom_space(h.source, h.target)
    p = m.source.pair.context.prime
    cols = [goal.coordinates(compose(m, b)) for b in space.basis]
    A = FpMatrix.from_columns(cols, goal.dim, p)
    x = solve_vector(A, goal.coordinates(h))
    return None if x is None else space.element(x)


def _solve_pre(e: HeartMorphism, h: HeartMorphism) -> HeartMorphism | None:
    """g with ``g ∘ e == h``, or None."""
    space = heart_hom_space(e.target, h.target)
    goal = heart_hom_space(h.source, h.target)
    p = e.source.pair.context.prime
    cols = [goal.coordinates(compose(b, e)) for b in space.basis]
    A = FpMatrix.from_columns(cols, goal.dim, p)
    x = solve_vector(A, goal.coordinates(h))
    return None if x is None else space.element(x)


def factor_through_mono_in_heart(m: HeartMorphism, h: HeartMorphism) -> HeartMorphism | None:
    return _solve_post(m, h)


def lift_through_epi_in_heart(e: HeartMorphism, h: HeartMorphism) -> HeartMorphism | None:
    """g with ``e ∘ g == h``; exists when Ext¹ from source(h) to ker e vanishes."""
    return _solve_post(e, h)


def factor_through_epi_in_heart(e: HeartMorphism, h: HeartMorphism) -> HeartMorphism | None:
    return _solve_pre(e, h)


# ---------------------------------------------------------------------------
# Truncations of the tilted t-structure


@dataclass(frozen=True)
class HrsTruncation:
    complex: ComplexA
    inclusion: ChainMap


def hrs_truncate_le0(TP: TorsionPair, X: ComplexA) -> HrsTruncation:
    """τ'_{≤0}: standard τ_{≤0} with Z^0 shrunk to the preimage of t(H^0)."""
    le = standard_truncation_le(X, 0)
    Y = le.complex
    h = cohomology(Y, 0)
    if h.module.is_zero():
        return HrsTruncation(Y, le.map)
    to_h = h.projection @ factor_through_mono(h.cycle_inclusion, RepMorphism.identity(Y.term(0)))
    _, drop = cokernel(torsion_radical(TP, h.module))
    W, w = kernel(drop @ to_h)
    terms = {n: M for n, M in Y.terms.items() if n < 0}
    terms[0] = W
    diffs = {n: d for n, d in Y.differentials.items() if n < -1}
    diffs[-1] = factor_through_mono(w, Y.d(-1))
    sub = ComplexA(X.context, terms, diffs)
    comps = {n: RepMorphism.identity(M) for n, M in Y.terms.items() if n < 0}
    comps[0] = w
    return HrsTruncation(sub, le.map @ ChainMap(sub, Y, comps))


def hrs_truncate_le(TP: TorsionPair, X: ComplexA, k: int) -> HrsTruncation:
    """τ'_{≤k} by shift conjugation."""
    if k == 0:
        return hrs_truncate_le0(TP, X)
    t = hrs_truncate_le0(TP, shift(X, k))
    return HrsTruncation(shift(t.complex, -k), shift_map(t.inclusion, -k))


@dataclass(frozen=True)
class _H0Data:
    """``X <-iY- Y -pQ-> Q`` and the roof normalizing Q."""

    iY: ChainMap
    pQ: ChainMap
    roof: _Roof


def _hrs_h0_data(TP: TorsionPair, X: ComplexA) -> _H0Data:
    top = hrs_truncate_le0(TP, X)
    below = hrs_truncate_le(TP, top.complex, -1)
    quotient = quotient_complex(below.inclusion)
    return _H0Data(top.inclusion, quotient.map, _normalize(quotient.complex))


def hrs_h0(TP: TorsionPair, X: ComplexA) -> HeartObject:
    """Heart cohomology τ'_{≥0} τ'_{≤0} X."""
    return make_heart_object(TP, _hrs_h0_data(TP, X).roof.normal)


def heart_cokernel(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    """Cokernel as the heart cohomology of the cone, with the map from the target."""
    TP = f.source.pair
    c = cone(f.rep)
    data = _hrs_h0_data(TP, c.complex)
    N = make_heart_object(TP, data.roof.normal)
    to_cone = c.inclusion @ f.target.epsilon
    into_top = lift_chain_map(to_cone, data.iY)
    if into_top is None:
        raise RuntimeError("target does not factor through the truncation of the cone")
    to_q = data.pQ @ into_top
    rep = data.roof.proj @ lift_through_quasi_iso(to_q, data.roof.incl)
    return N, HeartMorphism(f.target, N, rep)


def heart_kernel(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    """Kernel as the heart cohomology of the shifted cone, with the map into the source."""
    TP = f.source.pair
    c = cone(f.rep)
    data = _hrs_h0_data(TP, shift(c.complex, -1))
    K = make_heart_object(TP, data.roof.normal)
    into_s = lift_through_quasi_iso(K.epsilon, data.roof.proj)
    # the shifted cone sits in degrees >= 0 of the tilted t-structure, so pQ is a quasi-isomorphism
    into_y = lift_through_quasi_iso(data.roof.incl @ into_s, data.pQ)
    to_source = shift_map(c.projection, -1) @ data.iY @ into_y
    return K, HeartMorphism(K, f.source, f.source.epsilon @ to_source)


def heart_image(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    """``ker(coker f) -> target``."""
    _, pi = heart_cokernel(f)
    return heart_kernel(pi)


def heart_coimage(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    """``source -> coker(ker f)``."""
    _, k = heart_kernel(f)
    return heart_cokernel(k)


def coimage_to_image(f: HeartMorphism) -> HeartMorphism:
    """The canonical comparison ``coim f -> im f``."""
    _, epi = heart_coimage(f)
    _, mono = heart_image(f)
    through = factor_through_epi_in_heart(epi, f)
    if through is None:
        raise RuntimeError("morphism does not factor through its coimage")
    u = factor_through_mono_in_heart(mono, through)
    if u is None:
        raise RuntimeError("morphism does not factor through its image")
    return u


def is_heart_iso(f: HeartMorphism) -> bool:
    return is_acyclic(cone(f.rep).complex)


def _cone_cohomology(f: HeartMorphism) -> dict[int, Representation]:
    C = cone(f.rep).complex
    return {n: cohomology(C, n).module for n in (-2, -1, 0)}


def is_heart_mono(f: HeartMorphism) -> bool:
    """Zero kernel, read off the cone: H^-2 torsion and H^-1 torsion-free.

    The heart kernel is the tilted H^-1 of the cone, whose two cohomology
    modules are the torsion-free part of H^-2 and the torsion part of H^-1.
    """
    TP = f.source.pair
    H = _cone_cohomology(f)
    return is_torsion(TP, H[-2]) and is_torsion_free(TP, H[-1])


def is_heart_epi(f: HeartMorphism) -> bool:
    """Zero cokernel: H^-1 of the cone torsion and H^0 torsion-free."""
    TP = f.source.pair
    H = _cone_cohomology(f)
    return is_torsion(TP, H[-1]) and is_torsion_free(TP, H[0])


# ---------------------------------------------------------------------------
# Short exact sequences and the torsion pair (F[1], T) on the heart


@dataclass(frozen=True, eq=False)
class HeartSES:
    """0 -> first --mono--> second --epi--> third -> 0."""

    first: HeartObject
    second: HeartObject
    third: HeartObject
    mono: HeartMorphism
    epi: HeartMorphism

    def verify(self) -> bool:
        """Composite zero, mono injective, and ``coker(mono) -> third`` an isomorphism."""
        if not compose(self.epi, self.mono).is_zero():
            return False
        if not is_heart_mono(self.mono):
            return False
        _, pi = heart_cokernel(self.mono)
        u = factor_through_epi_in_heart(pi, self.epi)
        return u is not None and is_heart_iso(u)


@lru_cache(maxsize=2048)
def torsion_decomposition(B: HeartObject) -> HeartSES:
    """0 -> H^-1(B)[1] -> B -> H^0(B) -> 0."""
    TP = B.pair
    cx = B.cx
    Z, z = kernel(cx.d(-1))
    F = shifted_heart_object(TP, Z.renamed("F"))
    mono = from_chain_map(F, B, ChainMap(F.cx, cx, {-1: z}))
    h = cohomology(cx, 0)
    to_h = h.projection @ factor_through_mono(h.cycle_inclusion, RepMorphism.identity(cx.term(0)))
    T = heart_object_from_module(TP, h.module.renamed("T"))
    epi = from_chain_map(B, T, ChainMap(cx, T.cx, {0: to_h}))
    return HeartSES(F, B, T, mono, epi)


@dataclass(frozen=True, eq=False)
class HeartSum:
    object: HeartObject
    injections: tuple[HeartMorphism, ...]
    projections: tuple[HeartMorphism, ...]


def heart_direct_sum(objects: Sequence[HeartObject], TP: TorsionPair | None = None) -> HeartSum:
    TP = TP or objects[0].pair
    cs = complex_direct_sum([B.cx for B in objects], TP.context)
    S = make_heart_object(TP, cs.complex, "+".join(str(B) for B in objects))
    injections = tuple(from_chain_map(B, S, i) for B, i in zip(objects, cs.injections))
    projections = tuple(from_chain_map(S, B, q) for B, q in zip(objects, cs.projections))
    return HeartSum(S, injections, projections)


@dataclass(frozen=True, eq=False)
class Splitting:
    decomposition: HeartSES
    section: HeartMorphism  # T -> B
    retraction: HeartMorphism  # B -> F[1]

    def isomorphism(self) -> tuple[HeartSum, HeartMorphism]:
        """``B -> F[1] ⊕ T`` assembled from the retraction and the epi."""
        dec = self.decomposition
        s = heart_direct_sum([dec.first, dec.third])
        iso = add(compose(s.injections[0], self.retraction), compose(s.injections[1], dec.epi))
        return s, iso


@lru_cache(maxsize=2048)
def split_object(TP: TorsionPair, B: HeartObject) -> Splitting:
    """Split the torsion decomposition; possible because Ext² vanishes on a path algebra."""
    dec = torsion_decomposition(B)
    section = lift_through_epi_in_heart(dec.epi, identity(dec.third))
    if section is None:
        raise SplitFailed(f"no section of B -> H^0(B) for {B}")
    complement = subtract(identity(B), compose(section, dec.epi))
    retraction = factor_through_mono_in_heart(dec.mono, complement)
    if retraction is None:
        raise SplitFailed(f"no retraction onto H^-1(B)[1] for {B}")
    return Splitting(dec, section, retraction)


# ---------------------------------------------------------------------------
# Exactness


def is_exact_over_heart(TP: TorsionPair, terms: Sequence[HeartObject], diffs: Sequence[HeartMorphism]) -> bool:
    """Exactness of ``0 -> terms[0] -> ... -> terms[-1] -> 0`` in the heart.

    At each position the outgoing map, factored through the cokernel of the
    incoming one, must have zero kernel.
    """
    if len(diffs) != max(len(terms) - 1, 0):
        raise ValueError("a complex of m terms needs m - 1 differentials")
    for i in range(len(diffs) - 1):
        if not compose(diffs[i + 1], diffs[i]).is_zero():
            raise NotAComplex(i)
    zero = zero_heart_object(TP)
    for i, B in enumerate(terms):
        incoming = diffs[i - 1] if i > 0 else zero_morphism(zero, B)
        outgoing = diffs[i] if i < len(diffs) else zero_morphism(B, zero)
        _, pi = heart_cokernel(incoming)
        u = factor_through_epi_in_heart(pi, outgoing)
        if u is None:
            raise NotAComplex(i - 1)
        if not is_heart_mono(u):
            logger.debug(f"not exact at position {i}")
            return False
    return True
