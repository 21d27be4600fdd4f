"""Resolutions that make the derived equivalence between the heart and the modules concrete.

Neither direction of the equivalence is a category object here. Going from
complexes of modules to the heart means resolving by torsion terms. Going back
means covering heart objects by torsion stalks. Both are then compared up to
quasi-isomorphism or homotopy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from algebra.complexes import (
    ChainMap,
    ComplexA,
    is_quasi_iso,
    lift_through_quasi_iso,
)
from algebra.errors import CoverFailed, NotAComplex
from algebra.exact_linalg import FpMatrix, nullspace_basis, solve_vector
from algebra.heart import (
    HeartMorphism,
    HeartObject,
    HeartSES,
    add,
    compose,
    factor_through_epi_in_heart,
    factor_through_mono_in_heart,
    from_chain_map,
    heart_direct_sum,
    heart_hom_space,
    heart_kernel,
    heart_object_from_module,
    heart_to_module_morphism,
    is_exact_over_heart,
    is_heart_iso,
    lift_through_epi_in_heart,
    make_heart_object,
    module_morphism_to_heart,
    scale,
    split_object,
    stalk_module,
    zero_heart_object,
    zero_morphism,
)
from algebra.quiver_rep import (
    RepMorphism,
    Representation,
    direct_sum,
    factor_through_epi,
    inj_hull,
    is_injective,
    map_from_sum,
    pushout,
)
from algebra.torsion import TorsionPair, is_torsion, require_tilting, t_coresolution
from logger_config import get_logger

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Resolving complexes by torsion terms


@dataclass(frozen=True)
class TResolution:
    original: ComplexA
    resolved: ComplexA
    qis: ChainMap

    def support_ok(self) -> bool:
        if self.resolved.is_zero():
            return True
        if self.original.is_zero():
            return False
        return self.original.lo <= self.resolved.lo and self.resolved.hi <= self.original.hi + 1


def _sweep(X: ComplexA, needs_fix: Callable[[Representation], bool],
           embed: Callable[[Representation], RepMorphism]) -> tuple[ComplexA, ChainMap]:
    """Left-to-right pushout sweep replacing every term that ``needs_fix``.

    At degree n the term is embedded by ``u: X^n -> T`` and ``X^{n+1}`` is
    replaced by the pushout of ``d^n`` along u. Each step is a quasi-isomorphism:
    the degreewise quotient is ``coker u`` in degrees n and n+1 with the identity between them.
    """
    ctx = X.context
    if X.is_zero():
        return X, ChainMap.identity(X)
    terms = X.terms
    diffs = X.differentials
    zero = ctx.zero()
    qis = {n: RepMorphism.identity(M) for n, M in terms.items()}

    def term(n: int) -> Representation:
        return terms.get(n, zero)

    def diff(n: int) -> RepMorphism:
        return diffs.get(n) or RepMorphism.zero(term(n), term(n + 1))

    n = X.lo
    while n <= max(terms) + 1:
        M = term(n)
        if M.is_zero() or not needs_fix(M):
            n += 1
            continue
        u = embed(M)
        po = pushout(u, diff(n))
        above = term(n + 2)
        # pushout universal map: 0 on T, d^{n+1} on X^{n+1}
        induced = factor_through_epi(po.projection, map_from_sum(po.sum, [RepMorphism.zero(u.target, above), diff(n + 1)]))
        qis[n] = u @ qis.get(n, RepMorphism.zero(X.term(n), M))
        qis[n + 1] = po.from_second @ qis.get(n + 1, RepMorphism.zero(X.term(n + 1), term(n + 1)))
        if n - 1 in diffs:
            diffs[n - 1] = u @ diff(n - 1)
        terms[n] = u.target
        terms[n + 1] = po.object
        diffs[n] = po.from_first
        diffs[n + 1] = induced
        logger.debug(f"sweep at degree {n}: {list(M.dims)} -> {list(u.target.dims)}")
        n += 1
    resolved = ComplexA(ctx, terms, diffs)
    return resolved, ChainMap(X, resolved, qis)


def t_resolve_complex(TP: TorsionPair, X: ComplexA) -> TResolution:
    """Quasi-isomorphism ``X -> T`` into a complex with torsion terms, one degree longer at most."""
    require_tilting(TP)
    resolved, qis = _sweep(X, lambda M: not is_torsion(TP, M), lambda M: t_coresolution(TP, M).mono)
    res = TResolution(X, resolved, qis)
    if not all(is_torsion(TP, M) for M in resolved.terms.values()):
        raise RuntimeError("resolution left a non-torsion term")
    if not res.support_ok():
        raise RuntimeError("resolution left the support window")
    if not is_quasi_iso(qis):
        raise RuntimeError("resolution is not a quasi-isomorphism")
    return res


def injective_round(X: ComplexA) -> TResolution:
    """The same sweep with injective hulls; the result is a bounded complex of injectives."""
    resolved, qis = _sweep(X, lambda M: not is_injective(M), inj_hull)
    return TResolution(X, resolved, qis)


# ---------------------------------------------------------------------------
# Covers by torsion stalks


@dataclass(frozen=True, eq=False)
class TCover(HeartSES):
    """0 -> T^-1 -> T^0 -> B -> 0 with torsion stalks; ``differential`` is the module map T^-1 -> T^0."""

    differential: RepMorphism | None = None


def _connecting_morphism(TP: TorsionPair, mono: RepMorphism, epi: RepMorphism,
                         shifted: HeartObject) -> HeartMorphism:
    """``G -> F[1]`` from the triangle of ``0 -> F -> E -> G -> 0``."""
    F, E, G = mono.source, mono.target, epi.target
    G_obj = heart_object_from_module(TP, G)
    K = ComplexA(TP.context, {-1: F, 0: E}, {-1: mono})
    to_G = ChainMap(K, G_obj.cx, {0: epi})
    to_F = ChainMap(K, shifted.cx, {-1: RepMorphism.identity(F)})
    lifted = lift_through_quasi_iso(G_obj.epsilon, to_G)
    return HeartMorphism(G_obj, shifted, to_F @ lifted)


@lru_cache(maxsize=1024)
def cover_by_T(TP: TorsionPair, B: HeartObject, verify: bool = True) -> TCover:
    """Cover B by torsion stalks through its splitting ``B ≅ F[1] ⊕ T``.

    With ``0 -> F -> E -> G -> 0`` a torsion coresolution of F, the cover is
    ``0 -> E -> G ⊕ T -> B -> 0``. With ``verify`` the outer terms are checked
    to be torsion and the sequence to be exact in the heart; failure raises
    ``CoverFailed``.
    """
    require_tilting(TP)
    split = split_object(TP, B)
    dec = split.decomposition
    F = dec.first.cx.term(-1)
    T = dec.third.cx.term(0)
    cores = t_coresolution(TP, F)
    E, G = cores.mono.target, cores.epi.target
    summed = direct_sum([G, T], TP.context)
    top = heart_object_from_module(TP, summed.sum, "T0")
    bottom = heart_object_from_module(TP, E, "T-1")
    differential = summed.injections[0] @ cores.epi
    mono = module_morphism_to_heart(bottom, top, differential)
    delta = _connecting_morphism(TP, cores.mono, cores.epi, dec.first)
    to_G = module_morphism_to_heart(top, delta.source, summed.projections[0])
    to_T = module_morphism_to_heart(top, dec.third, summed.projections[1])
    epi = add(compose(dec.mono, compose(delta, to_G)), compose(split.section, to_T))
    logger.debug(f"cover of {B}: T-1 dims {list(E.dims)}, T0 dims {list(summed.sum.dims)}")
    cover = TCover(bottom, top, B, mono, epi, differential)
    if verify:
        if not (is_torsion(TP, E) and is_torsion(TP, summed.sum)):
            raise CoverFailed(B, "outer terms are not torsion")
        if not cover.verify():
            raise CoverFailed(B, "sequence is not exact in the heart")
    return cover


# ---------------------------------------------------------------------------
# Complexes over the heart


@dataclass(frozen=True, eq=False)
class HeartComplex:
    """``terms[0] -> terms[1] -> ...`` starting in degree ``start``."""

    pair: TorsionPair
    terms: tuple[HeartObject, ...]
    diffs: tuple[HeartMorphism, ...]
    start: int = 0

    @property
    def lo(self) -> int:
        return self.start

    @property
    def hi(self) -> int:
        return self.start + len(self.terms) - 1

    def term(self, n: int) -> HeartObject:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.start]
        return zero_heart_object(self.pair)

    def d(self, n: int) -> HeartMorphism:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.start]
        return zero_morphism(self.term(n), self.term(n + 1))

    def is_exact(self) -> bool:
        return is_exact_over_heart(self.pair, self.terms, self.diffs)


@dataclass(frozen=True, eq=False)
class HeartChainMap:
    source: HeartComplex
    target: HeartComplex
    components: dict[int, HeartMorphism]

    def component(self, n: int) -> HeartMorphism:
        f = self.components.get(n)
        return f if f is not None else zero_morphism(self.source.term(n), self.target.term(n))


def heart_complex_cone(q: HeartChainMap) -> HeartComplex:
    """``C^n = S^{n+1} ⊕ T^n`` with differential ``[[-d_S, 0], [q, d_T]]``."""
    S, T = q.source, q.target
    TP = S.pair
    lo, hi = min(S.lo - 1, T.lo), max(S.hi - 1, T.hi)
    sums = {n: heart_direct_sum([S.term(n + 1), T.term(n)], TP) for n in range(lo, hi + 2)}
    diffs = []
    for n in range(lo, hi):
        a, b = sums[n], sums[n + 1]
        first = compose(b.injections[0], compose(scale(S.d(n + 1), -1), a.projections[0]))
        mixed = compose(b.injections[1], compose(q.component(n + 1), a.projections[0]))
        second = compose(b.injections[1], compose(T.d(n), a.projections[1]))
        diffs.append(add(add(first, mixed), second))
    return HeartComplex(TP, tuple(sums[n].object for n in range(lo, hi + 1)), tuple(diffs), lo)


def is_heart_quasi_iso(q: HeartChainMap) -> bool:
    return heart_complex_cone(q).is_exact()


@dataclass(frozen=True, eq=False)
class Realization:
    """A complex of torsion modules and its comparison with the heart complex it realizes."""

    complex: ComplexA
    torsion_complex: HeartComplex
    quasi_iso: HeartChainMap
    verified: bool | None = None


def _check_heart_complex(TP: TorsionPair, terms: Sequence[HeartObject], diffs: Sequence[HeartMorphism]) -> None:
    if len(diffs) != max(len(terms) - 1, 0):
        raise ValueError("a complex of m terms needs m - 1 differentials")
    for i in range(len(diffs) - 1):
        if not compose(diffs[i + 1], diffs[i]).is_zero():
            raise NotAComplex(i)


def realize_heart_complex(TP: TorsionPair, terms: Sequence[HeartObject], diffs: Sequence[HeartMorphism],
                          start: int = 0, verify: bool = True) -> Realization:
    """Replace a bounded heart complex by a complex of torsion modules.

    Works from the top degree down: ``T^n`` covers the pullback of
    ``ker d_T^{n+1} -> B^{n+1} <- B^n`` by torsion stalks. Subobjects of torsion
    stalks are torsion stalks in the heart, so the process stops one degree
    below the input.
    """
    require_tilting(TP)
    _check_heart_complex(TP, terms, diffs)
    source = HeartComplex(TP, tuple(terms), tuple(diffs), start)
    zero = zero_heart_object(TP)
    covers: dict[int, HeartObject] = {}
    d_T: dict[int, HeartMorphism] = {}
    q: dict[int, HeartMorphism] = {}
    d_next = zero_morphism(zero, zero)
    q_next = zero_morphism(zero, source.term(source.hi + 1))
    n = source.hi
    while True:
        K, k = heart_kernel(d_next)
        summed = heart_direct_sum([K, source.term(n)], TP)
        to_above = add(compose(compose(q_next, k), summed.projections[0]),
                       scale(compose(source.d(n), summed.projections[1]), -1))
        Z, z = heart_kernel(to_above)
        if n < source.lo and Z.is_zero():
            break
        if n < source.lo - 2:
            raise RuntimeError("realization did not terminate")
        cover = cover_by_T(TP, Z, verify=False)
        through = compose(z, cover.epi)
        d_next = compose(k, compose(summed.projections[0], through))
        q_next = compose(summed.projections[1], through)
        covers[n], d_T[n], q[n] = cover.second, d_next, q_next
        n -= 1
    lo = n + 1
    ordered = [covers[i] for i in range(lo, source.hi + 1)]
    torsion_complex = HeartComplex(TP, tuple(ordered), tuple(d_T[i] for i in range(lo, source.hi)), lo)
    modules = {i: stalk_module(covers[i]) for i in covers}
    module_diffs = {i: heart_to_module_morphism(d_T[i]) for i in range(lo, source.hi)}
    realized = ComplexA(TP.context, modules, module_diffs)
    comparison = HeartChainMap(torsion_complex, source, q)
    verified = is_heart_quasi_iso(comparison) if verify else None
    logger.debug(f"realized heart complex of length {len(terms)} as {realized!r}")
    return Realization(realized, torsion_complex, comparison, verified)


def single_object_comparison(TP: TorsionPair, realization: Realization) -> HeartMorphism | None:
    """For a one-term input B in degree 0, the induced heart morphism ``realized -> B``."""
    cx = realization.complex
    obj = make_heart_object(TP, cx)
    top = realization.torsion_complex.term(0)
    inclusion = ChainMap(top.cx, obj.cx, {0: RepMorphism.identity(cx.term(0))} if not cx.term(0).is_zero() else {})
    gamma = from_chain_map(top, obj, inclusion)
    return factor_through_epi_in_heart(gamma, realization.quasi_iso.component(0))


# ---------------------------------------------------------------------------
# The comparison isomorphism θ and its naturality


@dataclass(frozen=True, eq=False)
class ThetaWitness:
    B: HeartObject
    cover: TCover
    realized: HeartObject
    theta: HeartMorphism
    uniqueness_dim: int
    gamma: HeartMorphism


@lru_cache(maxsize=1024)
def theta(TP: TorsionPair, B: HeartObject) -> ThetaWitness:
    """The isomorphism ``B -> [T^-1 -> T^0]`` compatible with both covering epis."""
    cover = cover_by_T(TP, B)
    d = cover.differential
    realized = make_heart_object(TP, ComplexA.two_term(d, -1), f"T({B})")
    inclusion = ChainMap(cover.second.cx, realized.cx,
                         {0: RepMorphism.identity(d.target)} if not d.target.is_zero() else {})
    gamma = from_chain_map(cover.second, realized, inclusion)
    space = heart_hom_space(B, realized)
    goal = heart_hom_space(cover.second, realized)
    p = TP.context.prime
    A = FpMatrix.from_columns([goal.coordinates(compose(b, cover.epi)) for b in space.basis], goal.dim, p)
    rhs = goal.coordinates(gamma)
    x = solve_vector(A, rhs)
    if x is None:
        raise RuntimeError(f"no map from {B} compatible with the covers")
    augmented = FpMatrix.from_columns(list(A.data.T) + [rhs], goal.dim, p)
    uniqueness_dim = nullspace_basis(augmented).cols
    if uniqueness_dim != 1:
        logger.warning(f"compatible maps for {B} form a space of dimension {uniqueness_dim}")
    th = space.element(x)
    if not is_heart_iso(th):
        raise RuntimeError(f"comparison map for {B} is not invertible")
    return ThetaWitness(B, cover, realized, th, uniqueness_dim, gamma)


def realized_chain_map(TP: TorsionPair, f: HeartMorphism, w1: ThetaWitness, w2: ThetaWitness) -> ChainMap:
    """Chain map between the realized complexes that lifts ``f`` through the covers.

    The degree-0 lift exists because the kernel of the target cover is an
    injective module, so Ext¹ into it vanishes.
    """
    phi0 = lift_through_epi_in_heart(w2.cover.epi, compose(f, w1.cover.epi))
    if phi0 is None:
        raise RuntimeError("degree-0 lift through the target cover failed")
    phim1 = factor_through_mono_in_heart(w2.cover.mono, compose(phi0, w1.cover.mono))
    if phim1 is None:
        raise RuntimeError("degree -1 lift through the target cover failed")
    return ChainMap(w1.realized.cx, w2.realized.cx,
                    {-1: heart_to_module_morphism(phim1), 0: heart_to_module_morphism(phi0)})


def check_theta_natural(TP: TorsionPair, f: HeartMorphism) -> bool:
    """``θ_{B'} ∘ f == φ ∘ θ_B`` for the chain map φ lifting f."""
    require_tilting(TP)
    w1, w2 = theta(TP, f.source), theta(TP, f.target)
    phi = from_chain_map(w1.realized, w2.realized, realized_chain_map(TP, f, w1, w2))
    return compose(w2.theta, f) == compose(phi, w1.theta)


def extension_component(TP: TorsionPair, f: HeartMorphism) -> HeartMorphism:
    """The ``H^0(B) -> H^-1(B')[1]`` part of ``f``, an element of Ext¹."""
    s1, s2 = split_object(TP, f.source), split_object(TP, f.target)
    return compose(s2.retraction, compose(f, s1.section))
