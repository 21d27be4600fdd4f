"""Bounded cochain complexes of representations and the linear algebra of D^b.

Conventions:
  * ``shift(X, k)`` has terms ``X^{n+k}`` and differential ``(-1)^k d_X``.
  * ``cone(f: X -> Y)`` has terms ``X^{n+1} ⊕ Y^n`` and differential
    ``[[-d_X, 0], [f, d_Y]]``.
  * Hom in the derived category is computed as chain maps modulo homotopy from a
    projective replacement of the source.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from algebra.errors import ContextMismatch
from algebra.exact_linalg import FpMatrix, LinearSolver, hstack, nullspace_basis, rref, vstack
from algebra.quiver_rep import (
    AlgebraContext,
    DirectSum,
    RepMorphism,
    Representation,
    cokernel,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    hom_basis,
    is_epi,
    is_mono,
    kernel,
    linear_combination,
    map_from_sum,
    projective_cover,
)
from logger_config import get_logger

logger = get_logger(__name__)


class ComplexA:
    """Bounded cochain complex ``X^n --d^n--> X^{n+1}``.

    Zero terms and zero differentials are not stored, so two complexes with
    the same nonzero data compare equal.
    """

    __slots__ = ("context", "_terms", "_diffs", "_hash")

    def __init__(self, context: AlgebraContext, terms: Mapping[int, Representation] | None = None,
                 differentials: Mapping[int, RepMorphism] | None = None):
        self.context = context
        zero = context.zero()
        kept: dict[int, Representation] = {}
        for n, M in (terms or {}).items():
            if M.context != context:
                raise ContextMismatch(f"term in degree {n} belongs to another context")
            if not M.is_zero():
                kept[int(n)] = M
        diffs: dict[int, RepMorphism] = {}
        for n, d in (differentials or {}).items():
            n = int(n)
            if d.source != kept.get(n, zero) or d.target != kept.get(n + 1, zero):
                raise ValueError(f"differential in degree {n} does not match the terms")
            if not d.is_zero():
                diffs[n] = d
        for n, d in diffs.items():
            if n + 1 in diffs and not (diffs[n + 1] @ d).is_zero():
                raise ValueError(f"d^{n + 1} ∘ d^{n} is not zero")
        self._terms = dict(sorted(kept.items()))
        self._diffs = dict(sorted(diffs.items()))
        self._hash = None

    @classmethod
    def zero(cls, context: AlgebraContext) -> ComplexA:
        return cls(context)

    @classmethod
    def stalk(cls, M: Representation, degree: int = 0) -> ComplexA:
        return cls(M.context, {degree: M})

    @classmethod
    def two_term(cls, d: RepMorphism, degree: int = -1) -> ComplexA:
        """``source(d) -> target(d)`` in degrees ``degree, degree + 1``."""
        return cls(d.source.context, {degree: d.source, degree + 1: d.target}, {degree: d})

    def term(self, n: int) -> Representation:
        return self._terms.get(n) or self.context.zero()

    def d(self, n: int) -> RepMorphism:
        d = self._diffs.get(n)
        return d if d is not None else RepMorphism.zero(self.term(n), self.term(n + 1))

    @property
    def terms(self) -> dict[int, Representation]:
        return dict(self._terms)

    @property
    def differentials(self) -> dict[int, RepMorphism]:
        return dict(self._diffs)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self._terms)

    @property
    def lo(self) -> int | None:
        return next(iter(self._terms), None)

    @property
    def hi(self) -> int | None:
        return next(reversed(self._terms), None) if self._terms else None

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_dim(self) -> int:
        return sum(M.total_dim for M in self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexA):
            return NotImplemented
        return self.context == other.context and self._terms == other._terms and self._diffs == other._diffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.context, tuple(self._terms.items()), tuple(self._diffs.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {list(M.dims)}" for n, M in self._terms.items())
        return f"ComplexA({{{body}}})"


def _support(*complexes: ComplexA) -> tuple[int, int] | None:
    los = [X.lo for X in complexes if not X.is_zero()]
    his = [X.hi for X in complexes if not X.is_zero()]
    if not los:
        return None
    return min(los), max(his)


class ChainMap:
    """Degreewise morphisms commuting with the differentials."""

    __slots__ = ("source", "target", "_components", "_hash")

    def __init__(self, source: ComplexA, target: ComplexA, components: Mapping[int, RepMorphism] | None = None):
        if source.context != target.context:
            raise ContextMismatch("chain map between complexes of different contexts")
        self.source = source
        self.target = target
        comps: dict[int, RepMorphism] = {}
        for n, f in (components or {}).items():
            n = int(n)
            if f.source != source.term(n) or f.target != target.term(n):
                raise ValueError(f"component in degree {n} does not match the terms")
            if not f.is_zero():
                comps[n] = f
        self._components = dict(sorted(comps.items()))
        self._hash = None
        for n in sorted({k for k in comps} | {k - 1 for k in comps}):
            if target.d(n) @ self.component(n) != self.component(n + 1) @ source.d(n):
                raise ValueError(f"chain map does not commute with the differentials in degree {n}")

    @classmethod
    def identity(cls, X: ComplexA) -> ChainMap:
        return cls(X, X, {n: RepMorphism.identity(M) for n, M in X.terms.items()})

    @classmethod
    def zero(cls, X: ComplexA, Y: ComplexA) -> ChainMap:
        return cls(X, Y)

    @classmethod
    def stalk(cls, f: RepMorphism, degree: int = 0) -> ChainMap:
        return cls(ComplexA.stalk(f.source, degree), ComplexA.stalk(f.target, degree), {degree: f})

    def component(self, n: int) -> RepMorphism:
        f = self._components.get(n)
        return f if f is not None else RepMorphism.zero(self.source.term(n), self.target.term(n))

    @property
    def components(self) -> dict[int, RepMorphism]:
        return dict(self._components)

    def __matmul__(self, other: ChainMap) -> ChainMap:
        if other.target != self.source:
            raise ValueError("cannot compose: target of the right factor is not the source of the left")
        comps = {n: self.component(n) @ f for n, f in other._components.items() if n in self._components}
        return ChainMap(other.source, self.target, comps)

    def _combine(self, other: ChainMap, sign: int) -> ChainMap:
        if self.source != other.source or self.target != other.target:
            raise ValueError("chain maps are not parallel")
        degrees = set(self._components) | set(other._components)
        comps = {n: self.component(n) + other.component(n).scale(sign) for n in degrees}
        return ChainMap(self.source, self.target, comps)

    def __add__(self, other: ChainMap) -> ChainMap:
        return self._combine(other, 1)

    def __sub__(self, other: ChainMap) -> ChainMap:
        return self._combine(other, -1)

    def __neg__(self) -> ChainMap:
        return self.scale(-1)

    def scale(self, c: int) -> ChainMap:
        return ChainMap(self.source, self.target, {n: f.scale(c) for n, f in self._components.items()})

    def is_zero(self) -> bool:
        return not self._components

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self._components == other._components)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, tuple(self._components.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r}, degrees {list(self._components)})"


def chain_linear_combination(coeffs: Sequence[int], maps: Sequence[ChainMap], source: ComplexA,
                             target: ComplexA) -> ChainMap:
    out = ChainMap.zero(source, target)
    p = source.context.prime
    for c, f in zip(coeffs, maps):
        if int(c) % p:
            out = out + f.scale(int(c))
    return out


@dataclass(frozen=True)
class HomotopyWitness:
    """Maps ``h^n: X^n -> Y^{n-1}`` with ``f - g = d_Y h + h d_X``."""

    components: dict[int, RepMorphism]

    def apply(self, X: ComplexA, Y: ComplexA) -> dict[int, RepMorphism]:
        """The degree-zero family ``d_Y h + h d_X``."""
        out: dict[int, RepMorphism] = {}
        for n, h in self.components.items():
            dh = Y.d(n - 1) @ h
            hd = h @ X.d(n - 1)
            out[n] = out[n] + dh if n in out else dh
            out[n - 1] = out[n - 1] + hd if n - 1 in out else hd
        return out


# ---------------------------------------------------------------------------
# Cohomology


@dataclass(frozen=True)
class Cohomology:
    """``H^n = Z^n / B^n`` with the maps that realize the subquotient."""

    module: Representation
    cycles: Representation
    cycle_inclusion: RepMorphism
    boundary_map: RepMorphism
    projection: RepMorphism


@lru_cache(maxsize=4096)
def cohomology(X: ComplexA, n: int) -> Cohomology:
    Z, incl = kernel(X.d(n))
    into_cycles = factor_through_mono(incl, X.d(n - 1))
    if into_cycles is None:
        raise RuntimeError(f"image of d^{n - 1} is not inside ker d^{n}")
    H, proj = cokernel(into_cycles)
    return Cohomology(H, Z, incl, into_cycles, proj)


def cohomology_dims(X: ComplexA) -> dict[int, tuple[int, ...]]:
    """Nonzero cohomology dimension vectors by degree."""
    out = {}
    for n in X.degrees:
        H = cohomology(X, n).module
        if not H.is_zero():
            out[n] = H.dims
    return out


def is_acyclic(X: ComplexA) -> bool:
    return all(cohomology(X, n).module.is_zero() for n in X.degrees)


def induced_map(f: ChainMap, n: int) -> RepMorphism:
    """``H^n(f): H^n(X) -> H^n(Y)``."""
    cx, cy = cohomology(f.source, n), cohomology(f.target, n)
    on_cycles = factor_through_mono(cy.cycle_inclusion, f.component(n) @ cx.cycle_inclusion)
    if on_cycles is None:
        raise RuntimeError(f"chain map does not preserve cycles in degree {n}")
    out = factor_through_epi(cx.projection, cy.projection @ on_cycles)
    if out is None:
        raise RuntimeError(f"chain map does not preserve boundaries in degree {n}")
    return out


def is_quasi_iso(f: ChainMap) -> bool:
    span = _support(f.source, f.target)
    if span is None:
        return True
    for n in range(span[0], span[1] + 1):
        h = induced_map(f, n)
        if not (is_mono(h) and is_epi(h)):
            return False
    return True


# ---------------------------------------------------------------------------
# Shifts, cones, truncations


def shift(X: ComplexA, k: int) -> ComplexA:
    sign = -1 if k % 2 else 1
    return ComplexA(X.context, {n - k: M for n, M in X.terms.items()},
                    {n - k: d.scale(sign) for n, d in X.differentials.items()})


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {n - k: c for n, c in f.components.items()})


@dataclass(frozen=True)
class Cone:
    complex: ComplexA
    inclusion: ChainMap  # target -> cone
    projection: ChainMap  # cone -> shift(source, 1)


def cone(f: ChainMap) -> Cone:
    X, Y = f.source, f.target
    ctx = X.context
    span = _support(shift(X, 1), Y)
    if span is None:
        C = ComplexA.zero(ctx)
        return Cone(C, ChainMap.zero(Y, C), ChainMap.zero(C, shift(X, 1)))
    lo, hi = span
    sums: dict[int, DirectSum] = {n: direct_sum([X.term(n + 1), Y.term(n)], ctx) for n in range(lo, hi + 2)}
    diffs = {}
    for n in range(lo, hi + 1):
        a, b = sums[n], sums[n + 1]
        diffs[n] = (b.injections[0] @ (-X.d(n + 1)) @ a.projections[0]
                    + b.injections[1] @ f.component(n + 1) @ a.projections[0]
                    + b.injections[1] @ Y.d(n) @ a.projections[1])
    C = ComplexA(ctx, {n: sums[n].sum for n in range(lo, hi + 1)}, diffs)
    inclusion = ChainMap(Y, C, {n: sums[n].injections[1] for n in range(lo, hi + 1)})
    projection = ChainMap(C, shift(X, 1), {n: sums[n].projections[0] for n in range(lo, hi + 1)})
    return Cone(C, inclusion, projection)


@dataclass(frozen=True)
class Truncation:
    """A truncated complex and its structure map (into X for ``≤``, out of X for ``≥``)."""

    complex: ComplexA
    map: ChainMap


def standard_truncation_le(X: ComplexA, n: int) -> Truncation:
    """τ_{≤n}: ``... -> X^{n-1} -> Z^n -> 0`` with its inclusion into X."""
    if X.is_zero() or n >= X.hi:
        return Truncation(X, ChainMap.identity(X))
    if n < X.lo:
        Z = ComplexA.zero(X.context)
        return Truncation(Z, ChainMap.zero(Z, X))
    Zn, incl = kernel(X.d(n))
    terms = {i: M for i, M in X.terms.items() if i < n}
    terms[n] = Zn
    diffs = {i: d for i, d in X.differentials.items() if i < n - 1}
    diffs[n - 1] = factor_through_mono(incl, X.d(n - 1))
    T = ComplexA(X.context, terms, diffs)
    comps = {i: RepMorphism.identity(M) for i, M in X.terms.items() if i < n}
    comps[n] = incl
    return Truncation(T, ChainMap(T, X, comps))


def standard_truncation_ge(X: ComplexA, n: int) -> Truncation:
    """τ_{≥n}: ``0 -> X^n / B^n -> X^{n+1} -> ...`` with the projection from X."""
    if X.is_zero() or n <= X.lo:
        return Truncation(X, ChainMap.identity(X))
    if n > X.hi:
        Z = ComplexA.zero(X.context)
        return Truncation(Z, ChainMap.zero(X, Z))
    Qn, proj = cokernel(X.d(n - 1))
    terms = {i: M for i, M in X.terms.items() if i > n}
    terms[n] = Qn
    diffs = {i: d for i, d in X.differentials.items() if i > n}
    diffs[n] = factor_through_epi(proj, X.d(n))
    T = ComplexA(X.context, terms, diffs)
    comps = {i: RepMorphism.identity(M) for i, M in X.terms.items() if i > n}
    comps[n] = proj
    return Truncation(T, ChainMap(X, T, comps))


def quotient_complex(i: ChainMap) -> Truncation:
    """Degreewise cokernel of a degreewise mono ``i: A -> X``; the map is X -> X/A."""
    X = i.target
    if X.is_zero():
        return Truncation(X, ChainMap.identity(X))
    projections = {n: cokernel(i.component(n)) for n in range(X.lo, X.hi + 1)}
    terms = {n: Q for n, (Q, _) in projections.items()}
    diffs = {}
    for n in range(X.lo, X.hi):
        d = factor_through_epi(projections[n][1], projections[n + 1][1] @ X.d(n))
        if d is None:
            raise ValueError(f"subcomplex is not closed under d^{n}")
        diffs[n] = d
    Q = ComplexA(X.context, terms, diffs)
    return Truncation(Q, ChainMap(X, Q, {n: pi for n, (_, pi) in projections.items()}))


@dataclass(frozen=True)
class ComplexSum:
    complex: ComplexA
    injections: tuple[ChainMap, ...]
    projections: tuple[ChainMap, ...]


def complex_direct_sum(complexes: Sequence[ComplexA], context: AlgebraContext) -> ComplexSum:
    span = _support(*complexes)
    if span is None:
        Z = ComplexA.zero(context)
        return ComplexSum(Z, tuple(ChainMap.zero(X, Z) for X in complexes),
                          tuple(ChainMap.zero(Z, X) for X in complexes))
    lo, hi = span
    sums = {n: direct_sum([X.term(n) for X in complexes], context) for n in range(lo, hi + 2)}
    diffs = {}
    for n in range(lo, hi + 1):
        a, b = sums[n], sums[n + 1]
        total = RepMorphism.zero(a.sum, b.sum)
        for k, X in enumerate(complexes):
            total = total + b.injections[k] @ X.d(n) @ a.projections[k]
        diffs[n] = total
    S = ComplexA(context, {n: sums[n].sum for n in range(lo, hi + 1)}, diffs)
    injections = tuple(ChainMap(X, S, {n: sums[n].injections[k] for n in range(lo, hi + 1)})
                       for k, X in enumerate(complexes))
    projections = tuple(ChainMap(S, X, {n: sums[n].projections[k] for n in range(lo, hi + 1)})
                        for k, X in enumerate(complexes))
    return ComplexSum(S, injections, projections)


# ---------------------------------------------------------------------------
# Projective replacement


@dataclass(frozen=True)
class ProjectiveReplacement:
    complex: ComplexA
    qis: ChainMap


@lru_cache(maxsize=2048)
def proj_replacement(X: ComplexA) -> ProjectiveReplacement:
    """Surjective quasi-isomorphism ``P -> X`` from a bounded complex of projectives.

    Built from the top degree down: ``P^n`` covers the pullback of
    ``ker d_P^{n+1} -> X^{n+1} <- X^n``. Over a path algebra the construction
    stops one degree left of X.
    """
    ctx = X.context
    if X.is_zero():
        return ProjectiveReplacement(X, ChainMap.identity(X))
    zero = ctx.zero()
    terms: dict[int, Representation] = {}
    diffs: dict[int, RepMorphism] = {}
    qis: dict[int, RepMorphism] = {}
    d_next = RepMorphism.zero(zero, zero)
    q_next = RepMorphism.zero(zero, X.term(X.hi + 1))
    n = X.hi
    while True:
        K, k = kernel(d_next)
        ds = direct_sum([K, X.term(n)], ctx)
        Z, z = kernel(map_from_sum(ds, [q_next @ k, -X.d(n)]))
        if n < X.lo and Z.is_zero():
            break
        if n < X.lo - 2:
            raise RuntimeError("projective replacement did not terminate; the algebra is not hereditary")
        cover = projective_cover(Z)
        d_next = k @ ds.projections[0] @ z @ cover
        q_next = ds.projections[1] @ z @ cover
        terms[n], diffs[n], qis[n] = cover.source, d_next, q_next
        n -= 1
    P = ComplexA(ctx, terms, diffs)
    logger.debug(f"projective replacement of {X!r}: {P!r}")
    return ProjectiveReplacement(P, ChainMap(P, X, qis))


# ---------------------------------------------------------------------------
# Chain maps modulo homotopy


class _GradedLayout:
    """Flattening of degree-preserving graded maps ``X -> Y`` into one vector."""

    def __init__(self, X: ComplexA, Y: ComplexA):
        self.index: dict[tuple[int, int], tuple[int, int]] = {}
        offset = 0
        for n in X.degrees:
            src, tgt = X.term(n), Y.term(n)
            for v in range(len(src.dims)):
                size = src.dims[v] * tgt.dims[v]
                if size:
                    self.index[(n, v)] = (offset, size)
                    offset += size
        self.size = offset

    def flatten(self, components: Mapping[int, RepMorphism]) -> np.ndarray:
        vec = np.zeros(self.size, dtype=np.int64)
        for n, f in components.items():
            for v, c in enumerate(f.components):
                slot = self.index.get((n, v))
                if slot is not None:
                    vec[slot[0]:slot[0] + slot[1]] = c.data.reshape(-1)
        return vec


def _flatten_map(f: RepMorphism) -> np.ndarray:
    return f.flatten()


@lru_cache(maxsize=2048)
def chain_map_basis(X: ComplexA, Y: ComplexA) -> tuple[ChainMap, ...]:
    """Basis of the space of chain maps ``X -> Y``."""
    p = X.context.prime
    degrees = [n for n in X.degrees if not Y.term(n).is_zero()]
    unknowns: list[tuple[int, RepMorphism]] = [(n, b) for n in degrees for b in hom_basis(X.term(n), Y.term(n))]
    if not unknowns:
        return ()
    constraint_degrees = sorted({n for n in degrees} | {n - 1 for n in degrees})
    offsets, size = {}, 0
    for n in constraint_degrees:
        offsets[n] = size
        size += sum(a * b for a, b in zip(X.term(n).dims, Y.term(n + 1).dims))
    system = np.zeros((size, len(unknowns)), dtype=np.int64)
    for col, (n, b) in enumerate(unknowns):
        # d_Y^n f^n - f^{n+1} d_X^n = 0
        top = _flatten_map(Y.d(n) @ b)
        system[offsets[n]:offsets[n] + top.size, col] += top
        below = _flatten_map(b @ X.d(n - 1))
        system[offsets[n - 1]:offsets[n - 1] + below.size, col] -= below
    kernel_basis = nullspace_basis(FpMatrix(system, p, shape=system.shape))
    maps = []
    for k in range(kernel_basis.cols):
        coeffs = kernel_basis.data[:, k]
        comps: dict[int, RepMorphism] = {}
        for c, (n, b) in zip(coeffs, unknowns):
            if c:
                comps[n] = comps[n] + b.scale(int(c)) if n in comps else b.scale(int(c))
        maps.append(ChainMap(X, Y, comps))
    return tuple(maps)


@lru_cache(maxsize=2048)
def _homotopy_system(X: ComplexA, Y: ComplexA) -> tuple[_GradedLayout, FpMatrix, tuple[tuple[int, RepMorphism], ...]]:
    """Columns ``d_Y h + h d_X`` over a basis of graded maps ``h: X^n -> Y^{n-1}``."""
    layout = _GradedLayout(X, Y)
    columns, generators = [], []
    for n in X.degrees:
        for b in hom_basis(X.term(n), Y.term(n - 1)):
            columns.append(layout.flatten({n: Y.d(n - 1) @ b, n - 1: b @ X.d(n - 1)}))
            generators.append((n, b))
    H = FpMatrix.from_columns(columns, layout.size, X.context.prime)
    return layout, H, tuple(generators)


@lru_cache(maxsize=2048)
def _homotopy_solver(X: ComplexA, Y: ComplexA) -> LinearSolver:
    return LinearSolver(_homotopy_system(X, Y)[1])


def _matrix_of(layout: _GradedLayout, maps: Iterable[ChainMap], p: int) -> FpMatrix:
    return FpMatrix.from_columns([layout.flatten(f.components) for f in maps], layout.size, p)


def homotopic(f: ChainMap, g: ChainMap) -> HomotopyWitness | None:
    """A homotopy from ``f`` to ``g`` if they are homotopic."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("homotopy test needs parallel chain maps")
    layout, _, generators = _homotopy_system(f.source, f.target)
    x = _homotopy_solver(f.source, f.target).solve_vector(layout.flatten((f - g).components))
    if x is None:
        return None
    comps: dict[int, RepMorphism] = {}
    for c, (n, b) in zip(x, generators):
        if c:
            comps[n] = comps[n] + b.scale(int(c)) if n in comps else b.scale(int(c))
    return HomotopyWitness(comps)


def is_null_homotopic(f: ChainMap) -> bool:
    return homotopic(f, ChainMap.zero(f.source, f.target)) is not None


@dataclass(frozen=True, eq=False)
class DerivedHom:
    """Hom_D(X, Y[n]) as chain maps ``P(X) -> Y[n]`` modulo homotopy."""

    replacement: ProjectiveReplacement
    target: ComplexA
    basis: tuple[ChainMap, ...]
    _layout: _GradedLayout
    _system: FpMatrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def source(self) -> ComplexA:
        return self.replacement.complex

    @cached_property
    def _solver(self) -> LinearSolver:
        return LinearSolver(self._system)

    def coordinates(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the homotopy class of ``f`` in ``basis``."""
        if f.source != self.source or f.target != self.target:
            raise ValueError("chain map is not in this Hom space")
        x = self._solver.solve_vector(self._layout.flatten(f.components))
        if x is None:
            raise ValueError("chain map is not in the span of the basis modulo homotopy")
        return x[self._system.cols - self.dim:]

    def element(self, coeffs: Sequence[int]) -> ChainMap:
        return chain_linear_combination(coeffs, self.basis, self.source, self.target)


@lru_cache(maxsize=2048)
def derived_hom(X: ComplexA, Y: ComplexA, n: int = 0) -> DerivedHom:
    """Hom_{D^b}(X, Y[n]) with a basis of pairwise non-homotopic chain maps."""
    p = X.context.prime
    rep = proj_replacement(X)
    P, T = rep.complex, shift(Y, n)
    maps = chain_map_basis(P, T)
    layout, H, _ = _homotopy_system(P, T)
    Z = _matrix_of(layout, maps, p)
    _, pivots = rref(hstack([H, Z], layout.size, p))
    chosen = tuple(maps[j - H.cols] for j in pivots if j >= H.cols)
    system = hstack([H, _matrix_of(layout, chosen, p)], layout.size, p)
    return DerivedHom(rep, T, chosen, layout, system)


def homotopy_hom_dim(X: ComplexA, Y: ComplexA) -> int:
    """Dimension of chain maps ``X -> Y`` modulo homotopy, with no replacement."""
    p = X.context.prime
    layout, H, _ = _homotopy_system(X, Y)
    Z = _matrix_of(layout, chain_map_basis(X, Y), p)
    return hstack([H, Z], layout.size, p).rank() - H.rank()


def derived_hom_dim(X: ComplexA, Y: ComplexA, n: int = 0) -> int:
    """``derived_hom(X, Y, n).dim`` without building the basis."""
    return homotopy_hom_dim(proj_replacement(X).complex, shift(Y, n))


@dataclass(frozen=True, eq=False)
class _LiftSystem:
    candidates: tuple[ChainMap, ...]
    layout: _GradedLayout
    solver: LinearSolver


@lru_cache(maxsize=2048)
def _lift_system(P: ComplexA, q: ChainMap) -> _LiftSystem:
    """Columns ``q @ c`` over a basis of chain maps ``c: P -> source(q)``, then homotopies."""
    p = P.context.prime
    candidates = chain_map_basis(P, q.source)
    layout, H, _ = _homotopy_system(P, q.target)
    Q = _matrix_of(layout, [q @ c for c in candidates], p)
    return _LiftSystem(candidates, layout, LinearSolver(hstack([Q, H], layout.size, p)))


def lift_chain_map(f: ChainMap, q: ChainMap) -> ChainMap | None:
    """c with ``q @ c`` homotopic to ``f``, or None if no such chain map exists."""
    if f.target != q.target:
        raise ValueError("lift needs a common target")
    system = _lift_system(f.source, q)
    x = system.solver.solve_vector(system.layout.flatten(f.components))
    if x is None:
        return None
    return chain_linear_combination(x[:len(system.candidates)], system.candidates, f.source, q.source)


def lift_through_quasi_iso(f: ChainMap, q: ChainMap) -> ChainMap:
    """Lift ``f: P -> Y`` through a quasi-isomorphism ``q: X -> Y`` up to homotopy.

    Solvable whenever P is a bounded complex of projectives.
    """
    c = lift_chain_map(f, q)
    if c is None:
        raise RuntimeError("no lift through the quasi-isomorphism; is the source a complex of projectives?")
    return c
