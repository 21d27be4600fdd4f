"""Finite-dimensional representations of an acyclic quiver over F_p.

Vertices are numbered from 0 internally; standard modules are labelled from 1
(``P1`` is the projective at vertex 0). Arrow matrices act on column vectors,
so an arrow ``a: i -> j`` carries a ``dims[j] x dims[i]`` matrix.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from algebra.errors import ContextMismatch
from algebra.exact_linalg import (
    FpMatrix,
    block_diag,
    check_prime,
    complement_basis,
    image_basis,
    kron,
    nullspace_basis,
    quotient_projection,
    hstack,
    solve,
    vstack,
)
from constants import DEFAULT_PRIME, ISO_SEARCH_ATTEMPTS
from logger_config import get_logger

logger = get_logger(__name__)

Path = tuple[int, ...]


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    name: str


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if self.vertex_count <= 0:
            raise ValueError("a quiver needs at least one vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError(f"arrow names must be unique, got {names}")
        for a in self.arrows:
            if not (0 <= a.source < self.vertex_count and 0 <= a.target < self.vertex_count):
                raise ValueError(f"arrow {a.name} has an endpoint outside 0..{self.vertex_count - 1}")
        sorter = graphlib.TopologicalSorter({v: set() for v in range(self.vertex_count)})
        for a in self.arrows:
            sorter.add(a.target, a.source)
        try:
            tuple(sorter.static_order())
        except graphlib.CycleError as e:
            raise ValueError(f"quiver has an oriented cycle through {e.args[1]}") from e

    @classmethod
    def linear(cls, n: int) -> Quiver:
        """Equioriented A_n: 1 -> 2 -> ... -> n."""
        return cls(n, tuple(Arrow(i, i + 1, f"a{i + 1}") for i in range(n - 1)))

    def incoming(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.target == v]

    def outgoing(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.source == v]

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(name)

    def paths(self, u: int, v: int) -> tuple[Path, ...]:
        """Paths from ``u`` to ``v`` as tuples of arrow indices in traversal order."""
        return _paths(self, u, v)


@lru_cache(maxsize=None)
def _paths(quiver: Quiver, u: int, v: int) -> tuple[Path, ...]:
    found: list[Path] = []
    stack: list[tuple[int, Path]] = [(u, ())]
    while stack:
        at, path = stack.pop()
        if at == v:
            found.append(path)
        for i in quiver.outgoing(at):
            stack.append((quiver.arrows[i].target, path + (i,)))
    return tuple(sorted(found, key=lambda p: (len(p), p)))


@dataclass(frozen=True)
class AlgebraContext:
    quiver: Quiver
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        check_prime(self.prime)

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    def zero(self) -> Representation:
        return Representation.from_dims(self, (0,) * self.vertex_count)


@dataclass(frozen=True)
class Representation:
    context: AlgebraContext
    dims: tuple[int, ...]
    matrices: tuple[FpMatrix, ...]
    name: str = field(default="", compare=False, hash=False)

    def __post_init__(self):
        q = self.context.quiver
        if len(self.dims) != q.vertex_count:
            raise ValueError(f"expected {q.vertex_count} dimensions, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise ValueError(f"negative dimension in {self.dims}")
        if len(self.matrices) != len(q.arrows):
            raise ValueError(f"expected {len(q.arrows)} arrow matrices, got {len(self.matrices)}")
        for a, m in zip(q.arrows, self.matrices):
            if m.p != self.context.prime:
                raise ContextMismatch(f"arrow {a.name} matrix is over F_{m.p}, context is F_{self.context.prime}")
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise ValueError(
                    f"arrow {a.name} matrix has shape {m.shape}, expected {(self.dims[a.target], self.dims[a.source])}"
                )

    @classmethod
    def from_dims(cls, context: AlgebraContext, dims: Sequence[int], name: str = "") -> Representation:
        """Representation with the given dimension vector and all arrows zero."""
        dims = tuple(int(d) for d in dims)
        mats = tuple(FpMatrix.zeros(dims[a.target], dims[a.source], context.prime) for a in context.quiver.arrows)
        return cls(context, dims, mats, name)

    @property
    def p(self) -> int:
        return self.context.prime

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Path, start: int) -> FpMatrix:
        out = FpMatrix.identity(self.dims[start], self.p)
        for i in path:
            out = self.matrices[i] @ out
        return out

    def renamed(self, name: str) -> Representation:
        return Representation(self.context, self.dims, self.matrices, name)

    def __str__(self) -> str:
        return self.name or f"M{list(self.dims)}"


def _same_context(*reps: Representation) -> None:
    ctx = reps[0].context
    for r in reps[1:]:
        if r.context != ctx:
            raise ContextMismatch("representations belong to different algebra contexts")


@dataclass(frozen=True)
class RepMorphism:
    """Intertwining family of vertex maps ``f_v: M_v -> N_v``."""

    source: Representation
    target: Representation
    components: tuple[FpMatrix, ...]

    def __post_init__(self):
        _same_context(self.source, self.target)
        M, N = self.source, self.target
        if len(self.components) != len(M.dims):
            raise ValueError(f"expected {len(M.dims)} components, got {len(self.components)}")
        for v, f in enumerate(self.components):
            if f.shape != (N.dims[v], M.dims[v]):
                raise ValueError(f"component at vertex {v} has shape {f.shape}, expected {(N.dims[v], M.dims[v])}")
        for i, a in enumerate(M.context.quiver.arrows):
            if self.components[a.target] @ M.matrices[i] != N.matrices[i] @ self.components[a.source]:
                raise ValueError(f"components do not intertwine along arrow {a.name}")

    @classmethod
    def identity(cls, M: Representation) -> RepMorphism:
        return cls(M, M, tuple(FpMatrix.identity(d, M.p) for d in M.dims))

    @classmethod
    def zero(cls, M: Representation, N: Representation) -> RepMorphism:
        return cls(M, N, tuple(FpMatrix.zeros(n, m, M.p) for m, n in zip(M.dims, N.dims)))

    def __matmul__(self, other: RepMorphism) -> RepMorphism:
        if other.target != self.source:
            raise ValueError("cannot compose: target of the right factor is not the source of the left")
        return RepMorphism(other.source, self.target, tuple(g @ f for g, f in zip(self.components, other.components)))

    def _check_parallel(self, other: RepMorphism) -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms are not parallel")

    def __add__(self, other: RepMorphism) -> RepMorphism:
        self._check_parallel(other)
        return RepMorphism(self.source, self.target, tuple(f + g for f, g in zip(self.components, other.components)))

    def __sub__(self, other: RepMorphism) -> RepMorphism:
        self._check_parallel(other)
        return RepMorphism(self.source, self.target, tuple(f - g for f, g in zip(self.components, other.components)))

    def __neg__(self) -> RepMorphism:
        return RepMorphism(self.source, self.target, tuple(-f for f in self.components))

    def scale(self, c: int) -> RepMorphism:
        return RepMorphism(self.source, self.target, tuple(f.scale(c) for f in self.components))

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and all(f.is_invertible() for f in self.components)

    def inverse(self) -> RepMorphism:
        return RepMorphism(self.target, self.source, tuple(f.inverse() for f in self.components))

    def flatten(self) -> np.ndarray:
        """Row-major concatenation of the vertex components."""
        if not self.components:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([f.data.reshape(-1) for f in self.components])


def linear_combination(coeffs: Sequence[int], maps: Sequence[RepMorphism], source: Representation,
                       target: Representation) -> RepMorphism:
    out = RepMorphism.zero(source, target)
    for c, f in zip(coeffs, maps):
        if int(c) % source.p:
            out = out + f.scale(int(c))
    return out


@lru_cache(maxsize=4096)
def _hom_basis(M: Representation, N: Representation) -> tuple[RepMorphism, ...]:
    p = M.p
    q = M.context.quiver
    sizes = [N.dims[v] * M.dims[v] for v in range(q.vertex_count)]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    unknowns = int(offsets[-1])
    if unknowns == 0:
        return ()
    blocks = []
    for i, a in enumerate(q.arrows):
        s, t = a.source, a.target
        rows = N.dims[t] * M.dims[s]
        if rows == 0:
            continue
        # f_t M_a - N_a f_s = 0, vectorized row-major
        eq = np.zeros((rows, unknowns), dtype=np.int64)
        left = kron(FpMatrix.identity(N.dims[t], p), M.matrices[i].T)
        right = kron(N.matrices[i], FpMatrix.identity(M.dims[s], p))
        eq[:, offsets[t]:offsets[t + 1]] += left.data
        eq[:, offsets[s]:offsets[s + 1]] -= right.data
        blocks.append(FpMatrix(eq, p))
    system = vstack(blocks, unknowns, p)
    kernel = nullspace_basis(system)
    out = []
    for k in range(kernel.cols):
        x = kernel.data[:, k]
        comps = tuple(
            FpMatrix(x[offsets[v]:offsets[v + 1]].reshape(N.dims[v], M.dims[v]), p, shape=(N.dims[v], M.dims[v]))
            for v in range(q.vertex_count)
        )
        out.append(RepMorphism(M, N, comps))
    return tuple(out)


def hom_basis(M: Representation, N: Representation) -> list[RepMorphism]:
    """Canonical F_p-basis of Hom(M, N) from the nullspace of the intertwining system."""
    _same_context(M, N)
    return list(_hom_basis(M, N))


def hom_dimension(M: Representation, N: Representation) -> int:
    _same_context(M, N)
    return len(_hom_basis(M, N))


# ---------------------------------------------------------------------------
# Sub- and quotient representations


def subrepresentation(M: Representation, bases: Sequence[FpMatrix]) -> tuple[Representation, RepMorphism]:
    """Subrepresentation spanned by independent columns ``bases[v]`` of each ``M_v``."""
    mats = []
    for i, a in enumerate(M.context.quiver.arrows):
        coords = solve(bases[a.target], M.matrices[i] @ bases[a.source])
        if coords is None:
            raise ValueError(f"subspace is not closed under arrow {a.name}")
        mats.append(coords)
    sub = Representation(M.context, tuple(b.cols for b in bases), tuple(mats))
    return sub, RepMorphism(sub, M, tuple(bases))


def quotient_representation(M: Representation, bases: Sequence[FpMatrix]) -> tuple[Representation, RepMorphism]:
    """Quotient of ``M`` by the subrepresentation spanned by ``bases``, with its projection."""
    projections, sections = [], []
    for v, b in enumerate(bases):
        pi, sec = quotient_projection(b, M.dims[v])
        projections.append(pi)
        sections.append(sec)
    mats = tuple(projections[a.target] @ M.matrices[i] @ sections[a.source]
                 for i, a in enumerate(M.context.quiver.arrows))
    quotient = Representation(M.context, tuple(pi.rows for pi in projections), mats)
    return quotient, RepMorphism(M, quotient, tuple(projections))


@dataclass(frozen=True)
class Factorization:
    kernel: Representation
    inclusion: RepMorphism
    image: Representation
    epi: RepMorphism
    mono: RepMorphism
    cokernel: Representation
    projection: RepMorphism


@lru_cache(maxsize=4096)
def factorize(f: RepMorphism) -> Factorization:
    """Kernel, image and cokernel of ``f`` with their canonical structure maps."""
    kernel, inclusion = subrepresentation(f.source, [nullspace_basis(c) for c in f.components])
    image_bases = [image_basis(c) for c in f.components]
    image, mono = subrepresentation(f.target, image_bases)
    epi = RepMorphism(f.source, image, tuple(solve(b, c) for b, c in zip(image_bases, f.components)))
    cokernel, projection = quotient_representation(f.target, image_bases)
    return Factorization(kernel, inclusion, image, epi, mono, cokernel, projection)


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    fac = factorize(f)
    return fac.kernel, fac.inclusion


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    fac = factorize(f)
    return fac.cokernel, fac.projection


def is_mono(f: RepMorphism) -> bool:
    return all(c.rank() == c.cols for c in f.components)


def is_epi(f: RepMorphism) -> bool:
    return all(c.rank() == c.rows for c in f.components)


def factor_through_mono(i: RepMorphism, h: RepMorphism) -> RepMorphism | None:
    """g with ``i @ g == h`` for a mono ``i``, or None if the image of h escapes i."""
    comps = []
    for iv, hv in zip(i.components, h.components):
        g = solve(iv, hv)
        if g is None:
            return None
        comps.append(g)
    return RepMorphism(h.source, i.source, tuple(comps))


def factor_through_epi(e: RepMorphism, h: RepMorphism) -> RepMorphism | None:
    """g with ``g @ e == h`` for an epi ``e``, or None if h does not vanish on ker e."""
    comps = []
    for ev, hv in zip(e.components, h.components):
        gt = solve(ev.T, hv.T)
        if gt is None:
            return None
        comps.append(gt.T)
    return RepMorphism(e.target, h.target, tuple(comps))


# ---------------------------------------------------------------------------
# Direct sums


@dataclass(frozen=True)
class DirectSum:
    sum: Representation
    injections: tuple[RepMorphism, ...]
    projections: tuple[RepMorphism, ...]


def direct_sum(modules: Sequence[Representation], context: AlgebraContext | None = None) -> DirectSum:
    """Direct sum with summands in the given order."""
    if not modules:
        if context is None:
            raise ValueError("empty direct sum needs a context")
        zero = context.zero()
        return DirectSum(zero, (), ())
    _same_context(*modules)
    ctx = modules[0].context
    p = ctx.prime
    dims = tuple(sum(m.dims[v] for m in modules) for v in range(ctx.vertex_count))
    mats = tuple(block_diag([m.matrices[i] for m in modules], p) for i in range(len(ctx.quiver.arrows)))
    total = Representation(ctx, dims, mats, "+".join(str(m) for m in modules))
    injections, projections = [], []
    offsets = [0] * ctx.vertex_count
    for m in modules:
        inj, proj = [], []
        for v in range(ctx.vertex_count):
            block = np.zeros((dims[v], m.dims[v]), dtype=np.int64)
            block[offsets[v]:offsets[v] + m.dims[v], :] = np.eye(m.dims[v], dtype=np.int64)
            inj.append(FpMatrix(block, p, shape=block.shape))
            proj.append(FpMatrix(block.T, p, shape=block.T.shape))
            offsets[v] += m.dims[v]
        injections.append(RepMorphism(m, total, tuple(inj)))
        projections.append(RepMorphism(total, m, tuple(proj)))
    return DirectSum(total, tuple(injections), tuple(projections))


def map_into_sum(ds: DirectSum, maps: Sequence[RepMorphism]) -> RepMorphism:
    """The map ``X -> sum`` with components ``maps``."""
    out = RepMorphism.zero(maps[0].source, ds.sum) if maps else None
    for inj, f in zip(ds.injections, maps):
        out = out + inj @ f
    return out


def map_from_sum(ds: DirectSum, maps: Sequence[RepMorphism]) -> RepMorphism:
    """The map ``sum -> Y`` with components ``maps``."""
    out = RepMorphism.zero(ds.sum, maps[0].target) if maps else None
    for proj, f in zip(ds.projections, maps):
        out = out + f @ proj
    return out


# ---------------------------------------------------------------------------
# Standard modules


def standard_module(context: AlgebraContext, kind: str, vertex: int) -> Representation:
    """P(v), I(v) or S(v) on the path basis."""
    q = context.quiver
    p = context.prime
    if not 0 <= vertex < q.vertex_count:
        raise ValueError(f"vertex {vertex} out of range")
    kind = kind.upper()
    if kind == "S":
        dims = tuple(int(w == vertex) for w in range(q.vertex_count))
        return Representation.from_dims(context, dims, f"S{vertex + 1}")
    if kind == "P":
        basis = [q.paths(vertex, w) for w in range(q.vertex_count)]
    elif kind == "I":
        basis = [q.paths(w, vertex) for w in range(q.vertex_count)]
    else:
        raise ValueError(f"unknown standard module kind {kind!r}")
    dims = tuple(len(b) for b in basis)
    mats = []
    for i, a in enumerate(q.arrows):
        m = np.zeros((dims[a.target], dims[a.source]), dtype=np.int64)
        for col, path in enumerate(basis[a.source]):
            if kind == "P":
                # path p from v to s goes to p + a
                m[basis[a.target].index(path + (i,)), col] = 1
            elif path and path[0] == i:
                # dual basis: (a q)* goes to q*
                m[basis[a.target].index(path[1:]), col] = 1
        mats.append(FpMatrix(m, p, shape=m.shape))
    return Representation(context, dims, tuple(mats), f"{kind}{vertex + 1}")


def _map_from_projective(M: Representation, vertex: int, element: np.ndarray) -> list[FpMatrix]:
    """Vertex components of the map P(vertex) -> M sending e_vertex to ``element``."""
    q = M.context.quiver
    comps = []
    for w in range(q.vertex_count):
        cols = [(M.path_matrix(path, vertex).data @ element) for path in q.paths(vertex, w)]
        comps.append(FpMatrix.from_columns(cols, M.dims[w], M.p))
    return comps


def radical_basis(M: Representation, v: int) -> FpMatrix:
    """Basis of the sum of images of the arrows ending at ``v``."""
    images = [M.matrices[i] for i in M.context.quiver.incoming(v)]
    return image_basis(hstack(images, M.dims[v], M.p))


def socle_basis(M: Representation, v: int) -> FpMatrix:
    """Basis of the common kernel of the arrows leaving ``v``."""
    outs = [M.matrices[i] for i in M.context.quiver.outgoing(v)]
    return nullspace_basis(vstack(outs, M.dims[v], M.p))


def projective_cover(M: Representation) -> RepMorphism:
    """Projective cover ``⊕ P(v)^{top_v} -> M`` built from canonical lifts of the top."""
    ctx = M.context
    summands, generators = [], []
    for v in range(ctx.vertex_count):
        top = complement_basis(radical_basis(M, v), M.dims[v])
        for k in range(top.cols):
            summands.append(standard_module(ctx, "P", v))
            generators.append((v, top.data[:, k]))
    ds = direct_sum(summands, ctx)
    images = [_map_from_projective(M, v, g) for v, g in generators]
    comps = [hstack([img[w] for img in images], M.dims[w], M.p) for w in range(ctx.vertex_count)]
    cover = RepMorphism(ds.sum, M, tuple(comps))
    logger.debug(f"projective cover of {M}: {len(summands)} summands")
    return cover


def is_projective(M: Representation) -> bool:
    return projective_cover(M).source.dims == M.dims


@dataclass(frozen=True)
class Presentation:
    """0 -> Q -> P -> M -> 0 with P a projective cover and Q projective."""

    syzygy: Representation
    mono: RepMorphism
    cover: Representation
    epi: RepMorphism


def proj_presentation(M: Representation) -> Presentation:
    epi = projective_cover(M)
    K, incl = kernel(epi)
    # the kernel of a projective cover is projective over a path algebra
    q = projective_cover(K)
    if not q.is_iso():
        raise RuntimeError(f"syzygy of {M} is not projective; the algebra is not hereditary")
    return Presentation(q.source, incl @ q, epi.source, epi)


def inj_hull(M: Representation) -> RepMorphism:
    """Injective hull ``M -> ⊕ I(v)^{soc_v}`` through the canonical socle functionals."""
    ctx = M.context
    q = ctx.quiver
    summands, functionals = [], []
    for v in range(ctx.vertex_count):
        soc = socle_basis(M, v)
        if soc.cols == 0:
            continue
        rest = complement_basis(soc, M.dims[v])
        dual = hstack([soc, rest], M.dims[v], M.p).inverse()
        for k in range(soc.cols):
            summands.append(standard_module(ctx, "I", v))
            functionals.append((v, dual.data[k]))
    ds = direct_sum(summands, ctx)
    comps = []
    for w in range(ctx.vertex_count):
        rows = []
        for v, phi in functionals:
            for path in q.paths(w, v):
                rows.append(phi @ M.path_matrix(path, w).data)
        data = np.array(rows, dtype=np.int64).reshape(len(rows), M.dims[w])
        comps.append(FpMatrix(data, M.p, shape=(len(rows), M.dims[w])))
    hull = RepMorphism(M, ds.sum, tuple(comps))
    logger.debug(f"injective hull of {M}: {len(summands)} summands")
    return hull


def is_injective(M: Representation) -> bool:
    return inj_hull(M).target.dims == M.dims


def is_isomorphic(M: Representation, N: Representation, seed: int = 0) -> RepMorphism | None:
    """An invertible morphism ``M -> N`` if one is found, else None.

    Tries the basis of Hom(M, N) first, then seeded random combinations. A
    returned witness is always exact; a None after the search budget on equal
    dimension vectors is reported at DEBUG level.
    """
    _same_context(M, N)
    if M.dims != N.dims:
        return None
    if M.is_zero():
        return RepMorphism.zero(M, N)
    basis = hom_basis(M, N)
    for f in basis:
        if f.is_iso():
            return f
    if not basis:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(ISO_SEARCH_ATTEMPTS):
        coeffs = rng.integers(0, M.p, size=len(basis))
        f = linear_combination(coeffs, basis, M, N)
        if f.is_iso():
            return f
    logger.debug(f"no isomorphism found between {M} and {N} after {ISO_SEARCH_ATTEMPTS} attempts")
    return None


# ---------------------------------------------------------------------------
# Pushouts and pullbacks


@dataclass(frozen=True)
class Pushout:
    """Pushout of ``u: A -> B`` and ``d: A -> C`` with the quotient map from ``B ⊕ C``."""

    object: Representation
    from_first: RepMorphism
    from_second: RepMorphism
    sum: DirectSum
    projection: RepMorphism


def pushout(u: RepMorphism, d: RepMorphism) -> Pushout:
    """Cokernel of ``(u, -d): A -> B ⊕ C``."""
    if u.source != d.source:
        raise ValueError("pushout legs must share a source")
    ds = direct_sum([u.target, d.target])
    obj, proj = cokernel(map_into_sum(ds, [u, -d]))
    return Pushout(obj, proj @ ds.injections[0], proj @ ds.injections[1], ds, proj)


@dataclass(frozen=True)
class Pullback:
    object: Representation
    to_first: RepMorphism
    to_second: RepMorphism


def pullback(a: RepMorphism, b: RepMorphism) -> Pullback:
    """Kernel of ``(a, -b): B ⊕ C -> D``."""
    if a.target != b.target:
        raise ValueError("pullback legs must share a target")
    ds = direct_sum([a.source, b.source])
    obj, incl = kernel(map_from_sum(ds, [a, -b]))
    return Pullback(obj, ds.projections[0] @ incl, ds.projections[1] @ incl)
