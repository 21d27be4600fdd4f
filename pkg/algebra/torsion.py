"""Torsion pairs generated by a module and the tilting test.

The torsion class of a pair is the closure of the quotients of sums of the
generator under extensions; the radical ``t(X)`` is computed as an iterated
trace and stabilizes after at most ``dim X`` rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from algebra.errors import ContextMismatch, NotTilting
from algebra.quiver_rep import (
    AlgebraContext,
    RepMorphism,
    Representation,
    cokernel,
    direct_sum,
    factorize,
    hom_basis,
    inj_hull,
    kernel,
    map_from_sum,
    standard_module,
)
from logger_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TorsionPair:
    context: AlgebraContext
    generator: Representation
    label: str = ""

    def __post_init__(self):
        if self.generator.context != self.context:
            raise ContextMismatch("generator belongs to another context")

    @classmethod
    def everything(cls, context: AlgebraContext) -> TorsionPair:
        """(all, 0): every module is torsion."""
        gens = [standard_module(context, "P", v) for v in range(context.vertex_count)]
        return cls(context, direct_sum(gens, context).sum, "all")

    @classmethod
    def nothing(cls, context: AlgebraContext) -> TorsionPair:
        """(0, all): only the zero module is torsion."""
        return cls(context, context.zero(), "0")

    def __str__(self) -> str:
        return self.label or f"Gen({self.generator})"


def _check(TP: TorsionPair, X: Representation) -> None:
    if X.context != TP.context:
        raise ContextMismatch("module and torsion pair belong to different contexts")


def trace(TP: TorsionPair, X: Representation) -> RepMorphism:
    """Inclusion of the sum of the images of all maps ``G -> X``."""
    _check(TP, X)
    maps = hom_basis(TP.generator, X)
    if not maps:
        return RepMorphism.zero(TP.context.zero(), X)
    ds = direct_sum([TP.generator] * len(maps), TP.context)
    return factorize(map_from_sum(ds, maps)).mono


@lru_cache(maxsize=4096)
def _radical(TP: TorsionPair, X: Representation) -> RepMorphism:
    to_quotient = RepMorphism.identity(X)
    for round_ in range(X.total_dim + 1):
        t = trace(TP, to_quotient.target)
        if t.source.is_zero():
            sub = RepMorphism.zero(TP.context.zero(), X) if round_ == 0 else kernel(to_quotient)[1]
            logger.debug(f"radical of {X} stable after {round_} rounds: dims {sub.source.dims}")
            return sub
        to_quotient = cokernel(t)[1] @ to_quotient
    raise RuntimeError(f"iterated trace did not stabilize on {X}")


def torsion_radical(TP: TorsionPair, X: Representation) -> RepMorphism:
    """Inclusion ``t(X) -> X`` of the largest torsion submodule."""
    _check(TP, X)
    return _radical(TP, X)


def torsion_quotient(TP: TorsionPair, X: Representation) -> RepMorphism:
    """Projection ``X -> X / t(X)``."""
    return cokernel(torsion_radical(TP, X))[1]


class TorsionKind(Enum):
    TORSION = "torsion"
    TORSION_FREE = "torsion-free"
    MIXED = "mixed"


@dataclass(frozen=True)
class TorsionClassification:
    kind: TorsionKind
    radical: RepMorphism

    @property
    def is_torsion(self) -> bool:
        return self.radical.source.dims == self.radical.target.dims

    @property
    def is_torsion_free(self) -> bool:
        return self.radical.source.is_zero()


def classify(TP: TorsionPair, X: Representation) -> TorsionClassification:
    """Torsion iff t(X) = X, torsion-free iff t(X) = 0; zero counts as torsion."""
    t = torsion_radical(TP, X)
    if t.source.dims == X.dims:
        kind = TorsionKind.TORSION
    elif t.source.is_zero():
        kind = TorsionKind.TORSION_FREE
    else:
        kind = TorsionKind.MIXED
    return TorsionClassification(kind, t)


def is_torsion(TP: TorsionPair, X: Representation) -> bool:
    return classify(TP, X).is_torsion


def is_torsion_free(TP: TorsionPair, X: Representation) -> bool:
    return classify(TP, X).is_torsion_free


@dataclass(frozen=True)
class TiltingReport:
    """Classification of every indecomposable injective ``I(v)``."""

    pair: TorsionPair
    injectives: tuple[tuple[str, TorsionKind], ...]

    @property
    def tilting(self) -> bool:
        return all(kind is TorsionKind.TORSION for _, kind in self.injectives)

    @property
    def failing(self) -> list[str]:
        return [name for name, kind in self.injectives if kind is not TorsionKind.TORSION]

    def __bool__(self) -> bool:
        return self.tilting


@lru_cache(maxsize=256)
def is_tilting(TP: TorsionPair) -> TiltingReport:
    """Every module embeds in a torsion module iff every I(v) is torsion.

    If all I(v) are torsion, X embeds into its injective hull, a sum of them.
    Conversely an injective that embeds in a torsion module is a summand of it,
    and torsion classes are closed under summands.
    """
    rows = []
    for v in range(TP.context.vertex_count):
        I = standard_module(TP.context, "I", v)
        rows.append((I.name, classify(TP, I).kind))
    report = TiltingReport(TP, tuple(rows))
    logger.debug(f"tilting test for {TP}: {report.tilting} ({rows})")
    return report


def require_tilting(TP: TorsionPair) -> None:
    report = is_tilting(TP)
    if not report:
        raise NotTilting(str(TP), report.failing)


def is_degenerate(TP: TorsionPair) -> str | None:
    """Name the empty class of a degenerate pair, or None."""
    if TP.generator.is_zero():
        return "torsion class is zero"
    if all(is_torsion(TP, standard_module(TP.context, "P", v)) for v in range(TP.context.vertex_count)):
        return "torsion-free class is zero"
    return None


@dataclass(frozen=True)
class Coresolution:
    """0 -> X --mono--> T0 --epi--> T1 -> 0 with T0, T1 torsion."""

    mono: RepMorphism
    epi: RepMorphism


@lru_cache(maxsize=2048)
def t_coresolution(TP: TorsionPair, X: Representation) -> Coresolution:
    """Coresolution through the injective hull; T1 is a quotient of T0, hence torsion."""
    _check(TP, X)
    require_tilting(TP)
    mono = inj_hull(X)
    _, epi = cokernel(mono)
    return Coresolution(mono, epi)
