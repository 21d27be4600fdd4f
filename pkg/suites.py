"""Randomized property suites run by ``verify`` (and partly by ``check-torsion`` and ``tilt``).

Each suite draws its samples from one seeded generator, so a report is
reproduced exactly by (workspace, seed, trials). Failing samples keep the
first witness for replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from algebra.complexes import cohomology_dims, derived_hom, derived_hom_dim, homotopy_hom_dim, is_acyclic, shift
from algebra.equivalence import (
    check_theta_natural,
    cover_by_T,
    extension_component,
    injective_round,
    realize_heart_complex,
    single_object_comparison,
    t_resolve_complex,
    theta,
)
from algebra.errors import HrsLabError, NotTilting
from algebra.heart import (
    coimage_to_image,
    compose,
    heart_cokernel,
    heart_hom_space,
    heart_kernel,
    heart_object_from_module,
    is_exact_over_heart,
    is_heart_iso,
    is_stalk,
    module_morphism_to_heart,
    shifted_heart_object,
    stalk_module,
    torsion_decomposition,
)
from algebra.quiver_rep import factor_through_mono, factorize, hom_dimension, is_epi, is_mono
from algebra.sampling import (
    random_complex,
    random_heart_morphism,
    random_heart_object,
    random_morphism,
    random_representation,
    random_torsion_complex,
    random_torsion_free_module,
    random_torsion_module,
)
from algebra.torsion import (
    TorsionPair,
    is_degenerate,
    is_tilting,
    is_torsion,
    is_torsion_free,
    require_tilting,
    t_coresolution,
    torsion_quotient,
    torsion_radical,
)
from constants import COMPLEX_MAX_LENGTH, HOM_TARGETS_PER_RESOLUTION, MIN_EXT_SHARE
from logger_config import get_logger
from report import Report, serialize_complex, serialize_morphism
from workspace import Workspace

logger = get_logger(__name__)

SMALL_DIM = 2


@dataclass
class SuiteRun:
    workspace: Workspace
    rng: np.random.Generator
    trials: int
    report: Report
    full_witness: bool = False

    @property
    def pair(self) -> TorsionPair:
        return self.workspace.pair


class _Check:
    """Counts samples of one property and keeps the first failing witness."""

    def __init__(self, name: str):
        self.name = name
        self.samples = 0
        self.failures = 0
        self.witness: Any = None
        self.notes: list[str] = []

    def trial(self, fn: Callable[..., tuple[bool, Any]], *args) -> bool:
        try:
            ok, witness = fn(*args)
        except NotTilting:
            raise
        except (HrsLabError, RuntimeError, ValueError) as e:
            logger.warning(f"{self.name}: {type(e).__name__}: {e}")
            ok, witness = False, {"error": f"{type(e).__name__}: {e}"}
        self.samples += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness
        return ok

    def close(self, report: Report) -> None:
        if self.samples == 0:
            report.add(self.name, None, "; ".join(self.notes) or "no samples")
            return
        detail = "; ".join([f"{self.samples - self.failures}/{self.samples} samples"] + self.notes)
        report.add(self.name, self.failures == 0, detail, self.witness)


def tilting_summary(TP: TorsionPair) -> dict:
    report = is_tilting(TP)
    return {
        "tilting": report.tilting,
        "injectives": {name: kind.value for name, kind in report.injectives},
        "degenerate": is_degenerate(TP),
    }


# ---------------------------------------------------------------------------
# Torsion axioms


def _t1(TP, T, F):
    dim = hom_dimension(T, F)
    return dim == 0, {"torsion": list(T.dims), "torsion_free": list(F.dims), "hom_dim": dim}


def _t2(TP, X):
    t = torsion_radical(TP, X)
    q = torsion_quotient(TP, X)
    dims_add = tuple(a + b for a, b in zip(t.source.dims, q.target.dims)) == X.dims
    ok = is_torsion(TP, t.source) and is_torsion_free(TP, q.target) and dims_add and (q @ t).is_zero()
    return ok, {"module": list(X.dims), "radical": list(t.source.dims), "quotient": list(q.target.dims)}


def _idempotent(TP, X):
    t = torsion_radical(TP, X).source
    return torsion_radical(TP, t).source.dims == t.dims, {"module": list(X.dims)}


def _monotone(TP, X, f):
    inclusion = factorize(f).mono
    composite = inclusion @ torsion_radical(TP, inclusion.source)
    ok = factor_through_mono(torsion_radical(TP, X), composite) is not None
    return ok, {"module": list(X.dims), "submodule": list(inclusion.source.dims)}


def _closures(TP, to_torsion, from_free):
    quotient = factorize(to_torsion).cokernel
    image = factorize(from_free).image
    ok = is_torsion(TP, quotient) and is_torsion_free(TP, image)
    return ok, {"quotient_of_torsion": list(quotient.dims), "submodule_of_torsion_free": list(image.dims)}


def _coresolution(TP, X):
    c = t_coresolution(TP, X)
    E, G = c.mono.target, c.epi.target
    ok = (is_mono(c.mono) and is_epi(c.epi) and (c.epi @ c.mono).is_zero()
          and E.total_dim == X.total_dim + G.total_dim and is_torsion(TP, E) and is_torsion(TP, G))
    return ok, {"module": list(X.dims), "hull": list(E.dims), "cokernel": list(G.dims)}


def run_torsion_suite(run: SuiteRun) -> None:
    TP, rng, ws = run.pair, run.rng, run.workspace
    ctx = TP.context
    reason = is_degenerate(TP)
    if reason:
        logger.warning(f"degenerate torsion pair {TP}: {reason}")
    run.report.facts.update(tilting_summary(TP))

    checks = {name: _Check(name) for name in
              ("torsion: Hom(T, F) = 0", "torsion: radical sequence", "torsion: radical idempotent",
               "torsion: radical monotone", "torsion: closures", "torsion: coresolution")}
    t1, t2, idem, mono, closures, cores = checks.values()
    tilting = bool(is_tilting(TP))
    samples = list(ws.modules.values()) + [random_representation(ctx, rng) for _ in range(run.trials)]
    for X in samples:
        t2.trial(_t2, TP, X)
        idem.trial(_idempotent, TP, X)
        if tilting:
            cores.trial(_coresolution, TP, X)
    if not tilting:
        cores.notes.append("pair is not tilting")
    for _ in range(run.trials):
        T = random_torsion_module(TP, rng)
        F = random_torsion_free_module(TP, rng)
        t1.trial(_t1, TP, T, F)
        X = random_representation(ctx, rng)
        Y = random_representation(ctx, rng)
        mono.trial(_monotone, TP, X, random_morphism(Y, X, rng))
        closures.trial(_closures, TP, random_morphism(Y, T, rng), random_morphism(F, X, rng))
    for check in checks.values():
        check.close(run.report)


# ---------------------------------------------------------------------------
# The heart


def _heart_t1(TP, F, T):
    dim = heart_hom_space(shifted_heart_object(TP, F), heart_object_from_module(TP, T)).dim
    return dim == 0, {"torsion_free": list(F.dims), "torsion": list(T.dims), "hom_dim": dim}


def _heart_t2(TP, B):
    dec = torsion_decomposition(B)
    ok = (dec.verify() and dec.first.h0.is_zero() and is_torsion_free(TP, dec.first.h_minus1)
          and is_stalk(dec.third) and is_torsion(TP, stalk_module(dec.third)))
    return ok, {"object": serialize_complex(B.cx)}


def _abelian(TP, f, full):
    _, k = heart_kernel(f)
    _, c = heart_cokernel(f)
    ok = compose(f, k).is_zero() and compose(c, f).is_zero() and is_heart_iso(coimage_to_image(f))
    return ok, {"source": serialize_complex(f.source.cx, full), "target": serialize_complex(f.target.cx, full)}


def _embedding(TP, T1, T2, F1, F2):
    torsion = heart_hom_space(heart_object_from_module(TP, T1), heart_object_from_module(TP, T2)).dim
    shifted = heart_hom_space(shifted_heart_object(TP, F1), shifted_heart_object(TP, F2)).dim
    ok = torsion == hom_dimension(T1, T2) and shifted == hom_dimension(F1, F2)
    return ok, {"torsion": [list(T1.dims), list(T2.dims), torsion],
                "torsion_free": [list(F1.dims), list(F2.dims), shifted]}


def _rotated_triangle(TP, F):
    cover = cover_by_T(TP, shifted_heart_object(TP, F))
    return cover.verify(), {"torsion_free": list(F.dims)}


def run_heart_suite(run: SuiteRun) -> None:
    TP, rng = run.pair, run.rng
    require_tilting(TP)
    checks = {name: _Check(name) for name in
              ("heart: Hom(F[1], T) = 0", "heart: torsion decomposition", "heart: abelian",
               "heart: full embedding", "heart: rotated triangle")}
    t1, t2, abelian, embedding, rotated = checks.values()
    for B in run.workspace.heart_objects:
        t2.trial(_heart_t2, TP, B)
    for _ in range(run.trials):
        F = random_torsion_free_module(TP, rng)
        T = random_torsion_module(TP, rng)
        t1.trial(_heart_t1, TP, F, T)
        t2.trial(_heart_t2, TP, random_heart_object(TP, rng))
        f = random_heart_morphism(random_heart_object(TP, rng), random_heart_object(TP, rng), rng)
        abelian.trial(_abelian, TP, f, run.full_witness)
        embedding.trial(_embedding, TP, T, random_torsion_module(TP, rng), F, random_torsion_free_module(TP, rng))
        rotated.trial(_rotated_triangle, TP, F)
    for check in checks.values():
        check.close(run.report)


# ---------------------------------------------------------------------------
# Exactness of torsion complexes in both abelian categories


def heart_complex_of(TP: TorsionPair, X):
    """The torsion-term complex X as a list of heart stalks and heart differentials."""
    if X.is_zero():
        return [], []
    degrees = range(X.lo, X.hi + 1)
    objects = {n: heart_object_from_module(TP, X.term(n)) for n in degrees}
    diffs = [module_morphism_to_heart(objects[n], objects[n + 1], X.d(n)) for n in degrees if n < X.hi]
    return [objects[n] for n in degrees], diffs


def _exactness_agrees(TP, X, full):
    objects, diffs = heart_complex_of(TP, X)
    in_modules = is_acyclic(X)
    in_heart = is_exact_over_heart(TP, objects, diffs)
    return in_modules == in_heart, {"complex": serialize_complex(X, full), "exact_in_modules": in_modules,
                                    "exact_in_heart": in_heart}


def run_exactness_suite(run: SuiteRun) -> None:
    TP, rng = run.pair, run.rng
    check = _Check("lemma21: exact in modules iff exact in heart")
    modes = ("exact", "non-exact", "any")
    exact = 0
    for i in range(run.trials):
        length = int(rng.integers(1, COMPLEX_MAX_LENGTH + 1))
        X = random_torsion_complex(TP, rng, length, mode=modes[i % len(modes)])
        exact += is_acyclic(X)
        check.trial(_exactness_agrees, TP, X, run.full_witness)
    check.notes.append(f"{exact} exact samples")
    check.close(run.report)


# ---------------------------------------------------------------------------
# The derived equivalence


def _resolution(TP, X, targets, full):
    res = t_resolve_complex(TP, X)
    witness = {"complex": serialize_complex(X, full), "resolved": serialize_complex(res.resolved, full)}
    for Y, n in targets:
        before, after = derived_hom_dim(X, Y, n), derived_hom_dim(res.resolved, Y, n)
        if before != after:
            witness.update({"target": serialize_complex(Y, full), "shift": n, "dims": [before, after]})
            return False, witness
    witness["targets"] = len(targets)
    return True, witness


def _hom_preservation(TP, T1, T2, n, full):
    derived = derived_hom(T1, T2, n).dim
    homotopy = homotopy_hom_dim(T1, injective_round(shift(T2, n)).resolved)
    return derived == homotopy, {"source": serialize_complex(T1, full), "target": serialize_complex(T2, full),
                                 "shift": n, "dims": [derived, homotopy]}


def _cover(TP, B):
    cover = cover_by_T(TP, B)
    return True, {"object": serialize_complex(B.cx), "differential": serialize_morphism(cover.differential)}


def _compatibility(TP, B, deviations: list[int]):
    realization = realize_heart_complex(TP, [B], [], verify=True)
    u = single_object_comparison(TP, realization)
    same_cohomology = cohomology_dims(realization.complex) == cohomology_dims(B.cx)
    witness = theta(TP, B)
    if witness.uniqueness_dim != 1:
        deviations.append(witness.uniqueness_dim)
    ok = bool(realization.verified) and u is not None and is_heart_iso(u) and same_cohomology
    return ok, {"object": serialize_complex(B.cx), "realized": serialize_complex(realization.complex)}


def _naturality(TP, f, ext_samples: list[bool]):
    ext_samples.append(not extension_component(TP, f).is_zero())
    return check_theta_natural(TP, f), {"source": serialize_complex(f.source.cx),
                                        "target": serialize_complex(f.target.cx)}


def _exactness(TP, B, use_cover):
    ses = cover_by_T(TP, B) if use_cover else torsion_decomposition(B)
    realization = realize_heart_complex(TP, [ses.first, ses.second, ses.third], [ses.mono, ses.epi], verify=True)
    ok = bool(realization.verified) and is_acyclic(realization.complex)
    return ok, {"realized": serialize_complex(realization.complex)}


def run_equivalence_suite(run: SuiteRun) -> None:
    TP, rng = run.pair, run.rng
    ctx = TP.context
    require_tilting(TP)
    checks = {name: _Check(name) for name in
              ("theorem: resolution", "theorem: Hom preservation", "theorem: covers",
               "theorem: compatibility", "theorem: naturality", "theorem: exactness preservation")}
    resolution, preservation, covers, compatibility, naturality, exactness = checks.values()
    deviations: list[int] = []
    ext_samples: list[bool] = []

    for B in run.workspace.heart_objects:
        covers.trial(_cover, TP, B)
        compatibility.trial(_compatibility, TP, B, deviations)
    for i in range(run.trials):
        X = random_complex(ctx, rng, int(rng.integers(1, 4)), SMALL_DIM)
        targets = [(random_complex(ctx, rng, int(rng.integers(1, 3)), SMALL_DIM), int(rng.integers(-1, 3)))
                   for _ in range(HOM_TARGETS_PER_RESOLUTION)]
        resolution.trial(_resolution, TP, X, targets, run.full_witness)

        T1 = random_torsion_complex(TP, rng, int(rng.integers(1, 3)), SMALL_DIM)
        T2 = random_torsion_complex(TP, rng, int(rng.integers(1, 3)), SMALL_DIM)
        preservation.trial(_hom_preservation, TP, T1, T2, int(rng.integers(-1, 2)), run.full_witness)

        B = random_heart_object(TP, rng)
        covers.trial(_cover, TP, B)
        compatibility.trial(_compatibility, TP, B, deviations)

        if i % 2 == 0:
            # torsion -> shifted torsion-free: morphisms are pure extension classes
            B1 = random_heart_object(TP, rng, kind="torsion")
            B2 = random_heart_object(TP, rng, kind="shifted")
        else:
            B1, B2 = random_heart_object(TP, rng), random_heart_object(TP, rng)
        naturality.trial(_naturality, TP, random_heart_morphism(B1, B2, rng), ext_samples)

        exactness.trial(_exactness, TP, B, i % 2 == 1)

    if deviations:
        logger.warning(f"theta uniqueness dimension differed from 1 in {len(deviations)} samples")
        compatibility.notes.append(f"uniqueness deviations: {deviations}")
    run.report.facts["theta_uniqueness_deviations"] = len(deviations)
    with_ext = sum(ext_samples)
    run.report.facts["naturality_ext_samples"] = with_ext
    naturality.notes.append(f"{with_ext} with an Ext¹ component")
    if with_ext < run.trials // MIN_EXT_SHARE:
        naturality.samples += 1
        naturality.failures += 1
        naturality.witness = naturality.witness or {"ext_samples": with_ext, "required": run.trials // MIN_EXT_SHARE}
    for check in checks.values():
        check.close(run.report)


SUITE_RUNNERS: dict[str, Callable[[SuiteRun], None]] = {
    "torsion": run_torsion_suite,
    "heart": run_heart_suite,
    "lemma21": run_exactness_suite,
    "theorem": run_equivalence_suite,
}


def run_suites(names: list[str], run: SuiteRun) -> None:
    """Run suites in the given order; NotTilting propagates to the command."""
    for name in names:
        logger.info(f"Running suite: {name} ({run.trials} trials)")
        SUITE_RUNNERS[name](run)
