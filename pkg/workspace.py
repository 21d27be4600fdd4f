"""Workspace files: a quiver, named modules, a torsion generator and optional complexes.

Vertices are 1-based in the file and 0-based in memory. Module expressions
are sums of ``P<v>``, ``I<v>``, ``S<v>`` and earlier named modules, or ``0``.
Syntax errors carry the JSON line and column, semantic errors a key path such
as ``modules.M.arrows.a``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from algebra.complexes import ComplexA
from algebra.errors import HrsLabError, NotInHeart, WorkspaceError
from algebra.exact_linalg import FpMatrix, check_prime
from algebra.heart import HeartObject, heart_object_from_module, shifted_heart_object
from algebra.quiver_rep import AlgebraContext, Arrow, Quiver, RepMorphism, Representation, direct_sum, standard_module
from algebra.torsion import TorsionPair
from constants import DEFAULT_PRIME
from logger_config import get_logger

logger = get_logger(__name__)

STANDARD_TERM = re.compile(r"^([PIS])(\d+)$")
SHIFT_SUFFIX = "[1]"


@dataclass(eq=False)
class Workspace:
    name: str
    context: AlgebraContext
    pair: TorsionPair
    modules: dict[str, Representation] = field(default_factory=dict)
    complexes: dict[str, ComplexA] = field(default_factory=dict)
    heart_objects: list[HeartObject] = field(default_factory=list)
    label: str = ""

    @property
    def prime(self) -> int:
        return self.context.prime


def _require(raw: dict, key: str, kind: type, where: str) -> Any:
    if key not in raw:
        raise WorkspaceError(f"missing key '{key}'", where or "<root>")
    value = raw[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise WorkspaceError(f"expected {kind.__name__}, got {type(value).__name__}", _join(where, key))
    return value


def _join(where: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{where}[{key}]"
    return f"{where}.{key}" if where else key


def _parse_quiver(raw: Any) -> Quiver:
    if not isinstance(raw, dict):
        raise WorkspaceError("expected an object", "quiver")
    n = _require(raw, "vertices", int, "quiver")
    arrows = []
    for i, a in enumerate(raw.get("arrows", [])):
        where = _join("quiver.arrows", i)
        if not isinstance(a, dict):
            raise WorkspaceError("expected an object", where)
        name = _require(a, "name", str, where)
        source = _require(a, "source", int, where)
        target = _require(a, "target", int, where)
        for key, v in (("source", source), ("target", target)):
            if not 1 <= v <= n:
                raise WorkspaceError(f"vertex {v} outside 1..{n}", _join(where, key))
        arrows.append(Arrow(source - 1, target - 1, name))
    try:
        return Quiver(n, tuple(arrows))
    except ValueError as e:
        raise WorkspaceError(str(e), "quiver") from e


def _parse_matrix(raw: Any, rows: int, cols: int, p: int, where: str) -> FpMatrix:
    if raw is None or (raw == [] and rows * cols == 0):
        if rows * cols:
            raise WorkspaceError(f"missing {rows}x{cols} matrix", where)
        return FpMatrix.zeros(rows, cols, p)
    try:
        arr = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise WorkspaceError(f"matrix entries must be integers ({e})", where) from e
    if rows == 0 or cols == 0:
        arr = arr.reshape(rows, cols) if arr.size == 0 else arr
    if arr.ndim != 2 or arr.shape != (rows, cols):
        raise WorkspaceError(f"matrix has shape {arr.shape}, expected {(rows, cols)}", where)
    return FpMatrix(arr, p, shape=(rows, cols))


def parse_expression(context: AlgebraContext, text: str, modules: dict[str, Representation],
                     where: str = "") -> Representation:
    """``0``, or ``+``-separated terms ``P<v>``/``I<v>``/``S<v>``/module names."""
    if not isinstance(text, str) or not text.strip():
        raise WorkspaceError("expected a module expression", where)
    text = text.strip()
    if text == "0":
        return context.zero()
    summands = []
    for term in (t.strip() for t in text.split("+")):
        m = STANDARD_TERM.match(term)
        if m:
            v = int(m.group(2))
            if not 1 <= v <= context.vertex_count:
                raise WorkspaceError(f"vertex {v} in '{term}' outside 1..{context.vertex_count}", where)
            summands.append(standard_module(context, m.group(1), v - 1))
        elif term in modules:
            summands.append(modules[term])
        elif term == "0":
            continue
        else:
            raise WorkspaceError(f"unknown module '{term}'", where)
    if not summands:
        return context.zero()
    if len(summands) == 1:
        return summands[0]
    return direct_sum(summands, context).sum.renamed(text)


def _parse_module(context: AlgebraContext, name: str, raw: Any, modules: dict[str, Representation]) -> Representation:
    where = _join("modules", name)
    if isinstance(raw, str):
        return parse_expression(context, raw, modules, where).renamed(name)
    if not isinstance(raw, dict):
        raise WorkspaceError("expected an expression or an object with 'dims'", where)
    dims = _require(raw, "dims", list, where)
    if len(dims) != context.vertex_count or not all(isinstance(d, int) and d >= 0 for d in dims):
        raise WorkspaceError(f"expected {context.vertex_count} non-negative dimensions", _join(where, "dims"))
    arrows_raw = raw.get("arrows", {})
    if not isinstance(arrows_raw, dict):
        raise WorkspaceError("expected an object", _join(where, "arrows"))
    known = {a.name for a in context.quiver.arrows}
    for key in arrows_raw:
        if key not in known:
            raise WorkspaceError(f"no arrow named '{key}'", _join(_join(where, "arrows"), key))
    mats = []
    for a in context.quiver.arrows:
        mats.append(_parse_matrix(arrows_raw.get(a.name), dims[a.target], dims[a.source], context.prime,
                                  _join(_join(where, "arrows"), a.name)))
    return Representation(context, tuple(dims), tuple(mats), name)


def _parse_complex(context: AlgebraContext, name: str, raw: Any, modules: dict[str, Representation]) -> ComplexA:
    where = _join("complexes", name)
    if not isinstance(raw, dict):
        raise WorkspaceError("expected an object", where)
    terms: dict[int, Representation] = {}
    for deg, expr in _require(raw, "terms", dict, where).items():
        at = _join(_join(where, "terms"), deg)
        try:
            terms[int(deg)] = parse_expression(context, expr, modules, at)
        except ValueError as e:
            raise WorkspaceError(f"degree must be an integer ({e})", at) from e
    zero = context.zero()
    diffs: dict[int, RepMorphism] = {}
    for deg, comps in raw.get("differentials", {}).items():
        at = _join(_join(where, "differentials"), deg)
        try:
            n = int(deg)
        except ValueError as e:
            raise WorkspaceError("degree must be an integer", at) from e
        if not isinstance(comps, dict):
            raise WorkspaceError("expected an object keyed by vertex", at)
        src, tgt = terms.get(n, zero), terms.get(n + 1, zero)
        blocks = []
        for v in range(context.vertex_count):
            blocks.append(_parse_matrix(comps.get(str(v + 1)), tgt.dims[v], src.dims[v], context.prime,
                                        _join(at, str(v + 1))))
        try:
            diffs[n] = RepMorphism(src, tgt, tuple(blocks))
        except ValueError as e:
            raise WorkspaceError(str(e), at) from e
    try:
        return ComplexA(context, terms, diffs)
    except ValueError as e:
        raise WorkspaceError(str(e), where) from e


def _parse_heart_object(pair: TorsionPair, raw: Any, modules: dict[str, Representation], where: str) -> HeartObject:
    if not isinstance(raw, str):
        raise WorkspaceError("expected a string", where)
    text = raw.strip()
    try:
        if text.endswith(SHIFT_SUFFIX):
            F = parse_expression(pair.context, text[:-len(SHIFT_SUFFIX)], modules, where)
            return shifted_heart_object(pair, F, text)
        return heart_object_from_module(pair, parse_expression(pair.context, text, modules, where), text)
    except NotInHeart as e:
        raise WorkspaceError(str(e), where) from e


def parse_workspace(data: Any, name: str = "<memory>", prime_override: int | None = None) -> Workspace:
    if not isinstance(data, dict):
        raise WorkspaceError("top level must be an object", "<root>")
    prime = prime_override if prime_override is not None else data.get("prime", DEFAULT_PRIME)
    try:
        check_prime(prime)
    except (TypeError, ValueError) as e:
        raise WorkspaceError(str(e), "prime") from e
    context = AlgebraContext(_parse_quiver(data.get("quiver")), prime)

    modules: dict[str, Representation] = {}
    raw_modules = data.get("modules", {})
    if not isinstance(raw_modules, dict):
        raise WorkspaceError("expected an object", "modules")
    for mod_name, raw in raw_modules.items():
        if STANDARD_TERM.match(mod_name) or mod_name == "0":
            raise WorkspaceError("name shadows a standard module", _join("modules", mod_name))
        modules[mod_name] = _parse_module(context, mod_name, raw, modules)

    label = data.get("label", "")
    gen_text = _require(data, "torsion_generator", str, "")
    generator = parse_expression(context, gen_text, modules, "torsion_generator")
    pair = TorsionPair(context, generator, label or gen_text.strip())

    complexes = {cx_name: _parse_complex(context, cx_name, raw, modules)
                 for cx_name, raw in data.get("complexes", {}).items()}
    heart_objects = [_parse_heart_object(pair, raw, modules, _join("heart_objects", i))
                     for i, raw in enumerate(data.get("heart_objects", []))]
    ws = Workspace(name, context, pair, modules, complexes, heart_objects, label)
    logger.debug(f"parsed workspace {name}: {context.vertex_count} vertices, {len(modules)} modules, "
                 f"{len(complexes)} complexes over F_{prime}")
    return ws


def load_workspace(path: str | Path, prime_override: int | None = None) -> Workspace:
    """Read and validate a workspace file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise WorkspaceError("file not found", str(path)) from e
    except json.JSONDecodeError as e:
        raise WorkspaceError(e.msg, f"{path.name}:{e.lineno}:{e.colno}") from e
    try:
        ws = parse_workspace(data, path.stem, prime_override)
    except HrsLabError:
        raise
    except ValueError as e:
        raise WorkspaceError(str(e), path.name) from e
    logger.info(f"Loaded workspace {path.name} (pair {ws.pair}, prime {ws.prime})")
    return ws
