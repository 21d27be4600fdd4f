"""Command reports: tri-state verdicts, tables and facts, in text or JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

from algebra.complexes import ChainMap, ComplexA
from algebra.exact_linalg import FpMatrix
from algebra.quiver_rep import RepMorphism
from constants import EXIT_FAIL, EXIT_PASS, WITNESS_ELISION
from logger_config import get_logger

try:
    import psutil
except Exception:  # optional at runtime
    psutil = None

logger = get_logger(__name__)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_RUN = "not-run"


@dataclass
class Verdict:
    name: str
    status: Status
    detail: str = ""
    witness: Any = None

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status.value, "detail": self.detail, "witness": self.witness}

    @classmethod
    def from_dict(cls, raw: dict) -> Verdict:
        return cls(raw["name"], Status(raw["status"]), raw.get("detail", ""), raw.get("witness"))


@dataclass
class Report:
    command: str
    workspace: str
    seed: int | None = None
    trials: int | None = None
    verdicts: list[Verdict] = field(default_factory=list)
    tables: dict[str, Any] = field(default_factory=dict)
    facts: dict[str, Any] = field(default_factory=dict)
    timing_seconds: float = 0.0
    memory_mb: float | None = None

    def add(self, name: str, passed: bool | None, detail: str = "", witness: Any = None) -> Verdict:
        """Record a verdict; ``passed=None`` means the check did not run."""
        status = Status.NOT_RUN if passed is None else (Status.PASS if passed else Status.FAIL)
        verdict = Verdict(name, status, detail, witness)
        self.verdicts.append(verdict)
        return verdict

    def verdict(self, name: str) -> Verdict | None:
        return next((v for v in self.verdicts if v.name == name), None)

    @property
    def passed(self) -> bool:
        return all(v.status is not Status.FAIL for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_FAIL

    def sample_memory(self) -> None:
        if psutil is None:
            self.memory_mb = None
            return
        try:
            self.memory_mb = round(psutil.Process().memory_info().rss / 2**20, 1)
        except Exception as e:
            logger.debug(f"memory sample failed: {type(e).__name__}: {e}")
            self.memory_mb = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdicts"] = [v.to_dict() for v in self.verdicts]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> Report:
        raw = json.loads(text)
        return cls(
            command=raw["command"],
            workspace=raw["workspace"],
            seed=raw.get("seed"),
            trials=raw.get("trials"),
            verdicts=[Verdict.from_dict(v) for v in raw.get("verdicts", [])],
            tables=raw.get("tables", {}),
            facts=raw.get("facts", {}),
            timing_seconds=raw.get("timing_seconds", 0.0),
            memory_mb=raw.get("memory_mb"),
        )

    def render_text(self) -> str:
        lines = [f"{self.command} on {self.workspace}"]
        if self.seed is not None:
            lines.append(f"seed {self.seed}, trials {self.trials}")
        for key, value in self.facts.items():
            lines.append(f"  {key}: {value}")
        for name, table in self.tables.items():
            lines.append(f"{name}:")
            lines.extend(_render_table(table))
        for v in self.verdicts:
            lines.append(f"[{v.status.value.upper()}] {v.name}" + (f": {v.detail}" if v.detail else ""))
            if v.witness is not None and v.status is Status.FAIL:
                lines.append(f"    witness: {json.dumps(v.witness)}")
        memory = "n/a" if self.memory_mb is None else f"{self.memory_mb} MB"
        lines.append(f"{'PASS' if self.passed else 'FAIL'} in {self.timing_seconds:.2f}s, memory {memory}")
        return "\n".join(lines)


def _render_table(table: Any) -> list[str]:
    if isinstance(table, dict) and "rows" in table:
        header = table.get("columns", [])
        out = []
        if header:
            out.append("    " + "\t".join(str(h) for h in [""] + list(header)))
        labels = table.get("labels", [""] * len(table["rows"]))
        for label, row in zip(labels, table["rows"]):
            out.append("    " + "\t".join(str(c) for c in [label] + list(row)))
        return out
    return [f"    {json.dumps(table)}"]


# ---------------------------------------------------------------------------
# Witness serialization


def serialize_matrix(M: FpMatrix, full: bool = False) -> Any:
    """Entries, or shape and rank above the elision threshold."""
    if not full and (M.rows > WITNESS_ELISION or M.cols > WITNESS_ELISION):
        return {"shape": list(M.shape), "rank": M.rank()}
    return M.tolist()


def serialize_morphism(f: RepMorphism, full: bool = False) -> dict:
    return {
        "source_dims": list(f.source.dims),
        "target_dims": list(f.target.dims),
        "components": [serialize_matrix(c, full) for c in f.components],
    }


def serialize_complex(X: ComplexA, full: bool = False) -> dict:
    return {
        "terms": {str(n): list(M.dims) for n, M in X.terms.items()},
        "differentials": {str(n): serialize_morphism(d, full) for n, d in X.differentials.items()},
    }


def serialize_chain_map(f: ChainMap, full: bool = False) -> dict:
    return {str(n): serialize_morphism(c, full) for n, c in f.components.items()}
