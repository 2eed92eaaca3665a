"""Deterministic JSON reports.

Reports are canonical JSON: sorted keys, two-space indentation, and every
number written as a decimal string, so identical runs give identical bytes.
Wall-clock time is deliberately not part of the document; the CLI prints it
to stderr instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources

import numpy as np

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3


def encode_scalar(a) -> str:
    if isinstance(a, Fraction):
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
    if isinstance(a, (bool, np.bool_)):
        return "true" if a else "false"
    return str(int(a))


def encode_vector(v) -> list[str]:
    return [encode_scalar(a) for a in np.asarray(v).reshape(-1)]


def to_jsonable(obj):
    """Recursively convert to JSON types with all numbers as decimal strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()] if obj.dtype != object else [to_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer, Fraction)):
        return encode_scalar(obj)
    if isinstance(obj, float):
        raise TypeError("floating-point values are not allowed in reports")
    return str(obj)


def canonical_json(doc: dict) -> str:
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("severi").joinpath("report.schema.json").read_text())


@dataclass
class Counts:
    attempted: int = 0
    degenerate: int = 0
    passed: int = 0
    failed: int = 0
    undecided: int = 0

    def as_dict(self) -> dict:
        return {
            "attempted": self.attempted,
            "degenerate": self.degenerate,
            "passed": self.passed,
            "failed": self.failed,
            "undecided": self.undecided,
        }


@dataclass
class Report:
    experiment: str
    claim: str
    model: str
    field: str
    primes: list
    seed: int
    counts: Counts
    runs: list = dc_field(default_factory=list)  # per-prime (or rational) sub-results
    tallies: dict = dc_field(default_factory=dict)
    witnesses: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    status: str = "pass"
    degenerate_threshold: Fraction = Fraction(1, 20)

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "degenerate": EXIT_DEGENERATE}[self.status]

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "claim": self.claim,
            "model": self.model,
            "field": self.field,
            "primes": list(self.primes),
            "seed": self.seed,
            "samples": self.counts.as_dict(),
            "runs": self.runs,
            "tallies": self.tallies,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "status": self.status,
            "degenerate_threshold": self.degenerate_threshold,
        }

    def to_json(self) -> str:
        return canonical_json(self.as_dict())

    def summary_line(self) -> str:
        c = self.counts
        where = self.field if self.field == "q" else "F_" + "/".join(str(p) for p in self.primes)
        return (
            f"{self.experiment:<22} {self.model:<9} {where:<18} "
            f"attempted={c.attempted} passed={c.passed} failed={c.failed} "
            f"degenerate={c.degenerate} undecided={c.undecided}  {self.status.upper()}"
        )
