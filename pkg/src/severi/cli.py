"""Command-line entry point: ``severi verify|list-experiments|classify``."""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import linalg
from .errors import GeometryError
from .experiments import REGISTRY, ConfigError, run_experiment, workers
from .jordan import JordanSpace, model_name
from .lines import classify_line, tangency_locus
from .projgeo import LineRecord
from .report import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, canonical_json


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="severi", description="Exact verification campaigns for Severi varieties.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one experiment and write a JSON report")
    v.add_argument("experiment")
    v.add_argument("--model", required=True)
    v.add_argument("--field", choices=("q", "fp"), default="fp")
    v.add_argument("--prime", type=int, default=linalg.DEFAULT_PRIMES[0])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--out", type=Path, default=None, help="report path (default: stdout)")

    sub.add_parser("list-experiments", help="list registered experiments")

    c = sub.add_parser("classify", help="classify the line through two points")
    c.add_argument("--model", required=True)
    c.add_argument("--prime", type=int, default=None, help="work over F_p instead of Q")
    c.add_argument("--line", nargs="+", required=True, help="2 dim J scalars: the two spanning points")
    return ap


def _verify(args) -> int:
    t0 = time.perf_counter()
    report = run_experiment(args.experiment, args.model, args.field, args.prime, args.seed, args.samples)
    text = canonical_json(report.as_dict())
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
        print(report.summary_line())
    print(f"wall time {time.perf_counter() - t0:.2f}s, workers {workers()}", file=sys.stderr)
    return report.exit_code


def _list() -> int:
    for name, exp in REGISTRY.items():
        print(f"{name:<22} {','.join(exp.models):<25} {exp.claim}")
    return EXIT_PASS


def _classify(args) -> int:
    model = model_name(args.model)
    space = JordanSpace(model, args.prime if args.prime else "q")
    F = space.field
    if len(args.line) != 2 * space.dim:
        raise ConfigError(f"--line needs {2 * space.dim} scalars for the {model} model, got {len(args.line)}")
    vals = F.array([Fraction(s) for s in args.line]).reshape(2, space.dim)
    if linalg.rank(vals, F) != 2:
        raise ConfigError("the two points do not span a line")
    L = LineRecord.through(space, vals[0], vals[1])
    kind = classify_line(L)
    print(f"type {kind.value}")
    if space.n > 2 or kind.value == "NONSECANT":
        print(f"tangency locus {tangency_locus(L).status}")
    return EXIT_PASS


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "list-experiments":
            return _list()
        return _classify(args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
