"""Command-line surface.

Subcommands:

* ``analyze``     structural summary (sinks, sources, partition, core, ...)
* ``classify``    extreme states at one beta, optionally oracle-checked
* ``phase-scan``  classify along a beta grid
* ``verify``      check a state vector against the beta conditions
* ``tower``       level-by-level trace-tower checks for a state vector

Exit codes: 0 success (including "no states"), 2 input error, 3 phase or
precondition error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import analyze_structure, check_beta_conditions, classify, phase_scan
from .errors import GraphKmsError, InputError
from .formats import (
    INPUT_FORMATS,
    OUTPUT_FORMATS,
    check_report_dict,
    emit_analysis,
    emit_report,
    emit_scan,
    parse_graph,
    sig15,
)
from .tower import level_mass, tower_consistency_check, tower_monotonicity_check


def _common_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("graph", help="graph file, or '-' for standard input")
    sub.add_argument("--strict", action="store_true",
                     help="reject multiplicities > 1 (0-1 adjacency only)")
    sub.add_argument("--input-format", choices=INPUT_FORMATS, default=None,
                     help="input format (default: auto-detect)")
    sub.add_argument("--format", choices=OUTPUT_FORMATS, default="text",
                     help="output format (default: text)")
    sub.add_argument("--tolerance", type=float, default=1e-9,
                     help="acceptance tolerance for the beta conditions (default 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphkms",
        description="Classify the KMS equilibrium states of a finite directed graph algebra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="structural summary of the graph")
    _common_arguments(analyze)

    classify_cmd = commands.add_parser("classify", help="extreme states at one beta")
    _common_arguments(classify_cmd)
    classify_cmd.add_argument("--beta", type=float, required=True)
    classify_cmd.add_argument("--oracle", action="store_true",
                              help="enumerate the state polytope and compare")

    scan = commands.add_parser("phase-scan", help="classify along a beta grid")
    _common_arguments(scan)
    scan.add_argument("--beta-min", type=float, required=True)
    scan.add_argument("--beta-max", type=float, required=True)
    scan.add_argument("--steps", type=int, required=True)
    scan.add_argument("--oracle", action="store_true")

    verify = commands.add_parser("verify", help="check a state file at one beta")
    _common_arguments(verify)
    verify.add_argument("--beta", type=float, required=True)
    verify.add_argument("--state", required=True, help="JSON state file")

    tower = commands.add_parser("tower", help="trace-tower checks for a state file")
    _common_arguments(tower)
    tower.add_argument("--beta", type=float, required=True)
    tower.add_argument("--state", required=True, help="JSON state file")
    tower.add_argument("--max-level", type=int, default=4)

    return parser


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_state(path: str) -> np.ndarray:
    """State files are JSON: a bare list of weights or {"weights": [...]}."""
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"state file is not valid JSON: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("weights")
    if not isinstance(data, list) or not all(isinstance(x, (int, float)) for x in data):
        raise InputError("state file must hold a list of weights (or {'weights': [...]})")
    return np.asarray(data, dtype=float)


def _run_tower(g, args) -> str:
    if args.max_level < 0:
        raise InputError("--max-level must be nonnegative")
    weights = _load_state(args.state)
    rows = []
    for level in range(args.max_level + 1):
        consistency = tower_consistency_check(g, weights, args.beta, level)
        monotone = tower_monotonicity_check(g, weights, args.beta, level)
        rows.append({
            "level": level,
            "consistency_residual": sig15(consistency.residual),
            "checked_paths": consistency.checked_paths,
            "monotone": monotone.holds,
            "worst_margin": sig15(monotone.worst_margin),
            "level_mass": sig15(level_mass(g, weights, args.beta, level)),
        })
    if args.format == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if args.format == "csv":
        header = ["level", "consistency_residual", "checked_paths", "monotone",
                  "worst_margin", "level_mass"]
        lines = [",".join(header)]
        lines += [",".join(str(row[k]) for k in header) for row in rows]
        return "\n".join(lines) + "\n"
    lines = []
    for row in rows:
        lines.append(
            f"level {row['level']}: consistency residual {row['consistency_residual']:.3e} "
            f"over {row['checked_paths']} paths, monotone={row['monotone']} "
            f"(worst margin {row['worst_margin']:.3e}), mass {row['level_mass']:.12g}"
        )
    return "\n".join(lines) + "\n"


def _run(args) -> str:
    g = parse_graph(_read_text(args.graph), fmt=args.input_format, strict=args.strict)
    if args.command == "analyze":
        return emit_analysis(analyze_structure(g), args.format)
    if args.command == "classify":
        report = classify(g, args.beta, with_oracle=args.oracle, tol=args.tolerance)
        return emit_report(report, args.format)
    if args.command == "phase-scan":
        if args.steps < 1:
            raise InputError("--steps must be at least 1")
        grid = np.linspace(args.beta_min, args.beta_max, args.steps)
        reports = phase_scan(g, grid, with_oracle=args.oracle, tol=args.tolerance)
        return emit_scan(reports, args.format)
    if args.command == "verify":
        report = check_beta_conditions(g, args.beta, _load_state(args.state),
                                       tol=args.tolerance)
        payload = check_report_dict(report)
        if args.format == "json":
            return json.dumps(payload, indent=2, sort_keys=True) + "\n"
        return (
            f"equality residual {payload['equality_residual']:.3e}, "
            f"inequality violation {payload['inequality_violation']:.3e}, "
            f"satisfied={payload['satisfied']} at tolerance {payload['tolerance']:.1e}\n"
        )
    if args.command == "tower":
        return _run_tower(g, args)
    raise InputError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(_run(args))
    except GraphKmsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
