"""Command-line interface.

Subcommands map to the harness entry points; JSON reports go to stdout, CSV
and SVG files to the paths given (or documented defaults).  Exit codes:
0 success, 1 validation error (bad arguments or input files), 2 numeric or
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .complementarity import Q_VARIANTS
from .errors import NumericError, ValidationError
from .harness import (DEFAULT_FIG3_SAMPLES, DEFAULT_FIG4_SAMPLES,
                      DEFAULT_GRID_STEPS, DEFAULT_SEED, RunConfig,
                      run_bound, run_coherence, run_example1, run_example2,
                      run_figure3, run_figure4, run_qkd)

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="eur",
        description="Entropic uncertainty lower bounds with quantum memories.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p1 = sub.add_parser(
        "example1", help="bound differences for the bundled three-qutrit "
        "state and rotation/Fourier bases (JSON to stdout)")
    p1.add_argument("--a", type=float, default=None,
                    help="rotation amplitude in [0, 1] (default 0.95)")
    p1.add_argument("--phi", type=float, default=None,
                    help="rotation phase in radians (default pi)")
    p1.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    p2 = sub.add_parser(
        "example2", help="amplitude sweep of bound differences on the "
        "cyclic-shift state (CSV + SVG)")
    p2.add_argument("--steps", type=int, default=DEFAULT_GRID_STEPS,
                    help=f"grid points in [0, 1] (default {DEFAULT_GRID_STEPS})")
    p2.add_argument("--out", default=None, metavar="PATH",
                    help="CSV output path (default example2.csv)")
    p2.add_argument("--svg", default=None, metavar="PATH",
                    help="SVG output path (default: CSV path with .svg suffix)")
    p2.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    p3 = sub.add_parser(
        "fig3", help="bound differences for random states and random bases "
        "(CSV + SVG)")
    p3.add_argument("--samples", type=int, default=DEFAULT_FIG3_SAMPLES,
                    help=f"number of random samples (default {DEFAULT_FIG3_SAMPLES})")
    p3.add_argument("--seed", type=int, default=DEFAULT_SEED,
                    help=f"master seed (default {DEFAULT_SEED})")
    p3.add_argument("--out", default=None, metavar="PATH",
                    help="CSV output path (default figure3.csv)")
    p3.add_argument("--svg", default=None, metavar="PATH",
                    help="SVG output path (default: CSV path with .svg suffix)")
    p3.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    p4 = sub.add_parser(
        "fig4", help="coherence total vs bound for random two-qutrit states "
        "(CSV + SVG)")
    p4.add_argument("--samples", type=int, default=DEFAULT_FIG4_SAMPLES,
                    help=f"number of random samples (default {DEFAULT_FIG4_SAMPLES})")
    p4.add_argument("--seed", type=int, default=DEFAULT_SEED,
                    help=f"master seed (default {DEFAULT_SEED})")
    p4.add_argument("--out", default=None, metavar="PATH",
                    help="CSV output path (default figure4.csv)")
    p4.add_argument("--svg", default=None, metavar="PATH",
                    help="SVG output path (default: CSV path with .svg suffix)")
    p4.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    pb = sub.add_parser(
        "bound", help="full bound report for user-supplied state and "
        "measurements (JSON to stdout)")
    pb.add_argument("--state", required=True, metavar="FILE",
                    help="state JSON file (labels, dims, matrix)")
    pb.add_argument("--measurements", required=True, metavar="FILE",
                    help="JSON array of measurement objects")
    pb.add_argument("--partition", required=True, metavar="STR",
                    help="measurement grouping, e.g. \"0,1;2\"")
    pb.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    pq = sub.add_parser(
        "qkd", help="key-rate bounds for a bipartite state and two basis "
        "pairs (JSON to stdout)")
    pq.add_argument("--state", required=True, metavar="FILE")
    pq.add_argument("--alice", required=True, metavar="FILE",
                    help="JSON array with the two signal bases on A")
    pq.add_argument("--bob", required=True, metavar="FILE",
                    help="JSON array with the two readout bases on B")
    pq.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    pc = sub.add_parser(
        "coherence", help="coherence total and bound for a state and "
        "measurement family (JSON to stdout)")
    pc.add_argument("--state", required=True, metavar="FILE")
    pc.add_argument("--measurements", required=True, metavar="FILE")
    pc.add_argument("--q-variant", choices=Q_VARIANTS, default="tilde")

    return parser


def _dispatch(args: argparse.Namespace) -> None:
    if args.subcommand == "example1":
        config = RunConfig("example1", a=args.a, phi=args.phi,
                           q_variant=args.q_variant)
        diffs, report = run_example1(config)
        json.dump({"differences": diffs.to_json(), "report": report.to_json()},
                  sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.subcommand == "example2":
        config = RunConfig("example2", steps=args.steps, csv_path=args.out,
                           svg_path=args.svg, q_variant=args.q_variant)
        records = run_example2(config)
        print(f"wrote {len(records)} rows", file=sys.stderr)
    elif args.subcommand == "fig3":
        config = RunConfig("fig3", samples=args.samples, master_seed=args.seed,
                           csv_path=args.out, svg_path=args.svg,
                           q_variant=args.q_variant)
        records = run_figure3(config)
        print(f"wrote {len(records)} rows", file=sys.stderr)
    elif args.subcommand == "fig4":
        config = RunConfig("fig4", samples=args.samples, master_seed=args.seed,
                           csv_path=args.out, svg_path=args.svg,
                           q_variant=args.q_variant)
        records = run_figure4(config)
        print(f"wrote {len(records)} rows", file=sys.stderr)
    elif args.subcommand == "bound":
        config = RunConfig("bound", state_path=args.state,
                           measurements_path=args.measurements,
                           partition_text=args.partition,
                           q_variant=args.q_variant)
        json.dump(run_bound(config).to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.subcommand == "qkd":
        config = RunConfig("qkd", state_path=args.state,
                           alice_path=args.alice, bob_path=args.bob,
                           q_variant=args.q_variant)
        json.dump(run_qkd(config).to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.subcommand == "coherence":
        config = RunConfig("coherence", state_path=args.state,
                           measurements_path=args.measurements,
                           q_variant=args.q_variant)
        json.dump(run_coherence(config).to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:  # pragma: no cover - argparse enforces the choices
        raise ValidationError(f"unknown subcommand {args.subcommand!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _dispatch(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
