"""latgen command line interface.

Subcommands: unimodular, coprime, bounds-table, lemma-verify, tv-check,
fullrank-check.  CSV (with a JSON header line) goes to --out or stdout;
human-readable progress goes to stderr.  Exit codes: 0 when every check
passes, 2 when a check fails, 1 on operational errors (bad arguments,
sampler faults, unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .bounds import ZetaContext
from .experiments import (
    PAPER_SCALE_DEFAULTS,
    ExperimentConfig,
    reports_to_csv,
    run_bounds_table,
    run_coprime_table,
    run_fullrank_check,
    run_lemma_verification,
    run_tv_check,
    run_tv_suite,
    run_unimodular_experiment,
)
from .lattice import LatticeBasis
from .sampling import SamplerError


def _parse_n_values(text: str) -> tuple[int, ...]:
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text and not text.startswith("-"):
            lo, hi = text.split(sep, 1)
            return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(part) for part in text.split(","))


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_lattice(path: Optional[str], default: Optional[str] = None) -> LatticeBasis:
    if path is None:
        if default is None:
            raise ValueError("a lattice JSON file is required")
        return LatticeBasis.from_json(default)
    with open(path) as handle:
        return LatticeBasis.from_json(handle.read())


_Z2_JSON = '{"n": 2, "basis": [["1", "0"], ["0", "1"]], "column_major": true}'


def _experiment_config(args) -> ExperimentConfig:
    settings: dict = {}
    if args.config:
        with open(args.config) as handle:
            settings.update(json.load(handle))
    explicit = {
        "n_values": _parse_n_values(args.n) if args.n else None,
        "m_policy": args.m,
        "C": args.C,
        "reps": args.reps,
        "samples": args.samples,
        "seed": args.seed,
        "workers": args.workers,
        "max_rejects": args.max_rejects,
        "out": args.out,
    }
    for key, value in explicit.items():
        if value is not None:
            settings[key] = value
    if args.paper_scale:
        settings["paper_scale"] = True
        for key, value in PAPER_SCALE_DEFAULTS.items():
            settings.setdefault(key, value)
    return ExperimentConfig.from_json_dict(settings)


def _cmd_unimodular(args) -> int:
    cfg = _experiment_config(args)
    reports = run_unimodular_experiment(cfg)
    _emit(reports_to_csv(reports), cfg.out)
    failed = False
    for report in reports:
        verdict = report.within_tolerance()
        status = "n/a" if verdict is None else ("ok" if verdict else "FAIL")
        print(
            f"unimodular n={report.n} m={report.m}: avg={float(report.average):.6f}"
            f" min={float(report.minimum):.6f} radius={report.radius:.2g}"
            f" ideal={'' if report.ideal_lo is None else float((report.ideal_lo + report.ideal_hi) / 2)}"
            f" [{status}]",
            file=sys.stderr,
        )
        if verdict is False:
            failed = True
    return 2 if failed else 0


def _cmd_coprime(args) -> int:
    table = run_coprime_table(args.n_max)
    _emit(table.to_csv(), args.out)
    print(
        f"coprime n<=:{args.n_max} min={table.minimum} at n={table.argmin}"
        f" [{'ok' if table.ok else 'FAIL'}]",
        file=sys.stderr,
    )
    return 0 if table.ok else 2


def _cmd_bounds_table(args) -> int:
    ctx = ZetaContext(precision=args.precision)
    table = run_bounds_table(args.n_max, ctx)
    _emit(table.to_csv(), args.out)
    print(
        f"bounds-table n<=:{args.n_max} [{'ok' if table.ok else 'FAIL'}]",
        file=sys.stderr,
    )
    return 0 if table.ok else 2


def _cmd_lemma_verify(args) -> int:
    report = run_lemma_verification()
    _emit(report.to_csv(), args.out)
    print(
        f"lemma-verify {len(report.rows)} instances"
        f" [{'ok' if report.ok else 'FAIL'}]",
        file=sys.stderr,
    )
    return 0 if report.ok else 2


def _cmd_tv_check(args) -> int:
    if args.lattice or args.sub or args.B1:
        if not (args.lattice and args.sub and args.B1):
            raise ValueError("custom tv-check needs --lattice, --sub and --B1")
        lattice = _load_lattice(args.lattice)
        sub = [[Fraction(x) for x in vec] for vec in json.loads(args.sub)]
        row = run_tv_check(lattice, sub, Fraction(args.B1), name="custom")
        rows = [row]
        from .experiments import TvReport

        report = TvReport(rows)
    else:
        report = run_tv_suite()
    _emit(report.to_csv(), args.out)
    print(
        f"tv-check {len(report.rows)} instances [{'ok' if report.ok else 'FAIL'}]",
        file=sys.stderr,
    )
    return 0 if report.ok else 2


def _cmd_fullrank_check(args) -> int:
    lattice = _load_lattice(args.lattice, default=_Z2_JSON)
    nu = Fraction(args.nu_upper) if args.nu_upper else None
    if args.B:
        window_bound = Fraction(args.B)
    else:
        from .bounds import window_thresholds

        window_bound = window_thresholds(
            lattice.dim, nu if nu is not None else lattice.nu_upper
        )[0]
    report = run_fullrank_check(
        lattice,
        window_bound,
        trials=args.trials,
        seed=args.seed if args.seed is not None else 0,
        nu_upper=nu,
        allow_out_of_hypothesis=args.allow_out_of_hypothesis,
    )
    _emit(report.to_csv(), args.out)
    freq = "n/a" if report.frequency is None else f"{float(report.frequency):.4f}"
    print(
        f"fullrank-check n={report.n} B={report.window_bound} freq={freq}"
        f" hypothesis={'yes' if report.hypothesis_held else 'no'}"
        f" [{'ok' if report.ok else 'FAIL'}]",
        file=sys.stderr,
    )
    return 0 if report.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latgen",
        description="Lattice generation probabilities: experiments and tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--workers", type=int, default=None, help="worker processes")
    common.add_argument("--out", default=None, help="output CSV path (default stdout)")
    common.add_argument("--config", default=None, help="JSON config file")

    p = sub.add_parser(
        "unimodular",
        parents=[common],
        help="random-parallelepiped unimodularity experiment",
    )
    p.add_argument("--n", default=None, help="dimensions, e.g. 2 or 1..4 or 1,3")
    p.add_argument("--m", default=None, help="columns policy: n+1 (default), n, or an integer")
    p.add_argument("--C", type=int, default=None, help="parallelepiped coordinate bound")
    p.add_argument("--reps", type=int, default=None, help="parallelepipeds per n")
    p.add_argument("--samples", type=int, default=None, help="matrices per parallelepiped")
    p.add_argument("--max-rejects", dest="max_rejects", type=int, default=None)
    p.add_argument(
        "--paper-scale",
        dest="paper_scale",
        action="store_true",
        help="reps=1000, C=10^18, n=1..15 unless overridden (hours of compute)",
    )
    p.set_defaults(func=_cmd_unimodular)

    p = sub.add_parser("coprime", parents=[common], help="exact coprimality ratios")
    p.add_argument("--n-max", dest="n_max", type=int, default=1000)
    p.set_defaults(func=_cmd_coprime)

    p = sub.add_parser(
        "bounds-table", parents=[common], help="closed-form bound table"
    )
    p.add_argument("--n-max", dest="n_max", type=int, default=15)
    p.add_argument("--precision", type=int, default=30)
    p.set_defaults(func=_cmd_bounds_table)

    p = sub.add_parser(
        "lemma-verify", parents=[common], help="window counting bound checks"
    )
    p.set_defaults(func=_cmd_lemma_verify)

    p = sub.add_parser(
        "tv-check", parents=[common], help="total-variation distance checks"
    )
    p.add_argument("--lattice", default=None, help="lattice JSON file")
    p.add_argument("--sub", default=None, help="sublattice generators as JSON")
    p.add_argument("--B1", default=None, help="window bound")
    p.set_defaults(func=_cmd_tv_check)

    p = sub.add_parser(
        "fullrank-check", parents=[common], help="full-rank sampling frequency"
    )
    p.add_argument("--lattice", default=None, help="lattice JSON file (default Z^2)")
    p.add_argument("--B", default=None, help="window bound (default: threshold)")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--nu-upper", dest="nu_upper", default=None)
    p.add_argument(
        "--allow-out-of-hypothesis",
        dest="allow_out_of_hypothesis",
        action="store_true",
    )
    p.set_defaults(func=_cmd_fullrank_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # keep exit 2 reserved for failed checks; usage errors are operational
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except SamplerError as exc:
        print(f"sampler error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
