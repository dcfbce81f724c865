"""Command-line harness.

    superdisc --suite disc --dims 3,3,2 --n 2 --trials 25 --seed 42 --report out.json
    superdisc eval --op moebius --input g.json --input z.json --output w.json

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.
The report path comes from --report, else the SUPERDISC_REPORT environment
variable, else the config file.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import __version__
from .errors import SuperdiscError
from .fixtures import OPS, eval_fixture
from .suites import SUITES, SuiteConfig, run_suite

REPORT_ENV = "SUPERDISC_REPORT"

CONFIG_KEYS = {"suite", "dims", "n", "n_pairs", "trials", "seed", "tol", "soul_scale", "radius", "k", "report"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dims(text: str):
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 3,3,2, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"dims needs three comma-separated integers, got {text!r}")
    return parts


def _run_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="superdisc", description="Run seeded property suites and write a JSON report.")
    p.add_argument("--config", help="JSON file with the same keys as the flags; flags win")
    p.add_argument("--suite", choices=SUITES)
    p.add_argument("--dims", type=_dims, help="p_minus,p_plus,q")
    p.add_argument("--n", type=int, help="number of Grassmann generator pairs")
    p.add_argument("--trials", type=int, help="samples per check (default: per-check counts)")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, help="threshold applied to every check")
    p.add_argument("--soul-scale", type=float, dest="soul_scale")
    p.add_argument("--radius", type=float)
    p.add_argument("--k", type=int, help="quantization level k = 1/hbar")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", help="suppress the per-check summary on stderr")
    p.add_argument("--version", action="version", version=__version__)
    return p


def _eval_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="superdisc eval", description="Apply one operation to JSON fixtures.")
    p.add_argument("--op", required=True, help=f"one of: {', '.join(sorted(OPS))}")
    p.add_argument("--input", action="append", required=True, help="fixture path; repeat for multi-input ops")
    p.add_argument("--kind", action="append", help="fixture kind for untagged inputs (once, or once per input)")
    p.add_argument("--output", help="result path (default: stdout)")
    p.add_argument("--k", type=int, default=1)
    return p


def build_config(args: argparse.Namespace) -> SuiteConfig:
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(data)
        if "n" in values:
            values["n_pairs"] = values.pop("n")
        if "dims" in values:
            d = values["dims"]
            values["dims"] = _dims(d) if isinstance(d, str) else tuple(int(x) for x in d)
    for key in ("suite", "dims", "trials", "seed", "tol", "soul_scale", "radius", "k", "report"):
        val = getattr(args, key)
        if val is not None:
            values[key] = val
    if args.n is not None:
        values["n_pairs"] = args.n
    if args.report is None and os.environ.get(REPORT_ENV):
        values["report"] = os.environ[REPORT_ENV]
    try:
        config = SuiteConfig(**values)
        config.validate()
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    return config


def write_json(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _summary(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        err = c["max_abs_error"]
        err = f"{err:.3e}" if isinstance(err, float) else err
        lines.append(f"{mark} {c['name']:<45} n={c['samples']:<4} err={err} thr={c['threshold']:.1e}")
    lines.append(f"{'PASS' if report['pass'] else 'FAIL'} overall in {report['wall_time']:.1f}s")
    return "\n".join(lines)


def main_run(argv: List[str]) -> int:
    args = _run_parser().parse_args(argv)
    config = build_config(args)
    if config.report:
        try:
            open(config.report, "a").close()
        except OSError as exc:
            raise UsageError(f"report path not writable: {exc}")
    report = run_suite(config)
    if config.report:
        write_json(report, config.report)
    else:
        write_json(report, None)
    if not args.quiet:
        print(_summary(report), file=sys.stderr)
    return 0 if report["pass"] else 1


def main_eval(argv: List[str]) -> int:
    args = _eval_parser().parse_args(argv)
    objects = []
    for path in args.input:
        try:
            with open(path) as fh:
                objects.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read fixture {path}: {exc}")
    try:
        result = eval_fixture(args.op, objects, args.kind, args.k)
    except SuperdiscError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ValueError) else 1
    write_json(result, args.output)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "eval":
            return main_eval(argv[1:])
        return main_run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
