"""Command-line front end.

Every command prints a JSON report of the form::

    {"command": ..., "version": ..., "inputs": {...}, "results": ..., "checks": [...]}

except ``lorenz --format csv`` and ``sweep``, which write CSV. Exit codes: 0 on
success, 1 when a verification or comparison check fails, 2 on usage or
validation errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._backend import BACKEND
from .channel import BisoChannel, from_matrix, make_biso
from .errors import BisoError
from .measures import (
    LN2,
    alpha_capacity,
    arimoto_mi_biso,
    arimoto_mi_curve,
    sibson_mi_biso,
    sibson_mi_curve,
)
from .ordering import (
    DIRECTED,
    Family,
    Verdict,
    calibrate,
    evaluate_lorenz,
    extremality_report,
    lorenz_curve,
    more_capable_grid,
    regime,
    sufficient_condition,
)
from .suite import SUITE_NAMES, run_suite

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
SIG_DIGITS = 12


class CliError(Exception):
    """Usage or input problem; reported on stderr with exit code 2."""


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


# ------------------------------------------------------------------ input


def channel_from_json(data, source: str = "<json>") -> BisoChannel:
    if not isinstance(data, dict):
        raise CliError(f"{source}: channel file must hold a JSON object")
    label = data.get("label")
    if "pairs" in data and "matrix" in data:
        raise CliError(f"{source}: give either 'pairs' or 'matrix', not both")
    try:
        if "pairs" in data:
            return make_biso(data["pairs"], label=label)
        if "matrix" in data:
            return from_matrix(data["matrix"], label=label)
    except (BisoError, TypeError, ValueError) as exc:
        raise CliError(f"{source}: {exc}") from exc
    raise CliError(f"{source}: channel file needs a 'pairs' or 'matrix' field")


def parse_channel_file(path) -> BisoChannel:
    """Load a channel from a JSON file (pair list or raw 2-row matrix)."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CliError(f"cannot read channel file {p}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{p}: invalid JSON ({exc.msg})") from exc
    return channel_from_json(data, str(p))


# ----------------------------------------------------------------- output


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
        return float(f"{obj:.{SIG_DIGITS}g}") + 0.0
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _report(command: str, inputs: dict, results, checks=()) -> dict:
    return {
        "command": command,
        "version": _version(),
        "backend": BACKEND,
        "inputs": inputs,
        "results": results,
        "checks": list(checks),
    }


def _emit(out, report: dict):
    json.dump(_round(report), out, indent=2, sort_keys=False)
    out.write("\n")


def _bits(value: float) -> float:
    return value / LN2


def _alphas(args) -> list[float]:
    return args.alpha or [2.0]


# --------------------------------------------------------------- commands


def cmd_mi(args, out) -> int:
    ch = parse_channel_file(args.channel)
    rows = []
    for a in _alphas(args):
        if args.variant == "arimoto":
            mi = arimoto_mi_biso(ch, args.x, a)
        else:
            mi = sibson_mi_biso(ch, args.x, a)
        row = {"variant": mi.variant.value, "alpha": a, "regime": regime(a).value,
               "x": args.x, "value_nats": mi.value}
        if args.bits:
            row["value_bits"] = _bits(mi.value)
        rows.append(row)
    results = rows[0] if len(rows) == 1 else rows
    _emit(out, _report("mi", {"channel": str(args.channel), "alpha": _alphas(args), "x": args.x,
                              "variant": args.variant}, results))
    return EXIT_OK


def cmd_capacity(args, out) -> int:
    ch = parse_channel_file(args.channel)
    rows = []
    for a in _alphas(args):
        cap = alpha_capacity(ch, a)
        row = {"alpha": a, "regime": regime(a).value, "c_alpha_nats": cap.c_alpha, "d_c": cap.d_c}
        if args.bits:
            row["c_alpha_bits"] = _bits(cap.c_alpha)
        rows.append(row)
    results = rows[0] if len(rows) == 1 else rows
    _emit(out, _report("capacity", {"channel": str(args.channel), "alpha": _alphas(args)}, results))
    return EXIT_OK


def lorenz_csv(curve, dense: int = 0) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "F"])
    ts = list(curve.breakpoints)
    if dense:
        ts = sorted(set(ts) | set(np.linspace(0.0, curve.d_c, dense).tolist()))
    for t in ts:
        w.writerow([repr(float(t)), repr(float(evaluate_lorenz(curve, min(t, curve.d_c))))])
    return buf.getvalue()


def cmd_lorenz(args, out) -> int:
    ch = parse_channel_file(args.channel)
    alphas = _alphas(args)
    if args.format == "csv":
        if len(alphas) != 1:
            raise CliError("CSV output takes exactly one --alpha")
        out.write(lorenz_csv(lorenz_curve(ch, alphas[0]), args.dense))
        return EXIT_OK
    rows = []
    for a in alphas:
        c = lorenz_curve(ch, a)
        rows.append({"alpha": a, "regime": regime(a).value, "d_c": c.d_c,
                     "breakpoints": c.breakpoints, "step_values": c.step_values,
                     "masses": c.masses, "F": c.values})
    checks = [{"name": "total_mass", "passed": all(abs(r["F"][-1] - 1.0) <= 1e-10 for r in rows),
               "worst": max(abs(r["F"][-1] - 1.0) for r in rows)}]
    _emit(out, _report("lorenz", {"channel": str(args.channel), "alpha": alphas},
                       rows[0] if len(rows) == 1 else rows, checks))
    return EXIT_OK


def cmd_compare(args, out) -> int:
    a_ch = parse_channel_file(args.a)
    b_ch = parse_channel_file(args.b)
    rows, checks = [], []
    for a in _alphas(args):
        grid = more_capable_grid(a_ch, b_ch, a, args.grid, args.tol)
        row = {"alpha": a, "regime": regime(a).value, "verdict": grid.verdict.value,
               "grid": grid.to_dict()}
        consistent = True
        if abs(a - 1.0) >= 1e-12:
            lz = sufficient_condition(a_ch, b_ch, a)
            row["lorenz"] = lz.to_dict()
            if lz.verdict in DIRECTED:
                consistent = grid.verdict in (lz.verdict, Verdict.EQUIVALENT)
        checks.append({"name": f"lorenz_grid_consistency[alpha={a:g}]", "passed": consistent,
                       "worst": grid.worst_gap})
        rows.append(row)
    _emit(out, _report("compare", {"a": str(args.a), "b": str(args.b), "alpha": _alphas(args),
                                   "grid": args.grid, "tol": args.tol},
                       rows[0] if len(rows) == 1 else rows, checks))
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_CHECK_FAILED


def cmd_calibrate(args, out) -> int:
    if (args.target is None) == (args.channel is None):
        raise CliError("calibrate needs exactly one of --target or --channel")
    rows = []
    for a in _alphas(args):
        if args.channel is not None:
            target = alpha_capacity(parse_channel_file(args.channel), a).c_alpha
        else:
            target = args.target * LN2 if args.bits else args.target
        param = calibrate(Family(args.family), target, a)
        rows.append({"alpha": a, "family": args.family, "target_nats": target,
                     "parameter": param, "regime": regime(a).value})
    _emit(out, _report("calibrate", {"family": args.family, "target": args.target,
                                     "channel": str(args.channel) if args.channel else None,
                                     "alpha": _alphas(args)},
                       rows[0] if len(rows) == 1 else rows))
    return EXIT_OK


def cmd_extremal(args, out) -> int:
    ch = parse_channel_file(args.channel)
    rows, checks = [], []
    for a in _alphas(args):
        rep = extremality_report(ch, a, args.grid, args.tol)
        rows.append(rep.to_dict())
        checks.append({"name": f"sandwich[alpha={a:g}]", "passed": rep.holds,
                       "worst": min(rep.bec_vs_w.worst_gap, rep.w_vs_bsc.worst_gap)})
    _emit(out, _report("extremal", {"channel": str(args.channel), "alpha": _alphas(args),
                                    "grid": args.grid, "tol": args.tol},
                       rows[0] if len(rows) == 1 else rows, checks))
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_CHECK_FAILED


def cmd_verify(args, out) -> int:
    checks = run_suite(args.suite, seed=args.seed, quick=args.quick)
    payload = [c.to_dict() for c in checks]
    _emit(out, _report("verify", {"suite": args.suite, "seed": args.seed, "quick": args.quick},
                       {"passed": all(c.passed for c in checks), "count": len(checks)}, payload))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK_FAILED


def emit_sweep(ch: BisoChannel, alpha_list: Sequence[float], x_grid: int, out_path,
               bits: bool = False) -> int:
    """Write ``alpha,x,sibson_mi,arimoto_mi`` rows for each alpha over a uniform x grid.

    Returns the number of data rows written.
    """
    if not alpha_list:
        raise CliError("sweep needs at least one --alpha")
    if x_grid < 2:
        raise CliError("--grid must be >= 2 for a sweep")
    xs = np.linspace(0.0, 1.0, x_grid)
    scale = 1.0 / LN2 if bits else 1.0
    rows = 0
    try:
        fh = open(out_path, "w", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {out_path}: {exc.strerror or exc}") from exc
    with fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "x", "sibson_mi", "arimoto_mi"])
        for a in alpha_list:
            s = sibson_mi_curve(ch, xs, a) * scale
            r = arimoto_mi_curve(ch, xs, a) * scale
            for x, sv, rv in zip(xs, s, r):
                w.writerow([f"{a:.{SIG_DIGITS}g}", f"{x:.{SIG_DIGITS}g}",
                            f"{sv:.{SIG_DIGITS}g}", f"{rv:.{SIG_DIGITS}g}"])
                rows += 1
    return rows


def cmd_sweep(args, out) -> int:
    ch = parse_channel_file(args.channel)
    n = emit_sweep(ch, _alphas(args), args.grid, args.out, args.bits)
    _emit(out, _report("sweep", {"channel": str(args.channel), "alpha": _alphas(args),
                                 "grid": args.grid, "out": str(args.out), "bits": args.bits},
                       {"rows": n}))
    return EXIT_OK


# ----------------------------------------------------------------- parser


def _positive_float(s: str) -> float:
    v = float(s)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s!r}")
    return v


def _probability(s: str) -> float:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_positive_float, action="append",
                        help="Renyi order (repeatable; default 2)")
    common.add_argument("--bits", action="store_true", help="also report values in bits")

    parser = argparse.ArgumentParser(prog="bisorenyi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi", parents=[common], help="mutual information at one input")
    p.add_argument("--channel", required=True, type=Path)
    p.add_argument("--x", type=_probability, default=0.5, help="P(X=0) (default 0.5)")
    p.add_argument("--variant", choices=["sibson", "arimoto"], default="sibson")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("capacity", parents=[common], help="alpha-capacity and d_C")
    p.add_argument("--channel", required=True, type=Path)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("lorenz", parents=[common], help="alpha-Lorenz curve")
    p.add_argument("--channel", required=True, type=Path)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--dense", type=int, default=0, help="extra uniformly spaced CSV rows")
    p.set_defaults(func=cmd_lorenz)

    p = sub.add_parser("compare", parents=[common], help="order between two channels")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("calibrate", parents=[common], help="BSC/BEC with a given capacity")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--target", type=float, help="target capacity (nats, or bits with --bits)")
    p.add_argument("--channel", type=Path, help="match the capacity of this channel instead")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("extremal", parents=[common], help="BEC/BSC sandwich for a channel")
    p.add_argument("--channel", required=True, type=Path)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="smaller ensembles and grids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="write an MI-versus-x CSV")
    p.add_argument("--channel", required=True, type=Path)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_sweep)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "grid", 3) < 3 and args.command in ("compare", "extremal"):
        err.write("error: --grid must be >= 3\n")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (CliError, BisoError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
