"""Command-line front end.

Exit codes: 0 success or agreement, 1 usage error, 2 verification mismatch,
3 capacity error. Witness indices in reports are 1-based positions in the
caller's input order.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
from typing import Optional

import numpy as np

from amccr import closedform, game, hardness, solver
from amccr.core import CapacityError, DomainError, ProblemInstance

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_CAPACITY = 0, 1, 2, 3
VERIFY_TOL = 1e-4
SWEEP_REL_TOL = 1e-9
MAX_SWEEP_ROWS = 10**6
SIG = ".12g"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise UsageError(f"malformed number list: {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"non-finite value in {text!r}")
    return vals


def _ints(text: str) -> list[int]:
    out = []
    for t in text.replace(" ", "").split(","):
        if t == "":
            continue
        try:
            out.append(int(t))
        except ValueError:
            raise UsageError(f"expected positive integers, got {t!r}") from None
    return out


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    lines = [ln.split("#", 1)[0].strip() for ln in raw]
    return [ln for ln in lines if ln]


def _instance_from_text(text: str) -> ProblemInstance:
    # "r1,r2,..." or "m1,m2,...;M1,M2,..."
    if ";" in text:
        lo, hi = text.split(";", 1)
        return _make_instance(m=_floats(lo), M=_floats(hi))
    return _make_instance(r=_floats(text))


def _make_instance(r=None, m=None, M=None) -> ProblemInstance:
    try:
        if r is not None:
            if len(r) < 2:
                raise UsageError(f"need k >= 2 ratios, got {len(r)}")
            return ProblemInstance.from_ratios(r)
        if len(m) != len(M):
            raise UsageError(f"--m has {len(m)} values but --M has {len(M)}")
        if len(m) < 2:
            raise UsageError(f"need k >= 2 intervals, got {len(m)}")
        return ProblemInstance.from_bounds(m, M)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _instances(args) -> list[ProblemInstance]:
    given = [args.r is not None, args.m is not None or args.M is not None, args.input is not None]
    if sum(given) != 1:
        raise UsageError("give exactly one instance source: --r, --m/--M, or --input")
    if args.r is not None:
        return [_make_instance(r=_floats(args.r))]
    if args.input is not None:
        return [_instance_from_text(ln) for ln in _read_lines(args.input)]
    if args.m is None or args.M is None:
        raise UsageError("--m and --M must be given together")
    return [_make_instance(m=_floats(args.m), M=_floats(args.M))]


def _num(x) -> float:
    return float(x)


def _instance_dict(inst: ProblemInstance) -> dict:
    return {
        "k": inst.k,
        "r": [_num(v) for v in inst.to_user_order(list(inst.r))],
        "m": [_num(v) for v in inst.to_user_order(list(inst.m))],
        "M": [_num(v) for v in inst.to_user_order(list(inst.M))],
    }


def _witness_dict(inst: ProblemInstance, w: solver.MaximizerConfig) -> dict:
    user = lambda idx: sorted(inst.permutation[i] + 1 for i in idx)  # noqa: E731
    return {
        "j_plus": user(w.j_plus),
        "j_minus": user(w.j_minus),
        "h": inst.permutation[w.h] + 1,
        "xi_h": _num(w.xi_h),
    }


def _result_dict(inst: ProblemInstance, res: solver.RatioResult) -> dict:
    return {
        "z": _num(res.z),
        "regime": res.regime.label.value if res.regime is not None else None,
        "formula_id": res.formula_id,
        "witness": _witness_dict(inst, res.witness),
    }


def _verify(inst: ProblemInstance, z: float, resolution: int) -> dict:
    oz = solver.grid_oracle(inst, resolution=resolution)
    return {"oracle_z": _num(oz), "gap": _num(abs(z - oz))}


def _ratio_report(command, inst, res, args) -> tuple[dict, int]:
    report = {
        "command": command,
        "instance": _instance_dict(inst),
        "result": _result_dict(inst, res),
        "verification": None,
        "seed": args.seed,
    }
    status = EXIT_OK
    if args.verify:
        report["verification"] = _verify(inst, res.z, args.resolution)
        if report["verification"]["gap"] > VERIFY_TOL:
            status = EXIT_MISMATCH
    return report, status


def cmd_compute(args) -> tuple[list[dict], int]:
    reports, status = [], EXIT_OK
    for inst in _instances(args):
        if inst.k in (2, 3, 4) and not args.solver:
            res = closedform.closed_form(inst)
        else:
            res = solver.solve_amccr(inst, cap=args.cap)
        rep, st = _ratio_report("compute", inst, res, args)
        reports.append(rep)
        status = max(status, st)
    return reports, status


def cmd_solve(args) -> tuple[list[dict], int]:
    reports, status = [], EXIT_OK
    for inst in _instances(args):
        res = solver.solve_amccr(inst, cap=args.cap)
        rep, st = _ratio_report("solve", inst, res, args)
        reports.append(rep)
        status = max(status, st)
    return reports, status


def _verdict_dict(p: hardness.PartitionInstance, v: hardness.PartitionVerdict) -> dict:
    wit = None
    if v.witness is not None:
        wit = sorted(p.permutation[i] + 1 for i in v.witness)
    return {"is_positive": v.is_positive, "witness": wit, "method": v.method.value}


def cmd_partition(args) -> tuple[list[dict], int]:
    if args.a is not None and args.input is not None:
        raise UsageError("give exactly one of --a or --input")
    if args.a is not None:
        rows = [args.a]
    elif args.input is not None:
        rows = _read_lines(args.input)
    else:
        raise UsageError("partition needs --a or --input")
    reports, status = [], EXIT_OK
    for text in rows:
        try:
            p = hardness.PartitionInstance.from_values(_ints(text))
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        va = hardness.alg_p(p, cap=args.cap)
        vd = hardness.dp_oracle(p)
        agree = va.is_positive == vd.is_positive and va.check(p) and vd.check(p)
        user_a = [0] * p.k
        for j, i in enumerate(p.permutation):
            user_a[i] = p.a[j]
        reports.append(
            {
                "command": "partition",
                "instance": {"k": p.k, "a": user_a},
                "result": {
                    "is_positive": va.is_positive,
                    "agree": agree,
                    "alg_p": _verdict_dict(p, va),
                    "dp_oracle": _verdict_dict(p, vd),
                },
                "verification": None,
                "seed": args.seed,
            }
        )
        if not agree:
            status = EXIT_MISMATCH
    return reports, status


def cmd_certify(args) -> tuple[list[dict], int]:
    insts = _instances(args)
    if any(not inst.has_prices for inst in insts):
        raise UsageError("certify needs actual prices: use --m/--M or 'm...;M...' input lines")
    reports, status = [], EXIT_OK
    for inst in insts:
        rep = game.certify(inst, trials=args.trials, seed=args.seed)
        res = solver.solve_amccr(inst, cap=args.cap)
        result = _result_dict(inst, res)
        result["certify"] = rep.to_dict()
        reports.append(
            {
                "command": "certify",
                "instance": _instance_dict(inst),
                "result": result,
                "verification": None,
                "seed": args.seed,
            }
        )
        if not rep.ok:
            status = EXIT_MISMATCH
    return reports, status


def _parse_axis(text: str, k: int) -> tuple[int, np.ndarray]:
    # "i=lo:hi:n" with a 1-based coordinate index
    try:
        idx, rng = text.split("=", 1)
        lo, hi, n = rng.split(":")
        i, lo, hi, n = int(idx), float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"axis must look like 'i=lo:hi:n', got {text!r}") from None
    if not 1 <= i <= k:
        raise UsageError(f"axis index {i} out of range 1..{k}")
    if n < 1 or lo < 1.0 or hi < lo:
        raise UsageError(f"bad axis range {text!r}: need 1 <= lo <= hi and n >= 1")
    return i - 1, np.linspace(lo, hi, n)


def cmd_sweep(args) -> tuple[list[dict], int]:
    if args.r is None:
        raise UsageError("sweep needs a base tuple via --r")
    base = _floats(args.r)
    k = len(base)
    if k not in (2, 3, 4):
        raise UsageError(f"sweep needs k in (2, 3, 4), got k={k}")
    axes = [_parse_axis(a, k) for a in args.axis or []]
    if len({i for i, _ in axes}) != len(axes):
        raise UsageError("each coordinate may be swept by at most one axis")
    n_rows = math.prod(len(v) for _, v in axes)
    if n_rows > MAX_SWEEP_ROWS:
        raise CapacityError(f"sweep of {n_rows} rows exceeds {MAX_SWEEP_ROWS}")
    rows, status = [], EXIT_OK
    for combo in itertools.product(*(v for _, v in axes)):
        r = list(base)
        for (i, _), val in zip(axes, combo):
            r[i] = float(val)
        inst = _make_instance(r=r)
        zc = closedform.closed_form(inst)
        zs = solver.solve_amccr(inst, cap=args.cap)
        gap = abs(zc.z - zs.z)
        if gap > SWEEP_REL_TOL * max(1.0, zs.z):
            status = EXIT_MISMATCH
        rows.append(
            {
                "r": r,
                "regime": zc.regime.label.value if zc.regime is not None else zc.formula_id,
                "z_closed": _num(zc.z),
                "z_solver": _num(zs.z),
                "gap": _num(gap),
            }
        )
    return [{"command": "sweep", "k": k, "rows": rows, "seed": args.seed}], status


def _flat(report: dict) -> dict:
    out = {}

    def walk(prefix, v):
        if isinstance(v, dict):
            for key, val in v.items():
                walk(f"{prefix}.{key}" if prefix else key, val)
        elif isinstance(v, list):
            out[prefix] = ";".join(_cell(x) for x in v)
        else:
            out[prefix] = _cell(v)

    walk("", report)
    return out


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, SIG)
    if isinstance(v, list):
        return ";".join(_cell(x) for x in v)
    return str(v)


def _emit_sweep(report: dict, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(report) + "\n")
        return
    k = report["k"]
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"r{i + 1}" for i in range(k)] + ["regime", "z_closed", "z_solver", "gap"])
    for row in report["rows"]:
        w.writerow([_cell(x) for x in row["r"]] + [row["regime"]] + [_cell(row[c]) for c in ("z_closed", "z_solver", "gap")])


def emit(reports: list[dict], fmt: str, out=None):
    out = out or sys.stdout
    if reports and reports[0]["command"] == "sweep":
        _emit_sweep(reports[0], fmt, out)
        return
    if fmt == "json":
        for rep in reports:
            out.write(json.dumps(rep) + "\n")
    elif fmt == "csv":
        flats = [_flat(r) for r in reports]
        cols = list(dict.fromkeys(c for f in flats for c in f))
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for f in flats:
            w.writerow([f.get(c, "") for c in cols])
    else:
        for i, rep in enumerate(reports):
            if i:
                out.write("\n")
            for key, val in _flat(rep).items():
                out.write(f"{key}: {val}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amccr", description="Arithmetic-mean competitive ratio toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, instance=True, fmt="json"):
        if instance:
            p.add_argument("--r", help="comma-separated fluctuation ratios")
            p.add_argument("--m", help="comma-separated lower price bounds")
            p.add_argument("--M", help="comma-separated upper price bounds")
        p.add_argument("--input", help="file with one instance per line; '#' starts a comment")
        p.add_argument("--format", choices=("json", "csv", "plain"), default=fmt)
        p.add_argument("--cap", type=int, default=solver.DEFAULT_CAP, help="solver enumeration cap on k")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("compute", help="closed formula for k <= 4, solver otherwise")
    common(p)
    p.add_argument("--solver", action="store_true", help="force the exact solver")
    p.add_argument("--verify", action="store_true", help="cross-check against the grid oracle")
    p.add_argument("--resolution", type=int, default=2001)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("solve", help="exact solver with its maximizer configuration")
    common(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--resolution", type=int, default=2001)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("partition", help="decide PARTITION by reduction and by DP")
    common(p, instance=False)
    p.add_argument("--a", help="comma-separated positive integers")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("certify", help="empirical two-sided check of the ratio in the game")
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="closed formula vs solver over an r-grid (CSV)")
    p.add_argument("--r", help="base tuple; swept coordinates are overwritten")
    p.add_argument("--axis", action="append", help="'i=lo:hi:n', 1-based coordinate i; repeatable")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="csv")
    p.add_argument("--cap", type=int, default=solver.DEFAULT_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[list[str]] = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be >= 1")
        if getattr(args, "resolution", 2) < 2:
            raise UsageError("--resolution must be >= 2")
        reports, status = args.func(args)
    except UsageError as exc:
        print(f"amccr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"amccr: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"amccr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(reports, args.format, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
