"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 domain error, 3 non-convergence,
4 identity or oracle failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field

from . import analysis
from .backends import DOUBLE, BigFixedBackend
from .bigfixed import BigFixed, bf_to_decimal, frac_bits_for, plan_precision
from .errors import DomainError, NonConvergence
from .radical_core import pi_value

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NONCONV, EXIT_VERIFY = range(5)

DEFAULT_TOL = 1e-15
BIGFIXED_DIGITS = 30


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: object
    timing_ms: float = 0.0
    backend: dict = field(default_factory=lambda: DOUBLE.describe())

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "timing_ms": round(self.timing_ms, 3),
            "backend": self.backend,
        }
        return json.dumps(body, indent=2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value, full: bool) -> str:
    return f"{float(value):.{17 if full else 8}g}"


def _render17(value) -> str:
    if isinstance(value, BigFixed):
        return bf_to_decimal(value, 17)
    return f"{float(value):.17g}"


def _backend(name: str, x: float, iterations: int):
    if name == "double":
        return DOUBLE
    return BigFixedBackend(frac_bits_for(max(x, 2.0), iterations, BIGFIXED_DIGITS))


def _default_tol(name: str, tol):
    if tol is not None:
        return tol
    return DEFAULT_TOL if name == "double" else 10.0**-BIGFIXED_DIGITS


def _limit_backend(name: str, x: float, tol: float):
    if name == "double":
        return DOUBLE
    plan = plan_precision(max(x, 1.0 + 1e-9), BIGFIXED_DIGITS)
    return _backend(name, x, 2 * plan.iterations + 64)


def cmd_eval(args):
    if args.iters < 0:
        raise UsageError("--iters must be non-negative")
    b = _backend(args.backend, args.x, args.iters)
    value = pi_value(args.x, args.iters, b)
    report = RunReport(
        "eval", {"x": args.x, "iters": args.iters}, {"value": float(value)}, backend=b.describe()
    )
    return report, _fmt(value, args.full)


def cmd_limit(args):
    tol = _default_tol(args.backend, args.tol)
    b = _limit_backend(args.backend, args.x, tol)
    est = analysis.pi_limit(args.x, analysis.LimitPolicy(rel_tol=tol, backend=b))
    outputs = {
        "value": float(est.value),
        "iterations": est.iterations,
        "error_bound": float(est.error_bound),
        "converged": est.converged,
    }
    report = RunReport("limit", {"x": args.x, "tol": tol}, outputs, backend=b.describe())
    text = f"{_fmt(est.value, args.full)}  (iterations {est.iterations}, error bound {float(est.error_bound):.3g})"
    return report, text


def table_rows(backend_name: str = "double", iters: int = 50) -> list:
    """Recompute the published table; rows off by more than 1e-6 are adjudicated in fixed point."""
    rows = []
    for x, paper in analysis.TABLE_ONE:
        b = _backend(backend_name, x, iters)
        value = float(pi_value(x, iters, b))
        dev = abs(value - paper)
        row = {"x": x, "value": value, "paper": paper, "deviation": dev, "flag": ""}
        if dev > 1e-6:
            exact = float(pi_value(x, iters, _backend("bigfixed", x, iters)))
            row["flag"] = "paper-discrepancy" if abs(exact - paper) > 1e-6 else "backend-error"
        rows.append(row)
    return rows


def cmd_table(args):
    rows = table_rows(args.backend)
    lines = [f"{'x':>8}  {'Pi_50(x)':>12}  {'paper':>12}  {'deviation':>10}"]
    for r in rows:
        lines.append(
            f"{r['x']:>8g}  {_fmt(r['value'], args.full):>12}  {r['paper']:>12}  {r['deviation']:>10.2e}"
            + (f"  {r['flag']}" if r["flag"] else "")
        )
    report = RunReport("table", {"iters": 50}, rows, backend=_backend(args.backend, 20.0, 50).describe())
    return report, "\n".join(lines)


def sweep_rows(x_min: float, x_max: float, steps: int, tol, backend_name: str) -> list:
    tol = _default_tol(backend_name, tol)
    if not 1 < x_min < x_max:
        raise DomainError(f"sweep range must satisfy 1 < x_min < x_max, got [{x_min}, {x_max}]")
    if steps < 2:
        raise UsageError("--steps must be >= 2")
    width = x_max - x_min
    xs = [x_min + width * k / (steps - 1) for k in range(steps)]
    b = _limit_backend(backend_name, x_max, tol)
    policy = analysis.LimitPolicy(rel_tol=tol, backend=b)
    return [(x, analysis.pi_limit(x, policy).value) for x in xs]


def write_sweep_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x", "pi_x"])
    for x, value in rows:
        writer.writerow([f"{x:.17g}", _render17(value)])


def cmd_sweep(args):
    rows = sweep_rows(args.x_min, args.x_max, args.steps, args.tol, args.backend)
    if args.out in (None, "-"):
        write_sweep_csv(rows, sys.stdout)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                write_sweep_csv(rows, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    inputs = {
        "x_min": args.x_min,
        "x_max": args.x_max,
        "steps": args.steps,
        "tol": _default_tol(args.backend, args.tol),
    }
    report = RunReport("sweep", inputs, {"rows": len(rows), "out": args.out or "-"})
    # CSV already went to stdout when no path was given
    return report, None if args.out in (None, "-") else f"wrote {len(rows)} rows to {args.out}"


def cmd_min(args):
    res = analysis.find_minimum(analysis.LimitPolicy(rel_tol=args.tol))
    outputs = {
        "x_star": res.x_star,
        "value": res.value,
        "bracket": list(res.bracket),
        "evaluations": res.evaluations,
    }
    report = RunReport("min", {"tol": args.tol}, outputs)
    text = (
        f"x* = {_fmt(res.x_star, args.full)}\n"
        f"pi_x* = {_fmt(res.value, args.full)}\n"
        f"bracket = [{res.bracket[0]:.10g}, {res.bracket[1]:.10g}]  ({res.evaluations} evaluations)"
    )
    return report, text


def cmd_verify(args):
    if args.only and args.only not in analysis.IDENTITY_THRESHOLDS:
        raise UsageError(f"unknown identity {args.only!r}")
    results = analysis.verify_identities(
        only=args.only, x=args.x, i=args.i, seed=args.seed, max_depth=args.max_depth
    )
    inputs = {"only": args.only, "x": args.x, "i": args.i, "seed": args.seed, "max_depth": args.max_depth}
    report = RunReport("verify", inputs, results)
    failed = [r for r in results if not r["passed"]]
    if failed:
        raise VerificationFailed(f"{len(failed)} identity checks exceeded their thresholds", report)
    return report, None


def digits_pair(count: int):
    """Nested-radical digits, Machin digits and their agreement."""
    viete = analysis.viete_pi_digits(count)
    machin = analysis.machin_pi_digits(count)
    return viete, machin, analysis.matching_digits(viete, machin)


def cmd_digits(args):
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    viete, machin, agree = digits_pair(args.count)
    report = RunReport(
        "digits",
        {"count": args.count},
        {"digits": viete, "oracle_agreement": agree},
        backend=BigFixedBackend(plan_precision(2, args.count).frac_bits).describe(),
    )
    if agree < args.count - 2:
        raise VerificationFailed(
            f"nested radical agrees with the Machin oracle on only {agree} of {args.count} digits", report
        )
    return report, viete


def _best_ms(fn, repeat=3) -> int:
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return max(1, round(best * 1000))


def cmd_bench(args):
    try:
        levels = [int(v) for v in args.levels.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --levels {args.levels!r}") from exc
    if not levels or min(levels) < 1:
        raise UsageError("--levels needs positive digit counts")
    results = []
    for algorithm, fn in (("nested-radical", analysis.viete_pi_digits), ("machin", analysis.machin_pi_digits)):
        for n in sorted(levels):
            ms = _best_ms(lambda: fn(n), args.repeat)
            results.append(
                {"algorithm": algorithm, "digits": n, "ms": ms, "digits_per_second": round(n * 1000 / ms, 1)}
            )
    report = RunReport("bench", {"levels": sorted(levels), "repeat": args.repeat}, results, backend={"kind": "bigfixed"})
    return report, None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pifunc", description="Generalized nested-radical Pi-function.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, backend=True):
        sp.add_argument("--json", action="store_true", help="emit a JSON run report")
        sp.add_argument("--full", action="store_true", help="17 significant digits")
        if backend:
            sp.add_argument("--backend", choices=("double", "bigfixed"), default="double")

    sp = sub.add_parser("eval", help="Pi_i(x) at a fixed depth")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--iters", type=int, default=50)
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("limit", help="pi_x = lim Pi_i(x) with an error bound")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--tol", type=float, default=None, help="relative tolerance (1e-15 double, 1e-30 bigfixed)")
    common(sp)
    sp.set_defaults(func=cmd_limit)

    sp = sub.add_parser("table", help="recompute the published table at depth 50")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sweep", help="CSV of (x, pi_x) over a grid")
    sp.add_argument("--x-min", type=float, default=1.01)
    sp.add_argument("--x-max", type=float, default=3.0)
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--tol", type=float, default=None, help="relative tolerance (1e-15 double, 1e-30 bigfixed)")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("min", help="minimum of pi_x by golden-section search")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common(sp, backend=False)
    sp.set_defaults(func=cmd_min)

    sp = sub.add_parser("verify", help="check the recurrence identities")
    sp.add_argument("--only", default=None, help="doubling, ratio, h-reflection or pi-reflection")
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--i", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-depth", type=int, default=40)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("digits", help="digits of pi from the x = 2 nested radical")
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_digits)

    sp = sub.add_parser("bench", help="time digit generation")
    sp.add_argument("--levels", default="50,200,1000")
    sp.add_argument("--repeat", type=int, default=3)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, text = args.func(args)
    except UsageError as exc:
        print(f"pifunc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"pifunc {args.command}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NonConvergence as exc:
        print(f"pifunc {args.command}: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except VerificationFailed as exc:
        if exc.report is not None:
            exc.report.timing_ms = (time.perf_counter() - t0) * 1000
            print(exc.report.to_json())
        print(f"pifunc {args.command}: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OverflowError as exc:
        print(f"pifunc {args.command}: overflow: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    report.timing_ms = (time.perf_counter() - t0) * 1000
    # verify and bench only speak JSON
    if args.command in ("verify", "bench") or (getattr(args, "json", False) and text is not None):
        print(report.to_json())
    elif text is not None:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
