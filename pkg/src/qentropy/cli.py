"""``qentropy`` command line: dre, derivative, verify, bounds.

Exit codes: 0 success, 1 validation or I/O error, 2 numerical
non-convergence, 3 property-suite failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

from . import bounds, verify
from .entropy import relative_entropy_spectral
from .errors import NumericalError, QuadNotConverged, ValidationError
from .integral import entropy_derivative_fd, entropy_derivative_integral, relative_entropy_integral
from .io import load_matrix
from .linalg import as_hermitian, as_psdh, support_contained
from .quadrature import QuadConfig

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_PROPERTY = 0, 1, 2, 3


class CliFailure(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def _emit(report: dict, out: str | None):
    report = {**report, "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()}
    text = json.dumps(report, indent=2, default=_json_default)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _qcfg(args) -> QuadConfig:
    return QuadConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_subdivisions=args.max_subdivisions)


def cmd_dre(args) -> dict:
    rho, sigma = as_psdh(load_matrix(args.rho)), as_psdh(load_matrix(args.sigma))
    report = {"support_ok": support_contained(rho, sigma), "infinite": False}
    values = []
    if args.method in ("spectral", "both"):
        d = relative_entropy_spectral(rho, sigma)
        report["spectral"] = d.value if d.finite else None
        report["infinite"] = not d.finite
        values.append(d)
    if args.method in ("integral", "both"):
        forms = (1, 2) if args.form == "both" else (int(args.form),)
        for form in forms:
            d, res = relative_entropy_integral(rho, sigma, form, _qcfg(args))
            report[f"integral_form{form}"] = d.value if d.finite else None
            report[f"error_estimate_form{form}"] = res.error_estimate
            report[f"evaluations_form{form}"] = res.evaluations
            report["infinite"] = not d.finite
            values.append(d)
    finite = [v.value for v in values if v.finite]
    if len(finite) == len(values) and len(finite) > 1:
        report["agreement_gap"] = max(finite) - min(finite)
    return report


def cmd_derivative(args) -> dict:
    rho, sigma = load_matrix(args.rho), as_hermitian(load_matrix(args.sigma))
    value, res = entropy_derivative_integral(rho, sigma, args.m, _qcfg(args))
    report = {"m": args.m, "integral_value": value, "error_estimate": res.error_estimate}
    if args.check_fd:
        fd = -entropy_derivative_fd(rho, sigma, args.m) / math.factorial(args.m)
        gap = abs(value - fd)
        report.update(fd_value=fd, gap=gap)
        if gap > 1e-4 * max(abs(value), abs(fd), 1e-300):
            raise CliFailure(EXIT_NUMERIC, "integral and finite-difference values disagree", report)
    return report


def cmd_verify(args) -> dict:
    if args.trials < 1:
        raise ValidationError("--trials must be at least 1")
    if args.n < 1:
        raise ValidationError("--n must be at least 1")
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    results = [verify.run_suite(s, args.trials, args.seed, args.n) for s in suites]
    report = {
        "suite": args.suite,
        "trials": args.trials,
        "seed": args.seed,
        "worst_slack": min(r["worst_slack"] for r in results),
        "failures": sum(r["failures"] for r in results),
        "suites": results,
    }
    if "bounds" in suites:
        rows = bounds.bounds_table(21, 21)
        ordering = min(
            min(r["min_bound"] - r["explicit_bound"], r["explicit_bound"] - r["kim_bound"]) for r in rows
        )
        report["bounds_table"] = rows
        report["bounds_ordering_slack"] = ordering
        if ordering < -1e-10:
            report["failures"] += 1
    if report["failures"]:
        raise CliFailure(EXIT_PROPERTY, f"{report['failures']} property failures", report)
    return report


def cmd_bounds(args) -> dict:
    rows = bounds.bounds_table(args.grid_T, args.grid_q)
    bounds.write_bounds_csv(rows, args.out)
    return {"rows": len(rows), "out": args.out}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qentropy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def quad_flags(sp):
        defaults = QuadConfig()
        sp.add_argument("--rel-tol", type=float, default=defaults.rel_tol)
        sp.add_argument("--abs-tol", type=float, default=defaults.abs_tol)
        sp.add_argument("--max-subdivisions", type=int, default=defaults.max_subdivisions)
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("dre", help="relative entropy, spectral and/or integral")
    sp.add_argument("rho")
    sp.add_argument("sigma")
    sp.add_argument("--form", choices=("1", "2", "both"), default="both")
    sp.add_argument("--method", choices=("spectral", "integral", "both"), default="both")
    quad_flags(sp)
    sp.set_defaults(func=cmd_dre)

    sp = sub.add_parser("derivative", help="m-th directional derivative of the entropy")
    sp.add_argument("rho")
    sp.add_argument("sigma")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--check-fd", action="store_true")
    quad_flags(sp)
    sp.set_defaults(func=cmd_derivative)

    sp = sub.add_parser("verify", help="seeded randomized property suites")
    sp.add_argument("--suite", choices=(*verify.SUITES, "all"), default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bounds", help="CSV table of lower bounds on the Holevo quantity")
    sp.add_argument("--grid-T", type=int, default=21)
    sp.add_argument("--grid-q", type=int, default=21)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_bounds)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except CliFailure as exc:
        print(f"qentropy: {exc}", file=sys.stderr)
        if exc.report is not None:
            _emit(exc.report, getattr(args, "out", None) if args.command != "bounds" else None)
        return exc.code
    except (QuadNotConverged, NumericalError) as exc:
        print(f"qentropy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"qentropy: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, None if args.command == "bounds" else args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
