"""Command-line interface: ``gammix {eval,verify,grid,sample,cf-check}``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 quadrature/iteration non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable, Sequence

from . import identities as ident
from . import mixtures as mix
from . import special_functions as sf
from .quadrature import QuadratureOptions

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3

TOLERANCE_ENV = "GAMMIX_TOLERANCE"
REPORT_FIELDS = (
    "identity", "nu", "b", "alpha", "lhs", "rhs", "abs_err", "rel_err",
    "pass", "evals", "subdivisions", "converged", "seed",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite real number: {text!r}")
    return value


def float_list(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise argparse.ArgumentTypeError(f"malformed comma-separated list: {text!r}")
    return tuple(finite_float(p) for p in parts)


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return ident.DEFAULT_TOLERANCE
    try:
        value = finite_float(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{TOLERANCE_ENV}: {exc}") from None
    if not value > 0:
        raise UsageError(f"{TOLERANCE_ENV} must be positive, got {raw!r}")
    return value


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def format_value(value: float) -> str:
    """17 significant digits, as printed by ``eval``."""
    return format(value, ".17g")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_json(rows: list[dict], summary: dict | None = None) -> str:
    if summary is None and len(rows) == 1:
        payload = rows[0]
    else:
        payload = {"reports": rows, "summary": summary or {}}
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def canonicalize_json(text: str) -> str:
    """Re-serialise a report file the way :func:`render_json` writes it."""
    return json.dumps(json.loads(text), indent=2, allow_nan=False) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for row in rows:
        writer.writerow([_csv_cell(row[k]) for k in REPORT_FIELDS])
    return buf.getvalue()


def render_text(reports: list[ident.VerificationReport]) -> str:
    lines = []
    for r in reports:
        c = r.case
        status = "PASS" if r.passed else "FAIL"
        extra = f" se={r.mc_std_error!r}" if r.mc_std_error is not None else ""
        lines.append(
            f"{status} {c.identity.value} nu={c.nu!r} b={c.b!r} alpha={c.alpha!r} "
            f"lhs={r.lhs!r} rhs={r.rhs!r} abs_err={r.abs_err!r} rel_err={r.rel_err!r} "
            f"converged={str(r.converged).lower()}{extra}"
        )
    return "\n".join(lines) + "\n"


def render_reports(reports, fmt: str, summary: dict | None = None) -> str:
    rows = [r.as_row() for r in reports]
    if fmt == "json":
        return render_json(rows, summary)
    if fmt == "csv":
        return render_csv(rows)
    return render_text(reports)


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        write_atomic(output, text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


_EVAL_FUNCTIONS: dict[str, tuple[tuple[str, ...], Callable[..., float]]] = {
    "gamma": (("a",), sf.gamma),
    "lower-inc-gamma": (("a", "x"), sf.lower_inc_gamma),
    "upper-inc-gamma": (("a", "x"), sf.upper_inc_gamma),
    "pareto-pdf": (("lam", "x"), mix.pareto_mixture_pdf),
    "pareto-cf": (("lam", "t"), mix.pareto_mixture_cf),
    "pareto-mgf": (("lam", "u"), mix.pareto_mgf),
    "beta-pdf": (("lam", "x"), mix.beta_mixture_pdf),
    "beta-cf": (("lam", "t"), mix.beta_mixture_cf),
}


def cmd_eval(args) -> int:
    names, fn = _EVAL_FUNCTIONS[args.fn]
    values = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            flag = "--lambda" if name == "lam" else f"--{name}"
            raise UsageError(f"eval --fn {args.fn} requires {flag}")
        values.append(value)
    print(format_value(fn(*values)))
    return EXIT_OK


def _quad_opts(args) -> QuadratureOptions:
    return QuadratureOptions(max_subdivisions=args.max_subdivisions)


def _exit_for(reports) -> int:
    if all(r.passed for r in reports):
        return EXIT_OK
    if any(not r.converged for r in reports):
        return EXIT_NONCONVERGED
    return EXIT_FAIL


def cmd_verify(args) -> int:
    tolerance = args.tolerance if args.tolerance is not None else default_tolerance()
    case = ident.IdentityCase(args.identity, args.nu, args.b, args.alpha)
    report = ident.verify_case(case, _quad_opts(args), tolerance, n=args.n, seed=args.seed)
    _emit(render_reports([report], args.format), args.output)
    return _exit_for([report])


def cmd_grid(args) -> int:
    tolerance = args.tolerance if args.tolerance is not None else default_tolerance()
    grid = ident.GridSpec(args.identity, args.nu, args.b, args.alpha, tolerance)
    result = ident.verify_grid(grid, _quad_opts(args), workers=args.workers, n=args.n, seed=args.seed)
    summary = {"pass": result.n_pass, "fail": result.n_fail, "total": len(result.reports)}
    text = render_reports(result.reports, args.format, summary if args.format == "json" else None)
    if len(result.reports) == 1 and args.format == "json":
        text = render_json([result.reports[0].as_row()])
    _emit(text, args.output)
    print(result.summary(), file=sys.stderr if args.output is None else sys.stdout)
    return _exit_for(result.reports)


def _mixing_law(kind: str, lam: float) -> mix.MixingLaw:
    return mix.Pareto(lam) if kind == "pareto" else mix.BetaPower(lam)


def render_sample(batch: mix.SampleBatch) -> str:
    lines = [f"# gammix sample: {batch.spec.describe()} seed={batch.seed} n={batch.n}", "x"]
    lines.extend(repr(float(v)) for v in batch.values)
    return "\n".join(lines) + "\n"


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    spec = mix.MixtureSpec(_mixing_law(args.mixing, args.lam), args.mu, args.theta, args.sigma)
    batch = mix.sample(spec, args.n, args.seed)
    _emit(render_sample(batch), args.output)
    return EXIT_OK


def cmd_cf_check(args) -> int:
    if args.n < ident.MIN_MC_N:
        raise UsageError(f"--n must be >= {ident.MIN_MC_N}, got {args.n}")
    reports = [
        ident.mc_cf_check(args.mixing, args.lam, t, n=args.n, seed=args.seed, k_sigma=args.k_sigma)
        for t in args.t
    ]
    summary = {"pass": sum(r.passed for r in reports), "fail": sum(not r.passed for r in reports), "total": len(reports)}
    _emit(render_reports(reports, args.format, summary if args.format == "json" else None), args.output)
    return _exit_for(reports)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_output(p: argparse.ArgumentParser, default_format: str = "text") -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
    p.add_argument("--output", type=Path, default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gammix", description="Incomplete gamma integrals and normal variance mixtures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a special function or mixture formula")
    p.add_argument("--fn", required=True, choices=sorted(_EVAL_FUNCTIONS))
    for name in ("a", "x", "t", "u"):
        p.add_argument(f"--{name}", type=finite_float)
    p.add_argument("--lambda", dest="lam", type=finite_float)
    p.set_defaults(handler=cmd_eval)

    identity_names = [i.value for i in ident.Identity]

    p = sub.add_parser("verify", help="check one identity at one parameter point")
    p.add_argument("--identity", required=True, choices=identity_names)
    p.add_argument("--nu", required=True, type=finite_float)
    p.add_argument("--b", required=True, type=finite_float)
    p.add_argument("--alpha", type=finite_float, default=1.0)
    p.add_argument("--tolerance", type=finite_float, default=None)
    p.add_argument("--max-subdivisions", type=int, default=200)
    p.add_argument("--n", type=int, default=ident.DEFAULT_MC_N)
    p.add_argument("--seed", type=int, default=42)
    _add_output(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("grid", help="check one identity over a parameter grid")
    p.add_argument("--identity", required=True, choices=identity_names)
    p.add_argument("--nu", type=float_list, default=None)
    p.add_argument("--b", type=float_list, default=(0.5, 1.0, 2.0))
    p.add_argument("--alpha", type=float_list, default=(0.5, 1.0, 2.0))
    p.add_argument("--tolerance", type=finite_float, default=None)
    p.add_argument("--max-subdivisions", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--n", type=int, default=ident.DEFAULT_MC_N)
    p.add_argument("--seed", type=int, default=42)
    _add_output(p, default_format="csv")
    p.set_defaults(handler=cmd_grid)

    p = sub.add_parser("sample", help="draw from a Pareto or beta variance(-mean) mixture")
    p.add_argument("--mixing", required=True, choices=("pareto", "beta"))
    p.add_argument("--lambda", dest="lam", required=True, type=finite_float)
    p.add_argument("--mu", type=finite_float, default=0.0)
    p.add_argument("--theta", type=finite_float, default=0.0)
    p.add_argument("--sigma", type=finite_float, default=1.0)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("cf-check", help="Monte Carlo check of a closed-form characteristic function")
    p.add_argument("--mixing", required=True, choices=("pareto", "beta"))
    p.add_argument("--lambda", dest="lam", required=True, type=finite_float)
    p.add_argument("--t", required=True, type=float_list)
    p.add_argument("--n", type=int, default=ident.DEFAULT_MC_N)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--k-sigma", type=finite_float, default=ident.DEFAULT_K_SIGMA)
    _add_output(p)
    p.set_defaults(handler=cmd_cf_check)
    return parser


_DEFAULT_GRID_NU = {
    ident.Identity.INT1: (0.6, 1.0, 1.5, 2.5),
    ident.Identity.INT2: (0.25, 0.5, 1.0, 2.0),
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "grid" and args.nu is None:
            args.nu = _DEFAULT_GRID_NU.get(ident.Identity(args.identity), (0.5, 1.0, 2.0))
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        return args.handler(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except sf.ConvergenceError as exc:
        print(f"gammix: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (sf.DomainError, ValueError) as exc:
        print(f"gammix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # the exit-code contract stays total
        print(f"gammix: unexpected error: {exc!r}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
