"""Command-line front end.

Exit codes: 0 success, 1 experiment property failure, 2 argument or domain
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import io
import math
import sys
from dataclasses import dataclass, fields

from . import bounds
from .bounds import BoundParams
from .errors import ParameterDomainError, ScheduleSizeError, SolverError
from .experiment import identity_suite, run_experiment
from .schedule import Schedule, arithmetic_schedule, geometric_schedule, validate_schedule

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

CURVE_RATIOS = (1.0, 0.5, 0.2, 0.1, 0.01)
CURVE_ALPHA = (1.1, 4.0, 0.05)

REQUIRED = {
    "bound": ("alpha", "m", "big_m"),
    "curve": (),
    "schedule": ("n1", "count"),
    "validate": ("sizes", "alpha", "m", "big_m"),
    "experiment": (),
    "identity-check": (),
}
FLAG_NAMES = {"big_m": "--M", "n1": "--n1"}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: float | None = None
    m: float | None = None
    big_m: float | None = None
    rho: float | None = None
    gamma: float | None = None
    n1: int | None = None
    count: int | None = None
    step: int | None = None
    sizes: str | None = None
    tol: float | None = None
    seed: int = 42
    replicates: int = 200
    output_path: str | None = None
    format: str = "csv"
    alpha_min: float = CURVE_ALPHA[0]
    alpha_max: float = CURVE_ALPHA[1]
    alpha_step: float = CURVE_ALPHA[2]
    ratios: str | None = None

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in names and v is not None})

    def validate(self) -> None:
        missing = [
            FLAG_NAMES.get(name, "--" + name.replace("_", "-"))
            for name in REQUIRED[self.command]
            if getattr(self, name) is None
        ]
        if missing:
            raise UsageError(f"{self.command} requires {', '.join(missing)}")
        if self.seed < 0 or self.seed >= 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.replicates < 2:
            raise UsageError("--replicates must be at least 2")

    def params(self) -> BoundParams:
        return BoundParams(self.alpha, self.m, self.big_m)


def fmt(x: float) -> str:
    """12 significant digits; integers print without a decimal point."""
    if not math.isfinite(x):
        raise ValueError(f"refusing to emit non-finite value {x!r}")
    return f"{x:.12g}"


def fmt_ratio(excess: float, deficit: float) -> str:
    """Print a value in (1, 2) as ``1 + excess`` or ``2 - deficit`` in exact decimal.

    The smaller of the two offsets keeps 12 significant digits, so values
    that round to 1.0 or 2.0 in double precision still print distinguishably.
    """
    offset, base, sign = (excess, 1, 1) if excess <= deficit else (deficit, 2, -1)
    d = decimal.Decimal(f"{offset:.12g}")
    with decimal.localcontext() as ctx:
        ctx.prec = 16 + max(0, -d.adjusted())
        value = decimal.Decimal(base) + sign * d
    text = format(value, "f")
    return text.rstrip("0").rstrip(".") if "." in text else text


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _pretty_text(header, rows, comments=()) -> str:
    table = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[j]) for r in table) for j in range(len(header))]
    lines = [f"# {c}" for c in comments]
    for r in table:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render(cfg: RunConfig, header, rows, comments=()) -> str:
    if cfg.format == "pretty":
        return _pretty_text(header, rows, comments)
    return _csv_text(header, rows, comments)


def cmd_bound(cfg: RunConfig) -> tuple[str, int]:
    p = cfg.params()
    sol = bounds.solve_rho_star(p)
    header = [
        "alpha", "m", "M", "closed_form_floor", "rho_star", "lipschitz",
        "min_inefficiency_at_rho_star", "iterations",
    ]
    row = [
        fmt(p.alpha), fmt(p.m), fmt(p.big_m),
        fmt_ratio(bounds.floor_excess(p), 1 - bounds.floor_excess(p)),
        fmt_ratio(sol.excess, sol.deficit),
        fmt(bounds.lipschitz_bound(p)),
        fmt(bounds.min_inefficiency_excess(sol.excess, p.alpha)),
        sol.iterations,
    ]
    if cfg.format == "pretty":
        width = max(map(len, header))
        text = "".join(f"{h.ljust(width)}  {v}\n" for h, v in zip(header, row))
        return text, EXIT_OK
    return _csv_text(header, [row]), EXIT_OK


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"malformed {what} list: {text!r}") from None
    if not values:
        raise UsageError(f"empty {what} list")
    return values


def _parse_sizes(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed size list: {text!r}") from None
    return values


def cmd_curve(cfg: RunConfig) -> tuple[str, int]:
    ratios = _parse_floats(cfg.ratios, "ratio") if cfg.ratios else list(CURVE_RATIOS)
    if cfg.alpha_step <= 0 or cfg.alpha_max < cfg.alpha_min:
        raise UsageError("need --alpha-step > 0 and --alpha-max >= --alpha-min")
    count = int(math.floor((cfg.alpha_max - cfg.alpha_min) / cfg.alpha_step + 1e-9)) + 1
    alphas = [round(cfg.alpha_min + k * cfg.alpha_step, 10) for k in range(count)]
    rows = []
    for r in sorted(ratios):
        for a in alphas:
            p = BoundParams.from_ratio(a, r)
            sol = bounds.solve_rho_star(p)
            fe = bounds.floor_excess(p)
            rows.append([fmt(a), fmt(r), fmt_ratio(sol.excess, sol.deficit), fmt_ratio(fe, 1 - fe)])
    comments = [
        f"grid: alpha from {fmt(cfg.alpha_min)} to {fmt(alphas[-1])} step {fmt(cfg.alpha_step)}; "
        f"m/M in {{{', '.join(fmt(r) for r in sorted(ratios, reverse=True))}}}",
        "rho_star and floor print as 1 + offset or 2 - offset with the offset to 12 significant digits",
    ]
    return render(cfg, ["alpha", "ratio_m_over_M", "rho_star", "floor"], rows, comments), EXIT_OK


def _schedule_rows(sizes):
    rows = []
    for k, n in enumerate(sizes, start=1):
        ratio = fmt(sizes[k] / n) if k < len(sizes) else ""
        rows.append([k, n, ratio])
    return rows


def cmd_schedule(cfg: RunConfig) -> tuple[str, int]:
    if cfg.rho is not None and cfg.step is not None:
        raise UsageError("give either --rho or --step, not both")
    if cfg.step is not None:
        sched = arithmetic_schedule(cfg.n1, cfg.step, cfg.count)
        comment = f"arithmetic step {cfg.step}"
    else:
        rho = cfg.rho
        if rho is None:
            if cfg.alpha is None or cfg.m is None or cfg.big_m is None:
                raise UsageError("schedule requires --rho, --step, or --alpha/--m/--M")
            rho = bounds.solve_rho_star(cfg.params()).rho_star
        sched = geometric_schedule(cfg.n1, rho, cfg.count)
        comment = f"geometric ratio {fmt(rho)}"
    return render(cfg, ["k", "n_k", "ratio"], _schedule_rows(sched.sizes), [comment]), EXIT_OK


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    sched = Schedule(_parse_sizes(cfg.sizes))
    tol = 1e-9 if cfg.tol is None else cfg.tol
    report = validate_schedule(sched, cfg.params(), tol=tol)
    bad = {k for k, _ in report.violations}
    rows = [
        [k, fmt(r), fmt(report.floor), "false" if k in bad else "true"]
        for k, r in enumerate(report.ratios, start=1)
    ]
    verdict = "admissible" if report.admissible else f"{len(bad)} inadmissible step(s)"
    comments = [f"rho_star {fmt(report.floor)}; tolerance {tol:g}; {verdict}"]
    return render(cfg, ["k", "ratio", "floor", "admissible"], rows, comments), EXIT_OK


def cmd_experiment(cfg: RunConfig) -> tuple[str, int]:
    report = run_experiment(seed=cfg.seed, replicates=cfg.replicates)
    rows = [
        [g, f, n, fmt(r), "" if s is None else fmt(s)] for g, f, n, r, s in report.rows
    ]
    comments = [f"seed {cfg.seed}; replicates {cfg.replicates}"]
    text = render(cfg, ["generator", "integrand", "n", "rms", "slope_so_far"], rows, comments)
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}", file=sys.stderr)
    return text, EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_identity_check(cfg: RunConfig) -> tuple[str, int]:
    cases = identity_suite(seed=cfg.seed)
    rows = [
        [c.generator, c.integrand, c.identity, c.n_lo, c.n_hi, fmt(c.residual),
         fmt(c.relative), "true" if c.passed else "false"]
        for c in cases
    ]
    failed = sum(not c.passed for c in cases)
    print(f"{'PASS' if not failed else 'FAIL'} exact_identities: {len(cases)} cases, "
          f"{failed} failed", file=sys.stderr)
    header = ["generator", "integrand", "identity", "n_lo", "n_hi", "residual", "relative", "passed"]
    return render(cfg, header, rows), EXIT_PROPERTY if failed else EXIT_OK


COMMANDS = {
    "bound": cmd_bound,
    "curve": cmd_curve,
    "schedule": cmd_schedule,
    "validate": cmd_validate,
    "experiment": cmd_experiment,
    "identity-check": cmd_identity_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", dest="output_path", metavar="PATH", help="default: stdout")
    common.add_argument("--format", choices=("csv", "pretty"), default="csv")
    common.add_argument("--seed", type=int, default=42, help="unsigned 64-bit master seed")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--alpha", type=float, help="rate exponent, > 1")
    params.add_argument("--m", dest="m", type=float, help="lower-bound constant")
    params.add_argument("--M", dest="big_m", type=float, help="upper-bound constant")

    parser = argparse.ArgumentParser(
        prog="geospacing",
        description="Extension-factor bounds for rate-optimal extensible quadrature.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bound", parents=[common, params], allow_abbrev=False,
                   help="critical extension factor and related constants")

    curve = sub.add_parser("curve", parents=[common], allow_abbrev=False,
                           help="rho_star over a grid of alpha and m/M")
    curve.add_argument("--alpha-min", type=float, default=CURVE_ALPHA[0])
    curve.add_argument("--alpha-max", type=float, default=CURVE_ALPHA[1])
    curve.add_argument("--alpha-step", type=float, default=CURVE_ALPHA[2])
    curve.add_argument("--ratios", help="comma-separated m/M levels")

    sched = sub.add_parser("schedule", parents=[common, params], allow_abbrev=False,
                           help="geometric or arithmetic sample-size schedule")
    sched.add_argument("--n1", type=int)
    sched.add_argument("--rho", type=float)
    sched.add_argument("--step", type=int)
    sched.add_argument("--count", type=int)

    val = sub.add_parser("validate", parents=[common, params], allow_abbrev=False,
                         help="check a schedule against rho_star")
    val.add_argument("--sizes", help="comma-separated sample sizes")
    val.add_argument("--tol", type=float)

    exp = sub.add_parser("experiment", parents=[common], allow_abbrev=False,
                         help="seeded RMS experiment suite")
    exp.add_argument("--replicates", type=int, default=200)

    sub.add_parser("identity-check", parents=[common], allow_abbrev=False,
                   help="exact error identities over the registered suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig.from_namespace(ns)
    try:
        cfg.validate()
        text, code = COMMANDS[cfg.command](cfg)
    except (UsageError, ParameterDomainError, ScheduleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"error: {exc} (best iterate {exc.best!r})", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.output_path is None:
            sys.stdout.write(text)
        else:
            with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
