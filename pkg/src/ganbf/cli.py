"""Command-line front end: parameter sweeps, convergence traces, profiles.

Subcommands
-----------
sweep    rate-vs-power comparison of the selected schemes, CSV + figure
trace    per-iteration state of one iterative solve, CSV + figure
profile  optimal power split versus total power, CSV + figure
check    necessary-condition report for one explicit allocation

Configuration may come from flags or from a key = value text file
(--config); flags override file values.  All powers are linear scale; rates
are nats unless --units bits is selected.  CSV output is UTF-8 with a fixed
header, '.' decimals and 17 significant digits, and is byte-deterministic
for a fixed seed.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 non-convergence on at
least one sweep point (the sweep still completes; offending rows are
flagged in the converged column).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from .kkt import f1, f2, necessary_condition
from .model import ChannelConfig, PowerAllocation
from .quadrature import QuadratureSpec
from .solver import (SolverConfig, solve_bruteforce, solve_goel_negi,
                     solve_iterative, solve_no_an)

SCHEMES = ("gan_iterative", "gan_bruteforce", "goel_negi", "no_an")
UNITS = ("nats", "bits")

SWEEP_HEADER = ("h_norm_sq", "p_total", "scheme", "rate", "p_u", "p_v1",
                "p_v2", "iterations", "converged", "nc_satisfied")
TRACE_HEADER = ("iteration", "p_u", "p_v1", "p_v2", "rate")
PROFILE_HEADER = ("h_norm_sq", "p_total", "scheme", "p_u", "p_v1", "p_v2", "rate")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """An experiment definition: channel conditions, budgets, schemes."""

    h_norm_sq_values: tuple
    p_total_values: tuple
    schemes: tuple
    output_path: str
    rate_units: str = "nats"
    n_t: int = 2

    def __post_init__(self):
        if not self.h_norm_sq_values or any(h <= 0 for h in self.h_norm_sq_values):
            raise UsageError("h_norm_sq_values must be a non-empty list of positives")
        if not self.p_total_values or any(p <= 0 for p in self.p_total_values):
            raise UsageError("p_total_values must be a non-empty list of positives")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise UsageError(f"schemes must be a non-empty subset of {SCHEMES}")
        if self.rate_units not in UNITS:
            raise UsageError(f"rate_units must be one of {UNITS}")
        if self.n_t < 2:
            raise UsageError("n_t must be >= 2")


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    if x is None:
        return ""
    return str(x)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _unit_factor(units):
    return 1.0 if units == "nats" else 1.0 / math.log(2.0)


def _solve_point(scheme, config, p_total, solver_config, quad):
    if scheme == "gan_iterative":
        return solve_iterative(config, solver_config, p_total, quad)
    if scheme == "gan_bruteforce":
        return solve_bruteforce(config, p_total,
                                solver_config.resolve_grid_step(p_total), quad,
                                eps2=solver_config.eps2)
    if scheme == "goel_negi":
        return solve_goel_negi(config, p_total,
                               solver_config.resolve_grid_step(p_total), quad)
    if scheme == "no_an":
        return solve_no_an(config, p_total,
                           solver_config.resolve_grid_step(p_total), quad)
    raise UsageError(f"unknown scheme {scheme!r}")


def run_sweep(spec, solver_config, quad, plot=True):
    """Solve every (h_norm_sq, p_total, scheme) point and emit the CSV.

    Returns (exit_code, rows); rows are dicts in output order.
    """
    factor = _unit_factor(spec.rate_units)
    rows = []
    any_unconverged = False
    for h2 in sorted(spec.h_norm_sq_values):
        config = ChannelConfig(n_t=spec.n_t, h_norm_sq=h2)
        for pt in sorted(spec.p_total_values):
            for scheme in sorted(spec.schemes):
                report = _solve_point(scheme, config, pt, solver_config, quad)
                nc = report.necessary_condition
                any_unconverged |= not report.converged
                rows.append({
                    "h_norm_sq": h2,
                    "p_total": pt,
                    "scheme": scheme,
                    "rate": report.rate.value * factor,
                    "p_u": report.allocation.p_u,
                    "p_v1": report.allocation.p_v1,
                    "p_v2": report.allocation.p_v2,
                    "iterations": report.iterations_used,
                    "converged": report.converged,
                    "nc_satisfied": None if nc is None else nc.satisfied,
                })
    _write_csv(spec.output_path, SWEEP_HEADER,
               [[r[k] for k in SWEEP_HEADER] for r in rows])
    if plot:
        from . import plots
        plots.render_sweep_figure(rows, _figure_path(spec.output_path),
                                  spec.rate_units)
    return (4 if any_unconverged else 0), rows


def run_trace(config, p_total, solver_config, quad, output_path,
              rate_units="nats", plot=True):
    """One iterative solve, one CSV row per iteration (plus the start point)."""
    factor = _unit_factor(rate_units)
    report = solve_iterative(config, solver_config, p_total, quad)
    m = config.n_t - 1
    rows = [{"iteration": 0, "p_u": 0.0, "p_v1": 0.0,
             "p_v2": p_total / m, "rate": 0.0}]
    for it, p_u, p_v1, p_v2, rate in report.trace:
        rows.append({"iteration": it, "p_u": p_u, "p_v1": p_v1,
                     "p_v2": p_v2, "rate": rate * factor})
    _write_csv(output_path, TRACE_HEADER,
               [[r[k] for k in TRACE_HEADER] for r in rows])
    if plot:
        from . import plots
        plots.render_trace_figure(rows, _figure_path(output_path), rate_units)
    return (0 if report.converged else 4), rows


def run_allocation_profile(config, spec, solver_config, quad, plot=True):
    """Optimal (p_u, p_v1, p_v2) of the selected scheme(s) versus p_total."""
    factor = _unit_factor(spec.rate_units)
    rows = []
    exit_code = 0
    for pt in sorted(spec.p_total_values):
        for scheme in sorted(spec.schemes):
            report = _solve_point(scheme, config, pt, solver_config, quad)
            if not report.converged:
                exit_code = 4
            rows.append({
                "h_norm_sq": config.h_norm_sq,
                "p_total": pt,
                "scheme": scheme,
                "p_u": report.allocation.p_u,
                "p_v1": report.allocation.p_v1,
                "p_v2": report.allocation.p_v2,
                "rate": report.rate.value * factor,
            })
    _write_csv(spec.output_path, PROFILE_HEADER,
               [[r[k] for k in PROFILE_HEADER] for r in rows])
    if plot:
        from . import plots
        plots.render_profile_figure(rows, _figure_path(spec.output_path))
    return exit_code, rows


def _figure_path(csv_path):
    stem = csv_path[:-4] if csv_path.lower().endswith(".csv") else csv_path
    return stem + ".png"


# ---------------------------------------------------------------------------
# argument and config-file handling


def _parse_float_list(text):
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError as exc:
        raise UsageError(f"bad numeric list {text!r}") from exc


def _parse_pt(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--pt range must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise UsageError(f"bad --pt range {text!r}") from exc
        if step <= 0 or stop < start:
            raise UsageError("--pt range needs step > 0 and stop >= start")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-12 * max(1.0, abs(stop)):
                break
            values.append(v)
            k += 1
        return tuple(values)
    return _parse_float_list(text)


def _read_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                values[key.strip()] = val.strip()
    except OSError as exc:
        raise IOError(f"cannot read config {path}: {exc}") from exc
    return values


_CONFIG_KEYS = ("h2", "pt", "nt", "scheme", "samples", "seed", "eps1", "eps2",
                "maxit", "maxcheck", "grid_step", "units", "out", "plot")

# single source for flag defaults so config-file merging can tell an
# explicitly passed flag from an untouched one
_FLAG_DEFAULTS = {
    "h2": "0.1", "pt": "10", "nt": "2", "seed": "0", "eps1": "1e-5",
    "eps2": "1e-5", "maxit": "20", "maxcheck": "5", "grid_step": "",
    "units": "nats", "samples": "0",
    "out": {"sweep": "sweep.csv", "trace": "trace.csv",
            "profile": "profile.csv"},
    "scheme": {"sweep": "gan_iterative,goel_negi", "profile": "gan_iterative"},
}


def _flag_default(key, command):
    d = _FLAG_DEFAULTS.get(key)
    return d.get(command) if isinstance(d, dict) else d


def _merge_config(args):
    """Overlay config-file values under the flags the user actually passed."""
    if not args.config:
        return args
    file_vals = _read_config_file(args.config)
    unknown = set(file_vals) - set(_CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key in _CONFIG_KEYS:
        if key == "plot" or key not in file_vals or not hasattr(args, key):
            continue
        if getattr(args, key) == _flag_default(key, args.command):
            setattr(args, key, file_vals[key])
    if "plot" in file_vals and getattr(args, "plot", True):
        args.plot = file_vals["plot"].lower() not in ("0", "false", "no")
    return args


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ganbf",
        description="Secrecy-rate sweeps and power allocation for "
                    "generalized artificial-noise beamforming.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h2", default=_FLAG_DEFAULTS["h2"],
                        help="legitimate channel gains, comma separated (linear)")
    common.add_argument("--pt", default=_FLAG_DEFAULTS["pt"],
                        help="total powers: list or start:stop:step (linear)")
    common.add_argument("--nt", default=_FLAG_DEFAULTS["nt"],
                        help="transmit antenna count")
    common.add_argument("--seed", default=_FLAG_DEFAULTS["seed"], help="RNG seed")
    common.add_argument("--eps1", default=_FLAG_DEFAULTS["eps1"],
                        help="residual tolerance")
    common.add_argument("--eps2", default=_FLAG_DEFAULTS["eps2"],
                        help="zero-power threshold")
    common.add_argument("--maxit", default=_FLAG_DEFAULTS["maxit"],
                        help="iteration cap")
    common.add_argument("--maxcheck", default=_FLAG_DEFAULTS["maxcheck"],
                        help="restart cap")
    common.add_argument("--grid-step", dest="grid_step",
                        default=_FLAG_DEFAULTS["grid_step"],
                        help="search grid step (default p_total/200)")
    common.add_argument("--units", default=_FLAG_DEFAULTS["units"],
                        help="rate units: nats|bits")
    common.add_argument("--config", default="",
                        help="key = value experiment file; flags override it")
    common.add_argument("--no-plot", dest="plot", action="store_false",
                        help="skip the companion figure")

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="rate vs power for the selected schemes")
    p_sweep.add_argument("--scheme", default=_flag_default("scheme", "sweep"),
                         help=f"comma separated subset of {SCHEMES}")
    p_sweep.add_argument("--out", default=_flag_default("out", "sweep"),
                         help="output CSV path")

    p_trace = sub.add_parser("trace", parents=[common],
                             help="per-iteration state of one solve")
    p_trace.add_argument("--out", default=_flag_default("out", "trace"),
                         help="output CSV path")

    p_prof = sub.add_parser("profile", parents=[common],
                            help="optimal power split vs total power")
    p_prof.add_argument("--scheme", default=_flag_default("scheme", "profile"),
                        help=f"comma separated subset of {SCHEMES}")
    p_prof.add_argument("--out", default=_flag_default("out", "profile"),
                        help="output CSV path")

    p_check = sub.add_parser("check", parents=[common],
                             help="necessary-condition report for one allocation")
    p_check.add_argument("--pu", required=True, help="signal power")
    p_check.add_argument("--pv1", required=True, help="main-channel AN power")
    p_check.add_argument("--pv2", default="",
                         help="null-space AN power (default: budget remainder)")
    p_check.add_argument("--samples", default=_FLAG_DEFAULTS["samples"],
                         help="extra Monte Carlo residual cross-check size")
    return parser


def _solver_config(args):
    grid_step = float(args.grid_step) if args.grid_step else None
    return SolverConfig(
        eps1=float(args.eps1), eps2=float(args.eps2),
        max_iter=int(args.maxit), max_check=int(args.maxcheck),
        grid_step=grid_step, seed=int(args.seed))


def _run_check(args, quad):
    h2 = _parse_float_list(args.h2)
    pt = _parse_pt(args.pt)
    if len(h2) != 1 or len(pt) != 1:
        raise UsageError("check needs exactly one --h2 and one --pt value")
    n_t = int(args.nt)
    config = ChannelConfig(n_t=n_t, h_norm_sq=h2[0])
    p_u = float(args.pu)
    p_v1 = float(args.pv1)
    if args.pv2:
        alloc = PowerAllocation(p_u, p_v1, float(args.pv2), pt[0], n_t)
    else:
        alloc = PowerAllocation.from_signal_and_main(p_u, p_v1, pt[0], n_t)
    report = necessary_condition(config, alloc, quad)
    res1 = f1(config, alloc.p_v1, alloc.p_v2, quad).value
    res2 = f2(config, alloc.p_u, alloc.p_v1, alloc.p_v2, quad).value
    print(f"allocation: p_u={alloc.p_u:.17g} p_v1={alloc.p_v1:.17g} "
          f"p_v2={alloc.p_v2:.17g} p_total={alloc.p_total:.17g}")
    print(f"first_inequality_lhs: {report.first_inequality_lhs:.17g}")
    print(f"second_inequality_lhs: {report.second_inequality_lhs:.17g}")
    print(f"second_inequality_rhs: {report.second_inequality_rhs:.17g}")
    print(f"degenerate: {_fmt(report.degenerate)}")
    print(f"satisfied: {_fmt(report.satisfied)}")
    print(f"f1_residual: {res1:.17g}")
    print(f"f2_residual: {res2:.17g}")
    samples = int(args.samples)
    if samples > 0:
        mc1 = f1(config, alloc.p_v1, alloc.p_v2,
                 method="monte_carlo", samples=samples, seed=int(args.seed)).value
        mc2 = f2(config, alloc.p_u, alloc.p_v1, alloc.p_v2,
                 method="monte_carlo", samples=samples, seed=int(args.seed)).value
        print(f"f1_residual_mc: {mc1:.17g}")
        print(f"f2_residual_mc: {mc2:.17g}")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args)
        quad = QuadratureSpec()
        if args.command == "check":
            return _run_check(args, quad)

        h2 = _parse_float_list(args.h2)
        pt = _parse_pt(args.pt)
        solver_config = _solver_config(args)
        if args.command == "sweep":
            spec = SweepSpec(
                h_norm_sq_values=h2, p_total_values=pt,
                schemes=tuple(args.scheme.replace(",", " ").split()),
                output_path=args.out, rate_units=args.units, n_t=int(args.nt))
            code, _ = run_sweep(spec, solver_config, quad, plot=args.plot)
            return code
        if args.command == "trace":
            if len(h2) != 1 or len(pt) != 1:
                raise UsageError("trace needs exactly one --h2 and one --pt value")
            config = ChannelConfig(n_t=int(args.nt), h_norm_sq=h2[0])
            code, _ = run_trace(config, pt[0], solver_config, quad, args.out,
                                rate_units=args.units, plot=args.plot)
            return code
        if args.command == "profile":
            if len(h2) != 1:
                raise UsageError("profile needs exactly one --h2 value")
            config = ChannelConfig(n_t=int(args.nt), h_norm_sq=h2[0])
            spec = SweepSpec(
                h_norm_sq_values=h2, p_total_values=pt,
                schemes=tuple(args.scheme.replace(",", " ").split()),
                output_path=args.out, rate_units=args.units, n_t=int(args.nt))
            code, _ = run_allocation_profile(config, spec, solver_config, quad,
                                             plot=args.plot)
            return code
        raise UsageError(f"unknown command {args.command!r}")
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
