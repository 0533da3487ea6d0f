"""Command-line front end: simulate, sweep, entangle-check and fit.

All commands accept frequencies in kHz and convert internally to angular
frequencies in rad/us.  Configuration can come from a key=value file
(--config); explicit flags win over the file.  CSV output uses 12 significant
digits, '.' decimals and a fixed column order.
"""

import argparse
import cmath
import math
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from . import linalg
from .analysis import (
    DEFAULT_INTERVALS,
    FitError,
    FitModel,
    TraceFormatError,
    fit_cosine,
    fit_intervals,
    load_trace,
    sample_probability,
    sweep_switch_time,
    unwrap_phase,
)
from .pulses import TWO_PI, ExperimentParams, InvalidParamsError
from .sequences import ideal_phase, interaction_time, mode_schmidt_coefficients, run_source

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        raise CliError(message)


def _fmt(x):
    return f"{x:.12g}"


def _parse_interval(spec):
    label = ""
    body = spec
    if "=" in spec:
        label, body = spec.split("=", 1)
    try:
        lo_s, hi_s = body.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise CliError(f"bad interval {spec!r}, expected 'lo:hi' or 'label=lo:hi'") from None
    if hi <= lo:
        raise CliError(f"bad interval {spec!r}: hi must exceed lo")
    return (label or f"[{_fmt(lo)};{_fmt(hi)}]", lo, hi)


def _parse_grid(spec):
    try:
        if spec.count(":") == 2:
            lo_s, hi_s, n_s = spec.split(":")
            n = int(n_s)
            if n < 1:
                raise ValueError
            return [float(v) for v in np.linspace(float(lo_s), float(hi_s), n)]
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"bad grid {spec!r}, expected 'lo:hi:n' or comma list") from None


def _read_config(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line_number, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}: line {line_number}: expected key=value")
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
        return values
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", code=EXIT_IO) from None


def _add_common_options(parser):
    parser.add_argument("--model", choices=("stepwise", "smooth", "channel"))
    parser.add_argument("--t-switch-us", type=float, dest="t_switch_us")
    parser.add_argument("--omega-khz", type=float, dest="omega_khz")
    parser.add_argument("--delta-khz", type=float, dest="delta_khz")
    parser.add_argument("--lambda", dest="lambda_", metavar="auto|RAD_PER_US")
    parser.add_argument("--profile", choices=("linear", "raised-cosine"))
    parser.add_argument("--switch-shape", choices=("step", "raised-cosine"), dest="switch_shape")
    parser.add_argument("--interval", action="append", metavar="LO:HI")
    parser.add_argument("--points", type=int)
    parser.add_argument("--ode-step-us", type=float, dest="ode_step_us")
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--figure", metavar="PATH")


def _merged_option(args, config, key, cast=str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        raw = config[key]
        try:
            if cast is list:
                return [v.strip() for v in raw.split(";") if v.strip()]
            return cast(raw)
        except ValueError:
            raise CliError(f"config value {key}={raw!r} is not valid") from None
    return None


def _build_params(args, config):
    omega_khz = _merged_option(args, config, "omega_khz", float)
    delta_khz = _merged_option(args, config, "delta_khz", float)
    t_switch = _merged_option(args, config, "t_switch_us", float)
    ode_step = _merged_option(args, config, "ode_step_us", float)
    model = _merged_option(args, config, "model")
    profile = _merged_option(args, config, "profile")
    switch_shape = _merged_option(args, config, "switch_shape")
    lam_spec = getattr(args, "lambda_", None) or config.get("lambda")

    lam = None
    if lam_spec is not None and lam_spec != "auto":
        try:
            lam = float(lam_spec)
        except ValueError:
            raise CliError(f"bad --lambda value {lam_spec!r}") from None

    kwargs = {}
    if omega_khz is not None:
        kwargs["omega"] = TWO_PI * omega_khz / 1000.0
    if delta_khz is not None:
        kwargs["delta"] = TWO_PI * delta_khz / 1000.0
    if t_switch is not None:
        kwargs["t_switch"] = t_switch
    if ode_step is not None:
        kwargs["ode_step"] = ode_step
    if model is not None:
        kwargs["model"] = model
    if profile is not None:
        kwargs["profile_shape"] = profile.replace("-", "_")
    if switch_shape is not None:
        kwargs["switch_shape"] = switch_shape.replace("-", "_")
    kwargs["lambda_coupling"] = lam
    try:
        return ExperimentParams(**kwargs)
    except InvalidParamsError as exc:
        raise CliError(str(exc)) from None


def _intervals(args, config, default=DEFAULT_INTERVALS):
    specs = getattr(args, "interval", None) or _merged_option(args, config, "interval", list)
    if not specs:
        return list(default)
    return [_parse_interval(s) for s in specs]


@contextmanager
def _output(args, config):
    path = _merged_option(args, config, "out")
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", code=EXIT_IO) from None


def cmd_simulate(args, config):
    params = _build_params(args, config)
    intervals = _intervals(args, config, default=DEFAULT_INTERVALS[:1])
    n_points = _merged_option(args, config, "points", int) or 91
    all_samples = []
    for _label, lo, hi in intervals:
        all_samples.append(sample_probability(params, (lo, hi), n_points))
    samples = np.vstack(all_samples)
    with _output(args, config) as out:
        out.write("T_us,P\n")
        for t, p in samples:
            out.write(f"{_fmt(t)},{_fmt(p)}\n")
    figure = _merged_option(args, config, "figure")
    if figure:
        from .plotting import probability_figure

        probability_figure(samples, figure, title=f"{params.model} model")
    return EXIT_OK


def cmd_sweep(args, config):
    params = _build_params(args, config)
    grid_spec = getattr(args, "grid", None) or config.get("grid")
    grid = _parse_grid(grid_spec) if grid_spec else [float(v) for v in np.linspace(0.0, 4.0, 9)]
    intervals = _intervals(args, config)
    n_points = _merged_option(args, config, "points", int) or 91
    try:
        rows = sweep_switch_time(params, grid, intervals=intervals, n_points=n_points)
    except (InvalidParamsError, FitError) as exc:
        raise CliError(str(exc)) from None
    with _output(args, config) as out:
        out.write("t_switch_us,interval,omega_rel,phi_rel\n")
        for row in rows:
            out.write(
                f"{_fmt(row.t_switch)},{row.interval},{_fmt(row.omega_rel)},{_fmt(row.phi_rel)}\n"
            )
    figure = _merged_option(args, config, "figure")
    if figure:
        from .plotting import sweep_figure

        sweep_figure(rows, figure, title=f"{params.model} model")
    return EXIT_OK


def cmd_entangle_check(args, config):
    params = _build_params(args, config)
    initial = linalg.basis_state(linalg.IDX_E_00)
    mid = linalg.apply(run_source(params), initial)
    c6 = mid[linalg.IDX_G_01]
    c8 = mid[linalg.IDX_G_10]
    schmidt = mode_schmidt_coefficients(mid)
    rel_phase = cmath.phase(c6 / c8) % TWO_PI if abs(c8) > 0 else float("nan")
    with _output(args, config) as out:
        out.write(f"model: {params.model}\n")
        out.write(f"|c6| = {_fmt(abs(c6))}\n")
        out.write(f"|c8| = {_fmt(abs(c8))}\n")
        out.write(f"arg(c6/c8) = {_fmt(rel_phase)} rad\n")
        out.write(f"schmidt = {_fmt(schmidt[0])}, {_fmt(schmidt[1])}\n")
        if params.model != "stepwise":
            return EXIT_OK
        expected = (params.delta * math.pi / params.omega) % TWO_PI
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        phase_err = abs(unwrap_phase(rel_phase, expected) - expected)
        ok = (
            abs(abs(c6) - inv_sqrt2) <= 1e-9
            and abs(abs(c8) - inv_sqrt2) <= 1e-9
            and phase_err <= 1e-9
        )
        out.write(f"check: {'ok' if ok else 'MISMATCH'}\n")
        return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_fit(args, config):
    params = _build_params(args, config)
    try:
        samples = load_trace(args.data)
    except TraceFormatError as exc:
        raise CliError(f"{args.data}: {exc}", code=EXIT_IO) from None
    except OSError as exc:
        raise CliError(f"cannot read {args.data}: {exc}", code=EXIT_IO) from None

    alpha = _merged_option(args, config, "alpha", float) or 0.0
    beta = _merged_option(args, config, "beta", float) or 0.0
    kind = "damped_cosine" if (alpha > 0.0 or beta > 0.0) else "plain_cosine"
    model = FitModel(kind=kind, alpha=alpha, beta=beta, t_release=interaction_time(params))

    intervals = _intervals(args, config)
    phi_ref = ideal_phase(params)
    try:
        results = fit_intervals(samples, params, model, intervals)
        if not results:
            # trace does not line up with any delay window: fit it whole
            fit = fit_cosine(samples, model, omega_hint=params.delta, interval="all")
            results = [(fit, unwrap_phase(fit.phi_fit, phi_ref))]
    except FitError as exc:
        raise CliError(str(exc)) from None

    for fit, phi in results:
        print(
            f"{fit.interval}: omega = {_fmt(fit.omega_fit)} rad/us, "
            f"phi = {_fmt(phi)} rad, residual_rms = {_fmt(fit.residual_rms)}",
            file=sys.stderr,
        )
    with _output(args, config) as out:
        out.write("interval,omega_rel,phi_rel,residual_rms\n")
        for fit, phi in results:
            out.write(
                f"{fit.interval},{_fmt(fit.omega_fit / params.delta)},"
                f"{_fmt(phi / phi_ref)},{_fmt(fit.residual_rms)}\n"
            )
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="bicavity", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="sample P(T) over a delay window, emit CSV")
    _add_common_options(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="sweep the switching time, emit relative phase CSV")
    _add_common_options(p_sweep)
    p_sweep.add_argument("--grid", metavar="LO:HI:N|a,b,c")
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("entangle-check", help="report the mid-sequence mode state")
    _add_common_options(p_check)
    p_check.set_defaults(func=cmd_entangle_check)

    p_fit = sub.add_parser("fit", help="fit a (T, P) trace file per delay window")
    _add_common_options(p_fit)
    p_fit.add_argument("data", metavar="TRACE")
    p_fit.add_argument("--alpha", type=float)
    p_fit.add_argument("--beta", type=float)
    p_fit.set_defaults(func=cmd_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _read_config(args.config) if args.config else {}
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
