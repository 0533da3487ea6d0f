"""Sampling, cosine fitting and switching-time sweeps of the probe signal.

The probe excitation probability is sampled on the experimental delay
windows, fitted to a (possibly damped) cosine with frequency and phase as the
unknowns, and the fitted arguments are swept against the switching time to
produce relative-frequency and relative-phase curves.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .sequences import ideal_phase, interaction_time, run_full

# delay windows (us) over which the experiment recorded the probe signal
DEFAULT_INTERVALS = (
    ("I1", 48.0, 57.0),
    ("I2", 200.0, 207.0),
    ("I3", 400.0, 408.0),
    ("I4", 699.0, 706.0),
)

SCAN_HALF_WIDTH = 0.05     # relative scan range around the frequency hint
SCAN_POINTS = 2001
GOLDEN_REL_WIDTH = 1e-10
MIN_AMPLITUDE = 1e-6


class FitError(RuntimeError):
    """Raised when the sampled signal cannot support a cosine fit."""


class TraceFormatError(ValueError):
    """Raised for ill-formed two-column trace files (carries the line number)."""

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class FitModel:
    """Fit target: plain cosine, or cosine under an exponential envelope.

    The damped form is A(T)*[1+cos(w T + phi)]/2 + B(T) with
    A = exp(-(alpha+beta)*xi), B = [exp(-2 alpha xi) + exp(-2 beta xi)
    - 2 exp(-(alpha+beta) xi)]/4 and xi = T - t_release; alpha = beta = 0
    reduces it to the plain cosine.
    """

    kind: str = "plain_cosine"
    alpha: float = 0.0
    beta: float = 0.0
    t_release: float = 0.0

    def __post_init__(self):
        if self.kind not in ("plain_cosine", "damped_cosine"):
            raise ValueError(f"unknown fit model {self.kind!r}")
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("dissipation constants must be non-negative")

    def envelope(self, t):
        """(A, B) at delay t; (1, 0) for the plain cosine."""
        if self.kind == "plain_cosine":
            return np.ones_like(t), np.zeros_like(t)
        xi = np.asarray(t) - self.t_release
        ea = np.exp(-2.0 * self.alpha * xi)
        eb = np.exp(-2.0 * self.beta * xi)
        eab = np.exp(-(self.alpha + self.beta) * xi)
        return eab, 0.25 * (ea + eb - 2.0 * eab)

    def evaluate(self, t, omega, phi):
        a, b = self.envelope(t)
        return a * 0.5 * (1.0 + np.cos(omega * np.asarray(t) + phi)) + b


@dataclass(frozen=True)
class FitResult:
    omega_fit: float
    phi_fit: float
    residual_rms: float
    interval: str = ""


@dataclass(frozen=True)
class SweepRow:
    t_switch: float
    interval: str
    omega_rel: float
    phi_rel: float


def sample_probability(params, interval, n_points):
    """Uniform (T, P) grid over [lo, hi], endpoints included."""
    lo, hi = interval
    if n_points < 2:
        raise ValueError("need at least two sample points")
    grid = np.linspace(lo, hi, n_points)
    probs = np.array([run_full(params, t).p_excited for t in grid])
    return np.column_stack([grid, probs])


def _normalized_signal(samples, model):
    """Rescale samples so the target is exactly cos(w T + phi)."""
    t = samples[:, 0]
    p = samples[:, 1]
    a, b = model.envelope(t)
    return t, (p - b) * 2.0 / a - 1.0


def _residual_and_coeffs(t, z, omega):
    """Least squares of z against a*cos(wT) + b*sin(wT) + offset."""
    design = np.column_stack([np.cos(omega * t), np.sin(omega * t), np.ones_like(t)])
    gram = design.T @ design
    rhs = design.T @ z
    coeffs = np.linalg.solve(gram, rhs)
    resid = z - design @ coeffs
    return float(resid @ resid), coeffs


def fit_cosine(samples, model, omega_hint, interval=""):
    """Extract frequency and phase by a scan plus golden-section refinement.

    Scans 2001 frequencies within +/-5% of the hint, solving the linear
    least-squares problem in amplitude and offset at each, then narrows the
    best frequency to a relative width of 1e-10.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < 8:
        raise FitError("need at least 8 (T, P) samples")
    t = samples[:, 0]
    span = float(t.max() - t.min())
    if span * omega_hint < math.pi:
        raise FitError("insufficient span: samples cover less than half a period")
    t, z = _normalized_signal(samples, model)

    scan = omega_hint * np.linspace(1.0 - SCAN_HALF_WIDTH, 1.0 + SCAN_HALF_WIDTH, SCAN_POINTS)
    residuals = np.array([_residual_and_coeffs(t, z, w)[0] for w in scan])
    best = int(np.argmin(residuals))

    lo = scan[max(best - 1, 0)]
    hi = scan[min(best + 1, SCAN_POINTS - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    w1 = hi - inv_phi * (hi - lo)
    w2 = lo + inv_phi * (hi - lo)
    f1 = _residual_and_coeffs(t, z, w1)[0]
    f2 = _residual_and_coeffs(t, z, w2)[0]
    while (hi - lo) > GOLDEN_REL_WIDTH * omega_hint:
        if f1 <= f2:
            hi, w2, f2 = w2, w1, f1
            w1 = hi - inv_phi * (hi - lo)
            f1 = _residual_and_coeffs(t, z, w1)[0]
        else:
            lo, w1, f1 = w1, w2, f2
            w2 = lo + inv_phi * (hi - lo)
            f2 = _residual_and_coeffs(t, z, w2)[0]
    omega_fit = 0.5 * (lo + hi)

    rss, (a, b, _offset) = _residual_and_coeffs(t, z, omega_fit)
    if math.hypot(a, b) < MIN_AMPLITUDE:
        raise FitError("no oscillation: fitted amplitude below threshold")
    phi = math.atan2(-b, a)
    return FitResult(
        omega_fit=float(omega_fit),
        phi_fit=phi,
        residual_rms=math.sqrt(rss / len(t)),
        interval=interval,
    )


def unwrap_phase(phi_raw, reference):
    """Shift phi_raw by a multiple of 2*pi onto the branch nearest reference."""
    two_pi = 2.0 * math.pi
    return phi_raw + two_pi * round((reference - phi_raw) / two_pi)


def sweep_switch_time(params, t_switch_grid, intervals=DEFAULT_INTERVALS, n_points=91):
    """Fit frequency and phase per (t_switch, interval); normalized to the
    ideal step-wise values.

    The fitted phase of the first interval is unwrapped onto the branch
    nearest the ideal phase; each following interval unwraps against the
    previous interval's result.
    """
    phi_ref = ideal_phase(params)
    rows = []
    for ts in t_switch_grid:
        p = replace(params, t_switch=float(ts))
        reference = phi_ref
        for label, lo, hi in intervals:
            samples = sample_probability(p, (lo, hi), n_points)
            fit = fit_cosine(samples, FitModel(), omega_hint=params.delta, interval=label)
            phi = unwrap_phase(fit.phi_fit, reference)
            reference = phi
            rows.append(
                SweepRow(
                    t_switch=float(ts),
                    interval=label,
                    omega_rel=fit.omega_fit / params.delta,
                    phi_rel=phi / phi_ref,
                )
            )
    rows.sort(key=lambda r: (r.t_switch, r.interval))
    return rows


def fit_intervals(samples, params, model, intervals):
    """Fit each delay window that the trace covers with enough samples.

    Returns a list of (FitResult, phi_unwrapped); windows with fewer than 8
    samples are skipped.
    """
    samples = np.asarray(samples, dtype=float)
    phi_ref = ideal_phase(params)
    results = []
    reference = phi_ref
    for label, lo, hi in intervals:
        mask = (samples[:, 0] >= lo - 1e-9) & (samples[:, 0] <= hi + 1e-9)
        if int(mask.sum()) < 8:
            continue
        fit = fit_cosine(samples[mask], model, omega_hint=params.delta, interval=label)
        phi = unwrap_phase(fit.phi_fit, reference)
        reference = phi
        results.append((fit, phi))
    return results


def load_trace(path):
    """Read a two-column (T_us, P) text file; '#' starts a comment."""
    rows = []
    first_content = True
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise TraceFormatError(f"expected two columns, got {len(parts)}", line_number)
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if first_content:
                    # tolerate a single column-name header line
                    first_content = False
                    continue
                raise TraceFormatError(f"non-numeric value in {line!r}", line_number) from None
            first_content = False
    if not rows:
        raise TraceFormatError("no data rows", 0)
    return np.array(rows)
