"""Time-dependent model ingredients: detuning ramps, switch functions, parameters.

All times are in microseconds and all frequencies are angular (rad/us).  The
command line accepts ordinary frequencies in kHz and converts once, up front,
so no 2*pi factor ever appears downstream.
"""

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# cavity parameters of the bimodal-cavity experiment this models
DEFAULT_OMEGA = TWO_PI * 0.047    # atom-field coupling, rad/us (47 kHz)
DEFAULT_DELTA = TWO_PI * 0.1283   # mode splitting, rad/us (128.3 kHz)

MODELS = ("stepwise", "smooth", "channel")
PROFILE_SHAPES = ("linear", "raised_cosine")
SWITCH_SHAPES = ("step", "raised_cosine")


class InvalidParamsError(ValueError):
    """Raised for parameter bundles that cannot describe a valid sequence."""


@dataclass(frozen=True)
class ExperimentParams:
    """Physical constants and model selectors for one simulated experiment.

    t_switch is the full length (us) of the window during which the atomic
    frequency is moved between the two modes; it must fit inside the resonant
    segment it shortens (t_switch < pi/omega).
    """

    omega: float = DEFAULT_OMEGA
    delta: float = DEFAULT_DELTA
    lambda_coupling: float | None = None   # None -> omega / max(f1*f2)
    t_switch: float = 0.0
    model: str = "stepwise"
    profile_shape: str = "raised_cosine"
    switch_shape: str = "raised_cosine"
    ode_step: float = 0.005

    def __post_init__(self):
        if self.omega <= 0.0:
            raise InvalidParamsError("omega must be positive")
        if self.delta <= 0.0:
            raise InvalidParamsError("delta must be positive")
        if self.t_switch < 0.0:
            raise InvalidParamsError("t_switch must be non-negative")
        if self.ode_step <= 0.0:
            raise InvalidParamsError("ode_step must be positive")
        if self.t_switch >= math.pi / self.omega:
            raise InvalidParamsError(
                "switch window exceeds the resonant segment "
                f"(t_switch={self.t_switch} us >= pi/omega={math.pi / self.omega:.4f} us)"
            )
        if self.model not in MODELS:
            raise InvalidParamsError(f"unknown model {self.model!r}")
        if self.profile_shape not in PROFILE_SHAPES:
            raise InvalidParamsError(f"unknown profile shape {self.profile_shape!r}")
        if self.switch_shape not in SWITCH_SHAPES:
            raise InvalidParamsError(f"unknown switch shape {self.switch_shape!r}")

    def resolved_lambda(self):
        """Mode-mode coupling strength; normalized from omega when unset."""
        if self.lambda_coupling is not None:
            return self.lambda_coupling
        return normalize_lambda(self.omega, self.window_switch_functions())

    def window_detuning_profile(self, window_start=0.0):
        return DetuningProfile(self.profile_shape, window_start, self.t_switch, self.delta)

    def window_switch_functions(self, window_start=0.0):
        return SwitchFunctions(self.switch_shape, window_start, self.t_switch)


@dataclass(frozen=True)
class DetuningProfile:
    """Atom-cavity detuning ramp: 0 before the window, -depth after it."""

    shape: str
    window_start: float
    window_width: float
    depth: float

    def value(self, t):
        t0, w = self.window_start, self.window_width
        if w <= 0.0:
            # zero-width limit: instantaneous jump at the window instant
            return 0.0 if t <= t0 else -self.depth
        if t <= t0:
            return 0.0
        if t >= t0 + w:
            return -self.depth
        u = (t - t0) / w
        if self.shape == "linear":
            return -self.depth * u
        # raised cosine: zero slope at both edges, -depth/2 at the midpoint
        return -0.5 * self.depth * (1.0 - math.cos(math.pi * u))

    def integral(self, t1, t2):
        """Closed-form integral of the detuning over [t1, t2] (rad)."""
        if t2 < t1:
            return -self.integral(t2, t1)
        t0, w = self.window_start, self.window_width
        if w <= 0.0:
            return -self.depth * max(0.0, t2 - max(t1, t0))
        total = -self.depth * max(0.0, t2 - max(t1, t0 + w))
        a = min(max(t1, t0), t0 + w)
        b = min(max(t2, t0), t0 + w)
        if b > a:
            ua, ub = (a - t0) / w, (b - t0) / w
            if self.shape == "linear":
                total += -0.5 * self.depth * w * (ub * ub - ua * ua)
            else:
                total += -0.5 * self.depth * w * (
                    (ub - ua) - (math.sin(math.pi * ub) - math.sin(math.pi * ua)) / math.pi
                )
        return total


@dataclass(frozen=True)
class SwitchFunctions:
    """Dimensionless weights of the mode-1 and mode-2 interaction terms.

    f2 = 1 - f1 by construction, so the pair always sums to one and their
    product peaks at 1/4 (at the window midpoint for the raised cosine).
    """

    shape: str
    window_start: float
    window_width: float

    def values(self, t):
        t0, w = self.window_start, self.window_width
        if w <= 0.0:
            f1 = 1.0 if t <= t0 else 0.0
            return f1, 1.0 - f1
        if t <= t0:
            return 1.0, 0.0
        if t >= t0 + w:
            return 0.0, 1.0
        if self.shape == "step":
            f1 = 1.0 if t < t0 + 0.5 * w else 0.0
        else:
            f1 = math.cos(math.pi * (t - t0) / (2.0 * w)) ** 2
        return f1, 1.0 - f1


def detuning_at(profile, t):
    """Detuning (rad/us) at time t; piecewise per the profile shape."""
    return profile.value(t)


def switch_at(functions, t):
    """(f1, f2) at time t, with f2 = 1 - f1 exactly."""
    return functions.values(t)


def normalize_lambda(omega, functions, n_grid=4097):
    """Coupling strength for which the peak effective coupling equals omega.

    Returns omega / max_t(f1*f2); 4*omega for the default raised-cosine
    switch.  A degenerate window (zero width, or a step shape whose product
    vanishes everywhere) has no overlap to normalize against.
    """
    t0, w = functions.window_start, functions.window_width
    if w <= 0.0:
        raise InvalidParamsError("no overlap window")
    peak = 0.0
    for k in range(n_grid):
        f1, f2 = functions.values(t0 + w * k / (n_grid - 1))
        peak = max(peak, f1 * f2)
    if peak < 1e-12:
        raise InvalidParamsError("no overlap window")
    return omega / peak
