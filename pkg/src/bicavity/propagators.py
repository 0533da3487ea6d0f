"""Evolution matrices for the atom + two-mode system.

Five analytic propagators cover the resonant and free segments of the pulse
sequence; the window propagators (single-mode non-resonant and cross-coupled)
are integrated with a fixed-step classical Runge-Kutta scheme.

Working frame: everything rotates at the mode-1 frequency.  The analytic
matrices are taken verbatim in the 8-state basis of :mod:`bicavity.linalg`
(each equals the rotating-frame propagator of its segment up to a phase
common to all populated states).  Inside the switch window the generator
carries the detuning as +/-D(t)/2 on the atomic pseudo-spin and -delta for
every mode-2 photon, so each coupled pair splits by the full detuning while
the delta bookkeeping between the two one-photon states stays consistent
across the whole window.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DIM, identity
from .pulses import detuning_at, switch_at


class OdeConvergenceError(RuntimeError):
    """Integration step too large for the requested tolerance."""


@dataclass(frozen=True)
class OdeSettings:
    step: float = 0.005              # us
    method: str = "rk4_fixed"
    max_defect: float = 1e-9         # pairwise norm-conservation tolerance

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("ode step must be positive")
        if self.method != "rk4_fixed":
            raise ValueError(f"unknown integration method {self.method!r}")


@dataclass(frozen=True)
class RabiFunctions:
    """The four amplitude functions of one coupled two-level pair.

    (x, ybar) and (y, xbar) are the two columns of the pair propagator; at
    t = 0 they reduce to the identity (x = xbar = 1, y = ybar = 0).
    """

    x: complex
    xbar: complex
    y: complex
    ybar: complex

    def pair_defect(self):
        return max(
            abs(abs(self.x) ** 2 + abs(self.ybar) ** 2 - 1.0),
            abs(abs(self.xbar) ** 2 + abs(self.y) ** 2 - 1.0),
        )


def resonant_rabi(t, omega):
    """Closed-form amplitudes of a resonant Rabi rotation of duration t."""
    c = math.cos(0.5 * omega * t)
    s = math.sin(0.5 * omega * t)
    return RabiFunctions(x=c, xbar=c, y=-1j * s, ybar=-1j * s)


def _mode1_matrix(r):
    """Place pair amplitudes into the mode-1 coupling pattern.

    Couples (e00, g10) and (e01, g11); identity elsewhere.
    """
    u = identity()
    u[0, 0] = r.x
    u[0, 7] = r.y
    u[7, 0] = r.ybar
    u[7, 7] = r.xbar
    u[6, 6] = r.x
    u[6, 1] = r.y
    u[1, 6] = r.ybar
    u[1, 1] = r.xbar
    return u


def _mode2_matrix(r, phase=1.0):
    """Place pair amplitudes into the mode-2 coupling pattern.

    Couples (e00, g01) and (e10, g11); identity elsewhere.  `phase`
    multiplies every entry of the two coupled blocks (the e^{i delta t}
    factor of the resonant mode-2 rotation).
    """
    u = identity()
    u[0, 0] = phase * r.x
    u[0, 5] = phase * r.y
    u[5, 0] = phase * r.ybar
    u[5, 5] = phase * r.xbar
    u[4, 4] = phase * r.x
    u[4, 1] = phase * r.y
    u[1, 4] = phase * r.ybar
    u[1, 1] = phase * r.xbar
    return u


def u1_resonant(t, omega):
    """Resonant interaction with mode 1 for a duration t."""
    return _mode1_matrix(resonant_rabi(t, omega))


def u2_resonant(t, omega, delta):
    """Resonant interaction with mode 2; the coupled block carries e^{i delta t}."""
    return _mode2_matrix(resonant_rabi(t, omega), phase=np.exp(1j * delta * t))


def u3_free(t, delta):
    """Free flight: the one-photon mode-2 state accumulates e^{i delta t}."""
    u = identity()
    u[5, 5] = np.exp(1j * delta * t)
    return u


def u4_probe_mode1(t, omega, delta):
    """Mode-1 rotation during the probe interval.

    Same as u1_resonant except that the spectator one-photon mode-2 state
    keeps accumulating its relative phase e^{i delta t}.
    """
    u = u1_resonant(t, omega)
    u[5, 5] = np.exp(1j * delta * t)
    return u


def _rk4(rhs, y0, t_from, t_to, step):
    """Fixed-step classical 4th-order Runge-Kutta from t_from to t_to."""
    duration = t_to - t_from
    if duration <= 0.0:
        return y0.copy()
    n = max(1, math.ceil(duration / step))
    h = duration / n
    y = y0.copy()
    t = t_from
    for _ in range(n):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def integrate_rabi(delta_fn, t_from, t_to, omega, ode):
    """Integrate the pair amplitudes over [t_from, t_to] from identity.

    The coupled pairs obey
        i dy/dt    = (omega/2) xbar + (D(t)/2) y
        i dxbar/dt = (omega/2) y    - (D(t)/2) xbar
        i dx/dt    = (omega/2) ybar + (D(t)/2) x
        i dybar/dt = (omega/2) x    - (D(t)/2) ybar
    with D(t) = delta_fn(t).
    """
    if t_to < t_from:
        raise ValueError("t_to must not precede t_from")
    half_omega = 0.5 * omega

    def rhs(t, v):
        x, xbar, y, ybar = v
        half_d = 0.5 * delta_fn(t)
        return np.array(
            [
                -1j * (half_omega * ybar + half_d * x),
                -1j * (half_omega * y - half_d * xbar),
                -1j * (half_omega * xbar + half_d * y),
                -1j * (half_omega * x - half_d * ybar),
            ]
        )

    v0 = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex)
    x, xbar, y, ybar = _rk4(rhs, v0, t_from, t_to, ode.step)
    result = RabiFunctions(x=x, xbar=xbar, y=y, ybar=ybar)
    defect = result.pair_defect()
    if defect > ode.max_defect:
        raise OdeConvergenceError(
            f"step {ode.step} us too large: norm defect {defect:.3e} "
            f"exceeds tolerance {ode.max_defect:.1e}"
        )
    return result


def _ode_settings(params):
    return OdeSettings(step=params.ode_step)


# pseudo-spin (+1 for the excited atom) and mode-2 photon number per basis state
_SPIN = (+1, -1, +1, -1, +1, -1, +1, -1)
_N2 = (0, 1, 1, 0, 0, 1, 1, 0)


def _window_phases(params, t_from, t_to):
    """Diagonal phases e^{-i(spin*theta/2 - n2*delta*d)} over a window span.

    theta is the integrated detuning and d the span length; these are the
    free phases of the working frame that every state keeps accumulating
    while it is not part of a coupled pair.
    """
    theta = params.window_detuning_profile().integral(t_from, t_to)
    d = t_to - t_from
    return [
        np.exp(-1j * (0.5 * spin * theta - n2 * params.delta * d))
        for spin, n2 in zip(_SPIN, _N2)
    ]


def u_minus(params, t_from, t_to):
    """Non-resonant mode-1 propagator over part of the switch window.

    Times are window-local: the switch window is [0, t_switch] and the
    detuning ramps from 0 to -delta across it.  The coupled pairs (e00, g10)
    and (e01, g11) carry the integrated pair amplitudes; every state keeps
    its free diagonal phase on top (a mode-2 photon contributes -delta).
    """
    profile = params.window_detuning_profile()
    r = integrate_rabi(
        lambda t: detuning_at(profile, t), t_from, t_to, params.omega, _ode_settings(params)
    )
    phases = _window_phases(params, t_from, t_to)
    u = identity()
    u[0, 0] = r.x
    u[0, 7] = r.y
    u[7, 0] = r.ybar
    u[7, 7] = r.xbar
    # the (e01, g11) pair shares one mode-2 photon: common phase e^{i delta d}
    pair2 = np.exp(1j * params.delta * (t_to - t_from))
    u[6, 6] = pair2 * r.x
    u[6, 1] = pair2 * r.y
    u[1, 6] = pair2 * r.ybar
    u[1, 1] = pair2 * r.xbar
    for k in (2, 3, 4, 5):
        u[k, k] = phases[k]
    return u


def u_plus(params, t_from, t_to):
    """Non-resonant mode-2 propagator; the pair detuning is Delta(t) + delta.

    The coupled pairs (e00, g01) and (e10, g11) split by the full mode-2
    detuning and share the common phase e^{i delta d / 2} of their mean
    energy; spectator states keep their free diagonal phases.
    """
    profile = params.window_detuning_profile()
    r = integrate_rabi(
        lambda t: detuning_at(profile, t) + params.delta,
        t_from,
        t_to,
        params.omega,
        _ode_settings(params),
    )
    phases = _window_phases(params, t_from, t_to)
    u = _mode2_matrix(r, phase=np.exp(0.5j * params.delta * (t_to - t_from)))
    for k in (2, 3, 6, 7):
        u[k, k] = phases[k]
    return u


def _cross_hamiltonian(params, profile, functions, lam):
    half_omega = 0.5 * params.omega
    delta = params.delta
    spin = np.array(_SPIN, dtype=float)
    n2 = np.array(_N2, dtype=float)

    def h_of(t, f1, f2):
        # free part of the working frame: +/-Delta/2 on the atomic pseudo-spin
        # and -delta per mode-2 photon, independent of the switch weights
        d = detuning_at(profile, t)
        h = np.diag(0.5 * d * spin - delta * n2).astype(complex)
        # mode-1 pairs, weight f1: (e00,g10) and (e01,g11)
        h[0, 7] += f1 * half_omega
        h[7, 0] += f1 * half_omega
        h[6, 1] += f1 * half_omega
        h[1, 6] += f1 * half_omega
        # mode-2 pairs, weight f2: (e00,g01) and (e10,g11)
        h[0, 5] += f2 * half_omega
        h[5, 0] += f2 * half_omega
        h[4, 1] += f2 * half_omega
        h[1, 4] += f2 * half_omega
        # photon exchange between the modes, weight f1*f2; matrix elements
        # leaving the 8-state space are dropped
        g = lam * f1 * f2
        if g != 0.0:
            h[5, 7] += g
            h[7, 5] += g
            h[4, 6] += g
            h[6, 4] += g
        return h

    return h_of


def u_cross(params, t_from, t_to):
    """Cross-coupled window propagator from the full 8x8 matrix equation.

    Integrates i dU/dt = H(t) U with H(t) = f1*H_mode1 + f2*H_mode2 +
    f1*f2*H_exchange.  Times are window-local as in u_minus/u_plus.  The
    integration is split at the window midpoint so that a step-shaped switch
    function stays smooth inside every integration segment.
    """
    if t_to <= t_from:
        return identity()
    profile = params.window_detuning_profile()
    functions = params.window_switch_functions()
    lam = params.resolved_lambda() if params.lambda_coupling is None else params.lambda_coupling
    h_of = _cross_hamiltonian(params, profile, functions, lam)
    ode = _ode_settings(params)

    mid = 0.5 * params.t_switch
    segments = []
    if functions.shape == "step":
        # piecewise-constant weights: hold f1 fixed per half so the RK4 nodes
        # at the midpoint never straddle the discontinuity
        if t_from < mid:
            segments.append((t_from, min(mid, t_to), 1.0))
        if t_to > mid:
            segments.append((max(mid, t_from), t_to, 0.0))
    else:
        segments.append((t_from, t_to, None))

    u = identity()
    for seg_from, seg_to, f1_fixed in segments:
        if seg_to <= seg_from:
            continue

        def rhs(t, m, f1_fixed=f1_fixed):
            if f1_fixed is None:
                f1, f2 = switch_at(functions, t)
            else:
                f1, f2 = f1_fixed, 1.0 - f1_fixed
            return -1j * (h_of(t, f1, f2) @ m)

        u = _rk4(rhs, u, seg_from, seg_to, ode.step)
    return u
