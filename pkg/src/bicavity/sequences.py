"""Full experimental timelines: source atom, free flight, probe atom.

The source atom crosses the cavity during [0, 3pi/2*omega] and leaves the two
modes in a superposition; after a free flight the probe atom crosses during
[T, T + 3pi/2*omega] and maps the mode state back onto its internal state.
The probability of detecting the probe atom excited, P(T), is the observable
the analysis module fits.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .propagators import u1_resonant, u2_resonant, u3_free, u4_probe_mode1, u_cross, u_minus, u_plus
from .pulses import InvalidParamsError


@dataclass(frozen=True)
class SequenceResult:
    final_state: np.ndarray
    p_excited: float
    mid_state: np.ndarray     # state right after the source atom has left


def interaction_time(params):
    """Duration of one atom's transit, 3pi/(2 omega)."""
    return 1.5 * math.pi / params.omega


@lru_cache(maxsize=128)
def _source_matrix(params):
    omega, delta, ts = params.omega, params.delta, params.t_switch
    quarter = 0.5 * math.pi / omega      # pi/(2 omega)
    if params.model == "stepwise":
        u = linalg.compose(u2_resonant(2.0 * quarter, omega, delta), u1_resonant(quarter, omega))
    else:
        first = u1_resonant(quarter - 0.5 * ts, omega)
        last = u2_resonant(2.0 * quarter - 0.5 * ts, omega, delta)
        if params.model == "smooth":
            window = linalg.compose(u_plus(params, 0.5 * ts, ts), u_minus(params, 0.0, 0.5 * ts))
        else:
            window = u_cross(params, 0.0, ts)
        u = linalg.compose(last, linalg.compose(window, first))
    u.flags.writeable = False
    return u


@lru_cache(maxsize=128)
def _probe_matrix(params):
    """Probe-interval propagator (mode 1 for a half rotation pair, then mode 2)."""
    omega, delta, ts = params.omega, params.delta, params.t_switch
    quarter = 0.5 * math.pi / omega
    if params.model == "stepwise":
        u = linalg.compose(
            u2_resonant(quarter, omega, delta), u4_probe_mode1(2.0 * quarter, omega, delta)
        )
    else:
        first = u4_probe_mode1(2.0 * quarter - 0.5 * ts, omega, delta)
        last = u2_resonant(quarter - 0.5 * ts, omega, delta)
        if params.model == "smooth":
            window = linalg.compose(u_plus(params, 0.5 * ts, ts), u_minus(params, 0.0, 0.5 * ts))
        else:
            window = u_cross(params, 0.0, ts)
        u = linalg.compose(last, linalg.compose(window, first))
    u.flags.writeable = False
    return u


def run_source(params):
    """Composed propagator for the source atom's transit."""
    return _source_matrix(params)


def run_full(params, t_delay):
    """Evolve the initial excited-atom/empty-cavity state through the
    whole sequence and return the probe excitation probability at t_delay."""
    t_source = interaction_time(params)
    if t_delay < t_source - 1e-12:
        raise InvalidParamsError(
            f"delay T={t_delay} us is shorter than the source transit {t_source:.4f} us"
        )
    initial = linalg.basis_state(linalg.IDX_E_00)
    mid_state = linalg.apply(_source_matrix(params), initial)
    free = u3_free(t_delay - t_source, params.delta)
    final_state = linalg.apply(_probe_matrix(params), linalg.apply(free, mid_state))
    p_excited = float(abs(final_state[linalg.IDX_E_00]) ** 2)
    return SequenceResult(final_state=final_state, p_excited=p_excited, mid_state=mid_state)


def ideal_probability(params, t_delay):
    """Closed-form excitation probability of the idealized step-wise sequence."""
    phase = math.pi * params.delta / (2.0 * params.omega)
    return 0.5 * (1.0 + math.cos(params.delta * t_delay + phase))


def ideal_phase(params):
    """Phase offset of the idealized probability, pi*delta/(2*omega)."""
    return math.pi * params.delta / (2.0 * params.omega)


def mode_schmidt_coefficients(state):
    """Schmidt coefficients of the two-mode state conditioned on a ground atom.

    Returns the singular values of the 2x2 mode amplitude matrix, normalized
    to unit total weight; (1/sqrt2, 1/sqrt2) marks a maximally entangled pair.
    """
    m = np.array(
        [
            [state[linalg.BASIS_INDEX[("g", 0, 0)]], state[linalg.BASIS_INDEX[("g", 0, 1)]]],
            [state[linalg.BASIS_INDEX[("g", 1, 0)]], state[linalg.BASIS_INDEX[("g", 1, 1)]]],
        ]
    )
    weight = np.linalg.norm(m)
    if weight == 0.0:
        raise ValueError("no ground-atom amplitude to decompose")
    return tuple(np.linalg.svd(m / weight, compute_uv=False))
