"""Simulator and analysis toolkit for bimodal-cavity entanglement sequences."""

from .analysis import (
    DEFAULT_INTERVALS,
    FitModel,
    FitResult,
    SweepRow,
    fit_cosine,
    sample_probability,
    sweep_switch_time,
    unwrap_phase,
)
from .propagators import OdeSettings, RabiFunctions, integrate_rabi
from .pulses import (
    DetuningProfile,
    ExperimentParams,
    InvalidParamsError,
    SwitchFunctions,
    detuning_at,
    normalize_lambda,
    switch_at,
)
from .sequences import SequenceResult, ideal_probability, run_full, run_source

__all__ = [
    "DEFAULT_INTERVALS",
    "DetuningProfile",
    "ExperimentParams",
    "FitModel",
    "FitResult",
    "InvalidParamsError",
    "OdeSettings",
    "RabiFunctions",
    "SequenceResult",
    "SweepRow",
    "SwitchFunctions",
    "detuning_at",
    "fit_cosine",
    "ideal_probability",
    "integrate_rabi",
    "normalize_lambda",
    "run_full",
    "run_source",
    "sample_probability",
    "sweep_switch_time",
    "switch_at",
    "unwrap_phase",
]
