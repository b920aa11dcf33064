"""Hydrodynamic-gating microfluidic transmitter: analytical pulse model,
2D convection-diffusion oracle, and GA calibration."""

__version__ = "0.1.0"

from .params import Scenario, SystemParameters, expand_scenarios, validate
from .pulse_model import (FittingParams, GeneratedPulse, PAPER_FIT,
                          PulseShape, PulseTrain, eval_pulse,
                          generated_pulse, propagated_pulse, pulse_train)

__all__ = [
    "FittingParams", "GeneratedPulse", "PAPER_FIT", "PulseShape",
    "PulseTrain", "Scenario", "SystemParameters", "eval_pulse",
    "expand_scenarios", "generated_pulse", "propagated_pulse",
    "pulse_train", "validate", "__version__",
]
