"""2D convection-diffusion oracle for the cross-junction transmitter."""

from .grid import (GATING_INLET, GATING_OUTLET, JUNCTION, PROPAGATION,
                   SOLID, SUPPLY, Grid, build_grid)
from .kernels import BACKEND, HAVE_NUMBA, step_numba, step_numpy
from .solver import (GatingSchedule, OracleMeasurement, RunResult,
                     default_horizon, measure_pulse, run, stability_dt,
                     step)
from .velocity import VelocityField, segment_mean_from_field, velocity_field

__all__ = [
    "BACKEND", "HAVE_NUMBA", "GATING_INLET", "GATING_OUTLET", "JUNCTION",
    "PROPAGATION", "SOLID", "SUPPLY", "Grid", "GatingSchedule",
    "OracleMeasurement", "RunResult", "VelocityField", "build_grid",
    "default_horizon", "measure_pulse", "run", "segment_mean_from_field",
    "stability_dt", "step", "step_numba", "step_numpy", "velocity_field",
]
