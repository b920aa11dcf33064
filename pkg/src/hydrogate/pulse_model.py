"""Closed-form transmitter model.

The generated plug at the junction has amplitude c_s and width
W_g = k_g * T_g * u_m; after propagating to the sampling point it is a
Gaussian with amplitude A_p = k_a * A_g * W_g / (x_s - x_g), FWHM
W_p = k_w * (x_s - x_g) * W_g and delay T_d = k_t * (x_s - x_g) / u_m.

The FWHM/variance conversion uses W_p = 2.3548 sigma throughout; the
rounded 0.36 coefficient sometimes quoted for the exponent denominator
(0.36 W_p^2 ~= 2 sigma^2) is implemented in its exact 2 sigma^2 form so
the half-maximum identity holds to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import hydraulics
from .errors import DegenerateDistance, InvalidParameter, InvalidTrain
from .params import SystemParameters

FWHM_PER_SIGMA = 2.3548

# Default search box for the fitting constants (k_g, k_a, k_w, k_t).
DEFAULT_BOUNDS = ((0.1, 100.0), (0.1, 100.0), (0.01, 100.0), (0.1, 10.0))


@dataclass(frozen=True)
class FittingParams:
    """The four calibrated constants of the model.

    k_w carries units 1/m so that W_p is a length in SI. The published
    constants were evidently fit in a different unit convention (they
    give A_p = 80 c_s at defaults, which is unphysical), so they ship
    with provenance "paper" for smoke tests only; quantitative use goes
    through a refit.
    """

    k_g: float
    k_a: float
    k_w: float
    k_t: float
    provenance: str = "refit"
    bounds: tuple = DEFAULT_BOUNDS

    def __post_init__(self):
        for name, v, (lo, hi) in zip(("k_g", "k_a", "k_w", "k_t"),
                                     self.as_array(), self.bounds):
            if lo <= 0 or hi <= lo:
                raise InvalidParameter(name, f"bad bounds ({lo}, {hi})")
            if not (lo <= v <= hi):
                raise InvalidParameter(name, f"{v} outside bounds "
                                       f"[{lo}, {hi}]")

    def as_array(self) -> np.ndarray:
        return np.array([self.k_g, self.k_a, self.k_w, self.k_t])


PAPER_FIT = FittingParams(k_g=14.6, k_a=20.16, k_w=0.7, k_t=0.683,
                          provenance="paper")


@dataclass(frozen=True)
class GeneratedPulse:
    A_g: float  # mol/m^3, equals c_s
    W_g: float  # m


@dataclass(frozen=True)
class PulseShape:
    A_p: float   # mol/m^3
    W_p: float   # m, FWHM
    T_d: float   # s
    x_s: float   # m, peak position
    sigma: float = field(default=0.0)

    def __post_init__(self):
        if self.sigma == 0.0:
            object.__setattr__(self, "sigma", self.W_p / FWHM_PER_SIGMA)

    def triple(self) -> tuple[float, float, float]:
        return (self.A_p, self.W_p, self.T_d)


def generated_pulse(p: SystemParameters, k: FittingParams) -> GeneratedPulse:
    u_m = hydraulics.overall_mean_velocity(p)
    return GeneratedPulse(A_g=p.c_s, W_g=k.k_g * p.T_g * u_m)


def propagated_pulse(p: SystemParameters, k: FittingParams) -> PulseShape:
    d = p.x_s - p.x_g
    if d <= 0:
        raise DegenerateDistance(f"x_s - x_g = {d} must be > 0")
    g = generated_pulse(p, k)
    u_m = hydraulics.overall_mean_velocity(p)
    return PulseShape(
        A_p=k.k_a * g.A_g * g.W_g / d,
        W_p=k.k_w * d * g.W_g,
        T_d=k.k_t * d / u_m,
        x_s=p.x_s,
    )


def eval_pulse(shape: PulseShape, x) -> np.ndarray | float:
    """Gaussian concentration profile of a single pulse at position x.

    The exponent is keyed to the FWHM directly, W_p^2 / (4 ln 2), so
    the half-maximum identity at x_s +/- W_p/2 is exact; the rounded
    2.3548 conversion only enters the reported sigma.
    """
    x = np.asarray(x, dtype=float)
    denom = shape.W_p**2 / (4.0 * math.log(2.0))
    out = shape.A_p * np.exp(-((x - shape.x_s) ** 2) / denom)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PulseTrain:
    pulses: tuple            # (PulseShape, x_n) per transmitted pulse
    d: float                 # m, spacing between consecutive peaks
    N: int
    T_p: float


def pulse_train(p: SystemParameters, k: FittingParams, N: int,
                width_convention: str = "sigma",
                delay_velocity: str = "on"):
    """Superposed profile of N successively transmitted pulses.

    Pulse n peaks at x_n = x_s - (n-1) d with d = T_p (x_s - x_g) / T_d.
    ``width_convention`` selects the exponent denominator of each term:
    "sigma" uses 2 sigma^2 (consistent with eval_pulse), "wp" uses
    2 W_p^2 as sometimes written for the superposition form.

    ``delay_velocity`` selects the mean velocity entering the T_d that
    sets the spacing d. "on" uses the gate-open value (the single-pulse
    convention, where the gate reopens after one window and the pulse
    rides the steady flow). "cycle" averages over one T_p gating period,
    u = (u_on (T_p - T_g) + u_off T_g) / T_p, which is the speed a pulse
    actually sees when windows repeat every T_p; with gating active most
    of the cycle the two differ by the OFF duty fraction.
    """
    if N < 1:
        raise InvalidTrain(f"N must be >= 1, got {N}")
    if N > 1 and p.T_p <= p.T_g:
        raise InvalidTrain(
            f"successive-pulse mode needs T_p > T_g, got T_p={p.T_p}, "
            f"T_g={p.T_g}")
    if width_convention not in ("sigma", "wp"):
        raise ValueError(f"unknown width convention {width_convention!r}")
    if delay_velocity not in ("on", "cycle"):
        raise ValueError(f"unknown delay velocity {delay_velocity!r}")
    shape = propagated_pulse(p, k)
    if delay_velocity == "cycle":
        u_on = hydraulics.closed_form_mean_velocity(p)
        u_off = hydraulics.mean_velocity_off(p)
        u_cycle = (u_on * (p.T_p - p.T_g) + u_off * p.T_g) / p.T_p
        T_d = k.k_t * (p.x_s - p.x_g) / u_cycle
    else:
        T_d = shape.T_d
    d = p.T_p * (p.x_s - p.x_g) / T_d
    x_n = tuple(p.x_s - (n - 1) * d for n in range(1, N + 1))
    train = PulseTrain(pulses=tuple((shape, xn) for xn in x_n),
                       d=d, N=N, T_p=p.T_p)
    denom = (shape.W_p**2 / (4.0 * math.log(2.0))
             if width_convention == "sigma" else 2.0 * shape.W_p**2)

    def trace(x):
        x = np.asarray(x, dtype=float)
        c = np.zeros_like(x)
        for xn in x_n:
            c = c + shape.A_p * np.exp(-((x - xn) ** 2) / denom)
        return c if c.ndim else float(c)

    return train, trace
