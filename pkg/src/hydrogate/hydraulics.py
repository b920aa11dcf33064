"""Electric-circuit analogy of the cross junction.

Channel resistances follow the laminar Hagen-Poiseuille form with the
channel width standing in for twice the effective radius, so
R = 128 mu l / (pi w^4). Flow division between the gating outlet and the
propagation channel is an ordinary current divider. Only velocity ratios
are observable, so viscosity cancels everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DurationTooShort, NonPositiveArgument
from .params import SystemParameters


def channel_resistance(mu: float, l: float, w: float) -> float:
    """Hydraulic resistance of one rectangular channel, Pa.s/m^3."""
    if mu <= 0 or l <= 0 or w <= 0:
        raise NonPositiveArgument(
            f"mu, l, w must all be > 0, got ({mu}, {l}, {w})")
    return 128.0 * mu * l / (math.pi * w**4)


@dataclass(frozen=True)
class HydraulicNetwork:
    R_s: float
    R_gi: float
    R_go: float
    R_p: float
    Q_s: float
    Q_g: float
    A_ch: float  # unit-depth cross section, w_ch x 1 m


def network(p: SystemParameters) -> HydraulicNetwork:
    A_ch = p.w_ch * 1.0
    return HydraulicNetwork(
        R_s=channel_resistance(p.mu, p.l_s, p.w_ch),
        R_gi=channel_resistance(p.mu, p.l_gi, p.w_ch),
        R_go=channel_resistance(p.mu, p.l_go, p.w_ch),
        R_p=channel_resistance(p.mu, p.l_p, p.w_ch),
        Q_s=A_ch * p.u_s,
        Q_g=A_ch * p.r_u * p.u_s,
        A_ch=A_ch,
    )


def mean_velocity_on(p: SystemParameters) -> float:
    """Mean propagation-channel velocity with the gating flow active."""
    n = network(p)
    return n.R_go * p.u_s * (p.r_u + 1.0) / (n.R_go + n.R_p)


def mean_velocity_off(p: SystemParameters) -> float:
    """Mean propagation-channel velocity during the injection window.

    The gating arms act as two parallel resistors draining part of the
    supply flow.
    """
    n = network(p)
    R_g = n.R_gi * n.R_go / (n.R_gi + n.R_go)
    return R_g * p.u_s / (R_g + n.R_p)


def closed_form_mean_velocity(p: SystemParameters) -> float:
    """l_go * u_s * (r_u + 1) / l_ch, exact when l_s = l_gi = l_go."""
    return p.l_go * p.u_s * (p.r_u + 1.0) / p.l_ch


def overall_mean_velocity(p: SystemParameters, t: float | None = None,
                          approximate: bool = True) -> float:
    """Time-averaged propagation velocity over a horizon ``t``.

    With ``approximate=True`` (the pulse-model default) the OFF-window
    contribution is dropped and the closed form is returned; ``t`` is
    then unused.
    """
    if approximate:
        return closed_form_mean_velocity(p)
    if t is None or t < p.T_g:
        raise DurationTooShort(f"need t >= T_g = {p.T_g}, got {t}")
    u_on = mean_velocity_on(p)
    u_off = mean_velocity_off(p)
    return ((t - p.T_g) * u_on + p.T_g * u_off) / t


@dataclass(frozen=True)
class SegmentMeans:
    """Mean speed of each channel segment for one gating mode.

    Signs are handled by the velocity-field builder; these are
    magnitudes, with flow directions: supply +x, propagation +x,
    gating inlet -y when the gate is on and +y (drain) when off,
    gating outlet always -y.
    """

    supply: float
    propagation: float
    gating_inlet: float
    gating_outlet: float
    mode: str


def segment_means(p: SystemParameters, mode: str) -> SegmentMeans:
    """Per-segment mean speeds implied by the current divider."""
    n = network(p)
    if mode == "ON":
        u_prop = mean_velocity_on(p)
        return SegmentMeans(
            supply=p.u_s,
            propagation=u_prop,
            gating_inlet=p.u_g,
            gating_outlet=(1.0 + p.r_u) * p.u_s - u_prop,
            mode="ON",
        )
    if mode == "OFF":
        u_prop = mean_velocity_off(p)
        excess = p.u_s - u_prop  # drains through the two gating arms
        return SegmentMeans(
            supply=p.u_s,
            propagation=u_prop,
            gating_inlet=excess * n.R_go / (n.R_gi + n.R_go),
            gating_outlet=excess * n.R_gi / (n.R_gi + n.R_go),
            mode="OFF",
        )
    raise ValueError(f"mode must be 'ON' or 'OFF', got {mode!r}")


def report(p: SystemParameters) -> dict:
    """JSON-friendly summary used by the CLI."""
    n = network(p)
    return {
        "R_s": n.R_s,
        "R_gi": n.R_gi,
        "R_go": n.R_go,
        "R_p": n.R_p,
        "u_on": mean_velocity_on(p),
        "u_off": mean_velocity_off(p),
        "u_m": overall_mean_velocity(p),
    }
