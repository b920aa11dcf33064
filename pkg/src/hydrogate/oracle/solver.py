"""Time integration of the gated transport problem.

Runs start from a clean channel in ON (gating) mode, switch the
prescribed velocity field instantaneously at each injection-window
boundary, and record centerline profiles, probe time series and full
field snapshots. Mode switching is quasi-static: no flow-development
transient is modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidTrain, UnstableTimestep
from ..params import SystemParameters, validate
from .grid import JUNCTION, PROPAGATION, Grid, build_grid
from .kernels import step as _step_kernel
from .velocity import VelocityField, velocity_field

SAFETY = 0.9
# Schedule times are quantized to this unit so window boundaries land
# exactly on step boundaries.
TIME_QUANTUM = 0.01


def stability_dt(vf: VelocityField, D: float, grid: Grid) -> float:
    """Explicit-scheme timestep bound (advective and diffusive limits)."""
    dx = dy = grid.dx
    limits = [dx * dx * dy * dy / (2.0 * D * (dx * dx + dy * dy))
              if D > 0 else math.inf]
    if vf.max_u > 0:
        limits.append(dx / vf.max_u)
    if vf.max_v > 0:
        limits.append(dy / vf.max_v)
    return SAFETY * min(limits)


def _run_dt(fields: dict[str, VelocityField], D: float, grid: Grid) -> float:
    """Conservative step size honoring the combined 2D CFL condition in
    both gating modes, quantized to divide TIME_QUANTUM."""
    dx = grid.dx
    diffusive = 4.0 * D / dx**2
    rate = diffusive if diffusive > 0 else 0.0
    for vf in fields.values():
        rate = max(rate, vf.max_u / dx + vf.max_v / dx + diffusive)
    dt0 = SAFETY / rate
    n = max(1, math.ceil(TIME_QUANTUM / dt0))
    return TIME_QUANTUM / n


def step(c: np.ndarray, vf: VelocityField, grid: Grid, D: float,
         dt: float):
    """Advance the concentration field by one conservative update.

    Raises UnstableTimestep when dt exceeds the stability bound.
    Returns (c_new, influx, outflux).
    """
    if dt > stability_dt(vf, D, grid) * (1.0 + 1e-12):
        raise UnstableTimestep(f"dt = {dt} exceeds stability limit "
                               f"{stability_dt(vf, D, grid)}")
    return _step_kernel(c, grid.fluid, vf.u, vf.v, vf.bcx_kind, vf.bcx_val,
                        vf.bcy_kind, vf.bcy_val, grid.dx, dt, D)


@dataclass(frozen=True)
class GatingSchedule:
    """Injection windows: intervals during which the gating flow is off."""

    off_windows: tuple
    horizon: float

    def __post_init__(self):
        prev_end = -math.inf
        for start, dur in self.off_windows:
            if dur <= 0 or start < 0:
                raise InvalidTrain(f"bad window ({start}, {dur})")
            if start < prev_end:
                raise InvalidTrain("windows overlap or are out of order")
            prev_end = start + dur
        if prev_end > self.horizon:
            raise InvalidTrain("windows extend past the horizon")

    @classmethod
    def single(cls, start: float, T_g: float, horizon: float):
        return cls(((start, T_g),), horizon)

    @classmethod
    def uniform(cls, start: float, T_g: float, T_p: float, N: int,
                horizon: float):
        """N windows of length T_g whose starts are T_p apart."""
        if N > 1 and T_p <= T_g:
            raise InvalidTrain(f"need period T_p > T_g, got T_p={T_p}, "
                               f"T_g={T_g}")
        return cls(tuple((start + n * T_p, T_g) for n in range(N)), horizon)

    def mode_at(self, t: float) -> str:
        for start, dur in self.off_windows:
            if start <= t < start + dur:
                return "OFF"
        return "ON"


@dataclass
class RunResult:
    dt: float
    n_steps: int
    times: np.ndarray                 # probe sampling times
    probe_series: dict                # x -> centerline c(t) at that x
    profiles: list                    # (t, c_centerline(x)) snapshots
    snapshots: dict                   # t -> full field copy
    x_centers: np.ndarray
    mass_error: float                 # max per-step balance violation
    final: np.ndarray = field(repr=False, default=None)


def _centerline(c: np.ndarray, grid: Grid) -> np.ndarray:
    j1, j2 = grid.j_mid
    return 0.5 * (c[j1, :] + c[j2, :])


def run(p: SystemParameters, schedule: GatingSchedule, grid: Grid | None = None,
        cells_across: int = 20, probe_x: tuple = (), profile_every: float = 0.0,
        profile_after: float = 0.0, snapshot_times: tuple = (),
        profile_form: str = "mean") -> RunResult:
    """Integrate the schedule from a clean channel and record probes."""
    validate(p)
    if grid is None:
        grid = build_grid(p, cells_across)
    fields = {m: velocity_field(p, grid, m, profile_form)
              for m in ("ON", "OFF")}
    dt = _run_dt(fields, p.D, grid)
    n_steps = round(schedule.horizon / dt)

    c = np.zeros((grid.ny, grid.nx))
    probe_idx = {x: grid.x_index(x) for x in probe_x}
    series = {x: np.empty(n_steps + 1) for x in probe_x}
    times = np.empty(n_steps + 1)
    profiles = []
    snapshots = {}
    snap_left = sorted(snapshot_times)
    next_profile = max(profile_after, 0.0)
    mass_err = 0.0
    mass = 0.0  # starts empty
    cell_area = grid.dx * grid.dx
    fluid = grid.fluid

    def record(t, k):
        times[k] = t
        row = _centerline(c, grid)
        for x, i in probe_idx.items():
            series[x][k] = row[i]

    record(0.0, 0)
    for k in range(n_steps):
        t = k * dt
        vf = fields[schedule.mode_at(t + 0.5 * dt)]
        c, influx, outflux = _step_kernel(
            c, fluid, vf.u, vf.v, vf.bcx_kind, vf.bcx_val,
            vf.bcy_kind, vf.bcy_val, grid.dx, dt, p.D)
        t_new = (k + 1) * dt
        new_mass = float(np.sum(c[fluid])) * cell_area
        balance = abs(new_mass - mass - dt * (influx - outflux))
        scale = max(new_mass, mass, 1e-300)
        mass_err = max(mass_err, balance / scale)
        mass = new_mass
        record(t_new, k + 1)
        if profile_every > 0.0 and t_new + 1e-12 >= next_profile:
            profiles.append((t_new, _centerline(c, grid).copy()))
            next_profile += profile_every
        while snap_left and t_new + 1e-12 >= snap_left[0]:
            snapshots[snap_left.pop(0)] = c.copy()

    return RunResult(dt=dt, n_steps=n_steps, times=times,
                     probe_series=series, profiles=profiles,
                     snapshots=snapshots, x_centers=grid.x_centers,
                     mass_error=mass_err, final=c)


@dataclass(frozen=True)
class OracleMeasurement:
    A_p: float
    W_p: float
    T_d: float
    t_peak: float
    profile_time: float
    x_s: float

    def shape(self):
        from ..pulse_model import PulseShape
        return PulseShape(A_p=self.A_p, W_p=self.W_p, T_d=self.T_d,
                          x_s=self.x_s)


def default_horizon(p: SystemParameters, window_start: float = 10.0) -> float:
    """Horizon long enough for the peak to clear x_s: window end plus
    twice the estimated travel time at the ON-mode centerline speed."""
    from .. import hydraulics

    u_peak = 1.5 * hydraulics.mean_velocity_on(p)
    return window_start + p.T_g + 2.0 * (p.x_s - p.x_g) / u_peak + 5.0


def measure_pulse(p: SystemParameters, cells_across: int = 20,
                  window_start: float = 10.0, horizon: float | None = None,
                  profile_every: float = 0.05) -> OracleMeasurement:
    """Run a single-injection experiment and extract the pulse triple.

    The delay is the travel time of the centerline peak from x_g to x_s
    (peak-arrival difference between the two probes); amplitude and FWHM
    come from the centerline spatial profile recorded nearest the x_s
    arrival time, restricted to the propagation channel so the
    supply-side plateau is ignored.
    """
    from ..metrics import extract_pulse

    if horizon is None:
        horizon = default_horizon(p, window_start)
    grid = build_grid(p, cells_across)
    schedule = GatingSchedule.single(window_start, p.T_g, horizon)
    res = run(p, schedule, grid=grid, probe_x=(p.x_g, p.x_s),
              profile_every=profile_every, profile_after=window_start)

    floor = 1e-9 * p.c_s
    mp_g = extract_pulse(res.times, res.probe_series[p.x_g],
                         kind="temporal", noise_floor=floor)
    mp_t = extract_pulse(res.times, res.probe_series[p.x_s],
                         kind="temporal", window=(window_start, p.T_g),
                         noise_floor=floor)
    t_peak = mp_t.peak_pos

    # Spatial profile nearest the arrival time, propagation region only.
    t_prof, row = min(res.profiles, key=lambda pr: abs(pr[0] - t_peak))
    x0 = p.l_s + p.w_ch + 2 * grid.dx
    sel = res.x_centers >= x0
    mp_x = extract_pulse(res.x_centers[sel], row[sel], kind="spatial",
                         noise_floor=1e-9 * p.c_s)
    return OracleMeasurement(A_p=mp_x.A, W_p=mp_x.fwhm,
                             T_d=t_peak - mp_g.peak_pos,
                             t_peak=t_peak, profile_time=t_prof, x_s=p.x_s)
