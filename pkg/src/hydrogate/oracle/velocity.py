"""Prescribed velocity fields on the staggered grid.

Each straight segment carries a parabolic transverse profile whose
discrete cross-sectional mean is made exactly equal to the circuit-model
mean for that segment and mode (the raw 6 s (1-s) parabola is normalized
over the cell centers). Inside the junction square the axial means blend
linearly between the upstream and downstream segment values, and the
horizontal/vertical profiles superpose vectorially; this field is not
divergence-free there, which the flux-form scheme tolerates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import hydraulics
from ..params import SystemParameters
from .grid import (GATING_INLET, GATING_OUTLET, JUNCTION, PROPAGATION,
                   SOLID, SUPPLY, Grid)

# Face boundary-condition kinds.
BC_NONE = 0
BC_DIRICHLET = 1   # ghost cell holds a prescribed concentration
BC_OUTFLOW = 2     # zero-gradient ghost


@dataclass(frozen=True)
class VelocityField:
    u: np.ndarray        # (ny, nx+1) x-face velocities
    v: np.ndarray        # (ny+1, nx) y-face velocities
    mode: str
    bcx_kind: np.ndarray  # (ny, nx+1) int8
    bcx_val: np.ndarray   # (ny, nx+1)
    bcy_kind: np.ndarray  # (ny+1, nx) int8
    bcy_val: np.ndarray   # (ny+1, nx)

    @property
    def max_u(self) -> float:
        return float(np.max(np.abs(self.u)))

    @property
    def max_v(self) -> float:
        return float(np.max(np.abs(self.v)))


def _profile(n: int, form: str) -> np.ndarray:
    """Transverse parabola sampled at cell centers, discrete mean 1.

    ``form``="mean" rescales so the discrete cross-sectional mean is
    exactly 1; "paper4" keeps the raw 4 s (1-s) shape (mean 2/3) for
    compatibility with the as-published profile.
    """
    s = (np.arange(n) + 0.5) / n
    raw = s * (1.0 - s)
    if form == "paper4":
        return 4.0 * raw
    return raw / raw.mean()


def velocity_field(p: SystemParameters, grid: Grid, mode: str,
                   profile_form: str = "mean") -> VelocityField:
    means = hydraulics.segment_means(p, mode)
    n = grid.cells_across
    prof = _profile(n, profile_form)
    dx = grid.dx
    ny, nx = grid.ny, grid.nx
    j0 = grid.j_main0
    i0 = grid.i_junc0
    i1 = i0 + n
    region = grid.region
    fluid = grid.fluid

    # Signed segment means: main channel +x; gating outlet drains -y;
    # gating inlet -y when gating is on, +y (drain) when off.
    v_gi = -means.gating_inlet if mode == "ON" else +means.gating_inlet
    v_go = -means.gating_outlet

    u = np.zeros((ny, nx + 1))
    v = np.zeros((ny + 1, nx))

    # x-faces in the main channel rows; axial mean depends on the face
    # x-position: supply value up to the junction, propagation value
    # after it, linear blend inside.
    x_faces = np.arange(nx + 1) * dx
    xi = np.clip((x_faces - p.l_s) / p.w_ch, 0.0, 1.0)
    u_bar = means.supply + (means.propagation - means.supply) * xi
    for jj in range(n):
        u[j0 + jj, :] = prof[jj] * u_bar

    # y-faces in junction columns and gating arms; vertical mean blends
    # from the gating-outlet value at y=0 to the gating-inlet value at
    # y=w_ch.
    y_faces = np.arange(ny + 1) * dx - p.l_go
    eta = np.clip(y_faces / p.w_ch, 0.0, 1.0)
    v_bar = v_go + (v_gi - v_go) * eta
    for ii in range(n):
        v[:, i0 + ii] = prof[ii] * v_bar[:]

    # Zero every face touching solid, except the open domain boundaries
    # handled below.
    for j in range(ny):
        for i in range(nx + 1):
            left = fluid[j, i - 1] if i > 0 else False
            right = fluid[j, i] if i < nx else False
            if not (left and right):
                u[j, i] = 0.0
    for j in range(ny + 1):
        for i in range(nx):
            below = fluid[j - 1, i] if j > 0 else False
            above = fluid[j, i] if j < ny else False
            if not (below and above):
                v[j, i] = 0.0

    bcx_kind = np.zeros((ny, nx + 1), dtype=np.int8)
    bcx_val = np.zeros((ny, nx + 1))
    bcy_kind = np.zeros((ny + 1, nx), dtype=np.int8)
    bcy_val = np.zeros((ny + 1, nx))

    main_rows = slice(j0, j0 + n)
    # Supply inlet: Dirichlet c = c_s, prescribed inflow profile.
    bcx_kind[main_rows, 0] = BC_DIRICHLET
    bcx_val[main_rows, 0] = p.c_s
    u[main_rows, 0] = prof * means.supply
    # Propagation outlet: zero-gradient outflow.
    bcx_kind[main_rows, nx] = BC_OUTFLOW
    u[main_rows, nx] = prof * means.propagation
    # Gating inlet (top): Dirichlet c = 0; carries inflow when the gate
    # is on and drains outward when off.
    junc_cols = slice(i0, i1)
    bcy_kind[ny, junc_cols] = BC_DIRICHLET
    bcy_val[ny, junc_cols] = 0.0
    v[ny, junc_cols] = prof * v_gi
    # Gating outlet (bottom): zero-gradient outflow.
    bcy_kind[0, junc_cols] = BC_OUTFLOW
    v[0, junc_cols] = prof * v_go

    return VelocityField(u=u, v=v, mode=mode,
                         bcx_kind=bcx_kind, bcx_val=bcx_val,
                         bcy_kind=bcy_kind, bcy_val=bcy_val)


def segment_mean_from_field(vf: VelocityField, grid: Grid,
                            segment: int) -> float:
    """Cross-sectional mean speed measured from the discrete field.

    For main-channel segments this averages x-face velocities over an
    interior column of the segment; for gating arms, y-face velocities
    over an interior row.
    """
    region = grid.region
    n = grid.cells_across
    j0 = grid.j_main0
    if segment in (SUPPLY, PROPAGATION):
        cols = np.where(np.any(region == segment, axis=0))[0]
        i = cols[len(cols) // 2]
        return float(np.mean(vf.u[j0:j0 + n, i]))
    if segment in (GATING_INLET, GATING_OUTLET):
        rows = np.where(np.any(region == segment, axis=1))[0]
        j = rows[len(rows) // 2]
        i0 = grid.i_junc0
        return float(np.mean(vf.v[j, i0:i0 + n]))
    raise ValueError(f"no mean defined for region code {segment}")
