"""Uniform-grid discretization of the cross-junction geometry.

The bounding box spans x in [0, l_ch] and y in [-l_go, w_ch + l_gi];
square cells of size dx = w_ch / cells_across. Region codes mark the
supply channel, junction square, propagation channel and the two gating
arms; everything else is solid wall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ResolutionTooCoarse
from ..params import SystemParameters

SOLID = 0
SUPPLY = 1
JUNCTION = 2
PROPAGATION = 3
GATING_INLET = 4
GATING_OUTLET = 5

MIN_CELLS_ACROSS = 8


@dataclass(frozen=True)
class Grid:
    dx: float
    nx: int
    ny: int
    cells_across: int
    region: np.ndarray     # (ny, nx) int8, row j=0 at y = -l_go
    j_main0: int           # first main-channel row
    i_junc0: int           # first junction column
    x_centers: np.ndarray
    y_centers: np.ndarray

    @property
    def fluid(self) -> np.ndarray:
        return self.region > SOLID

    @property
    def n_fluid(self) -> int:
        return int(np.count_nonzero(self.fluid))

    @property
    def j_mid(self) -> tuple[int, int]:
        """The two central main-channel rows; averaging them gives the
        centerline probe."""
        lo = self.j_main0 + self.cells_across // 2 - 1
        return (lo, lo + 1)

    def x_index(self, x: float) -> int:
        return int(np.clip(round(x / self.dx - 0.5), 0, self.nx - 1))


def _span(length: float, dx: float) -> int:
    n = round(length / dx)
    if abs(n * dx - length) > 1e-9 * max(length, dx):
        raise ResolutionTooCoarse(
            f"length {length} is not an integer multiple of dx = {dx}")
    return int(n)


def build_grid(p: SystemParameters, cells_across: int) -> Grid:
    if cells_across < MIN_CELLS_ACROSS:
        raise ResolutionTooCoarse(
            f"cells_across must be >= {MIN_CELLS_ACROSS}, got {cells_across}")
    dx = p.w_ch / cells_across
    nx = _span(p.l_ch, dx)
    n_go = _span(p.l_go, dx)
    n_gi = _span(p.l_gi, dx)
    n_s = _span(p.l_s, dx)
    ny = n_go + cells_across + n_gi

    region = np.zeros((ny, nx), dtype=np.int8)
    j0 = n_go                      # first main-channel row
    i0 = n_s                       # first junction column
    i1 = i0 + cells_across         # first propagation column

    region[j0:j0 + cells_across, :i0] = SUPPLY
    region[j0:j0 + cells_across, i0:i1] = JUNCTION
    region[j0:j0 + cells_across, i1:] = PROPAGATION
    region[j0 + cells_across:, i0:i1] = GATING_INLET
    region[:j0, i0:i1] = GATING_OUTLET

    x_centers = (np.arange(nx) + 0.5) * dx
    y_centers = (np.arange(ny) + 0.5) * dx - p.l_go
    return Grid(dx=dx, nx=nx, ny=ny, cells_across=cells_across,
                region=region, j_main0=j0, i_junc0=i0,
                x_centers=x_centers, y_centers=y_centers)
