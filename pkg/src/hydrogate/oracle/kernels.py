"""Finite-volume update kernels: numba-jitted loops with a pure-numpy
fallback.

Backend selection: numba is used when importable unless the environment
variable HYDROGATE_NUMBA is set to "0". Both backends implement the
identical scheme (van Leer flux-limited upwind advection plus central
diffusion, flux form) and agree to rounding; `benchmarks/bench_kernels.py`
compares their throughput.

A step returns (c_new, influx, outflux) where the fluxes are the
instantaneous boundary mass rates (mol/s per unit depth), so
mass(t+dt) - mass(t) = dt * (influx - outflux) holds to rounding.
"""

from __future__ import annotations

import os

import numpy as np

BC_NONE = 0
BC_DIRICHLET = 1
BC_OUTFLOW = 2


def step_numpy(c, fluid, u, v, bcx_kind, bcx_val, bcy_kind, bcy_val,
               dx, dt, D):
    ny, nx = c.shape
    Fx, in_x, out_x = _fluxes_numpy(c, fluid, u, bcx_kind, bcx_val, dx, D)
    cT = np.ascontiguousarray(c.T)
    FyT, in_y, out_y = _fluxes_numpy(cT, fluid.T, v.T, bcy_kind.T,
                                     bcy_val.T, dx, D)
    Fy = FyT.T
    cn = c - (dt / dx) * (Fx[:, 1:] - Fx[:, :-1] + Fy[1:, :] - Fy[:-1, :])
    cn = np.where(fluid, cn, c)
    return cn, (in_x + in_y) * dx, (out_x + out_y) * dx


def _fluxes_numpy(c, fluid, u, kind, val, dx, D):
    """Limited upwind + diffusive fluxes along the last axis."""
    ny, nx = c.shape
    z = np.zeros((ny, 1))
    zb = np.zeros((ny, 1), dtype=bool)
    cLs = np.concatenate([z, c], axis=1)          # c[..., i-1]
    cRs = np.concatenate([c, z], axis=1)          # c[..., i]
    hasL = np.concatenate([zb, fluid], axis=1)
    hasR = np.concatenate([fluid, zb], axis=1)
    cLL = np.concatenate([z, z, c[:, :-1]], axis=1)
    okLL = np.concatenate([zb, zb, fluid[:, :-1]], axis=1)
    cRR = np.concatenate([c[:, 1:], z, z], axis=1)
    okRR = np.concatenate([fluid[:, 1:], zb, zb], axis=1)

    dirich = kind == BC_DIRICHLET
    cL = np.where(hasL, cLs, np.where(dirich, val, cRs))
    cR = np.where(hasR, cRs, np.where(dirich, val, cLs))
    interior = hasL & hasR
    active = interior | (kind != BC_NONE)

    dcf = cR - cL
    nz = dcf != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        rP = np.where(nz, (cL - cLL) / dcf, 0.0)
        rN = np.where(nz, (cRR - cR) / dcf, 0.0)
    phiP = (rP + np.abs(rP)) / (1.0 + np.abs(rP))
    phiN = (rN + np.abs(rN)) / (1.0 + np.abs(rN))
    corrP = np.where(interior & okLL & nz, 0.5 * phiP * dcf, 0.0)
    corrN = np.where(interior & okRR & nz, 0.5 * phiN * dcf, 0.0)
    cface = np.where(u >= 0.0, cL + corrP, cR - corrN)

    diff = np.where(interior | dirich, -D * dcf / dx, 0.0)
    F = np.where(active, u * cface + diff, 0.0)

    leftb = active & ~hasL   # +F enters the domain
    rightb = active & ~hasR  # +F leaves the domain
    influx = float(np.sum(np.maximum(F[leftb], 0.0))
                   - np.sum(np.minimum(F[rightb], 0.0)))
    outflux = float(np.sum(np.maximum(F[rightb], 0.0))
                    - np.sum(np.minimum(F[leftb], 0.0)))
    return F, influx, outflux


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _step_jit(c, fluid, u, v, bcx_kind, bcx_val, bcy_kind, bcy_val,
                  dx, dt, D):
        ny, nx = c.shape
        Fx = np.zeros((ny, nx + 1))
        Fy = np.zeros((ny + 1, nx))
        influx = 0.0
        outflux = 0.0

        for j in range(ny):
            for i in range(nx + 1):
                hasL = i > 0 and fluid[j, i - 1]
                hasR = i < nx and fluid[j, i]
                kind = bcx_kind[j, i]
                if not (hasL and hasR) and kind == BC_NONE:
                    continue
                uf = u[j, i]
                if hasL:
                    cL = c[j, i - 1]
                elif kind == BC_DIRICHLET:
                    cL = bcx_val[j, i]
                else:
                    cL = c[j, i]
                if hasR:
                    cR = c[j, i]
                elif kind == BC_DIRICHLET:
                    cR = bcx_val[j, i]
                else:
                    cR = c[j, i - 1]
                dcf = cR - cL
                if uf >= 0.0:
                    cface = cL
                    if (hasL and hasR and i >= 2 and fluid[j, i - 2]
                            and dcf != 0.0):
                        r = (cL - c[j, i - 2]) / dcf
                        phi = (r + abs(r)) / (1.0 + abs(r))
                        cface = cL + 0.5 * phi * dcf
                else:
                    cface = cR
                    if (hasL and hasR and i <= nx - 2 and fluid[j, i + 1]
                            and dcf != 0.0):
                        r = (c[j, i + 1] - cR) / dcf
                        phi = (r + abs(r)) / (1.0 + abs(r))
                        cface = cR - 0.5 * phi * dcf
                diff = 0.0
                if (hasL and hasR) or kind == BC_DIRICHLET:
                    diff = -D * dcf / dx
                F = uf * cface + diff
                Fx[j, i] = F
                if not hasL:
                    if F >= 0.0:
                        influx += F
                    else:
                        outflux -= F
                elif not hasR:
                    if F >= 0.0:
                        outflux += F
                    else:
                        influx -= F

        for j in range(ny + 1):
            for i in range(nx):
                hasB = j > 0 and fluid[j - 1, i]
                hasT = j < ny and fluid[j, i]
                kind = bcy_kind[j, i]
                if not (hasB and hasT) and kind == BC_NONE:
                    continue
                vf = v[j, i]
                if hasB:
                    cB = c[j - 1, i]
                elif kind == BC_DIRICHLET:
                    cB = bcy_val[j, i]
                else:
                    cB = c[j, i]
                if hasT:
                    cT = c[j, i]
                elif kind == BC_DIRICHLET:
                    cT = bcy_val[j, i]
                else:
                    cT = c[j - 1, i]
                dcf = cT - cB
                if vf >= 0.0:
                    cface = cB
                    if (hasB and hasT and j >= 2 and fluid[j - 2, i]
                            and dcf != 0.0):
                        r = (cB - c[j - 2, i]) / dcf
                        phi = (r + abs(r)) / (1.0 + abs(r))
                        cface = cB + 0.5 * phi * dcf
                else:
                    cface = cT
                    if (hasB and hasT and j <= ny - 2 and fluid[j + 1, i]
                            and dcf != 0.0):
                        r = (c[j + 1, i] - cT) / dcf
                        phi = (r + abs(r)) / (1.0 + abs(r))
                        cface = cT - 0.5 * phi * dcf
                diff = 0.0
                if (hasB and hasT) or kind == BC_DIRICHLET:
                    diff = -D * dcf / dx
                F = vf * cface + diff
                Fy[j, i] = F
                if not hasB:
                    if F >= 0.0:
                        influx += F
                    else:
                        outflux -= F
                elif not hasT:
                    if F >= 0.0:
                        outflux += F
                    else:
                        influx -= F

        cn = c.copy()
        r = dt / dx
        for j in range(ny):
            for i in range(nx):
                if fluid[j, i]:
                    cn[j, i] = c[j, i] - r * (Fx[j, i + 1] - Fx[j, i]
                                              + Fy[j + 1, i] - Fy[j, i])
        return cn, influx * dx, outflux * dx

    def step_numba(c, fluid, u, v, bcx_kind, bcx_val, bcy_kind, bcy_val,
                   dx, dt, D):
        return _step_jit(c, fluid, u, v, bcx_kind, bcx_val, bcy_kind,
                         bcy_val, dx, dt, D)
else:  # pragma: no cover
    step_numba = None


def _select_backend():
    if HAVE_NUMBA and os.environ.get("HYDROGATE_NUMBA", "1") != "0":
        return "numba", step_numba
    return "numpy", step_numpy


BACKEND, step = _select_backend()
