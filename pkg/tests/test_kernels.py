import os
import subprocess
import sys

import numpy as np
import pytest

from hydrogate.oracle import kernels
from hydrogate.oracle.velocity import BC_DIRICHLET, BC_NONE, BC_OUTFLOW


def _random_setup(seed, ny=24, nx=40):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.0, 1.0, (ny, nx))
    u = rng.uniform(-1.0, 1.0, (ny, nx + 1))
    v = rng.uniform(-1.0, 1.0, (ny + 1, nx))
    fluid = np.ones((ny, nx), dtype=bool)
    fluid[rng.uniform(size=(ny, nx)) < 0.1] = False
    fluid[:, 0] = fluid[:, -1] = True  # keep the open boundaries fluid
    bcx_kind = np.zeros((ny, nx + 1), dtype=np.int8)
    bcx_val = np.zeros((ny, nx + 1))
    bcy_kind = np.zeros((ny + 1, nx), dtype=np.int8)
    bcy_val = np.zeros((ny + 1, nx))
    bcx_kind[:, 0] = BC_DIRICHLET
    bcx_val[:, 0] = 0.7
    bcx_kind[:, -1] = BC_OUTFLOW
    # faces adjoining solid cells carry no flow
    for j in range(ny):
        for i in range(1, nx):
            if not (fluid[j, i - 1] and fluid[j, i]):
                u[j, i] = 0.0
    for j in range(1, ny):
        for i in range(nx):
            if not (fluid[j - 1, i] and fluid[j, i]):
                v[j, i] = 0.0
    c[~fluid] = 0.0
    dx = 0.01
    dt = 1e-4  # far below the CFL limit of these fields
    D = 1e-6
    return c, fluid, u, v, bcx_kind, bcx_val, bcy_kind, bcy_val, dx, dt, D


@pytest.mark.skipif(kernels.step_numba is None,
                    reason="numba backend unavailable")
def test_backends_agree():
    args = _random_setup(3)
    c_np, in_np, out_np = kernels.step_numpy(*args)
    c_nb, in_nb, out_nb = kernels.step_numba(*args)
    np.testing.assert_allclose(c_nb, c_np, rtol=1e-13, atol=1e-16)
    assert in_nb == pytest.approx(in_np, rel=1e-12, abs=1e-18)
    assert out_nb == pytest.approx(out_np, rel=1e-12, abs=1e-18)


def test_backends_agree_many_steps():
    if kernels.step_numba is None:
        pytest.skip("numba backend unavailable")
    args = list(_random_setup(11))
    c_np = args[0].copy()
    c_nb = args[0].copy()
    for _ in range(50):
        c_np, _, _ = kernels.step_numpy(c_np, *args[1:])
        c_nb, _, _ = kernels.step_numba(c_nb, *args[1:])
    np.testing.assert_allclose(c_nb, c_np, rtol=1e-11, atol=1e-15)


def test_mass_budget_matches_boundary_fluxes():
    args = list(_random_setup(5))
    dx = args[8]
    c0 = args[0]
    c1, influx, outflux = kernels.step_numpy(*args)
    dt = args[9]
    dm = (c1.sum() - c0.sum()) * dx * dx
    assert dm == pytest.approx(dt * (influx - outflux), rel=1e-10,
                               abs=1e-16)


def test_closed_box_conserves_and_diffuses():
    ny = nx = 32
    rng = np.random.default_rng(0)
    c = rng.uniform(0.0, 1.0, (ny, nx))
    u = np.zeros((ny, nx + 1))
    v = np.zeros((ny + 1, nx))
    fluid = np.ones((ny, nx), dtype=bool)
    z = np.zeros
    args = (fluid, u, v, z((ny, nx + 1), np.int8), z((ny, nx + 1)),
            z((ny + 1, nx), np.int8), z((ny + 1, nx)), 0.01, 1e-3, 1e-5)
    m0 = c.sum()
    v0 = c.var()
    for _ in range(200):
        c, influx, outflux = kernels.step_numpy(c, *args)
        assert influx == 0.0 and outflux == 0.0
    assert c.sum() == pytest.approx(m0, rel=1e-12)
    # diffusion smooths: spatial variance strictly decreases
    assert c.var() < v0


def test_positivity_under_cfl():
    args = list(_random_setup(9))
    c = args[0]
    for _ in range(100):
        c, _, _ = kernels.step_numpy(c, *args[1:])
        assert c.min() >= -1e-15


def test_uniform_advection_preserves_constant():
    ny, nx = 8, 64
    c = np.full((ny, nx), 0.42)
    u = np.full((ny, nx + 1), 1.0)
    v = np.zeros((ny + 1, nx))
    fluid = np.ones((ny, nx), dtype=bool)
    bcx_kind = np.zeros((ny, nx + 1), dtype=np.int8)
    bcx_val = np.zeros((ny, nx + 1))
    bcx_kind[:, 0] = BC_DIRICHLET
    bcx_val[:, 0] = 0.42
    bcx_kind[:, -1] = BC_OUTFLOW
    args = (fluid, u, v, bcx_kind, bcx_val,
            np.zeros((ny + 1, nx), np.int8), np.zeros((ny + 1, nx)),
            0.01, 1e-3, 0.0)
    for _ in range(50):
        c, _, _ = kernels.step_numpy(c, *args)
    np.testing.assert_allclose(c, 0.42, rtol=1e-12)


def test_advection_centroid_speed():
    ny, nx = 8, 400
    dx = 0.01
    x = (np.arange(nx) + 0.5) * dx
    c = np.exp(-((x - 1.0) ** 2) / (2 * 0.1**2))[None, :].repeat(ny, axis=0)
    speed = 0.5
    u = np.full((ny, nx + 1), speed)
    v = np.zeros((ny + 1, nx))
    fluid = np.ones((ny, nx), dtype=bool)
    bcx_kind = np.zeros((ny, nx + 1), dtype=np.int8)
    bcx_kind[:, -1] = BC_OUTFLOW
    dt = 0.004  # CFL 0.2
    args = (fluid, u, v, bcx_kind, np.zeros((ny, nx + 1)),
            np.zeros((ny + 1, nx), np.int8), np.zeros((ny + 1, nx)),
            dx, dt, 0.0)
    n_steps = 100
    for _ in range(n_steps):
        c, _, _ = kernels.step_numpy(c, *args)
    centroid = (c[0] * x).sum() / c[0].sum()
    expected = 1.0 + speed * n_steps * dt
    assert centroid == pytest.approx(expected, rel=0.01)


def test_diffusion_variance_growth():
    ny, nx = 8, 300
    dx = 0.01
    D = 1e-4
    x = (np.arange(nx) + 0.5) * dx
    sigma0 = 0.05
    c = np.exp(-((x - 1.5) ** 2) / (2 * sigma0**2))[None, :].repeat(ny, 0)
    u = np.zeros((ny, nx + 1))
    v = np.zeros((ny + 1, nx))
    fluid = np.ones((ny, nx), dtype=bool)
    dt = 0.05  # diffusion number D dt / dx^2 = 0.05
    args = (fluid, u, v, np.zeros((ny, nx + 1), np.int8),
            np.zeros((ny, nx + 1)), np.zeros((ny + 1, nx), np.int8),
            np.zeros((ny + 1, nx)), dx, dt, D)
    n_steps = 400
    for _ in range(n_steps):
        c, _, _ = kernels.step_numpy(c, *args)
    w = c[0] / c[0].sum()
    mean = (w * x).sum()
    var = (w * (x - mean) ** 2).sum()
    expected = sigma0**2 + 2 * D * n_steps * dt
    assert var == pytest.approx(expected, rel=0.05)


def test_env_flag_selects_backend():
    code = ("import hydrogate.oracle.kernels as k; print(k.BACKEND)")
    for flag, expect in (("0", "numpy"), ("1", "numba")):
        env = dict(os.environ, HYDROGATE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == expect
