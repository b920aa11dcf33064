import numpy as np
import pytest

from hydrogate import errors, hydraulics
from hydrogate.oracle import grid as gridmod
from hydrogate.oracle import velocity as vel
from hydrogate.oracle.grid import (
    GATING_INLET,
    GATING_OUTLET,
    JUNCTION,
    PROPAGATION,
    SOLID,
    SUPPLY,
    build_grid,
)


@pytest.fixture(scope="module")
def grid20(default_params):
    return build_grid(default_params, 20)


def test_grid_dimensions(default_params, grid20):
    p, g = default_params, grid20
    assert g.cells_across == 20
    assert g.dx == pytest.approx(p.w_ch / 20)
    assert g.nx == round(p.l_ch / g.dx)
    # vertical span covers gating outlet + main channel + gating inlet
    assert g.ny == round((p.l_go + p.w_ch + p.l_gi) / g.dx)


def test_region_partition(default_params, grid20):
    p, g = default_params, grid20
    counts = {r: int((g.region == r).sum())
              for r in (SOLID, SUPPLY, JUNCTION, PROPAGATION,
                        GATING_INLET, GATING_OUTLET)}
    assert counts[JUNCTION] == 20 * 20
    assert counts[SUPPLY] == round(p.l_s / g.dx) * 20
    assert counts[PROPAGATION] == (g.nx - counts[SUPPLY] // 20 - 20) * 20
    assert counts[GATING_INLET] == round(p.l_gi / g.dx) * 20
    assert counts[GATING_OUTLET] == round(p.l_go / g.dx) * 20
    assert sum(counts.values()) == g.nx * g.ny
    assert g.n_fluid == sum(v for k, v in counts.items() if k != SOLID)


def test_resolution_guard(default_params):
    with pytest.raises(errors.ResolutionTooCoarse):
        build_grid(default_params, 4)


def test_x_index(default_params, grid20):
    g = grid20
    i = g.x_index(default_params.x_s)
    assert abs(g.x_centers[i] - default_params.x_s) <= g.dx / 2 + 1e-12


@pytest.mark.parametrize("mode", ["ON", "OFF"])
def test_velocity_segment_means(default_params, grid20, mode):
    """Discrete face means must reproduce the circuit solution."""
    p, g = default_params, grid20
    vf = vel.velocity_field(p, g, mode)
    want = hydraulics.segment_means(p, mode)
    for seg, expected in ((SUPPLY, want.supply),
                          (PROPAGATION, want.propagation),
                          (GATING_INLET, want.gating_inlet),
                          (GATING_OUTLET, want.gating_outlet)):
        got = vel.segment_mean_from_field(vf, g, seg)
        assert abs(got) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("mode", ["ON", "OFF"])
def test_wall_faces_closed(default_params, grid20, mode):
    p, g = default_params, grid20
    vf = vel.velocity_field(p, g, mode)
    solid = g.region == SOLID
    # every interior face between a fluid and a solid cell carries u = 0
    for j in range(g.ny):
        for i in range(1, g.nx):
            if solid[j, i - 1] != solid[j, i]:
                assert vf.u[j, i] == 0.0
    for j in range(1, g.ny):
        for i in range(g.nx):
            if solid[j - 1, i] != solid[j, i]:
                assert vf.v[j, i] == 0.0


def test_gating_inlet_direction_flips(default_params, grid20):
    p, g = default_params, grid20
    on = vel.velocity_field(p, g, "ON")
    off = vel.velocity_field(p, g, "OFF")
    cols = np.where((g.region == GATING_INLET).any(axis=0))[0]
    # top boundary faces: ON pushes down into the junction (v < 0),
    # OFF drains the excess upward (v > 0)
    assert on.v[g.ny, cols].mean() < 0
    assert off.v[g.ny, cols].mean() > 0


def test_profile_discrete_mean():
    for n in (8, 20, 33):
        prof = vel._profile(n, "mean")
        assert prof.mean() == pytest.approx(1.0, rel=1e-12)
        # centerline factor is ~1.5 (slightly above, since the discrete
        # mean normalization divides by (1 - 1/n^2)/6)
        assert 1.45 < prof.max() < 1.55
    raw = vel._profile(16, "paper4")
    # the raw 4 s (1-s) textbook form has discrete mean 2/3, not 1
    assert raw.mean() == pytest.approx(2.0 / 3.0, rel=1e-2)
