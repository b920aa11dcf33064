import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrogate import errors, hydraulics
from hydrogate.params import SystemParameters, validate


def test_channel_resistance_anchor():
    R = hydraulics.channel_resistance(1e-3, 0.0125, 0.005)
    assert R == pytest.approx(8.1487e5, rel=1e-4)
    # formula check against an independent evaluation
    assert R == pytest.approx(128 * 1e-3 * 0.0125 / (math.pi * 0.005**4),
                              rel=1e-15)


def test_channel_resistance_guards():
    for bad in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, 0.0)]:
        with pytest.raises(errors.NonPositiveArgument):
            hydraulics.channel_resistance(*bad)


def test_mean_velocities_at_defaults(default_params):
    p = default_params
    assert hydraulics.mean_velocity_on(p) == pytest.approx(7.5e-3, rel=1e-6)
    assert hydraulics.mean_velocity_off(p) == pytest.approx(6.667e-4,
                                                            rel=1e-3)


def test_circuit_equals_closed_form(default_params):
    p = default_params
    assert hydraulics.mean_velocity_on(p) == pytest.approx(
        hydraulics.closed_form_mean_velocity(p), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(u_s=st.floats(1e-4, 0.1), r_u=st.floats(0.1, 20.0),
       l_go=st.floats(1e-3, 0.05), l_p=st.floats(0.01, 0.5),
       w=st.floats(1e-4, 0.02), mu=st.floats(1e-4, 1.0))
def test_circuit_equals_closed_form_random(u_s, r_u, l_go, l_p, w, mu):
    p = SystemParameters().replace(u_s=u_s, r_u=r_u, l_go=l_go, l_s=l_go,
                                   l_gi=l_go, l_p=l_p, l_ch=l_go + l_p,
                                   w_ch=w, mu=mu, x_g=l_go,
                                   x_s=l_go + 0.5 * l_p)
    assert hydraulics.mean_velocity_on(p) == pytest.approx(
        hydraulics.closed_form_mean_velocity(p), rel=1e-12)


def test_mu_invariance(default_params):
    p = default_params
    q = p.replace(mu=17.3)
    for fn in (hydraulics.mean_velocity_on, hydraulics.mean_velocity_off,
               hydraulics.closed_form_mean_velocity):
        assert fn(p) == pytest.approx(fn(q), rel=1e-12)


def test_overall_mean_velocity(default_params):
    p = default_params
    # approximate form ignores the observation time entirely
    assert hydraulics.overall_mean_velocity(p) == pytest.approx(
        7.5e-3, rel=1e-6)
    # exact 20 s average: one OFF window of T_g inside the horizon
    u = hydraulics.overall_mean_velocity(p, t=20.0, approximate=False)
    assert u == pytest.approx(6.817e-3, rel=1e-3)
    with pytest.raises(errors.DurationTooShort):
        hydraulics.overall_mean_velocity(p, t=1.0, approximate=False)


def test_network_series_resistance(default_params):
    net = hydraulics.network(default_params)
    p = default_params
    total = hydraulics.channel_resistance(p.mu, p.l_ch, p.w_ch)
    assert net.R_go + net.R_p == pytest.approx(total, rel=1e-12)


@pytest.mark.parametrize("mode", ["ON", "OFF"])
def test_segment_means_junction_balance(default_params, mode):
    """Volumetric flow into the junction equals flow out of it."""
    s = hydraulics.segment_means(default_params, mode)
    if mode == "ON":
        inflow = s.supply + s.gating_inlet
        outflow = s.propagation + s.gating_outlet
    else:  # gating inlet drains the excess alongside the outlet
        inflow = s.supply
        outflow = s.propagation + s.gating_inlet + s.gating_outlet
    assert inflow == pytest.approx(outflow, rel=1e-12)


def test_report_keys(default_params):
    rep = hydraulics.report(default_params)
    for key in ("R_p", "R_go", "u_on", "u_off"):
        assert key in rep
