from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negaspec.negativity import (
    P_C_3D_X,
    alpha_monotone,
    half_height_crossing,
    negativity,
    negativity_2d_x,
    negativity_2d_z,
    negativity_3d_x,
    negativity_3d_z,
    negativity_4d_z,
    negativity_spectrum,
    negativity_statmech,
    scan,
    topo_at_zero_noise,
)
from negaspec.statmech import gauge3d, logZ_enumerate, logZ_mc
from negaspec.statmech.mc import Schedule

LOG2 = math.log(2)
ps = st.floats(0.0, 0.5)


def test_2d_zero_noise():
    r = negativity_2d_z(0.0, 6)
    assert r.alpha == pytest.approx(LOG2) and r.E_topo == pytest.approx(LOG2)


@pytest.mark.parametrize("L", [2, 5, 16])
def test_p_half_kills_topo(L):
    for f in (negativity_2d_z, negativity_2d_x, negativity_3d_z):
        r = f(0.5, L)
        assert r.E_topo == 0.0 and r.E_N == 0.0


def test_2d_example_value():
    r = negativity_2d_z(0.2, 8)
    beta = -0.5 * math.log(1 - 2 * 0.2)
    assert r.beta == pytest.approx(0.2554128118829953, abs=1e-12)
    assert r.E_topo == pytest.approx(LOG2 - math.log1p(math.tanh(beta) ** 8), abs=1e-14)
    assert r.E_N == pytest.approx(negativity_spectrum("2d-Z", 0.2, 8).E_N, rel=1e-12)


@given(ps, st.integers(2, 40))
@settings(max_examples=60, deadline=None)
def test_closed_form_invariants(p, L):
    for r in (negativity_2d_z(p, L), negativity_3d_z(p, min(L, 12))):
        n = r.L ** (r.d - 1)
        assert r.E_N == pytest.approx(r.alpha * n - r.E_topo, abs=1e-9)
        assert r.E_N >= -1e-12
        assert -1e-15 <= r.E_topo <= 2 * LOG2 + 1e-9
        if p < 0.5:
            assert r.E_topo > 0


@pytest.mark.parametrize("model,L", [("2d-Z", 3), ("2d-Z", 6), ("3d-Z", 2), ("3d-Z", 3), ("3d-X", 2), ("3d-X", 3)])
@pytest.mark.parametrize("p", [0.05, 0.25, 0.45])
def test_triple_agreement(model, L, p):
    a = negativity(model, p, L).E_N
    b = negativity_statmech(model, p, L).E_N
    c = negativity_spectrum(model, p, L).E_N
    assert b == pytest.approx(a, rel=1e-8)
    assert c == pytest.approx(a, rel=1e-8)


def test_3d_z_spectrum_example():
    assert negativity_3d_z(0.3, 2).E_N == pytest.approx(negativity_spectrum("3d-Z", 0.3, 2).E_N, rel=1e-12)


def test_3d_x_enumeration_example():
    from negaspec.statmech import ising2d

    r = negativity_3d_x(0.25, 3)
    assert r.E_N == pytest.approx(logZ_enumerate(ising2d(3), r.beta).log_ratio, abs=1e-10)


def test_3d_x_phases():
    assert negativity_3d_x(0.35, 8, thermodynamic=True).E_topo == 0.0
    assert negativity_3d_x(0.2, 8, thermodynamic=True).E_topo == pytest.approx(LOG2)
    assert negativity_3d_x(0.0, 8).E_topo == pytest.approx(LOG2, abs=1e-12)


def test_3d_z_persists_in_L():
    vals = [negativity_3d_z(0.45, L).E_topo for L in (2, 3, 4, 6, 10)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(LOG2, abs=1e-6)


@pytest.mark.parametrize("L", [2, 3, 4])
def test_4d_zero_noise_rank_counting(L):
    r = negativity_4d_z(0.0, L)
    assert r.E_topo == pytest.approx(2 * LOG2, abs=1e-15)
    assert topo_at_zero_noise(4, L) == pytest.approx(2 * LOG2, abs=1e-15)
    assert r.alpha == pytest.approx(2 * LOG2)


def test_4d_L2_matches_spectrum():
    assert negativity_4d_z(0.2, 2).E_N == pytest.approx(negativity_spectrum("4d-Z", 0.2, 2).E_N, rel=1e-12)


def test_4d_mc_within_3_sigma_of_enumeration():
    beta = -0.5 * math.log(1 - 2 * 0.2)
    res = logZ_mc(gauge3d(2), beta, Schedule(points=24, sweeps=4000, thermalization=400, seed=7))
    exact = logZ_enumerate(gauge3d(2), beta).log_ratio
    assert abs(res.log_ratio - exact) < 3 * res.error + 1e-3


def test_4d_phase_assignment():
    # p grows with beta: low noise is the confined side with E_topo = 2 log 2
    assert negativity_4d_z(0.45, 2, beta_c=0.76).E_topo == 0.0
    assert negativity_4d_z(0.3, 2, beta_c=0.76).E_topo == pytest.approx(2 * LOG2)
    assert math.isnan(negativity_4d_z(0.05, 2).E_topo)


def test_scan_2d_reports_half():
    res = scan("2d-Z", [4, 8], np.linspace(0, 0.5, 11))
    assert res.p_c == 0.5
    assert len(res.reports) == 22
    assert alpha_monotone(res.reports)
    assert res.reports[-1].E_topo == 0.0


def test_scan_3d_x_crossings_drift_to_p_c():
    res = scan("3d-X", [8, 16, 32], [0.0, 0.25])
    c = [res.crossings[L] for L in (8, 16, 32)]
    assert c[0] < c[1] < c[2] < P_C_3D_X
    assert res.p_c == pytest.approx(1 - math.sqrt(2) / 2)


def test_scan_4d_p_c_from_beta_c():
    res = scan("4d-Z", [2], [0.0, 0.1], beta_c=0.7614)
    assert res.p_c == pytest.approx((1 - math.exp(-2 * 0.7614)) / 2)


def test_half_height_crossing_2d_moves_to_half():
    assert half_height_crossing("2d-Z", 4) < half_height_crossing("2d-Z", 32) < 0.5


@pytest.mark.parametrize("bad", [(-0.1, 4), (0.6, 4), (0.1, 1)])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        negativity_2d_z(*bad)


@pytest.mark.parametrize("p", [0.1, 0.3])
def test_4d_x_noise_matches_z_noise(p):
    x = negativity_spectrum("4d-X", p, 2).E_N
    assert x == pytest.approx(negativity_spectrum("4d-Z", p, 2).E_N, rel=1e-12)
    assert negativity_4d_z(p, 2, kind="X").E_N == pytest.approx(x, rel=1e-12)
