from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negaspec.statmech import (
    BETA_C_ISING2D,
    beta_to_p,
    duality_transform,
    gauge2d,
    gauge3d,
    ising1d,
    ising2d,
    ising3d,
    kaufman_logZ,
    logZ_enumerate,
    logZ_gauge2d,
    logZ_ising1d,
    logZ_ising2d,
    logZ_mc,
    logZ_relations,
    onsager_f,
    restricted_logZ,
    run_chain,
)
from negaspec.statmech.critical import locate_beta_c
from negaspec.statmech.duality import duality_error
from negaspec.statmech.exact import check_model_relations, ground_rank
from negaspec.statmech.ising2d import onsager_f_double_integral
from negaspec.statmech.mc import Schedule, jackknife, mean_error, reweight
from negaspec.statmech.trotter import gauss_ground_degeneracy, isotropic_gamma, k_time, trotter_check

betas = st.floats(0.0, 1.5)


@pytest.mark.parametrize("L", [2, 3, 4])
@pytest.mark.parametrize("beta", [0.1, BETA_C_ISING2D, 0.9])
def test_kaufman_matches_enumeration(L, beta):
    assert kaufman_logZ(beta, L) == pytest.approx(logZ_enumerate(ising2d(L), beta).log_z, abs=1e-10)


def test_kaufman_rectangular():
    from negaspec.statmech.models import StatMechModel  # noqa: F401
    from negaspec.cellcomplex import build_complex, incidence_matrix

    cx = build_complex(2, (3, 5))
    terms = np.array([list(np.flatnonzero(r)) for r in incidence_matrix(cx, 1)])
    from negaspec.statmech.models import StatMechModel as M

    model = M("ising2d-3x5", cx.count(0), terms, 0.3, 3)
    assert kaufman_logZ(0.3, 3, 5) == pytest.approx(logZ_enumerate(model, 0.3).log_z, abs=1e-10)


@pytest.mark.parametrize("beta", [0.2, 0.4, BETA_C_ISING2D + 1e-3, 0.6, 1.0])
def test_onsager_free_energy(beta):
    assert onsager_f(beta) == pytest.approx(onsager_f_double_integral(beta), abs=1e-9)


def test_large_torus_approaches_onsager():
    # the ordered phase carries the two-fold ground degeneracy on top of L^2 f
    for beta, shift in ((0.3, 0.0), (0.6, math.log(2))):
        assert (logZ_ising2d(beta, 64).log_z - shift) / 64**2 == pytest.approx(onsager_f(beta), abs=1e-8)


@given(betas, st.integers(3, 12))
@settings(max_examples=30, deadline=None)
def test_ising1d_relations_match_enumeration(beta, L):
    a = logZ_ising1d(beta, L)
    b = logZ_enumerate(ising1d(L), beta)
    assert a.log_z == pytest.approx(b.log_z, rel=1e-12)
    assert a.log_ratio == pytest.approx(b.log_ratio, abs=1e-10)


@pytest.mark.parametrize("L", [2, 3])
def test_gauge2d_relations_match_enumeration(L):
    for beta in (0.05, 0.4, 1.2):
        a = logZ_gauge2d(beta, L)
        b = logZ_enumerate(gauge2d(L), beta)
        assert a.log_z == pytest.approx(b.log_z, rel=1e-12)
        c = logZ_relations(gauge2d(L), beta)
        assert c.log_z == pytest.approx(b.log_z, rel=1e-12)


@pytest.mark.parametrize("name,L", [("ising1d", 6), ("gauge2d", 3)])
def test_relation_histogram_is_closed_form(name, L):
    assert check_model_relations(name, L)


def test_restricted_logZ_counts_ground_states():
    m = ising2d(3)
    assert restricted_logZ(m, 0.7) == pytest.approx(math.log(2) + 0.7 * m.n_terms)
    # gauge3d kernel: L^3 - 1 gauge directions plus 3 torus holonomies
    g = gauge3d(2)
    assert ground_rank(g) == g.n_spins - (8 - 1) - 3


def test_gauge3d_relation_at_beta_zero():
    g = gauge3d(2)
    res = logZ_enumerate(g, 0.0)
    assert res.log_z == pytest.approx(g.n_spins * math.log(2))


@given(st.floats(0.01, 3.0))
def test_duality_is_an_involution(beta):
    assert duality_transform(duality_transform(beta)) == pytest.approx(beta, rel=1e-9)


def test_duality_error_propagation():
    b, s = 0.22, 1e-4
    num = (duality_transform(b + s) - duality_transform(b - s)) / 2
    assert duality_error(b, s) == pytest.approx(abs(num), rel=1e-4)


def test_p_c_of_2d_ising():
    assert beta_to_p(BETA_C_ISING2D) == pytest.approx(1 - math.sqrt(2) / 2, abs=1e-14)


def test_chain_is_reproducible():
    a = run_chain(ising2d(4), 0.3, 200, 20, seed=5)
    b = run_chain(ising2d(4), 0.3, 200, 20, seed=5)
    c = run_chain(ising2d(4), 0.3, 200, 20, seed=6)
    assert np.array_equal(a.energies, b.energies)
    assert not np.array_equal(a.energies, c.energies)


def test_mc_energy_matches_exact():
    m, beta = ising2d(3), 0.35
    run = run_chain(m, beta, 20000, 500, seed=11)
    mean, err = mean_error(run.energies)
    h = 1e-5
    exact = (logZ_enumerate(m, beta + h).log_z - logZ_enumerate(m, beta - h).log_z) / (2 * h)
    assert abs(mean - exact) < 5 * err


def test_thermodynamic_integration_small_gauge():
    beta = 0.6
    res = logZ_mc(gauge3d(2), beta, Schedule(points=24, sweeps=3000, thermalization=300, seed=3))
    exact = logZ_enumerate(gauge3d(2), beta).log_z
    assert abs(res.log_z - exact) < 4 * res.error + 1e-3


def test_jackknife_and_reweight():
    x = np.arange(100.0)
    mean, err = jackknife(lambda a: a.mean(), [x.reshape(10, 10)])
    assert mean == pytest.approx(49.5)
    assert err > 0
    e = np.array([1.0, 2.0, 3.0])
    assert reweight(e, 0.4, 0.4, e) == pytest.approx(2.0)


def test_gauss_degeneracy_and_trotter_convergence():
    assert gauss_ground_degeneracy(0.0) == 4
    gaps = [trotter_check(1.0, 2.0, M).gap for M in (4, 8, 16)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_isotropic_gamma():
    beta = 0.5
    gam = isotropic_gamma(beta)
    # at bt / M = beta the time coupling equals the space coupling
    assert k_time(beta * 10, gam, 10) == pytest.approx(beta, rel=1e-10)


def test_specific_heat_locates_2d_ising():
    est = locate_beta_c("ising2d", [16, 32, 64], method="specific-heat")
    assert abs(est.beta_c - BETA_C_ISING2D) < 0.01


def test_binder_2d_ising_quick():
    est = locate_beta_c("ising2d", [4, 8], sweeps=4000, thermalization=400, seed=1, beta_guess=0.44)
    assert abs(est.beta_c - BETA_C_ISING2D) < 0.03


def test_locate_validation():
    with pytest.raises(ValueError):
        locate_beta_c("gauge3d", [4, 6], method="binder")
    with pytest.raises(ValueError):
        locate_beta_c("ising3d", [4])
    with pytest.raises(ValueError):
        locate_beta_c("nope", [4, 6])


def test_models_have_expected_sizes():
    assert ising3d(3).n_spins == 27 and ising3d(3).n_terms == 81
    assert gauge3d(3).n_spins == 81 and gauge3d(3).n_terms == 81
    assert gauge2d(3).n_spins == 18 and gauge2d(3).n_terms == 9


@pytest.mark.parametrize("M", [2, 4, 8])
def test_classical_side_equals_dense_trotter_product(M):
    from scipy.linalg import expm

    from negaspec.statmech.trotter import classical_partition, quantum_hamiltonian

    h, g = quantum_hamiltonian(2, 1.0)
    diag = np.diag(np.diag(h))
    step = expm(-(2.0 / M) * (h - diag)) @ expm(-(2.0 / M) * diag)
    dense = np.trace(np.linalg.matrix_power(step, M) @ g)
    assert classical_partition(1.0, 2.0, M) == pytest.approx(dense, rel=1e-10)
