from __future__ import annotations

import numpy as np
import pytest

from negaspec.negativity import negativity_2d_z
from negaspec.oracle import (
    apply_channel,
    decohere,
    dense_instance,
    ground_space_density,
    logical_qubits,
    partial_transpose,
    smallest_2d_fixture,
)
from negaspec.spectrum import spectrum
from negaspec.stabilizer import NoiseModel


@pytest.fixture(scope="module")
def fixture():
    return smallest_2d_fixture()


def test_fixture_is_frozen(fixture):
    assert fixture.code.n == 10
    assert logical_qubits(fixture.code) == 1
    assert (fixture.n_a, fixture.n_b) == (2, 2)
    assert fixture.region_a == sum(1 << q for q in (0, 1, 2, 5, 6, 7))
    assert tuple(fixture.decohered_z) == (3, 8)
    assert tuple(fixture.decohered_x) == (2, 7)


def test_density_is_valid(fixture):
    rho = decohere(ground_space_density(fixture.code), fixture, NoiseModel("XZ", p_z=0.2, p_x=0.3))
    assert rho.trace() == pytest.approx(1.0)
    assert rho.is_hermitian()
    assert rho.min_eigenvalue() > -1e-12


def test_channel_at_half_is_full_dephasing():
    from negaspec.oracle import DenseState

    plus = np.full((2, 2), 0.5)
    out = apply_channel(DenseState(1, plus), "Z", 0.5, [0])
    assert np.allclose(out.rho, np.eye(2) / 2)


def test_partial_transpose_involution():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(8, 8))
    assert np.allclose(partial_transpose(partial_transpose(m, 3, 0b101), 3, 0b101), m)
    assert np.allclose(partial_transpose(m, 3, 0b111), m.T)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.3, 0.5])
def test_dense_matches_closed_form(fixture, p):
    e, lam = dense_instance(fixture, NoiseModel("Z", p_z=p))
    assert e == pytest.approx(negativity_2d_z(p, fixture.n_a).E_N, abs=1e-10)
    assert lam.sum() == pytest.approx(1.0)


def test_dense_matches_xz_spectrum(fixture):
    noise = NoiseModel("XZ", p_z=0.1, p_x=0.1)
    e, _ = dense_instance(fixture, noise)
    assert e == pytest.approx(spectrum(fixture, noise).log_negativity(), abs=1e-10)
