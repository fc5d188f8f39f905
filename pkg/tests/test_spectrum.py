from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negaspec.oracle import pauli_expansion_spectrum
from negaspec.spectrum import (
    iter_admissible_weights,
    span_weight_histogram,
    spectrum,
    xz_tau_sum,
)
from negaspec.chi import AdmissibleBasis, span
from negaspec.stabilizer import NoiseModel

ps = st.sampled_from([0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5])


@pytest.mark.parametrize("d,L", [(2, 3), (2, 6), (3, 2), (3, 3), (4, 2)])
@pytest.mark.parametrize("kind", ["Z", "X"])
def test_trace_one_and_abs_sum(layout_of, d, L, kind):
    lay = layout_of(d, L)
    p = 0.17
    noise = NoiseModel(kind, p_z=p if kind == "Z" else 0.0, p_x=p if kind == "X" else 0.0)
    spec = spectrum(lay, noise)
    assert abs(spec.trace() - 1.0) < 1e-12
    # sum |lambda| = sum over admissible weighted configs of r^|v|
    basis = AdmissibleBasis(lay)
    own = basis.x_basis if kind == "Z" else basis.y_basis
    hist = span_weight_histogram(own)
    r = 1 - 2 * p
    assert spec.abs_sum() == pytest.approx(sum(h * r**w for w, h in enumerate(hist)), rel=1e-12)
    assert spec.Z == 2.0**lay.rank


def test_histogram_matches_span(layout_of):
    basis = AdmissibleBasis(layout_of(3, 3))
    direct = np.bincount(span(basis.x_basis).sum(axis=1), minlength=basis.x_basis.shape[1] + 1)
    assert np.array_equal(span_weight_histogram(basis.x_basis), direct)


@pytest.mark.parametrize("kind", ["Z", "X", "XZ"])
def test_matches_pauli_expansion_oracle(layout_of, kind):
    lay = layout_of(2, 3)
    noise = NoiseModel(kind, p_z=0.0 if kind == "X" else 0.2, p_x=0.0 if kind == "Z" else 0.15)
    vals = spectrum(lay, noise).values()
    oracle = pauli_expansion_spectrum(lay, noise)
    padded = np.sort(np.concatenate([vals, np.zeros(oracle.shape[0] - vals.shape[0])]))
    assert np.allclose(padded, oracle, atol=1e-14)


@given(ps, ps)
@settings(max_examples=25, deadline=None)
def test_xz_limits(layout_of, pz, px):
    lay = layout_of(2, 4)
    xz = spectrum(lay, NoiseModel("XZ", p_z=pz, p_x=0.0))
    z = spectrum(lay, NoiseModel("Z", p_z=pz))
    assert np.allclose(xz.values(), z.values(), atol=1e-14)
    xz = spectrum(lay, NoiseModel("XZ", p_z=0.0, p_x=px))
    x = spectrum(lay, NoiseModel("X", p_x=px))
    assert np.allclose(xz.values(), x.values(), atol=1e-14)


def test_xz_matches_stream(layout_of):
    lay = layout_of(2, 3)
    noise = NoiseModel("XZ", p_z=0.1, p_x=0.25)
    w = np.array([v for _, v in iter_admissible_weights(lay, noise)])
    spec = spectrum(lay, noise)
    assert np.allclose(np.sort(w / w.sum()), spec.values(), atol=1e-14)
    assert math.isclose(w.sum(), spec.Z, rel_tol=1e-12)


def test_tau_sum_transfer_matrix_against_loop():
    rng = np.random.default_rng(3)
    L, rz, tx = 5, 0.4, 0.3
    x = rng.random((6, L)) < 0.5
    y = rng.random((6, L)) < 0.5
    got = xz_tau_sum(x, y, rz, tx)
    for k in range(6):
        tot = 0.0
        for t in range(1 << L):
            tau = np.array([(t >> i) & 1 for i in range(L)], bool)
            flips = tau ^ np.roll(tau, 1) ^ x[k]
            tot += rz ** flips.sum() * tx ** tau.sum() * (-1) ** np.count_nonzero(tau & y[k])
        assert got[k] == pytest.approx(tot, rel=1e-12)


def test_p_half_limit(layout_of):
    spec = spectrum(layout_of(2, 5), NoiseModel("Z", p_z=0.5))
    assert spec.abs_sum() == pytest.approx(1.0)
    assert spec.log_negativity() == pytest.approx(0.0, abs=1e-15)


def test_csv_has_17_digits(layout_of):
    text = spectrum(layout_of(2, 3), NoiseModel("Z", p_z=0.3)).to_csv({"seed": 1})
    lines = text.splitlines()
    assert lines[0].startswith("# {")
    assert lines[1] == "lambda,multiplicity,config_hex"
    vals = [float(l.split(",")[0]) for l in lines[2:]]
    mults = [int(l.split(",")[1]) for l in lines[2:]]
    assert abs(sum(v * m for v, m in zip(vals, mults)) - 1.0) < 1e-14


def test_xz_rejects_higher_d(layout_of):
    with pytest.raises(ValueError):
        spectrum(layout_of(3, 2), NoiseModel("XZ", p_z=0.1, p_x=0.1))
