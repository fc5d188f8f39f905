from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negaspec import gf2
from negaspec.cellcomplex import OPEN, PERIODIC, build_complex
from negaspec.stabilizer import (
    NoiseModel,
    PauliString,
    beta_to_noise,
    boundary_layout,
    build_toric_code,
    noise_to_beta,
)
from negaspec.spectrum import ring_adjacency

pauli = st.builds(PauliString, st.integers(0, 255), st.integers(0, 255), st.just(0))


@given(pauli, pauli)
def test_pauli_commutation_is_symmetric(p, q):
    assert p.commutes(q) == q.commutes(p)
    assert p.commutes(p)


@given(pauli, pauli)
def test_pauli_product_phase(p, q):
    # PQ = (-1)^{[P, Q]} QP
    a, b = p * q, q * p
    assert a.x == b.x and a.z == b.z
    assert (a.phase - b.phase) % 4 == (0 if p.commutes(q) else 2)


def test_y_count():
    y = PauliString(0b101, 0b110)
    assert y.y_count == 1 and y.weight == 3


@pytest.mark.parametrize("d,ext", [(2, (3, 3)), (3, (2, 2, 2)), (4, (2, 2, 2, 2))])
def test_toric_code_commutes_and_logicals(d, ext):
    code = build_toric_code(build_complex(d, ext))
    assert code.all_commute()
    # periodic torus: k = b_1 (d = 2, 3) or b_2 (d = 4)
    k = code.n - code.stabilizer_rank()
    assert k == {2: 2, 3: 3, 4: 6}[d]


@pytest.mark.parametrize("d,L,na,nb,rank", [(2, 4, 4, 4, 3), (3, 2, 4, 8, 3), (4, 2, 24, 24, 14)])
def test_flat_layout_shapes(layout_of, d, L, na, nb, rank):
    lay = layout_of(d, L)
    assert (lay.n_a, lay.n_b, lay.rank) == (na, nb, rank)
    assert gf2.rank(lay.adjacency) == rank


@pytest.mark.parametrize("L", [2, 3, 5, 8])
def test_2d_layout_is_a_ring(layout_of, L):
    assert np.array_equal(layout_of(2, L).adjacency, ring_adjacency(L))


def test_decohered_qubits_lie_on_cut(layout_of):
    lay = layout_of(3, 2)
    assert len(lay.decohered_z) == lay.n_a
    assert len(lay.decohered_x) == lay.n_b


def test_open_strip_cut_is_a_path():
    # both axes open: the cut ends on the boundary, no ring relation survives
    cx = build_complex(2, (3, 3), (OPEN, OPEN))
    lay = boundary_layout(build_toric_code(cx), (1, 1))
    assert lay.adjacency.shape == (3, 2)
    assert lay.rank == 2 and lay.ker_m.shape[0] == 0


def test_cut_on_periodic_axis_rejected():
    cx = build_complex(2, (3, 3), (PERIODIC, OPEN))
    with pytest.raises(ValueError):
        boundary_layout(build_toric_code(cx), (0, 1))


@given(st.floats(0.0, 0.5))
def test_noise_beta_roundtrip(p):
    beta = noise_to_beta(p)
    if math.isinf(beta):
        assert p == 0.5
    else:
        assert abs(beta_to_noise(beta) - p) < 1e-12


def test_noise_model_limits():
    n = NoiseModel("Z", p_z=0.5)
    assert n.r_z == 0.0 and n.tanh_z == 1.0
    n = NoiseModel("x", p_x=0.0)
    assert n.kind == "X" and n.r_x == 1.0 and n.tanh_x == 0.0
    with pytest.raises(ValueError):
        NoiseModel("Z", p_z=0.6)
    with pytest.raises(ValueError):
        NoiseModel("Y")
