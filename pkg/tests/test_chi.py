from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negaspec import gf2
from negaspec.chi import AdmissibleBasis, BoundaryConfig, chi, is_admissible, span
from negaspec.oracle import chi_bruteforce_batch, psi_table
from negaspec.stabilizer import psi_sign


def _all_configs(lay):
    return [BoundaryConfig(gf2.int_to_bits(i, lay.n_a), gf2.int_to_bits(j, lay.n_b))
            for i in range(1 << lay.n_a) for j in range(1 << lay.n_b)]


@pytest.mark.parametrize("d,L", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_chi_matches_character_sum_everywhere(layout_of, d, L):
    lay = layout_of(d, L)
    cfgs = _all_configs(lay) if lay.n_a + lay.n_b <= 10 else None
    if cfgs is None:
        basis = AdmissibleBasis(lay)
        cfgs = [BoundaryConfig(x, y) for x in basis.all_x() for y in basis.all_y()]
    got = np.array([chi(lay, c) for c in cfgs])
    want = chi_bruteforce_batch(lay, cfgs)
    assert np.array_equal(got, want)


def test_admissible_sets_are_images(layout_of):
    lay = layout_of(2, 4)
    basis = AdmissibleBasis(lay)
    xs = {gf2.bits_to_int(x) for x in basis.all_x()}
    taus = {gf2.bits_to_int(basis.x_from_tau(t)) for t in span(np.eye(lay.n_b, dtype=bool))}
    assert xs == taus
    for c in _all_configs(lay):
        assert is_admissible(lay, c) == (chi(lay, c) != 0)


def test_diagrams_at_L4(layout_of):
    lay = layout_of(2, 4)
    braided = BoundaryConfig.from_flipped(lay, a_flipped=(0, 2), b_flipped=(1, 3))
    unbraided = BoundaryConfig.from_flipped(lay, a_flipped=(0, 2), b_flipped=(2, 3))
    assert chi(lay, braided) == -1
    assert chi(lay, unbraided) == +1
    assert chi(lay, BoundaryConfig.from_flipped(lay, a_flipped=(0,))) == 0


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_chi_bilinear(layout_of, data):
    lay = layout_of(2, 5)
    basis = AdmissibleBasis(lay)
    xs, ys = basis.all_x(), basis.all_y()
    i1, i2 = data.draw(st.integers(0, len(xs) - 1)), data.draw(st.integers(0, len(xs) - 1))
    j = data.draw(st.integers(0, len(ys) - 1))
    c1 = chi(lay, BoundaryConfig(xs[i1], ys[j]))
    c2 = chi(lay, BoundaryConfig(xs[i2], ys[j]))
    c12 = chi(lay, BoundaryConfig(xs[i1] ^ xs[i2], ys[j]))
    assert c12 == c1 * c2


def test_chi_form_matches_chi(layout_of):
    lay = layout_of(3, 2)
    basis = AdmissibleBasis(lay)
    f = basis.chi_form
    for c in range(basis.rank):
        for d in range(basis.rank):
            val = chi(lay, BoundaryConfig(basis.x_basis[c], basis.y_basis[d]))
            assert val == (-1 if f[c, d] else 1)


def test_psi_sign_matches_explicit_table(layout_of):
    lay = layout_of(2, 3)
    table = psi_table(lay)
    for a in range(1 << lay.n_a):
        for b in range(1 << lay.n_b):
            assert psi_sign(lay, gf2.int_to_bits(a, lay.n_a), gf2.int_to_bits(b, lay.n_b)) == table[a, b]


def test_size_mismatch(layout_of):
    lay = layout_of(2, 3)
    with pytest.raises(ValueError):
        chi(lay, BoundaryConfig(np.zeros(2, bool), np.zeros(3, bool)))
