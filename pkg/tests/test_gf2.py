from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from negaspec import gf2

mats = st.integers(1, 9).flatmap(
    lambda m: st.integers(1, 70).flatmap(lambda n: arrays(bool, (m, n)))
)


@given(mats)
@settings(max_examples=60, deadline=None)
def test_rank_nullity(a):
    assert gf2.rank(a) + gf2.nullspace(a).shape[0] == a.shape[1]
    assert not gf2.matmul(a, gf2.nullspace(a).T).any()


@given(mats)
@settings(max_examples=60, deadline=None)
def test_pack_roundtrip(a):
    assert np.array_equal(gf2.unpack(gf2.pack(a), a.shape[1]), a)


@given(mats, st.data())
@settings(max_examples=60, deadline=None)
def test_solve(a, data):
    x0 = data.draw(arrays(bool, a.shape[1]))
    b = gf2.matmul(a, x0)
    x = gf2.solve(a, b)
    assert x is not None and np.array_equal(gf2.matmul(a, x), b)


def test_solve_inconsistent():
    a = np.array([[1, 1], [1, 1]], bool)
    assert gf2.solve(a, np.array([1, 0], bool)) is None


@given(mats)
@settings(max_examples=40, deadline=None)
def test_row_basis_spans(a):
    basis = gf2.row_basis(a)
    assert basis.shape[0] == gf2.rank(a)
    assert gf2.rank(np.vstack([basis, a])) == basis.shape[0]


def test_rank_matches_real_rank_on_identity():
    assert gf2.rank(np.eye(130, dtype=bool)) == 130


def test_bits_int_roundtrip():
    for v in (0, 1, 5, 2**40 + 3):
        assert gf2.bits_to_int(gf2.int_to_bits(v, 48)) == v
