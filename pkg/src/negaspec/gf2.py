"""Dense GF(2) linear algebra on bit-packed rows.

Rows are packed little-endian into 64-bit words: column ``c`` lives in word
``c >> 6`` at bit ``c & 63``.  Elimination always picks the lowest-index
available pivot row so that solutions are reproducible.
"""

from __future__ import annotations

import numpy as np

WORD = 64


def n_words(ncols: int) -> int:
    return max(1, (ncols + WORD - 1) // WORD)


def pack(mat) -> np.ndarray:
    """Pack a 0/1 matrix of shape (m, n) into a (m, words) uint64 array."""
    mat = np.asarray(mat, dtype=bool)
    if mat.ndim == 1:
        mat = mat[None, :]
    m, n = mat.shape
    w = n_words(n)
    padded = np.zeros((m, w * WORD), dtype=bool)
    padded[:, :n] = mat
    bits = padded.reshape(m, w, WORD).astype(np.uint64)
    shifts = np.arange(WORD, dtype=np.uint64)
    return np.bitwise_or.reduce(bits << shifts, axis=2)


def unpack(packed: np.ndarray, ncols: int) -> np.ndarray:
    packed = np.asarray(packed, dtype=np.uint64)
    if packed.ndim == 1:
        packed = packed[None, :]
    shifts = np.arange(WORD, dtype=np.uint64)
    bits = (packed[:, :, None] >> shifts) & np.uint64(1)
    return bits.reshape(packed.shape[0], packed.shape[1] * WORD)[:, :ncols].astype(bool)


def rref(mat, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Accepts either a 0/1 matrix or an already packed array (then ``ncols`` is
    required).  Returns the packed reduced matrix and the pivot columns; the
    first ``len(pivots)`` rows are the nonzero rows.
    """
    if ncols is None:
        a = np.asarray(mat, dtype=bool)
        if a.ndim == 1:
            a = a[None, :]
        ncols = a.shape[1]
        p = pack(a)
    else:
        p = np.array(mat, dtype=np.uint64, copy=True)
    m = p.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        word, bit = col >> 6, np.uint64(col & 63)
        column = (p[:, word] >> bit) & np.uint64(1)
        cand = np.flatnonzero(column[row:])
        if cand.size == 0:
            continue
        piv = row + int(cand[0])
        if piv != row:
            p[[row, piv]] = p[[piv, row]]
            column[[row, piv]] = column[[piv, row]]
        hits = np.flatnonzero(column)
        hits = hits[hits != row]
        if hits.size:
            p[hits] ^= p[row]
        pivots.append(col)
        row += 1
    return p, pivots


def rank(mat) -> int:
    a = np.asarray(mat, dtype=bool)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(mat) -> np.ndarray:
    """Basis (as rows) of {x : mat @ x = 0} over GF(2)."""
    a = np.asarray(mat, dtype=bool)
    if a.ndim == 1:
        a = a[None, :]
    m, n = a.shape
    if m == 0:
        return np.eye(n, dtype=bool)
    p, pivots = rref(a)
    red = unpack(p[: len(pivots)], n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=bool)
    for k, f in enumerate(free):
        basis[k, f] = True
        for r, pc in enumerate(pivots):
            if red[r, f]:
                basis[k, pc] = True
    return basis


def solve(mat, rhs) -> np.ndarray | None:
    """One solution x of mat @ x = rhs over GF(2), or None if inconsistent.

    Free variables are set to zero, so the returned solution is canonical.
    """
    a = np.asarray(mat, dtype=bool)
    b = np.asarray(rhs, dtype=bool).reshape(-1)
    if a.ndim == 1:
        a = a[None, :]
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError(f"rhs has length {b.shape[0]}, expected {m}")
    aug = np.concatenate([a, b[:, None]], axis=1)
    p, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    red = unpack(p[: len(pivots)], n + 1)
    x = np.zeros(n, dtype=bool)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, n]
    return x


def row_basis(mat) -> np.ndarray:
    """Independent rows spanning the row space of ``mat``."""
    a = np.asarray(mat, dtype=bool)
    if a.ndim == 1:
        a = a[None, :]
    p, pivots = rref(a)
    return unpack(p[: len(pivots)], a.shape[1])


def matmul(a, b) -> np.ndarray:
    """Matrix (or matrix-vector) product over GF(2)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return (a @ b) % 2 == 1


def bits_to_int(bits) -> int:
    out = 0
    for k, v in enumerate(np.asarray(bits, dtype=bool)):
        if v:
            out |= 1 << k
    return out


def int_to_bits(value: int, n: int) -> np.ndarray:
    return np.array([(value >> k) & 1 for k in range(n)], dtype=bool)
