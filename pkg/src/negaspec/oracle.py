"""Brute-force oracles, independent of the GF(2) production paths.

* Dense density matrices of small codes: projector ground state, Pauli
  channels in Kraus form, partial transpose by axis swapping, eigensolve.
* Character-sum chi and explicit Pauli-product psi / W.
* Pauli-expansion spectrum: the boundary operator sum_{a,b} c(a,b) psi(a,b)
  prod A^a prod B^b diagonalized by a Walsh-Hadamard transform over all
  2^{|R_A|+|R_B|} sign assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .cellcomplex import OPEN, PERIODIC, build_complex
from .chi import BoundaryConfig, coefficients
from .stabilizer import BoundaryLayout, NoiseModel, StabilizerCode, boundary_layout, build_toric_code

MAX_DENSE_QUBITS = 12
MAX_CHAR_BITS = 20
MAX_WHT_BITS = 22


@dataclass
class DenseState:
    n: int
    rho: np.ndarray

    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.rho - self.rho.conj().T)) <= tol)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho).min())


def _guard(n: int) -> None:
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"{n} qubits exceed the dense guard {MAX_DENSE_QUBITS}")


def smallest_2d_fixture() -> BoundaryLayout:
    """Frozen 10-qubit instance: 2 x 3 cylinder, x periodic, y open, cut y0 = 1.

    Qubits are the 1-cells ((x, y), axes) in lexicographic order; for each
    x = 0, 1 they run h(x,0), v(x,0), h(x,1), v(x,1), h(x,2), so qubit
    5x + k.  Region A = {h(x,0), v(x,0), h(x,1)} = qubits {0, 1, 2, 5, 6, 7}.
    Z noise acts on v(x,1) = qubits 3, 8 and X noise on h(x,1) = qubits
    2, 7.  One logical qubit, so every boundary eigenvalue appears twice in
    the dense spectrum with half the weight.
    """
    cx = build_complex(2, (2, 3), (PERIODIC, OPEN))
    return boundary_layout(build_toric_code(cx), (1, 1))


def ground_space_density(code: StabilizerCode) -> DenseState:
    """rho_0 proportional to prod (1 + A)/2 prod (1 + B)/2 (normalized)."""
    n = code.n
    _guard(n)
    dim = 1 << n
    idx = np.arange(dim)
    proj = np.eye(dim)
    for g in code.a_gens:
        # Z-string: diagonal sign by parity of the bits in its support
        sign = 1.0 - 2.0 * (np.bitwise_count(idx & g.z) & 1)
        proj = proj * (1.0 + sign)[:, None] / 2.0
    for g in code.b_gens:
        # X-string: permutes basis states, left action on rows
        proj = (proj + proj[idx ^ g.x]) / 2.0
    proj = proj / np.trace(proj)
    return DenseState(n, proj)


def apply_channel(state: DenseState, kind: str, p: float, qubits) -> DenseState:
    """Independent single-qubit Pauli channels rho -> (1-p) rho + p P rho P."""
    kind = kind.upper()
    if not 0.0 <= p <= 0.5:
        raise ValueError("p must lie in [0, 1/2]")
    n = state.n
    _guard(n)
    rho = state.rho.copy()
    idx = np.arange(1 << n)
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range")
        bit = (idx >> q) & 1
        if kind == "Z":
            differ = bit[:, None] != bit[None, :]
            rho = rho * np.where(differ, 1.0 - 2.0 * p, 1.0)
        elif kind == "X":
            perm = idx ^ (1 << q)
            rho = (1.0 - p) * rho + p * rho[np.ix_(perm, perm)]
        else:
            raise ValueError("channel kind must be Z or X")
    return DenseState(n, rho)


def decohere(state: DenseState, layout: BoundaryLayout, noise: NoiseModel) -> DenseState:
    """Z noise on the Z-decohered qubits and X noise on the X-decohered ones."""
    out = state
    if noise.kind in ("Z", "XZ") and noise.p_z > 0:
        out = apply_channel(out, "Z", noise.p_z, layout.decohered_z)
    if noise.kind in ("X", "XZ") and noise.p_x > 0:
        out = apply_channel(out, "X", noise.p_x, layout.decohered_x)
    return out


def partial_transpose(rho: np.ndarray, n: int, region_mask: int) -> np.ndarray:
    """Transpose the tensor factors of the qubits set in ``region_mask``."""
    t = rho.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    for q in range(n):
        if (region_mask >> q) & 1:
            r, c = n - 1 - q, 2 * n - 1 - q  # C-order: axis 0 is the top bit
            axes[r], axes[c] = axes[c], axes[r]
    return t.transpose(axes).reshape(1 << n, 1 << n)


def negativity_dense(state: DenseState, region_mask: int) -> tuple[float, np.ndarray]:
    """E_N = log sum |lambda| of the partial transpose, and the sorted spectrum."""
    _guard(state.n)
    pt = partial_transpose(state.rho, state.n, region_mask)
    pt = 0.5 * (pt + pt.conj().T)
    if np.iscomplexobj(pt) and np.max(np.abs(pt.imag)) <= 1e-14:
        pt = pt.real
    lam = np.sort(np.linalg.eigvalsh(pt))
    return math.log(np.sum(np.abs(lam))), lam


def dense_instance(layout: BoundaryLayout, noise: NoiseModel) -> tuple[float, np.ndarray]:
    rho0 = ground_space_density(layout.code)
    return negativity_dense(decohere(rho0, layout, noise), layout.region_a)


def logical_qubits(code: StabilizerCode) -> int:
    return code.n - code.stabilizer_rank()


# -- explicit Pauli products -------------------------------------------------


def _string_masks(layout: BoundaryLayout):
    code = layout.code
    za = [code.a_gens[i].z for i in layout.r_a]
    xb = [code.b_gens[j].x for j in layout.r_b]
    return za, xb


def _combine(masks, bits) -> int:
    out = 0
    for m, b in zip(masks, np.asarray(bits, dtype=bool)):
        if b:
            out ^= m
    return out


def psi_direct(layout: BoundaryLayout, a, b) -> int:
    """(-1)^{number of Y in (prod A^a prod B^b) restricted to region A}."""
    za, xb = _string_masks(layout)
    z = _combine(za, a) & layout.region_a
    x = _combine(xb, b) & layout.region_a
    return -1 if (x & z).bit_count() & 1 else 1


def weight_direct(layout: BoundaryLayout, kind: str, config) -> int:
    """Decohered-qubit support count of the explicit stabilizer product."""
    za, xb = _string_masks(layout)
    if kind.upper() == "Z":
        mask = sum(1 << q for q in layout.decohered_z)
        return (_combine(xb, config) & mask).bit_count()
    if kind.upper() == "X":
        mask = sum(1 << q for q in layout.decohered_x)
        return (_combine(za, config) & mask).bit_count()
    raise ValueError("kind must be Z or X")


def _span_masks(masks, region: int, nbits: int) -> list[int]:
    """Restricted XOR of every subset, indexed by the subset's bit pattern."""
    out = [0]
    for m in masks:
        mm = m & region
        out = out + [v ^ mm for v in out]
    assert len(out) == 1 << nbits
    return out


def _to_words(values: list[int], n_qubits: int) -> np.ndarray:
    w = gf2.n_words(n_qubits)
    arr = np.zeros((len(values), w), dtype=np.uint64)
    for k, v in enumerate(values):
        for j in range(w):
            arr[k, j] = (v >> (64 * j)) & 0xFFFFFFFFFFFFFFFF
    return arr


def psi_table(layout: BoundaryLayout) -> np.ndarray:
    """psi[a_index, b_index] = +/-1 from explicit Pauli restriction."""
    na, nb = layout.n_a, layout.n_b
    if na + nb > MAX_WHT_BITS:
        raise ValueError("boundary too large for the explicit psi table")
    za, xb = _string_masks(layout)
    zs = _to_words(_span_masks(za, layout.region_a, na), layout.code.n)
    xs = _to_words(_span_masks(xb, layout.region_a, nb), layout.code.n)
    parity = np.zeros((zs.shape[0], xs.shape[0]), dtype=np.int64)
    for w in range(zs.shape[1]):
        parity += np.bitwise_count(zs[:, None, w] & xs[None, :, w])
    return np.where(parity & 1, -1, 1).astype(np.int8)


def chi_bruteforce(layout: BoundaryLayout, cfg: BoundaryConfig) -> int:
    """Normalized character sum <+| Z^x Z^y |psi> / <+|psi> over all (a, b)."""
    if layout.n_a + layout.n_b > MAX_CHAR_BITS:
        raise ValueError("boundary too large for the character-sum oracle")
    return int(chi_bruteforce_batch(layout, [cfg])[0])


def chi_bruteforce_batch(layout: BoundaryLayout, cfgs, psi: np.ndarray | None = None) -> np.ndarray:
    psi = psi_table(layout) if psi is None else psi
    ca = coefficients(layout.n_a)
    cb = coefficients(layout.n_b)
    psi_f = psi.astype(float)
    norm = psi_f.sum()
    out = []
    for cfg in cfgs:
        sa = np.where((ca.astype(np.int64) @ cfg.x.astype(np.int64)) & 1, -1.0, 1.0)
        sb = np.where((cb.astype(np.int64) @ cfg.y.astype(np.int64)) & 1, -1.0, 1.0)
        val = sa @ psi_f @ sb / norm
        out.append(int(round(val)))
        if abs(val - round(val)) > 1e-9:
            raise ArithmeticError("character sum is not an integer")
    return np.array(out)


# -- Pauli-expansion spectrum ------------------------------------------------


def fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis."""
    v = np.array(v, dtype=float, copy=True)
    n = v.shape[-1]
    h = 1
    while h < n:
        v = v.reshape(-1, n // (2 * h), 2, h)
        a = v[:, :, 0, :].copy()
        b = v[:, :, 1, :]
        v[:, :, 0, :] = a + b
        v[:, :, 1, :] = a - b
        v = v.reshape(-1, n)
        h *= 2
    return v.reshape(-1) if v.shape[0] == 1 else v


def pauli_expansion_spectrum(layout: BoundaryLayout, noise: NoiseModel) -> np.ndarray:
    """All 2^{|R_A|+|R_B|} boundary eigenvalues (zeros included), sorted.

    Coefficients c(a, b) = r_z^{#Z-decohered qubits under X or Y} times
    r_x^{#X-decohered qubits under Z or Y}, counted on the explicit strings.
    """
    na, nb = layout.n_a, layout.n_b
    if na + nb > MAX_WHT_BITS:
        raise ValueError("boundary too large for the Walsh-Hadamard oracle")
    za, xb = _string_masks(layout)
    full = (1 << layout.code.n) - 1
    zfull = _span_masks(za, full, na)
    xfull = _span_masks(xb, full, nb)
    mz = sum(1 << q for q in layout.decohered_z)
    mx = sum(1 << q for q in layout.decohered_x)
    wa = np.array([(z & mx).bit_count() for z in zfull])
    wb = np.array([(x & mz).bit_count() for x in xfull])
    ca = noise.r_x ** wa if noise.kind in ("X", "XZ") else np.ones(1 << na)
    cb = noise.r_z ** wb if noise.kind in ("Z", "XZ") else np.ones(1 << nb)
    coeff = ca[:, None] * cb[None, :] * psi_table(layout)
    # index (a, b) -> a + 2^na b, so the transform runs over both bit groups
    vec = coeff.T.reshape(-1)
    lam = fwht(vec) / float(1 << (na + nb))
    return np.sort(lam)
