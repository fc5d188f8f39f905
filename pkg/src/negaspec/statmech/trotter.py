"""Quantum-classical check: 2d quantum Z2 gauge theory vs the Trotterized
anisotropic 3d classical gauge theory on the L = 2 torus.

Quantum side: tr[exp(-bt H) G] with H = -sum_p prod_{e in p} Z_e - Gamma sum_e X_e
and G the Gauss-law projector prod_v (1 + prod_{e in v} X_e) / 2.

Classical side: L^2 M spatial plaquettes with K = bt / M, 2 L^2 M temporal
plaquettes with K_tau = -1/2 log tanh(bt Gamma / M), evaluated exactly with a
transfer matrix over the 2^{2L^2} slice states (temporal links summed inside).
Each link-slice carries the factor sqrt(2 sinh 2a) / 2 with a = bt Gamma / M,
and each Gauss projector 2^{-L^2}; together these give the prefactor
C^{2 L^2 M} 2^{-3 L^2 M} with C = sqrt(2 sinh 2a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from ..cellcomplex import build_complex

MAX_TROTTER_L = 2
MAX_SLICES = 64


@dataclass(frozen=True)
class TrotterResult:
    gamma: float
    beta_tilde: float
    M: int
    L: int
    quantum: float
    classical: float
    gap: float
    k_space: float
    k_time: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _torus(L: int):
    cx = build_complex(2, (L, L))
    plaquettes = [list(f) for f in cx.boundary[2]]
    stars = [list(c) for c in cx.coboundary[0]]
    edge_vertices = [list(v) for v in cx.boundary[1]]
    return cx.count(1), plaquettes, stars, edge_vertices


def _z_strings(n: int, sets) -> np.ndarray:
    """Diagonal of prod_{e in set} Z_e for each set, basis bit e = (Z_e = -1)."""
    idx = np.arange(1 << n)
    out = np.empty((len(sets), 1 << n))
    for k, s in enumerate(sets):
        mask = 0
        for e in s:
            mask ^= 1 << e
        out[k] = 1.0 - 2.0 * (np.bitwise_count(idx & mask) & 1)
    return out


def _x_string(n: int, s) -> np.ndarray:
    mask = 0
    for e in s:
        mask ^= 1 << e
    idx = np.arange(1 << n)
    op = np.zeros((1 << n, 1 << n))
    op[idx ^ mask, idx] = 1.0
    return op


def quantum_hamiltonian(L: int, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Dense H and Gauss projector G on the L x L torus (edge qubits)."""
    n, plaqs, stars, _ = _torus(L)
    h = -np.diag(_z_strings(n, plaqs).sum(axis=0))
    for e in range(n):
        h -= gamma * _x_string(n, [e])
    dim = 1 << n
    g = reduce(lambda a, b: a @ b, [(np.eye(dim) + _x_string(n, s)) / 2 for s in stars])
    return h, g


def quantum_trace(gamma: float, beta_tilde: float, L: int = 2) -> float:
    h, g = quantum_hamiltonian(L, gamma)
    w, v = np.linalg.eigh(h)
    rho = (v * np.exp(-beta_tilde * (w - w.min()))) @ v.T
    return float(np.trace(rho @ g)) * math.exp(-beta_tilde * w.min())


def gauss_ground_degeneracy(gamma: float, L: int = 2, tol: float = 1e-9) -> int:
    """Number of ground states of H inside the Gauss-law sector G = 1."""
    h, g = quantum_hamiltonian(L, gamma)
    w, v = np.linalg.eigh(g)
    basis = v[:, w > 0.5]
    e = np.linalg.eigvalsh(basis.T @ h @ basis)
    return int(np.sum(e < e.min() + tol))


def k_time(beta_tilde: float, gamma: float, M: int) -> float:
    return -0.5 * math.log(math.tanh(beta_tilde * gamma / M))


def classical_partition(gamma: float, beta_tilde: float, M: int, L: int = 2) -> float:
    """Normalized anisotropic gauge sum, computed by transfer matrices."""
    if L > MAX_TROTTER_L:
        raise ValueError(f"L = {L} exceeds the dense guard {MAX_TROTTER_L}")
    if not 1 <= M <= MAX_SLICES:
        raise ValueError(f"M must lie in 1..{MAX_SLICES}")
    if gamma <= 0 or beta_tilde <= 0:
        raise ValueError("the classical side needs gamma > 0 and beta_tilde > 0")
    n, plaqs, stars, edge_vertices = _torus(L)
    nv = L * L
    a = beta_tilde * gamma / M
    ks = beta_tilde / M
    kt = k_time(beta_tilde, gamma, M)
    dim = 1 << n
    space = _z_strings(n, plaqs).sum(axis=0)  # spatial plaquette sum per slice
    sig = 1.0 - 2.0 * ((np.arange(dim)[:, None] >> np.arange(n)) & 1)  # (dim, n)
    t = np.zeros((dim, dim))
    for lam in product((1.0, -1.0), repeat=nv):
        # temporal plaquette of edge e: s_e(tau) s_e(tau+1) lambda_v lambda_v'
        le = np.array([lam[v0] * lam[v1] for v0, v1 in edge_vertices])
        t += np.exp(kt * (sig * le) @ sig.T)
    # link prefactors and Gauss projector normalization per slice
    log_pref = n * (0.5 * math.log(2 * math.sinh(2 * a)) - math.log(2.0)) - nv * math.log(2.0)
    t *= math.exp(log_pref)
    t = t * np.exp(ks * space)[None, :]  # spatial weight of the slice being left
    w = np.linalg.eigvals(t)
    return float(np.real(np.sum(w**M)))


def trotter_check(gamma: float, beta_tilde: float, M: int, L: int = 2) -> TrotterResult:
    """Compare tr[exp(-bt H) G] with its M-slice classical representation."""
    q = quantum_trace(gamma, beta_tilde, L)
    c = classical_partition(gamma, beta_tilde, M, L)
    return TrotterResult(
        gamma, beta_tilde, M, L, q, c, abs(c - q) / abs(q), beta_tilde / M, k_time(beta_tilde, gamma, M)
    )


def isotropic_gamma(beta: float) -> float:
    """Gamma with K_tau = K = beta at bt / M = beta: tanh(beta Gamma) = exp(-2 beta)."""
    beta = float(beta)
    if beta <= 0:
        raise ValueError("beta must be > 0")
    return math.atanh(math.exp(-2.0 * beta)) / beta
