"""String orders and wave-function overlaps of the perturbed boundary cluster state.

The 1d state is exp(beta sum_i Z_{B,i} Z_{B,i+1}) |psi>, with |psi> the
cluster state on alternating A/B qubits whose amplitudes are
psi(a, b) = prod_i (-1)^{a_i b_i + b_i a_{i+1}}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statmech.exact import logZ_enumerate, logZ_gauge2d, logZ_ising1d
from .statmech.ising2d import BETA_C, logZ_ising2d
from .statmech.models import PartitionResult, ising1d, ising1d_open_segments

MAX_DENSE_SITES = 6
OVERLAP_KINDS = ("2d-Z", "3d-Z", "3d-X")


@dataclass(frozen=True)
class StringOrderResult:
    beta: float
    L: int
    i: int
    j: int
    s_a: float
    s_b: float
    method: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _check(beta, L, i, j):
    if L < 3:
        raise ValueError("L must be >= 3")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if i == j:
        raise ValueError("string endpoints must differ")
    if not (0 <= i < L and 0 <= j < L):
        raise ValueError("endpoints must lie in 0..L-1")


def string_order_sb(beta: float, L: int, i: int = 0, j: int = 1) -> float:
    """<S_B(i, j)> as a ratio of 1d Ising partition functions at coupling 2 beta.

    Commuting S_B through the perturbation reverses the two bonds (i-1, i)
    and (j-1, j), so <S_B> = Z(chain without those bonds) / Z(ring).  Cutting
    the ring into two open pieces gives 4 (2 cosh K)^{L-2} over
    (2 cosh K)^L + (2 sinh K)^L, that is 1 / [cosh^2 K (1 + tanh^L K)] with
    K = 2 beta.  Note that 1 / [cosh^2 K (1 + tanh K)^L] is a different
    function; it fails the enumeration check (for example L = 3, beta = 0.25).
    """
    beta = float(beta)
    _check(beta, L, i, j)
    if math.isinf(beta):
        return 0.0
    K = 2.0 * beta
    return 1.0 / (math.cosh(K) ** 2 * (1.0 + math.tanh(K) ** L))


def string_order_sb_enumerated(beta: float, L: int, i: int = 0, j: int = 1) -> float:
    """Same ratio from brute-force 1d Ising partition functions."""
    _check(beta, L, i, j)
    num = logZ_enumerate(ising1d_open_segments(L, [i - 1, j - 1]), 2.0 * beta).log_z
    den = logZ_enumerate(ising1d(L), 2.0 * beta).log_z
    return math.exp(num - den)


def string_order_sa(beta: float, L: int, i: int = 0, j: int = 1) -> float:
    """<S_A(i, j)> = 1: S_A commutes with the Z_B Z_B perturbation and
    stabilizes the cluster state."""
    _check(float(beta), L, i, j)
    return 1.0


def string_orders(beta: float, L: int, i: int = 0, j: int = 1) -> StringOrderResult:
    return StringOrderResult(float(beta), L, i, j, string_order_sa(beta, L, i, j),
                             string_order_sb(beta, L, i, j), "closed-form")


def _cluster_vector(L: int, beta: float) -> np.ndarray:
    """Perturbed state over bits (a_0..a_{L-1}, b_0..b_{L-1}); index bit q."""
    n = 2 * L
    idx = np.arange(1 << n)
    a = (idx[:, None] >> np.arange(L)) & 1
    b = (idx[:, None] >> (L + np.arange(L))) & 1
    phase = (a * b).sum(axis=1) + (b * np.roll(a, -1, axis=1)).sum(axis=1)
    amp = np.where(phase % 2 == 1, -1.0, 1.0)
    zb = 1 - 2 * b
    amp = amp * np.exp(beta * (zb * np.roll(zb, -1, axis=1)).sum(axis=1))
    return amp / np.linalg.norm(amp)


def _apply_pauli(vec: np.ndarray, xs, zs) -> np.ndarray:
    idx = np.arange(vec.shape[0])
    zmask = 0
    for q in zs:
        zmask ^= 1 << q
    xmask = 0
    for q in xs:
        xmask ^= 1 << q
    # P = X^x Z^z acting on |s>: Z first, then X
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & zmask) & 1)
    out = np.zeros_like(vec)
    out[idx ^ xmask] = signs * vec
    return out


def string_orders_dense(beta: float, L: int, i: int = 0, j: int = 1) -> StringOrderResult:
    """Brute-force expectation values on the 2L-qubit state vector.

    S_A(i, j) = Z_{B,i} X_{A,i+1} ... X_{A,j} Z_{B,j};
    S_B(i, j) = Z_{A,i} X_{B,i} ... X_{B,j-1} Z_{A,j}  (indices mod L, i < j).
    """
    _check(float(beta), L, i, j)
    if L > MAX_DENSE_SITES:
        raise ValueError(f"L = {L} exceeds the dense guard {MAX_DENSE_SITES}")
    if i > j:
        i, j = j, i
    psi = _cluster_vector(L, float(beta))
    A = lambda k: k % L  # noqa: E731
    B = lambda k: L + k % L  # noqa: E731
    sa = _apply_pauli(psi, [A(k) for k in range(i + 1, j + 1)], [B(i), B(j)])
    sb = _apply_pauli(psi, [B(k) for k in range(i, j)], [A(i), A(j)])
    return StringOrderResult(float(beta), L, i, j, float(psi @ sa), float(psi @ sb), "enumeration")


def overlap_logZ(kind: str, beta: float, L: int) -> PartitionResult:
    """<psi~|psi~> up to a beta-independent constant: the negativity model at 2 beta.

    2d-Z -> 1d Ising ring of L spins; 3d-Z -> 2d gauge theory on the L x L
    torus; 3d-X -> 2d Ising model on the L x L torus.
    """
    beta = float(beta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if kind == "2d-Z":
        return logZ_ising1d(2 * beta, L)
    if kind == "3d-Z":
        return logZ_gauge2d(2 * beta, L)
    if kind == "3d-X":
        return logZ_ising2d(2 * beta, L)
    raise ValueError(f"unknown overlap kind {kind!r}; choose from {OVERLAP_KINDS}")


def overlap_critical_beta(kind: str) -> float | None:
    """beta at which the overlap model is critical, or None if never singular."""
    if kind in ("2d-Z", "3d-Z"):
        return None
    if kind == "3d-X":
        return BETA_C / 2.0
    raise ValueError(f"unknown overlap kind {kind!r}; choose from {OVERLAP_KINDS}")


def disentangling_beta(kind: str) -> float | None:
    """beta_c of the negativity transition itself (model at beta, not 2 beta)."""
    if kind in ("2d-Z", "3d-Z"):
        return None
    if kind == "3d-X":
        return BETA_C
    raise ValueError(f"unknown overlap kind {kind!r}; choose from {OVERLAP_KINDS}")
