"""Exact 2D Ising model: finite periodic torus and thermodynamic limit."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .models import PartitionResult

LOG2 = math.log(2.0)
BETA_C = 0.5 * math.log(1.0 + math.sqrt(2.0))


def _log_2cosh(x: np.ndarray) -> np.ndarray:
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a))


def _log_abs_2sinh(x: np.ndarray) -> np.ndarray:
    a = np.abs(x)
    with np.errstate(divide="ignore"):
        return a + np.log(-np.expm1(-2.0 * a))


def _signed_logsumexp(logs, signs) -> tuple[float, int]:
    logs = np.asarray(logs, dtype=float)
    signs = np.asarray(signs, dtype=float)
    keep = np.isfinite(logs) & (signs != 0)
    if not keep.any():
        return -math.inf, 0
    top = logs[keep].max()
    total = math.fsum(float(s * math.exp(v - top)) for v, s in zip(logs[keep], signs[keep]))
    if total == 0:
        return -math.inf, 0
    return top + math.log(abs(total)), (1 if total > 0 else -1)


def kaufman_logZ(beta: float, L: int, Ly: int | None = None) -> float:
    """log Z of the periodic Lx x Ly Ising model (Kaufman's four-term formula).

    Z = 1/2 (2 sinh 2K)^{N/2} (Z1 + Z2 + Z3 + Z4) with, over the Ly rows,
    Z1,2 = prod_r 2cosh/2sinh(Lx g_{2r+1} / 2) and Z3,4 the same over even
    indices; cosh g_l = cosh 2K coth 2K - cos(pi l / Ly), and g_0 = 2K + log
    tanh K keeps its sign so that Z4 changes sign at the critical point.
    """
    Lx = int(L)
    Ly = Lx if Ly is None else int(Ly)
    beta = float(beta)
    if Lx < 2 or Ly < 2:
        raise ValueError("torus sides must be >= 2")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    N = Lx * Ly
    if beta == 0.0:
        return N * LOG2
    K = beta
    c = math.cosh(2 * K) / math.tanh(2 * K)
    ls = np.arange(2 * Ly)
    gam = np.arccosh(np.maximum(c - np.cos(np.pi * ls / Ly), 1.0))
    gam[0] = 2 * K + math.log(math.tanh(K))
    odd, even = gam[1::2], gam[0::2]
    logs, signs = [], []
    logs.append(_log_2cosh(0.5 * Lx * odd).sum())
    signs.append(1)
    logs.append(_log_abs_2sinh(0.5 * Lx * odd).sum())
    signs.append(1)
    logs.append(_log_2cosh(0.5 * Lx * even).sum())
    signs.append(1)
    logs.append(_log_abs_2sinh(0.5 * Lx * even).sum())
    signs.append(int(np.prod(np.sign(even))))
    log_sum, sign = _signed_logsumexp(logs, signs)
    if sign <= 0:
        raise FloatingPointError("non-positive Kaufman sum")
    return -LOG2 + 0.5 * N * math.log(2 * math.sinh(2 * K)) + log_sum


def onsager_f(beta: float) -> float:
    """Thermodynamic-limit log Z per spin.

    f = log(2 cosh 2K) + (1/pi) int_0^{pi/2} log[(1 + sqrt(1 - k^2 sin^2 t)) / 2] dt,
    with k = 2 sinh 2K / cosh^2 2K.
    """
    K = float(beta)
    if K < 0:
        raise ValueError("beta must be >= 0")
    if math.isinf(K):
        return math.inf
    k = 2 * math.sinh(2 * K) / math.cosh(2 * K) ** 2
    k2 = min(k * k, 1.0)

    def g(t):
        return math.log(0.5 * (1.0 + math.sqrt(max(1.0 - k2 * math.sin(t) ** 2, 0.0))))

    val, _ = integrate.quad(g, 0.0, 0.5 * math.pi, epsabs=1e-14, epsrel=1e-13, limit=400)
    return 2 * K + math.log1p(math.exp(-4 * K)) + val / math.pi


def onsager_f_minus_2beta(beta: float) -> float:
    """f - 2 beta, the per-spin log ratio; finite (-> 0) as beta -> infinity."""
    K = float(beta)
    if math.isinf(K):
        return 0.0
    return onsager_f(K) - 2 * K


def onsager_f_double_integral(beta: float) -> float:
    """Independent check: log 2 + (1/8 pi^2) iint log[cosh^2 2K - sinh 2K (cos a + cos b)]."""
    K = float(beta)
    ch, sh = math.cosh(2 * K) ** 2, math.sinh(2 * K)
    val, _ = integrate.dblquad(
        lambda b, a: math.log(ch - sh * (math.cos(a) + math.cos(b))),
        0.0, math.pi, 0.0, math.pi, epsabs=1e-12, epsrel=1e-12,
    )
    return LOG2 + 4 * val / (8 * math.pi**2)


def logZ_ising2d(beta: float, L: int) -> PartitionResult:
    """Exact finite-torus logZ plus thermodynamic f; logZ~ = log 2 + 2 beta L^2."""
    if L < 2:
        raise ValueError("L must be >= 2")
    beta = float(beta)
    N = L * L
    log_n = LOG2
    if math.isinf(beta):
        return PartitionResult(beta, math.inf, math.inf, log_n, "kaufman", log_ratio=0.0, f=math.inf)
    log_z = kaufman_logZ(beta, L)
    log_tilde = log_n + 2 * beta * N
    f = onsager_f(beta)
    # logZ = N f + log g  defines the finite-size constant
    return PartitionResult(beta, log_z, log_tilde, log_n, "kaufman", f=f, log_g=log_z - N * f)


def specific_heat(beta: float, L: int, h: float = 1e-4) -> float:
    """beta^2 d^2 logZ / d beta^2 per spin, by central differences of the exact logZ."""
    f0 = kaufman_logZ(beta, L)
    fp = kaufman_logZ(beta + h, L)
    fm = kaufman_logZ(beta - h, L)
    return beta**2 * (fp - 2 * f0 + fm) / (h * h) / (L * L)
