"""Kramers-Wannier-type duality tanh(beta*) = exp(-2 beta)."""

from __future__ import annotations

import math


def duality_transform(beta: float) -> float:
    """beta* = -1/2 log tanh(beta); an involution on (0, inf)."""
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if math.isinf(beta):
        return 0.0
    # log tanh b = log(1 - e^{-2b}) - log(1 + e^{-2b}), stable for large b
    q = math.exp(-2.0 * beta)
    return -0.5 * (math.log1p(-q) - math.log1p(q))


def duality_error(beta: float, sigma: float) -> float:
    """Propagated error |d beta*/d beta| sigma = sigma / sinh(2 beta)."""
    return abs(sigma) / math.sinh(2.0 * float(beta))


def beta_to_p(beta: float) -> float:
    """Noise rate with beta = -1/2 log(1 - 2p)."""
    return 0.5 * (1.0 - math.exp(-2.0 * float(beta)))
