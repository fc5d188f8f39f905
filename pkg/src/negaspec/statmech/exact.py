"""Exact partition functions: enumeration, relation-space expansion, closed forms."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .. import gf2
from ..spectrum import span_weight_histogram
from .models import PartitionResult, StatMechModel, gauge2d, ising1d, r_from_beta, tanh_from_r

MAX_ENUM_SPINS = 24
LOG2 = math.log(2.0)


@lru_cache(maxsize=32)
def _unsat_histogram(n: int, term_bytes: bytes, k: int) -> np.ndarray:
    terms = np.frombuffer(term_bytes, dtype=np.int64).reshape(-1, k)
    masks = np.zeros(terms.shape[0], dtype=np.uint32)
    for t, row in enumerate(terms):
        m = 0
        for s in row:
            m ^= 1 << int(s)
        masks[t] = m
    hist = np.zeros(terms.shape[0] + 1, dtype=np.int64)
    chunk = 1 << min(n, 20)
    for start in range(0, 1 << n, chunk):
        cfg = np.arange(start, start + chunk, dtype=np.uint32)
        unsat = np.zeros(chunk, dtype=np.int16)
        for m in masks:
            unsat += (np.bitwise_count(cfg & m) & 1).astype(np.int16)
        hist += np.bincount(unsat, minlength=hist.shape[0])
    return hist


def energy_histogram(model: StatMechModel) -> np.ndarray:
    """hist[k] = number of configurations with exactly k unsatisfied terms.

    Bit q of the configuration integer is 1 when spin q is -1.
    """
    if model.n_spins > MAX_ENUM_SPINS:
        raise ValueError(f"{model.n_spins} spins exceed the enumeration guard {MAX_ENUM_SPINS}")
    t = np.ascontiguousarray(model.terms, dtype=np.int64)
    return _unsat_histogram(model.n_spins, t.tobytes(), t.shape[1])


def logZ_enumerate(model: StatMechModel, beta: float | None = None) -> PartitionResult:
    """logZ by summing all 2^n configurations (grouped by energy)."""
    beta = model.beta if beta is None else float(beta)
    hist = energy_histogram(model)
    m = model.n_terms
    k = np.flatnonzero(hist)
    log_tilde = restricted_logZ(model, beta)
    log_n = log_tilde - beta * m
    if math.isinf(beta):
        return PartitionResult(beta, math.inf, math.inf, log_n, "enumeration", log_ratio=0.0)
    log_z = float(logsumexp(np.log(hist[k]) + beta * (m - 2.0 * k)))
    # ratio in the r = exp(-2 beta) form: sum_k hist[k] r^k / n
    r = math.exp(-2.0 * beta)
    ratio = float(logsumexp(np.log(hist[k]) + k * math.log(r))) - log_n
    return PartitionResult(beta, log_z, log_tilde, log_n, "enumeration", log_ratio=ratio)


def ground_rank(model: StatMechModel) -> int:
    return gf2.rank(model.incidence())


def restricted_logZ(model: StatMechModel, beta: float | None = None) -> float:
    """log Z~ = (n - rank) log 2 + beta * n_terms (every term satisfied)."""
    beta = model.beta if beta is None else float(beta)
    log_n = (model.n_spins - ground_rank(model)) * LOG2
    if math.isinf(beta):
        return math.inf
    return log_n + beta * model.n_terms


def relation_histogram(model: StatMechModel) -> np.ndarray:
    """Weight histogram of the term relations {rho : rho^T inc = 0}."""
    rel = gf2.nullspace(model.incidence().T)
    return span_weight_histogram(rel)


def logZ_relations(model: StatMechModel, beta: float | None = None) -> PartitionResult:
    """High-temperature expansion closed over the relation space.

    With e^{beta s} = cosh(beta) (1 + s tanh(beta)),
    Z = 2^n cosh(beta)^m sum_{rho} tanh(beta)^{|rho|}, the sum running over
    subsets of terms whose spin product is identically one.
    """
    beta = model.beta if beta is None else float(beta)
    hist = relation_histogram(model)
    return _from_relations(model.n_spins, model.n_terms, ground_rank(model), hist, beta, "relations")


def _from_relations(n, m, rank, hist, beta, method) -> PartitionResult:
    r = r_from_beta(beta)
    t = tanh_from_r(r)
    ws = np.flatnonzero(hist)
    poly = math.fsum(float(hist[w]) * t ** int(w) for w in ws)
    log_n = (n - rank) * LOG2
    # logZ - logZ~ = rank log2 + m log((1 + r)/2) + log(poly)
    ratio = rank * LOG2 + m * math.log1p(r) - m * LOG2 + math.log(poly)
    if math.isinf(beta):
        return PartitionResult(beta, math.inf, math.inf, log_n, method, log_ratio=ratio)
    log_cosh = beta + math.log1p(r) - LOG2
    log_z = n * LOG2 + m * log_cosh + math.log(poly)
    return PartitionResult(beta, log_z, log_n + beta * m, log_n, method, log_ratio=ratio)


def _ring_relations(N: int) -> np.ndarray:
    hist = np.zeros(N + 1, dtype=np.int64)
    hist[0] = 1
    hist[N] += 1
    return hist


def logZ_ising1d(beta: float, L: int) -> PartitionResult:
    """Transfer matrix: Z = (2 cosh beta)^L + (2 sinh beta)^L, Z~ = 2 e^{beta L}."""
    if L < 2:
        raise ValueError("L must be >= 2")
    beta = float(beta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    res = _from_relations(L, L, L - 1, _ring_relations(L), beta, "transfer")
    if not math.isinf(beta):
        t = math.tanh(beta)
        res.log_z = L * (LOG2 + math.log(math.cosh(beta))) + math.log1p(t**L)
    return res


def logZ_gauge2d(beta: float, L: int) -> PartitionResult:
    """2d Z2 gauge theory with vertex terms on the L x L torus.

    The L^2 vertex terms are independent up to the single relation that
    their product is one, and 2L^2 - (L^2 - 1) edge directions are pure
    gauge, so Z = 2^{L^2+1} [(cosh beta)^{L^2} + (sinh beta)^{L^2}].
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    beta = float(beta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    N = L * L
    return _from_relations(2 * N, N, N - 1, _ring_relations(N), beta, "closed-form")


def check_model_relations(name: str, L: int) -> bool:
    """True if the lattice model's relation space is {0, all terms}."""
    model = {"ising1d": ising1d, "gauge2d": gauge2d}[name](L)
    return np.array_equal(relation_histogram(model), _ring_relations(model.n_terms))
