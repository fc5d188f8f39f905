"""Classical Ising-type models as spin-product term lists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..cellcomplex import build_complex


@dataclass(frozen=True)
class StatMechModel:
    """Energy ``beta * sum_t prod_{i in t} s_i`` over ``n_spins`` Ising spins.

    ``terms`` is an integer array (n_terms, k): every term has the same size,
    which holds for all the lattice models built here.
    """

    name: str
    n_spins: int
    terms: np.ndarray
    beta: float = 0.0
    L: int = 0

    def __post_init__(self):
        t = np.asarray(self.terms, dtype=np.int64)
        if t.ndim != 2:
            raise ValueError("terms must be a 2d array")
        if t.size and (t.min() < 0 or t.max() >= self.n_spins):
            raise ValueError("term references an invalid spin index")
        object.__setattr__(self, "terms", t)

    @property
    def n_terms(self) -> int:
        return self.terms.shape[0]

    def with_beta(self, beta: float) -> "StatMechModel":
        return StatMechModel(self.name, self.n_spins, self.terms, float(beta), self.L)

    def incidence(self) -> np.ndarray:
        """GF(2) term-spin incidence (n_terms, n_spins)."""
        inc = np.zeros((self.n_terms, self.n_spins), dtype=bool)
        for r, row in enumerate(self.terms):
            for s in row:
                inc[r, s] ^= True
        return inc

    def spin_terms(self) -> np.ndarray:
        """(n_spins, degree) table of the terms containing each spin."""
        lists = [[] for _ in range(self.n_spins)]
        for t, row in enumerate(self.terms):
            for s in row:
                lists[s].append(t)
        deg = {len(x) for x in lists}
        if len(deg) != 1:
            raise ValueError("model is not regular; spin degrees differ")
        return np.array(lists, dtype=np.int64)

    def energy(self, spins) -> float:
        """sum_t prod s for a +/-1 spin vector (without the beta factor)."""
        s = np.asarray(spins)
        return float(np.prod(s[self.terms], axis=1).sum())


def _cells_model(name, d, L, spin_dim, term_dim, beta, use_boundary=True) -> StatMechModel:
    cx = build_complex(d, (L,) * d)
    rows = cx.boundary[term_dim] if use_boundary else cx.coboundary[term_dim]
    return StatMechModel(name, cx.count(spin_dim), np.array(rows, dtype=np.int64), beta, L)


def ising1d(L: int, beta: float = 0.0) -> StatMechModel:
    if L < 2:
        raise ValueError("L must be >= 2")
    terms = np.array([[i, (i + 1) % L] for i in range(L)], dtype=np.int64)
    return StatMechModel("ising1d", L, terms, beta, L)


def ising1d_open_segments(L: int, cut_bonds, beta: float = 0.0) -> StatMechModel:
    """Periodic chain with the bonds (n, n+1) for n in ``cut_bonds`` removed."""
    cut = {c % L for c in cut_bonds}
    terms = np.array([[i, (i + 1) % L] for i in range(L) if i not in cut], dtype=np.int64)
    return StatMechModel("ising1d-cut", L, terms.reshape(-1, 2), beta, L)


def ising2d(L: int, beta: float = 0.0) -> StatMechModel:
    """Nearest-neighbour Ising model on the periodic L x L torus (vertex spins)."""
    return _cells_model("ising2d", 2, L, 0, 1, beta)


def ising3d(L: int, beta: float = 0.0) -> StatMechModel:
    return _cells_model("ising3d", 3, L, 0, 1, beta)


def gauge2d(L: int, beta: float = 0.0) -> StatMechModel:
    """Edge spins, one term per vertex: the product over its coboundary edges."""
    return _cells_model("gauge2d", 2, L, 1, 0, beta, use_boundary=False)


def gauge3d(L: int, beta: float = 0.0) -> StatMechModel:
    """Edge spins, one term per plaquette: the product over its boundary edges."""
    return _cells_model("gauge3d", 3, L, 1, 2, beta)


BUILDERS = {
    "ising1d": ising1d,
    "ising2d": ising2d,
    "ising3d": ising3d,
    "gauge2d": gauge2d,
    "gauge3d": gauge3d,
}


def build_model(name: str, L: int, beta: float = 0.0) -> StatMechModel:
    try:
        return BUILDERS[name](L, beta)
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(BUILDERS)}") from None


@dataclass
class PartitionResult:
    """logZ together with the excitation-free restriction logZ~.

    ``log_ratio`` = logZ - logZ~ is carried separately because it is finite
    (and computed without cancellation) even when both logs diverge at
    beta = infinity.
    """

    beta: float
    log_z: float
    log_z_tilde: float
    log_n: float
    method: str
    error: float = 0.0
    log_ratio: float | None = None
    f: float | None = None
    log_g: float | None = None
    seeds: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.log_ratio is None:
            self.log_ratio = self.log_z - self.log_z_tilde

    def to_dict(self) -> dict:
        out = {
            "beta": self.beta,
            "logZ": self.log_z,
            "logZ_tilde": self.log_z_tilde,
            "log_n": self.log_n,
            "log_ratio": self.log_ratio,
            "method": self.method,
            "error": self.error,
            "seeds": list(self.seeds),
        }
        if self.f is not None:
            out["f"] = self.f
        if self.log_g is not None:
            out["log_g"] = self.log_g
        out.update(self.extra)
        return out


def tanh_from_r(r: float) -> float:
    """tanh(beta) written through r = exp(-2 beta); exact at r = 0."""
    return (1.0 - r) / (1.0 + r)


def r_from_beta(beta: float) -> float:
    return 0.0 if math.isinf(beta) else math.exp(-2.0 * beta)
