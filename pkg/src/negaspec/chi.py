"""Strange-correlator sign chi(A, B) by GF(2) linear algebra.

With psi(a, b) = (-1)^{a.M.b}, the normalized character sum over (a, b)
collapses to a linear solve: chi vanishes unless M^T a = y is solvable and
x is orthogonal to ker(M^T); then chi = (-1)^{x . a*} for any solution a*.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf2
from .stabilizer import BoundaryLayout


@dataclass(frozen=True)
class BoundaryConfig:
    """x[i] = 1 means A_i = -1 on R_A; y[j] = 1 means B_j = -1 on R_B."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=bool).reshape(-1))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=bool).reshape(-1))

    @classmethod
    def from_signs(cls, a_signs, b_signs) -> "BoundaryConfig":
        return cls(np.asarray(a_signs) < 0, np.asarray(b_signs) < 0)

    @classmethod
    def from_flipped(cls, layout: BoundaryLayout, a_flipped=(), b_flipped=()) -> "BoundaryConfig":
        """Config with the listed (0-based) boundary stabilizers set to -1."""
        x = np.zeros(layout.n_a, dtype=bool)
        y = np.zeros(layout.n_b, dtype=bool)
        x[list(a_flipped)] = True
        y[list(b_flipped)] = True
        return cls(x, y)

    @property
    def a_signs(self) -> np.ndarray:
        return np.where(self.x, -1, 1)

    @property
    def b_signs(self) -> np.ndarray:
        return np.where(self.y, -1, 1)

    def hex(self) -> str:
        bits = np.concatenate([self.x, self.y])
        return format(gf2.bits_to_int(bits), "x")


def _check(layout: BoundaryLayout, cfg: BoundaryConfig) -> None:
    if cfg.x.shape[0] != layout.n_a or cfg.y.shape[0] != layout.n_b:
        raise ValueError(
            f"config sizes ({cfg.x.shape[0]}, {cfg.y.shape[0]}) do not match "
            f"layout ({layout.n_a}, {layout.n_b})"
        )


def is_admissible(layout: BoundaryLayout, cfg: BoundaryConfig) -> bool:
    _check(layout, cfg)
    return _orthogonal(cfg.x, layout.ker_mt) and _orthogonal(cfg.y, layout.ker_m)


def _orthogonal(v: np.ndarray, basis: np.ndarray) -> bool:
    if basis.shape[0] == 0:
        return True
    return not np.any(gf2.matmul(basis, v))


def chi(layout: BoundaryLayout, cfg: BoundaryConfig) -> int:
    _check(layout, cfg)
    if not _orthogonal(cfg.x, layout.ker_mt):
        return 0
    a_star = gf2.solve(layout.adjacency.T, cfg.y)
    if a_star is None:
        return 0
    return -1 if np.count_nonzero(cfg.x & a_star) & 1 else 1


class AdmissibleBasis:
    """GF(2) parametrization of the configurations with nonzero chi.

    Admissible x are exactly the image of M (``x = M tau``, the tau
    substitution), admissible y the image of M^T.  ``x_basis`` and
    ``y_basis`` hold independent rows spanning these images, so coefficient
    vectors map injectively onto configs.  ``a_star[k]`` solves
    ``M^T a = y_basis[k]``, which makes chi bilinear in the coefficients.
    """

    def __init__(self, layout: BoundaryLayout):
        self.layout = layout
        m = layout.adjacency
        self.x_basis = gf2.row_basis(m.T) if m.any() else np.zeros((0, layout.n_a), bool)
        self.y_basis = gf2.row_basis(m) if m.any() else np.zeros((0, layout.n_b), bool)
        stars = [gf2.solve(m.T, yb) for yb in self.y_basis]
        self.a_star = np.array(stars, dtype=bool).reshape(len(stars), layout.n_a)

    @property
    def rank(self) -> int:
        return self.x_basis.shape[0]

    def x_from_tau(self, tau) -> np.ndarray:
        """A-configuration produced by B-side spins tau (A_i = prod tau_j)."""
        return gf2.matmul(self.layout.adjacency, np.asarray(tau, dtype=bool))

    def y_from_sigma(self, sigma) -> np.ndarray:
        return gf2.matmul(self.layout.adjacency.T, np.asarray(sigma, dtype=bool))

    @cached_property
    def chi_form(self) -> np.ndarray:
        """chi(x_c, y_d) = (-1)^{c . F . d} in coefficient coordinates."""
        return gf2.matmul(self.x_basis, self.a_star.T).reshape(self.rank, self.rank)

    def all_x(self) -> np.ndarray:
        return span(self.x_basis)

    def all_y(self) -> np.ndarray:
        return span(self.y_basis)


def admissible_basis(layout: BoundaryLayout) -> AdmissibleBasis:
    return AdmissibleBasis(layout)


MAX_SPAN_RANK = 24


def coefficients(r: int) -> np.ndarray:
    """All 2^r coefficient vectors, row k holding the bits of integer k."""
    if r > MAX_SPAN_RANK:
        raise ValueError(f"span of rank {r} exceeds the enumeration guard {MAX_SPAN_RANK}")
    ks = np.arange(1 << r, dtype=np.int64)
    return ((ks[:, None] >> np.arange(r)) & 1).astype(bool)


def span(basis: np.ndarray) -> np.ndarray:
    """Every vector of the row span, in coefficient order (see coefficients)."""
    basis = np.asarray(basis, dtype=bool)
    r, n = basis.shape
    coeff = coefficients(r)
    if r == 0:
        return np.zeros((1, n), dtype=bool)
    return (coeff.astype(np.uint8) @ basis.astype(np.uint8)) % 2 == 1
