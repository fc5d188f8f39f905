"""Pauli strings, toric codes and the boundary layout of a flat cut.

Pauli strings store x/z bit masks as Python integers over qubit indices and
a phase exponent ``k`` so that ``P = i**k * prod_q X_q**x_q Z_q**z_q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf2
from .cellcomplex import OPEN, CellComplex

BETA_INF = math.inf  # sentinel for p = 1/2; closed forms take the limit instead


def popcount(v: int) -> int:
    return int(v).bit_count()


@dataclass(frozen=True)
class PauliString:
    x: int = 0
    z: int = 0
    phase: int = 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
        sign = 2 * (popcount(self.z & other.x) & 1)
        return PauliString(self.x ^ other.x, self.z ^ other.z, (self.phase + other.phase + sign) % 4)

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    @property
    def y_count(self) -> int:
        return popcount(self.x & self.z)

    def restrict(self, mask: int) -> "PauliString":
        return PauliString(self.x & mask, self.z & mask, 0)

    def commutes(self, other: "PauliString") -> bool:
        return (popcount(self.x & other.z) + popcount(self.z & other.x)) % 2 == 0

    def support(self) -> list[int]:
        m, out, q = self.x | self.z, [], 0
        while m:
            if m & 1:
                out.append(q)
            m >>= 1
            q += 1
        return out

    def label(self, n: int) -> str:
        chars = []
        for q in range(n):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IZXY"[2 * xb + zb])
        return "".join(chars)


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    a_gens: tuple[PauliString, ...]
    b_gens: tuple[PauliString, ...]
    cx: CellComplex
    qubit_dim: int

    @property
    def a_dim(self) -> int:
        return self.qubit_dim - 1

    @property
    def b_dim(self) -> int:
        return self.qubit_dim + 1

    def all_commute(self) -> bool:
        gens = self.a_gens + self.b_gens
        return all(g.commutes(h) for i, g in enumerate(gens) for h in gens[i + 1 :])

    def stabilizer_rank(self) -> int:
        rows = np.zeros((len(self.a_gens) + len(self.b_gens), 2 * self.n), dtype=bool)
        for r, g in enumerate(self.a_gens + self.b_gens):
            rows[r, : self.n] = gf2.int_to_bits(g.x, self.n)
            rows[r, self.n :] = gf2.int_to_bits(g.z, self.n)
        return gf2.rank(rows)


def build_toric_code(cx: CellComplex) -> StabilizerCode:
    """Toric code on ``cx``: qubits on 1-cells (d = 2, 3) or 2-cells (d = 4)."""
    q = 1 if cx.d in (2, 3) else 2
    a_gens = []
    for cof in cx.coboundary[q - 1]:
        mask = 0
        for c in cof:
            mask ^= 1 << c
        a_gens.append(PauliString(0, mask))
    b_gens = []
    for faces in cx.boundary[q + 1]:
        mask = 0
        for f in faces:
            mask ^= 1 << f
        b_gens.append(PauliString(mask, 0))
    return StabilizerCode(cx.count(q), tuple(a_gens), tuple(b_gens), cx, q)


@dataclass(frozen=True)
class BoundaryLayout:
    """Boundary stabilizers of a flat cut and their GF(2) adjacency.

    ``adjacency[i, j]`` is the parity of the Y-count of ``A_i B_j`` restricted
    to region A.  ``decohered_z[i]`` is the qubit whose Z error flips exactly
    the B-neighbours of ``R_A[i]``; ``decohered_x[j]`` is dual.
    """

    code: StabilizerCode
    cut: tuple[int, int]
    region_a: int
    r_a: tuple[int, ...]
    r_b: tuple[int, ...]
    adjacency: np.ndarray
    decohered_z: tuple[int, ...]
    decohered_x: tuple[int, ...]

    @property
    def n_a(self) -> int:
        return len(self.r_a)

    @property
    def n_b(self) -> int:
        return len(self.r_b)

    @property
    def d(self) -> int:
        return self.code.cx.d

    @property
    def L(self) -> int:
        return self.code.cx.extents[0]

    @cached_property
    def rank(self) -> int:
        return gf2.rank(self.adjacency)

    @cached_property
    def ker_mt(self) -> np.ndarray:
        """Basis of {a : M^T a = 0}, the A-side cocycles."""
        return gf2.nullspace(self.adjacency.T)

    @cached_property
    def ker_m(self) -> np.ndarray:
        """Basis of {b : M b = 0}, the B-side cycles."""
        return gf2.nullspace(self.adjacency)

    def describe(self) -> dict:
        return {
            "d": self.d,
            "extents": list(self.code.cx.extents),
            "cut": list(self.cut),
            "n_qubits": self.code.n,
            "n_RA": self.n_a,
            "n_RB": self.n_b,
            "rank": self.rank,
        }


def _region_mask(code: StabilizerCode, axis: int, offset: int) -> int:
    mask = 0
    for q, (x, s) in enumerate(code.cx.cells[code.qubit_dim]):
        limit = offset - 1 if axis in s else offset
        if x[axis] <= limit:
            mask |= 1 << q
    return mask


def _match_decohered(qubit_groups, region_gens, other_index, incidence):
    """Pair each boundary generator with the single qubit that excites only
    its adjacency neighbourhood; raises if the pairing is not a bijection."""
    out = [None] * len(region_gens)
    for q, (own, others) in qubit_groups.items():
        if len(own) != 1:
            continue
        i = own[0]
        expected = {other_index[j] for j in np.flatnonzero(incidence[i])}
        if set(others) != expected:
            continue
        if out[i] is not None:
            raise ValueError("two decohered qubits compete for one boundary stabilizer")
        out[i] = q
    if any(v is None for v in out):
        raise ValueError("cut does not admit a one-to-one decohered qubit set")
    return tuple(out)


def boundary_layout(code: StabilizerCode, cut: tuple[int, int]) -> BoundaryLayout:
    """Boundary layout for the flat cut ``cut = (axis, offset)``.

    Region A holds qubit cells whose centre lies below ``offset + 1/4`` along
    ``axis``; the axis must carry open boundary conditions.
    """
    axis, offset = int(cut[0]), int(cut[1])
    cx = code.cx
    if not 0 <= axis < cx.d:
        raise ValueError(f"cut axis {axis} out of range")
    if cx.bcs[axis] != OPEN:
        raise ValueError("only non-contractible cuts across an open axis are supported")
    if not 0 <= offset <= cx.extents[axis] - 2:
        raise ValueError(f"cut offset {offset} outside 0..{cx.extents[axis] - 2}")

    amask = _region_mask(code, axis, offset)
    full = (1 << code.n) - 1
    bmask = full & ~amask
    r_a = tuple(i for i, g in enumerate(code.a_gens) if g.z & amask and g.z & bmask)
    r_b = tuple(j for j, g in enumerate(code.b_gens) if g.x & amask and g.x & bmask)
    if not r_a or not r_b:
        raise ValueError("cut intersects no boundary stabilizer")

    adj = np.zeros((len(r_a), len(r_b)), dtype=bool)
    for i, ai in enumerate(r_a):
        za = code.a_gens[ai].z & amask
        for j, bj in enumerate(r_b):
            adj[i, j] = popcount(za & code.b_gens[bj].x) & 1 == 1

    pos_a = {g: i for i, g in enumerate(r_a)}
    pos_b = {g: j for j, g in enumerate(r_b)}
    a_of = [[] for _ in range(code.n)]
    b_of = [[] for _ in range(code.n)]
    for i, g in enumerate(code.a_gens):
        for q in g.support():
            a_of[q].append(i)
    for j, g in enumerate(code.b_gens):
        for q in g.support():
            b_of[q].append(j)

    # Z noise: qubits inside one boundary A whose B-stabilizers are all boundary ones
    z_groups = {}
    for q in range(code.n):
        own = [pos_a[i] for i in a_of[q] if i in pos_a]
        if own and b_of[q] and all(j in pos_b for j in b_of[q]):
            z_groups[q] = (own, b_of[q])
    x_groups = {}
    for q in range(code.n):
        own = [pos_b[j] for j in b_of[q] if j in pos_b]
        if own and a_of[q] and all(i in pos_a for i in a_of[q]):
            x_groups[q] = (own, a_of[q])
    dz = _match_decohered(z_groups, r_a, r_b, adj)
    dx = _match_decohered(x_groups, r_b, r_a, adj.T)

    return BoundaryLayout(code, (axis, offset), amask, r_a, r_b, adj, dz, dx)


def _bits(v, n: int, what: str) -> np.ndarray:
    arr = np.asarray(v, dtype=bool).reshape(-1)
    if arr.shape[0] != n:
        raise ValueError(f"{what} has {arr.shape[0]} entries, expected {n}")
    return arr


def psi_sign(layout: BoundaryLayout, a, b) -> int:
    """Partial-transpose sign (-1)^{a^T M b} of the boundary string."""
    a = _bits(a, layout.n_a, "a")
    b = _bits(b, layout.n_b, "b")
    parity = int(a.astype(np.int64) @ layout.adjacency.astype(np.int64) @ b.astype(np.int64)) & 1
    return -1 if parity else 1


def noise_weight(layout: BoundaryLayout, kind: str, config) -> int:
    """Decohered-qubit weight of a boundary stabilizer string.

    kind ``"Z"``: ``config`` are the b-bits over R_B and the result is W(X),
    the number of Z-decohered qubits carrying an X.  kind ``"X"``: ``config``
    are the a-bits over R_A and the result is W(Z).
    """
    kind = kind.upper()
    m = layout.adjacency.astype(np.int64)
    if kind == "Z":
        b = _bits(config, layout.n_b, "config").astype(np.int64)
        return int(np.sum((m @ b) & 1))
    if kind == "X":
        a = _bits(config, layout.n_a, "config").astype(np.int64)
        return int(np.sum((m.T @ a) & 1))
    raise ValueError(f"noise kind must be 'Z' or 'X', got {kind!r}")


def noise_to_beta(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"noise rate must lie in [0, 1/2], got {p}")
    if p == 0.5:
        return BETA_INF
    return -0.5 * math.log1p(-2.0 * p)


def beta_to_noise(beta: float) -> float:
    beta = float(beta)
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if math.isinf(beta):
        return 0.5
    return -0.5 * math.expm1(-2.0 * beta)


@dataclass(frozen=True)
class NoiseModel:
    """Boundary Pauli noise.  ``kind`` is ``"Z"``, ``"X"`` or ``"XZ"``.

    Everything downstream works with ``r = 1 - 2p = exp(-2 beta)`` and
    ``t = tanh(beta) = p / (1 - p)``, which stay finite at ``p = 1/2``.
    """

    kind: str
    p_z: float = 0.0
    p_x: float = 0.0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in ("Z", "X", "XZ"):
            raise ValueError(f"noise kind must be Z, X or XZ, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        for name in ("p_z", "p_x"):
            p = float(getattr(self, name))
            if not 0.0 <= p <= 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2], got {p}")
            object.__setattr__(self, name, p)

    @property
    def beta_z(self) -> float:
        return noise_to_beta(self.p_z)

    @property
    def beta_x(self) -> float:
        return noise_to_beta(self.p_x)

    @property
    def r_z(self) -> float:
        return 1.0 - 2.0 * self.p_z

    @property
    def r_x(self) -> float:
        return 1.0 - 2.0 * self.p_x

    @property
    def tanh_z(self) -> float:
        return self.p_z / (1.0 - self.p_z)

    @property
    def tanh_x(self) -> float:
        return self.p_x / (1.0 - self.p_x)

    @property
    def k_x(self) -> float:
        """-1/2 log tanh(beta_x); infinite at p_x = 0."""
        t = self.tanh_x
        return math.inf if t == 0.0 else -0.5 * math.log(t)


def flat_cut_layout(d: int, L: int, height: int = 3, offset: int = 1) -> BoundaryLayout:
    """Toric code on L^{d-1} x height, periodic except the last (open) axis,
    cut at ``offset`` along that axis."""
    from .cellcomplex import PERIODIC, build_complex

    cx = build_complex(d, (L,) * (d - 1) + (height,), (PERIODIC,) * (d - 1) + (OPEN,))
    return boundary_layout(build_toric_code(cx), (d - 1, offset))
