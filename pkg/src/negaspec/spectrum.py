"""Exact negativity spectra of the boundary-decohered toric code.

Weights are kept in the normalized form ``r**W`` with ``r = 1 - 2p`` (the
``exp(beta * sum A)`` factors divided by their maximum), so every entry is a
finite number in [0, 1] up to the overall 1/Z, including at p = 1/2.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import gf2
from .chi import MAX_SPAN_RANK, AdmissibleBasis, BoundaryConfig, chi, coefficients, span
from .stabilizer import BoundaryLayout, NoiseModel

GROUP_RTOL = 1e-12
REP_SEARCH_RANK = 12


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    multiplicity: int
    config: BoundaryConfig | None = None


@dataclass
class NegativitySpectrum:
    entries: list[SpectrumEntry]
    descriptor: dict
    Z: float
    extra: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[SpectrumEntry]:
        return iter(self.entries)

    def trace(self) -> float:
        return math.fsum(e.value * e.multiplicity for e in self.entries)

    def abs_sum(self) -> float:
        return math.fsum(abs(e.value) * e.multiplicity for e in self.entries)

    def log_negativity(self) -> float:
        return math.log(self.abs_sum())

    def n_nonzero(self) -> int:
        return sum(e.multiplicity for e in self.entries if e.value != 0.0)

    def values(self) -> np.ndarray:
        """Flat eigenvalue list with multiplicities expanded, sorted."""
        out = np.repeat([e.value for e in self.entries], [e.multiplicity for e in self.entries])
        return np.sort(out)

    def to_csv(self, header: dict | None = None) -> str:
        buf = io.StringIO()
        head = dict(self.descriptor)
        head["Z"] = self.Z
        if header:
            head.update(header)
        buf.write("# " + json.dumps(head, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "multiplicity", "config_hex"])
        for e in self.entries:
            w.writerow([f"{e.value:.17g}", e.multiplicity, e.config.hex() if e.config else ""])
        return buf.getvalue()


def _merge(values, mults, reps) -> list[SpectrumEntry]:
    """Merge equal eigenvalues (relative GROUP_RTOL) with a fixed order."""
    order = np.argsort(values, kind="stable")
    out: list[SpectrumEntry] = []
    for k in order:
        v, m = float(values[k]), int(mults[k])
        if m == 0:
            continue
        if out and abs(out[-1].value - v) <= GROUP_RTOL * max(abs(v), abs(out[-1].value)):
            last = out[-1]
            out[-1] = SpectrumEntry(last.value, last.multiplicity + m, last.config)
        else:
            out.append(SpectrumEntry(v, m, reps[k]))
    return out


def span_weight_histogram(basis: np.ndarray) -> np.ndarray:
    """hist[w] = number of vectors of Hamming weight w in the row span."""
    basis = np.asarray(basis, dtype=bool)
    r, n = basis.shape
    if r > MAX_SPAN_RANK:
        raise ValueError(f"span of rank {r} exceeds the enumeration guard {MAX_SPAN_RANK}")
    words = gf2.pack(basis) if r else np.zeros((0, gf2.n_words(n)), np.uint64)
    vecs = np.zeros((1, words.shape[1]), dtype=np.uint64)
    for row in words:
        vecs = np.concatenate([vecs, vecs ^ row])
    weights = np.bitwise_count(vecs).sum(axis=1, dtype=np.int64)
    return np.bincount(weights, minlength=n + 1)


def _weighted_side_spectrum(layout, basis: AdmissibleBasis, r: float, side: str, descriptor):
    """Spectrum where the noise weights one side and chi sums out the other.

    For a weighted config v != 0 the chi values over the other side split
    evenly into +1 and -1 (chi is a nondegenerate bilinear form on the
    admissible spans), while v = 0 gives +1 throughout.  Hence Z = 2^rank.
    """
    rk = basis.rank
    own = basis.x_basis if side == "A" else basis.y_basis
    hist = span_weight_histogram(own)
    half = (1 << rk) // 2
    Z = float(1 << rk)
    vals, mults, reps = [1.0 / Z], [1 << rk], [_rep(layout, basis, side, None, +1)]
    for w in range(1, hist.shape[0]):
        if hist[w] == 0:
            continue
        mag = r**w / Z
        for sign in (+1, -1):
            vals.append(sign * mag)
            mults.append(int(hist[w]) * half)
            reps.append(_rep(layout, basis, side, w, sign))
    return NegativitySpectrum(_merge(np.array(vals), mults, reps), descriptor, Z, {"rank": rk})


def _rep(layout, basis: AdmissibleBasis, side: str, weight, sign) -> BoundaryConfig | None:
    """A representative admissible config for an entry.

    Basis rows are tried first; small spans (rank <= REP_SEARCH_RANK) are
    then searched exhaustively.
    """
    own, other = (basis.x_basis, basis.y_basis) if side == "A" else (basis.y_basis, basis.x_basis)
    small = basis.rank <= REP_SEARCH_RANK
    if weight is None:
        cands = [np.zeros(own.shape[1], dtype=bool)]
    else:
        cands = [b for b in own if int(b.sum()) == weight]
        if not cands and small:
            cands = [v for v in span(own) if int(v.sum()) == weight][:1]
    others = span(other) if small else [np.zeros(other.shape[1], dtype=bool), *other]
    for v in cands[:1]:
        for o in others:
            cfg = BoundaryConfig(v, o) if side == "A" else BoundaryConfig(o, v)
            if chi(layout, cfg) == sign:
                return cfg
    return None


def _descriptor(layout: BoundaryLayout, noise: NoiseModel) -> dict:
    return {
        "d": layout.d,
        "L": layout.L,
        "extents": list(layout.code.cx.extents),
        "cut": list(layout.cut),
        "noise": noise.kind,
        "p_z": noise.p_z,
        "p_x": noise.p_x,
    }


def spectrum_z(layout: BoundaryLayout, noise: NoiseModel) -> NegativitySpectrum:
    """lambda(A, B) = chi(A, B) r_z^{n_-(A)} / Z over admissible (A, B)."""
    if noise.kind != "Z":
        raise ValueError("spectrum_z needs a Z noise model")
    basis = AdmissibleBasis(layout)
    return _weighted_side_spectrum(layout, basis, noise.r_z, "A", _descriptor(layout, noise))


def spectrum_x(layout: BoundaryLayout, noise: NoiseModel) -> NegativitySpectrum:
    """lambda(A, B) = chi(A, B) r_x^{n_-(B)} / Z over admissible (A, B)."""
    if noise.kind != "X":
        raise ValueError("spectrum_x needs an X noise model")
    basis = AdmissibleBasis(layout)
    return _weighted_side_spectrum(layout, basis, noise.r_x, "B", _descriptor(layout, noise))


def xz_tau_sum(x: np.ndarray, y: np.ndarray, r_z: float, t_x: float) -> np.ndarray:
    """Inner tau-sum of the combined-noise weight on a ring, batched.

    Evaluates ``tr prod_i T(x_i) D(y_i)`` where ``T(0) = [[1, r], [r, 1]]``,
    ``T(1) = [[r, 1], [1, r]]`` is the bond between tau_{i-1} and tau_i and
    ``D(y) = diag(1, (-1)^y t_x)`` the field on tau_i.  This equals
    ``sum_tau r_z^{|M tau + x|} t_x^{|tau|} (-1)^{y . tau}`` for the ring
    adjacency.  All matrix entries lie in [-1, 1], so no rescaling is needed.
    """
    x = np.atleast_2d(np.asarray(x, dtype=bool))
    y = np.atleast_2d(np.asarray(y, dtype=bool))
    n, L = x.shape
    prod = np.broadcast_to(np.eye(2), (n, 2, 2)).copy()
    for i in range(L):
        t = np.empty((n, 2, 2))
        t[:, 0, 0] = t[:, 1, 1] = np.where(x[:, i], r_z, 1.0)
        t[:, 0, 1] = t[:, 1, 0] = np.where(x[:, i], 1.0, r_z)
        t[:, :, 1] *= np.where(y[:, i], -t_x, t_x)[:, None]
        prod = prod @ t
    return prod[:, 0, 0] + prod[:, 1, 1]


def spectrum_xz_2d(layout: BoundaryLayout, noise: NoiseModel) -> NegativitySpectrum:
    """Combined X and Z boundary noise on the 2d code.

    Every admissible pair (x, y) is evaluated; the weight is chi times the
    tau-sum from xz_tau_sum, so the sign is no longer fixed by chi alone.
    """
    if layout.d != 2:
        raise ValueError("the combined-noise spectrum is only defined for d = 2")
    if not np.array_equal(layout.adjacency, ring_adjacency(layout.n_a)):
        raise ValueError("layout adjacency is not the ring form expected for d = 2")
    basis = AdmissibleBasis(layout)
    rk = basis.rank
    if 2 * rk > MAX_SPAN_RANK:
        raise ValueError(f"2^{2 * rk} admissible pairs exceed the enumeration guard")
    cx_ = coefficients(rk).astype(np.uint8)
    xs = (cx_ @ basis.x_basis.astype(np.uint8)) % 2 == 1
    ys = (cx_ @ basis.y_basis.astype(np.uint8)) % 2 == 1
    form = basis.chi_form.astype(np.uint8)
    parity = ((cx_ @ form) % 2) @ cx_.T % 2  # [c, d] -> c.F.d
    chis = np.where(parity == 1, -1.0, 1.0)
    nx = xs.shape[0]
    X = np.repeat(xs, nx, axis=0)
    Y = np.tile(ys, (nx, 1))
    w = chis.reshape(-1) * xz_tau_sum(X, Y, noise.r_z, noise.tanh_x)
    Z = math.fsum(w)
    reps = [BoundaryConfig(a, b) for a, b in zip(X, Y)]
    desc = _descriptor(layout, noise)
    return NegativitySpectrum(_merge(w / Z, np.ones(w.shape[0], int), reps), desc, Z, {"rank": rk})


def ring_adjacency(L: int) -> np.ndarray:
    """A_i borders B_{i-1} and B_i on a ring of L sites."""
    m = np.zeros((L, L), dtype=bool)
    for i in range(L):
        m[i, i] = True
        m[i, (i - 1) % L] ^= True
    return m


def spectrum(layout: BoundaryLayout, noise: NoiseModel) -> NegativitySpectrum:
    if noise.kind == "Z":
        return spectrum_z(layout, noise)
    if noise.kind == "X":
        return spectrum_x(layout, noise)
    return spectrum_xz_2d(layout, noise)


def iter_admissible_weights(layout: BoundaryLayout, noise: NoiseModel):
    """Stream (config, unnormalized weight) over every admissible pair.

    Direct evaluation through chi() and noise_weight-style counting; meant
    for cross-checks at small sizes rather than production.
    """
    basis = AdmissibleBasis(layout)
    m = layout.adjacency.astype(np.int64)
    for x in basis.all_x():
        for y in basis.all_y():
            cfg = BoundaryConfig(x, y)
            c = chi(layout, cfg)
            if noise.kind == "Z":
                w = noise.r_z ** int(x.sum())
            elif noise.kind == "X":
                w = noise.r_x ** int(y.sum())
            else:
                w = 0.0
                for tau in basis_all_tau(layout.n_b):
                    flips = ((m @ tau.astype(np.int64)) & 1).astype(bool) ^ x
                    w += (
                        noise.r_z ** int(flips.sum())
                        * noise.tanh_x ** int(tau.sum())
                        * (-1) ** int(np.count_nonzero(tau & y))
                    )
            yield cfg, c * w


def basis_all_tau(n: int) -> np.ndarray:
    return coefficients(n)
