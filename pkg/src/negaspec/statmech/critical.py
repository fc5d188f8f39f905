"""Finite-size location of critical couplings.

Ising models: crossings of the Binder cumulant.  3D gauge theory: crossings
of the probability Z_0 / (Z_0 + Z_1) of the zero-flux sector, where Z_1 has
one unit of coupling flux (a line of antiferromagnetic plaquettes) through
the xy-planes; the ratio Z_1 / Z_0 is sampled inside the zero-flux sector.  Both
observables are scale invariant at criticality, so curves for different L
cross near beta_c.  The 2D Ising model also supports the specific-heat peak
of the exact finite-torus logZ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ..cellcomplex import build_complex
from .ising2d import specific_heat as _specific_heat_2d
from .mc import blocked, run_chain
from .models import StatMechModel, gauge3d, ising2d, ising3d

FAMILIES = {
    # family: (model builder, default bracket for the coarse scan, default method)
    "ising2d": (ising2d, (0.38, 0.50), "binder"),
    "ising3d": (ising3d, (0.20, 0.24), "binder"),
    "gauge3d": (gauge3d, (0.70, 0.82), "flux"),
}
METHODS = ("binder", "flux", "specific-heat")


@dataclass
class CriticalEstimate:
    family: str
    method: str
    Ls: list
    beta_c: float
    error: float
    stat_error: float = 0.0
    sys_error: float = 0.0
    crossings: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "method": self.method,
            "L": list(self.Ls),
            "beta_c": self.beta_c,
            "error": self.error,
            "stat_error": self.stat_error,
            "sys_error": self.sys_error,
            "crossings": self.crossings,
            "seeds": self.seeds,
            **self.extra,
        }


def flux_lines(L: int) -> np.ndarray:
    """Lines of xy-plaquettes running along z, one per (x, y) column.

    Flipping the couplings on a whole line changes the flux through every
    xy-plane by one unit without creating any frustrated cube.
    """
    cx = build_complex(3, (L, L, L))
    return np.array(
        [[cx.index(2, ((x, y, z), (0, 1))) for z in range(L)] for x in range(L) for y in range(L)],
        dtype=np.int64,
    )


def _observable(method: str):
    """Reweighted estimator f(run, index, beta, weights)."""
    if method == "binder":

        def est(run, idx, beta, w):
            m = run.mags[0][idx]
            # the Binder ratio is scale free, so raw magnetizations suffice
            m2 = np.sum(w * m**2) / np.sum(w)
            m4 = np.sum(w * m**4) / np.sum(w)
            return 1.0 - m4 / (3.0 * m2 * m2)

        return est
    if method == "flux":

        def est(run, idx, beta, w):
            return flux_probability(run, idx, beta, w)

        return est
    raise ValueError(f"method {method!r} needs the exact path")


def _fermi(x):
    return 0.5 * (1.0 - np.tanh(0.5 * x))


def flux_probability(run, idx, beta, w) -> float:
    """Zero-flux probability 1 / (1 + Z_1/Z_0) by Bennett's acceptance ratio.

    Chain 0 samples the untwisted sector and chain 1 the sector with one
    flux line.  Flipping any line l maps one sector onto the other with
    work 2 beta S_l (S_l = sum over the line of J U), so dF = -log(Z_1/Z_0)
    solves <f(W_0 - dF)>_0 = <f(W_1 + dF)>_1 with f the Fermi function.
    ``w`` holds the reweighting factors of both chains.
    """
    w0, w1 = w
    # line sums are integers in [-L, L]; work with weighted histograms
    h0 = (w0 / w0.sum()) @ run.line_sums[0][idx[0]]
    h1 = (w1 / w1.sum()) @ run.line_sums[1][idx[1]]
    work = 2.0 * beta * np.arange(-run.L, run.L + 1)

    def g(df):
        return h0 @ _fermi(work - df) - h1 @ _fermi(work + df)

    lo, hi = -50.0, 50.0
    df = optimize.brentq(g, lo, hi, xtol=1e-12)
    return 1.0 / (1.0 + math.exp(-df))


@dataclass
class _Run:
    """Samples at beta0; flux runs carry two chains (sector 0 and 1)."""

    L: int
    beta0: float
    energies: list
    mags: list
    line_sums: list
    seed: int

    @property
    def n(self) -> int:
        return min(e.shape[0] for e in self.energies)


def _value(est, run: _Run, beta: float, idx=None) -> float:
    if idx is None:
        idx = [np.arange(run.n)] * len(run.energies)
    ws = []
    for e, ix in zip(run.energies, idx):
        x = (beta - run.beta0) * e[ix]
        ws.append(np.exp(x - x.max()))
    if len(ws) == 1:
        return float(est(run, idx[0], beta, ws[0]))
    return float(est(run, idx, beta, ws))


def _sample(model: StatMechModel, method: str, beta: float, sweeps: int, therm: int, seed: int) -> _Run:
    if method != "flux":
        ch = run_chain(model, beta, sweeps, therm, seed)
        return _Run(model.L, beta, [ch.energies], [ch.mags.astype(float)], [ch.line_sums], seed)
    lines = flux_lines(model.L)
    twisted = np.ones(model.n_terms)
    twisted[lines[0]] = -1.0
    chains = [
        run_chain(model, beta, sweeps, therm, seed, twist_lines=lines, twist_moves=False),
        run_chain(model, beta, sweeps, therm, seed + 1, twist_lines=lines, twist_moves=False,
                  couplings=twisted),
    ]
    return _Run(model.L, beta, [c.energies for c in chains], [c.mags.astype(float) for c in chains],
                [_line_histogram(c.line_sums, model.L) for c in chains], seed)


def _line_histogram(sums: np.ndarray, L: int) -> np.ndarray:
    """Per-sample fraction of lines with each sum value -L..L."""
    vals = np.arange(-L, L + 1)
    k = np.rint(sums).astype(np.int64)
    return (k[:, :, None] == vals).mean(axis=1)


def _crossing(est, r1: _Run, r2: _Run, lo: float, hi: float, keep1=None, keep2=None) -> float:
    def diff(b):
        return _value(est, r1, b, keep1) - _value(est, r2, b, keep2)

    grid = np.linspace(lo, hi, 41)
    vals = np.array([diff(b) for b in grid])
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)
    if sign_change.size == 0:
        return math.nan
    # pick the change closest to the window centre
    k = sign_change[np.argmin(np.abs(sign_change - len(grid) // 2))]
    return optimize.brentq(diff, grid[k], grid[k + 1], xtol=1e-10)


def _pair_crossing(est, r1: _Run, r2: _Run, window: float, n_blocks: int) -> tuple[float, float]:
    lo = min(r1.beta0, r2.beta0) - window
    hi = max(r1.beta0, r2.beta0) + window
    full = _crossing(est, r1, r2, lo, hi)
    if math.isnan(full):
        return math.nan, math.nan
    idx1 = blocked(np.arange(r1.n), n_blocks)
    idx2 = blocked(np.arange(r2.n), n_blocks)
    vals = []
    for k in range(n_blocks):
        keep = np.arange(n_blocks) != k
        k1, k2 = idx1[keep].reshape(-1), idx2[keep].reshape(-1)
        c = _crossing(est, r1, r2, lo, hi, [k1] * len(r1.energies), [k2] * len(r2.energies))
        vals.append(c)
    vals = np.array(vals)
    if np.isnan(vals).any():
        return full, math.inf
    err = math.sqrt((n_blocks - 1) / n_blocks * np.sum((vals - vals.mean()) ** 2))
    return full, err


def _coarse_guess(family, method, Ls, bracket, sweeps, therm, seed) -> float:
    """Crossing of the two largest sizes on a coarse beta grid."""
    builder = FAMILIES[family][0]
    grid = np.linspace(bracket[0], bracket[1], 7)
    curves = {}
    for L in Ls[-2:]:
        model = builder(L)
        est = _observable(method)
        vals = []
        for k, b in enumerate(grid):
            run = _sample(model, method, b, sweeps, therm, seed + 1000 * L + k)
            vals.append(_value(est, run, b))
        curves[L] = np.array(vals)
    a, b = (curves[L] for L in Ls[-2:])
    diff = a - b
    change = np.flatnonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) <= 0)
    if change.size == 0:
        return 0.5 * (bracket[0] + bracket[1])
    k = change[0]
    # linear interpolation inside the bracketing interval
    t = diff[k] / (diff[k] - diff[k + 1])
    return float(grid[k] + t * (grid[k + 1] - grid[k]))


def locate_beta_c(family: str, Ls, method: str | None = None, sweeps: int = 20000,
                  thermalization: int = 2000, seed: int = 2024, beta_guess: float | None = None,
                  window: float | None = None, n_blocks: int = 20,
                  coarse_sweeps: int = 2000) -> CriticalEstimate:
    """Locate beta_c from crossings between consecutive sizes in ``Ls``.

    The estimate is the crossing of the two largest sizes.  Its error adds
    the jackknife error in quadrature to half the drift between the last two
    crossings, a simple allowance for the remaining finite-size shift.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    Ls = sorted(int(L) for L in Ls)
    if len(Ls) < 2:
        raise ValueError("need at least two system sizes")
    builder, bracket, default = FAMILIES[family]
    method = method or default
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "specific-heat":
        return _specific_heat_peak(family, Ls)
    if method == "flux" and family != "gauge3d":
        raise ValueError("the flux estimator applies to the gauge family only")
    if method == "binder" and family == "gauge3d":
        raise ValueError("the gauge family has no local order parameter; use method='flux'")

    if beta_guess is None:
        beta_guess = _coarse_guess(family, method, Ls, bracket, coarse_sweeps,
                                   max(coarse_sweeps // 10, 100), seed + 7)
    if window is None:
        window = 0.25 * (bracket[1] - bracket[0])
    runs, seeds = [], []
    for k, L in enumerate(Ls):
        model = builder(L)
        s = seed + 100 * k
        runs.append(_sample(model, method, beta_guess, sweeps, thermalization, s))
        seeds.append(s)
    est = _observable(method)
    crossings = []
    for r1, r2 in zip(runs[:-1], runs[1:]):
        c, e = _pair_crossing(est, r1, r2, window, n_blocks)
        crossings.append({"L1": r1.L, "L2": r2.L, "beta": c, "error": e})
    last = crossings[-1]
    stat = last["error"]
    sys = 0.5 * abs(crossings[-1]["beta"] - crossings[-2]["beta"]) if len(crossings) > 1 else 0.0
    return CriticalEstimate(
        family, method, Ls, last["beta"], math.hypot(stat, sys), stat, sys, crossings, seeds,
        {"beta_guess": beta_guess, "sweeps": sweeps, "thermalization": thermalization},
    )


def _specific_heat_peak(family: str, Ls) -> CriticalEstimate:
    if family != "ising2d":
        raise ValueError("the exact specific-heat path exists only for the 2D Ising family")
    peaks = []
    for L in Ls:
        res = optimize.minimize_scalar(
            lambda b: -_specific_heat_2d(b, L), bounds=(0.2, 0.8), method="bounded",
            options={"xatol": 1e-9},
        )
        peaks.append(float(res.x))
    inv = 1.0 / np.asarray(Ls, dtype=float)
    if len(Ls) >= 2:
        slope, intercept = np.polyfit(inv, peaks, 1)
    else:
        intercept = peaks[0]
    err = abs(intercept - peaks[-1])
    return CriticalEstimate(
        family, "specific-heat", list(Ls), float(intercept), err, 0.0, err,
        [{"L": L, "beta_peak": b} for L, b in zip(Ls, peaks)], [],
    )
