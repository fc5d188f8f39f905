"""Entanglement negativity, area-law coefficient and topological term.

E_N = alpha L^{d-1} - E_topo for boundary noise on the d-dimensional toric
code.  Each model reduces E_N to logZ - logZ~ of a classical model:

  2d, Z (or X) noise  -> 1d Ising ring of L spins
  3d, Z noise         -> 2d Z2 gauge theory on the L x L torus
  3d, X noise         -> 2d Ising model on the L x L torus
  4d, Z (or X) noise  -> 3d Z2 gauge theory on the L^3 torus
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from . import gf2
from .spectrum import spectrum
from .stabilizer import NoiseModel, flat_cut_layout, noise_to_beta
from .statmech.duality import beta_to_p
from .statmech.exact import logZ_enumerate, logZ_gauge2d, logZ_ising1d, restricted_logZ
from .statmech.ising2d import BETA_C as BETA_C_ISING2D
from .statmech.ising2d import logZ_ising2d, onsager_f_minus_2beta
from .statmech.mc import Schedule, logZ_mc
from .statmech.models import gauge3d

LOG2 = math.log(2.0)
P_C_3D_X = beta_to_p(BETA_C_ISING2D)  # = 1 - sqrt(2)/2
MODELS = ("2d-Z", "2d-X", "3d-Z", "3d-X", "4d-Z", "4d-X")


@dataclass
class NegativityReport:
    d: int
    L: int
    noise: str
    p: float
    beta: float
    E_N: float
    alpha: float
    E_topo: float
    method: str
    error: float = 0.0
    p_x: float = 0.0
    p_z: float = 0.0
    seeds: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


REPORT_COLUMNS = ("d", "L", "noise", "p", "p_x", "p_z", "beta", "E_N", "alpha", "E_topo", "error", "method")


def _validate(p: float, L: int) -> tuple[float, float]:
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p must lie in [0, 1/2], got {p}")
    if int(L) != L or L < 2:
        raise ValueError(f"L must be an integer >= 2, got {L}")
    return p, noise_to_beta(p)


def _report(d, L, kind, p, beta, e_n, alpha, e_topo, method, error=0.0, seeds=()):
    px, pz = (p, 0.0) if kind == "X" else (0.0, p)
    return NegativityReport(d, int(L), kind, p, beta, e_n, alpha, e_topo, method, error, px, pz, list(seeds))


def _closed_form(d: int, kind: str, p: float, L: int, n_sites: int) -> NegativityReport:
    """alpha = log(1 + r), E_topo = log 2 - log(1 + t^N) with r = 1 - 2p, t = p/(1-p)."""
    p, beta = _validate(p, L)
    r = 1.0 - 2.0 * p
    t = p / (1.0 - p)
    alpha = math.log1p(r)
    e_topo = LOG2 - math.log1p(t**n_sites)
    return _report(d, L, kind, p, beta, alpha * n_sites - e_topo, alpha, e_topo, "closed-form")


def negativity_2d_z(p: float, L: int) -> NegativityReport:
    return _closed_form(2, "Z", p, L, L)


def negativity_2d_x(p: float, L: int) -> NegativityReport:
    """X noise in 2d: identical to Z noise by the star/plaquette duality."""
    return _closed_form(2, "X", p, L, L)


def negativity_3d_z(p: float, L: int) -> NegativityReport:
    return _closed_form(3, "Z", p, L, L * L)


def negativity_statmech(model: str, p: float, L: int) -> NegativityReport:
    """E_N = logZ - logZ~ from the exact classical model (no closed form used)."""
    if model in ("2d-Z", "2d-X"):
        p, beta = _validate(p, L)
        res, n_sites = logZ_ising1d(beta, L), L
    elif model == "3d-Z":
        p, beta = _validate(p, L)
        res, n_sites = logZ_gauge2d(beta, L), L * L
    elif model == "3d-X":
        return negativity_3d_x(p, L)
    else:
        raise ValueError(f"no exact stat-mech path for {model!r}")
    alpha = math.log1p(1.0 - 2.0 * p)
    e_n = res.log_ratio
    return _report(int(model[0]), L, model[-1], p, beta, e_n, alpha, alpha * n_sites - e_n, "statmech-exact")


def negativity_3d_x(p: float, L: int, thermodynamic: bool = False) -> NegativityReport:
    """X noise in 3d: 2d Ising model, alpha = f - 2 beta (Onsager free energy).

    Finite L: E_topo = alpha L^2 - (logZ_L - logZ~_L) with the exact torus
    logZ.  ``thermodynamic=True`` assigns E_topo = log 2 below beta_c and 0
    above it, keeping E_N = alpha L^2 - E_topo.
    """
    p, beta = _validate(p, L)
    alpha = onsager_f_minus_2beta(beta)
    if thermodynamic:
        e_topo = LOG2 if beta < BETA_C_ISING2D else 0.0
        return _report(3, L, "X", p, beta, alpha * L * L - e_topo, alpha, e_topo, "closed-form")
    e_n = logZ_ising2d(beta, L).log_ratio
    return _report(3, L, "X", p, beta, e_n, alpha, alpha * L * L - e_n, "statmech-exact")


def topo_at_zero_noise(d: int, L: int) -> float:
    """E_topo at p = 0 from GF(2) rank counting of the 4d boundary model.

    At beta = 0, E_N = rank log 2 and alpha = 2 log 2 (per L^3), so
    E_topo = (2 L^3 - rank) log 2; the plaquette-edge rank is 2 L^3 - 2.
    """
    if d != 4:
        raise ValueError("rank counting is implemented for the 4d model")
    rank = gf2.rank(gauge3d(L).incidence())
    return (2 * L**3 - rank) * LOG2


def negativity_4d_z(p: float, L: int, schedule: Schedule | None = None,
                    beta_c: float | None = None, kind: str = "Z") -> NegativityReport:
    """4d code: E_N = logZ - logZ~ of the 3d gauge theory.

    L = 2 is enumerated exactly; larger L use thermodynamic integration.  The
    topological term is assigned by phase: 2 log 2 below beta_c and 0 above
    (exact rank counting at p = 0).  Without ``beta_c`` only p = 0 gets an
    E_topo; other points report NaN.
    """
    p, beta = _validate(p, L)
    model = gauge3d(L)
    n_cells = L**3
    if beta == 0.0:
        rank = gf2.rank(model.incidence())
        e_topo = topo_at_zero_noise(4, L)
        e_n = rank * LOG2
        return _report(4, L, kind, p, beta, e_n, (e_n + e_topo) / n_cells, e_topo, "closed-form")
    if L == 2:
        res = logZ_enumerate(model, beta)
        method, err, seeds = "statmech-exact", 0.0, []
    else:
        if math.isinf(beta):
            raise ValueError("p = 1/2 is outside the Monte Carlo path; use the limit E_N = 0")
        res = logZ_mc(model, beta, schedule or Schedule(beta_max=beta))
        method, err, seeds = "statmech-mc", res.error, res.seeds
    e_n = res.log_ratio
    if beta_c is None:
        e_topo = math.nan
    else:
        e_topo = 2 * LOG2 if beta < beta_c else 0.0
    alpha = (e_n + e_topo) / n_cells
    return _report(4, L, kind, p, beta, e_n, alpha, e_topo, method, err, seeds)


def negativity_spectrum(model: str, p: float, L: int) -> NegativityReport:
    """E_N = log sum |lambda| from exact spectrum enumeration on a flat cut."""
    d, kind = int(model[0]), model[-1]
    p, beta = _validate(p, L)
    layout = flat_cut_layout(d, L)
    noise = NoiseModel(kind, p_z=p if kind == "Z" else 0.0, p_x=p if kind == "X" else 0.0)
    e_n = spectrum(layout, noise).log_negativity()
    n_sites = L ** (d - 1)
    if model in ("2d-Z", "2d-X", "3d-Z"):
        alpha = math.log1p(1.0 - 2.0 * p)
    elif model == "3d-X":
        alpha = onsager_f_minus_2beta(beta)
    else:
        alpha = math.nan
    return _report(d, L, kind, p, beta, e_n, alpha, alpha * n_sites - e_n, "spectrum-enumeration")


def negativity(model: str, p: float, L: int, **kw) -> NegativityReport:
    if model in ("2d-Z", "2d-X"):
        return _closed_form(2, model[-1], p, L, L)
    if model == "3d-Z":
        return negativity_3d_z(p, L)
    if model == "3d-X":
        return negativity_3d_x(p, L, **kw)
    if model in ("4d-Z", "4d-X"):
        return negativity_4d_z(p, L, kind=model[-1], **kw)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")


def half_height_crossing(model: str, L: int, tol: float = 1e-12) -> float:
    """p where the finite-L E_topo falls to half its p = 0 value."""
    if model not in ("2d-Z", "2d-X", "3d-Z", "3d-X"):
        raise ValueError(f"no continuous finite-L E_topo for {model!r}")
    top = negativity(model, 0.0, L).E_topo

    def g(p):
        return negativity(model, p, L).E_topo - 0.5 * top

    return optimize.brentq(g, 0.0, 0.5, xtol=tol)


@dataclass
class ScanResult:
    model: str
    reports: list
    crossings: dict
    p_c: float | None
    beta_c: float | None = None
    beta_c_error: float | None = None

    def summary(self) -> dict:
        return {
            "model": self.model,
            "crossings": {str(k): v for k, v in self.crossings.items()},
            "p_c": self.p_c,
            "beta_c": self.beta_c,
            "beta_c_error": self.beta_c_error,
        }


def scan(model: str, Ls, ps, beta_c: float | None = None, beta_c_error: float | None = None,
         schedule: Schedule | None = None) -> ScanResult:
    """Reports on the (L, p) grid, half-height crossings and the p_c summary.

    p_c: 1/2 for 2d and 3d-Z (no finite-p transition), the 2d Ising value
    for 3d-X, and (1 - exp(-2 beta_c)) / 2 for 4d given a located beta_c.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    Ls = [int(L) for L in Ls]
    ps = [float(p) for p in ps]
    reports = []
    for L in Ls:
        for p in ps:
            if model.startswith("4d"):
                reports.append(negativity_4d_z(p, L, schedule, beta_c, kind=model[-1]))
            else:
                reports.append(negativity(model, p, L))
    crossings = {}
    if not model.startswith("4d"):
        crossings = {L: half_height_crossing(model, L) for L in Ls}
    if model in ("2d-Z", "2d-X", "3d-Z"):
        p_c = 0.5
    elif model == "3d-X":
        p_c, beta_c = P_C_3D_X, BETA_C_ISING2D
    else:
        p_c = None if beta_c is None else beta_to_p(beta_c)
    return ScanResult(model, reports, crossings, p_c, beta_c, beta_c_error)


def alpha_monotone(reports) -> bool:
    """alpha nonincreasing in p for each L (reports in grid order)."""
    by_l = {}
    for r in reports:
        by_l.setdefault(r.L, []).append((r.p, r.alpha))
    for rows in by_l.values():
        rows.sort()
        a = np.array([x[1] for x in rows])
        if np.any(np.diff(a) > 1e-12):
            return False
    return True
