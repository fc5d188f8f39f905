"""Command-line interface: ``negaspec <subcommand> [flags]``.

Subcommands: scan, spectrum, oracle, mc, qcmap, critical.  A ``--config``
file of ``key = value`` lines supplies defaults; explicit flags override it.
Validation failures print a JSON error object on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import io as nio

EXIT_USAGE = 2


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


# -- argument parsing helpers ---------------------------------------------

def parse_grid(text: str) -> list[float]:
    """``a:b:s`` (inclusive, half-step tolerance), a comma list, or one value."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"grid must be start:stop:step, got {text!r}")
        a, b, s = (float(x) for x in parts)
        if s <= 0 or b < a:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}: need step > 0 and stop >= start")
        n = int(math.floor((b - a) / s + 0.5))
        return [round(a + k * s, 12) for k in range(n + 1)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def parse_ints(text: str) -> list[int]:
    text = str(text).strip()
    try:
        if ":" in text:
            a, b, s = (int(x) for x in text.split(":"))
            return list(range(a, b + 1, s))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def noise_kind(text: str) -> str:
    k = str(text).strip().upper()
    if k not in ("Z", "X", "XZ"):
        raise argparse.ArgumentTypeError(f"noise must be z, x or xz, got {text!r}")
    return k


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys may use - or _."""
    out = {}
    with open(path) as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{n}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file of defaults")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=nio.FORMATS, default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="negaspec", description="Negativity spectra of decohered toric codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="E_N, alpha and E_topo over an (L, p) grid")
    _common(p)
    p.add_argument("--d", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--noise", type=noise_kind, default="Z")
    p.add_argument("--L", type=parse_ints, default=[4, 8, 16])
    p.add_argument("--p", type=parse_grid, default=parse_grid("0:0.5:0.01"))
    p.add_argument("--beta-c", type=float, default=None, help="4d: located critical beta")
    p.add_argument("--beta-c-error", type=float, default=None)
    p.add_argument("--points", type=int, default=48, help="4d MC: integration points")
    p.add_argument("--sweeps", type=int, default=2000)
    p.add_argument("--thermalization", type=int, default=200)
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("spectrum", help="exact negativity spectrum on a flat cut")
    _common(p)
    p.add_argument("--d", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--pz", type=float, default=0.0)
    p.add_argument("--px", type=float, default=0.0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("oracle", help="dense and brute-force cross-checks")
    _common(p)
    p.add_argument("--fixture", choices=("smallest-2d",), default="smallest-2d")
    p.add_argument("--pz", type=float, default=0.0)
    p.add_argument("--px", type=float, default=0.0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("mc", help="Monte Carlo logZ or critical point")
    _common(p)
    p.add_argument("--model", default="gauge3d")
    p.add_argument("--L", type=parse_ints, default=[4])
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--points", type=int, default=48)
    p.add_argument("--sweeps", type=int, default=2000)
    p.add_argument("--thermalization", type=int, default=200)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--locate-critical", action="store_true",
                   help="locate beta_c (sizes 4, 6, ..., L if one L is given)")
    p.add_argument("--critical-sweeps", type=int, default=20000)
    p.add_argument("--no-duality", action="store_true", help="skip the dual-model cross-check")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("qcmap", help="quantum-classical (Trotter) mapping check")
    _common(p)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--beta-tilde", type=float, default=2.0)
    p.add_argument("--M", type=parse_ints, default=[4, 8, 16, 32])
    p.add_argument("--L", type=int, default=2)
    p.set_defaults(func=cmd_qcmap)

    p = sub.add_parser("critical", help="finite-size crossing estimate of beta_c")
    _common(p)
    p.add_argument("--family", default="ising3d")
    p.add_argument("--L", type=parse_ints, default=[4, 6, 8])
    p.add_argument("--method", default=None)
    p.add_argument("--sweeps", type=int, default=20000)
    p.add_argument("--thermalization", type=int, default=2000)
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_critical)
    return ap


def parse_args(argv=None) -> argparse.Namespace:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = ap.parse_args(argv)
    if ns.config:
        cfg = read_config(ns.config)
        sub = ap._subparsers._group_actions[0].choices[ns.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise CliError(f"unknown config keys: {', '.join(unknown)}")
        for a in sub._actions:
            if a.dest in cfg and isinstance(a, argparse._StoreTrueAction):
                cfg[a.dest] = cfg[a.dest].lower() in ("1", "true", "yes", "on")
        sub.set_defaults(**cfg)
        ns = ap.parse_args(argv)
    return ns


def resolved_config(ns: argparse.Namespace) -> dict:
    skip = {"func", "config", "out"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip}


# -- subcommands ----------------------------------------------------------

def cmd_scan(ns) -> str:
    from .negativity import REPORT_COLUMNS, scan
    from .statmech.mc import Schedule

    if ns.noise == "XZ":
        raise CliError("scan supports Z or X noise; use 'spectrum' for combined noise")
    for p in ns.p:
        if not 0.0 <= p <= 0.5:
            raise CliError(f"p must lie in [0, 1/2], got {p}")
    for L in ns.L:
        if L < 2:
            raise CliError(f"L must be >= 2, got {L}")
    model = f"{ns.d}d-{ns.noise}"
    schedule = None
    if ns.d == 4:
        schedule = Schedule(points=ns.points, sweeps=ns.sweeps, thermalization=ns.thermalization, seed=ns.seed)
    res = scan(model, ns.L, ns.p, ns.beta_c, ns.beta_c_error, schedule)
    seeds = sorted({s for r in res.reports for s in r.seeds})
    header = nio.make_header(resolved_config(ns), seeds, command="scan")
    return nio.reports_table(res.reports, REPORT_COLUMNS, header, ns.format, res.summary())


def cmd_spectrum(ns) -> str:
    from .spectrum import spectrum
    from .stabilizer import NoiseModel, flat_cut_layout

    kind = "XZ" if ns.px > 0 and ns.pz > 0 else ("X" if ns.px > 0 else "Z")
    noise = NoiseModel(kind, p_z=ns.pz, p_x=ns.px)
    layout = flat_cut_layout(ns.d, ns.L, ns.height)
    spec = spectrum(layout, noise)
    header = nio.make_header(
        resolved_config(ns), (), command="spectrum", descriptor=spec.descriptor, Z=spec.Z,
        E_N=spec.log_negativity(), trace=spec.trace(),
    )
    rows = [[e.value, e.multiplicity, e.config.hex() if e.config else ""] for e in spec.entries]
    return nio.table(("lambda", "multiplicity", "config_hex"), rows, header, ns.format)


def cmd_oracle(ns) -> str:
    from .negativity import negativity_2d_z
    from .oracle import dense_instance, pauli_expansion_spectrum, smallest_2d_fixture
    from .spectrum import spectrum
    from .stabilizer import NoiseModel

    layout = smallest_2d_fixture()
    kind = "XZ" if ns.px > 0 and ns.pz > 0 else ("X" if ns.px > 0 else "Z")
    noise = NoiseModel(kind, p_z=ns.pz, p_x=ns.px)
    e_dense, _ = dense_instance(layout, noise)
    spec = spectrum(layout, noise)
    pauli = pauli_expansion_spectrum(layout, noise)
    vals = spec.values()
    padded = np.sort(np.concatenate([vals, np.zeros(pauli.shape[0] - vals.shape[0])]))
    rows = [
        ["E_N", "dense", "spectrum", e_dense, spec.log_negativity()],
        ["sum|lambda|", "pauli-expansion", "spectrum", float(np.abs(pauli).sum()), spec.abs_sum()],
        ["max|lambda_i|", "pauli-expansion", "spectrum", 0.0, float(np.max(np.abs(padded - pauli)))],
        ["trace", "one", "spectrum", 1.0, spec.trace()],
    ]
    if kind != "XZ":
        rows.append(["E_N", "dense", "closed-form", e_dense, negativity_2d_z(ns.pz or ns.px, layout.n_a).E_N])
    for r in rows:
        r.append(abs(r[3] - r[4]))
    summary = {"max_abs_delta": max(r[5] for r in rows), "n_qubits": layout.code.n}
    header = nio.make_header(resolved_config(ns), (), command="oracle")
    return nio.table(("quantity", "reference", "candidate", "ref_value", "value", "abs_delta"),
                     rows, header, ns.format, summary)


CRITICAL_FAMILY = {"gauge3d": "gauge3d", "ising3d": "ising3d", "ising2d": "ising2d"}


def cmd_mc(ns) -> str:
    from .statmech import build_model, logZ_mc
    from .statmech.critical import locate_beta_c
    from .statmech.duality import beta_to_p, duality_error, duality_transform
    from .statmech.mc import Schedule

    if ns.locate_critical:
        if ns.model not in ("gauge3d", "ising3d"):
            raise CliError("--locate-critical supports gauge3d or ising3d")
        Ls = ns.L if len(ns.L) > 1 else list(range(4, ns.L[0] + 1, 2))
        if len(Ls) < 2:
            raise CliError("need at least two sizes (a single L must be >= 6)")
        est = locate_beta_c(ns.model, Ls, sweeps=ns.critical_sweeps, seed=ns.seed)
        rows = [["estimate", ns.model, est.method, est.beta_c, est.error, beta_to_p(
            est.beta_c if ns.model == "gauge3d" else duality_transform(est.beta_c))]]
        for c in est.crossings:
            rows.append([f"crossing L={c['L1']},{c['L2']}", ns.model, est.method, c["beta"], c["error"], math.nan])
        seeds = list(est.seeds)
        summary = {"estimate": est.to_dict()}
        if not ns.no_duality:
            other = "ising3d" if ns.model == "gauge3d" else "gauge3d"
            est2 = locate_beta_c(other, Ls, sweeps=ns.critical_sweeps, seed=ns.seed + 1)
            seeds += list(est2.seeds)
            ising, gauge = (est2, est) if ns.model == "gauge3d" else (est, est2)
            dual = duality_transform(ising.beta_c)
            dual_err = duality_error(ising.beta_c, ising.error)
            comb = math.hypot(gauge.error, dual_err)
            z = (gauge.beta_c - dual) / comb
            rows.append(["duality", "ising3d->gauge3d", ising.method, dual, dual_err, beta_to_p(dual)])
            summary["duality"] = {"gauge_beta_c": gauge.beta_c, "dual_of_ising": dual,
                                  "combined_sigma": comb, "z": z, "agree_2sigma": abs(z) <= 2.0,
                                  "p_c": beta_to_p(gauge.beta_c)}
        header = nio.make_header(resolved_config(ns), seeds, command="mc")
        return nio.table(("row", "model", "method", "beta", "error", "p"), rows, header, ns.format, summary)

    rows, seeds = [], []
    for k, L in enumerate(ns.L):
        model = build_model(ns.model, L)
        sch = Schedule(points=ns.points, sweeps=ns.sweeps, thermalization=ns.thermalization,
                       seed=ns.seed + 1000 * k)
        res = logZ_mc(model, ns.beta, sch)
        seeds += list(res.seeds)
        rows.append([ns.model, L, ns.beta, res.log_z, res.error, res.log_z_tilde, res.log_ratio])
    header = nio.make_header(resolved_config(ns), seeds, command="mc")
    return nio.table(("model", "L", "beta", "log_z", "error", "log_z_tilde", "log_ratio"), rows, header, ns.format)


def cmd_qcmap(ns) -> str:
    from .statmech.trotter import gauss_ground_degeneracy, trotter_check

    rows = []
    for M in ns.M:
        r = trotter_check(ns.gamma, ns.beta_tilde, M, ns.L)
        rows.append([r.M, r.gamma, r.beta_tilde, r.quantum, r.classical, r.gap, r.k_space, r.k_time])
    gaps = [r[5] for r in rows]
    summary = {
        "gauss_degeneracy_gamma0": gauss_ground_degeneracy(0.0, ns.L),
        "gap_ratios": [b / a if a else math.nan for a, b in zip(gaps[:-1], gaps[1:])],
    }
    header = nio.make_header(resolved_config(ns), (), command="qcmap")
    return nio.table(("M", "gamma", "beta_tilde", "quantum", "classical", "gap", "k_space", "k_time"),
                     rows, header, ns.format, summary)


def cmd_critical(ns) -> str:
    from .statmech.critical import locate_beta_c
    from .statmech.duality import beta_to_p

    est = locate_beta_c(ns.family, ns.L, method=ns.method, sweeps=ns.sweeps,
                        thermalization=ns.thermalization, seed=ns.seed)
    rows = [[c["L1"], c["L2"], c["beta"], c["error"]] for c in est.crossings]
    summary = est.to_dict()
    if ns.family == "gauge3d":
        summary["p_c"] = beta_to_p(est.beta_c)
    header = nio.make_header(resolved_config(ns), est.seeds, command="critical")
    return nio.table(("L1", "L2", "beta", "error"), rows, header, ns.format, summary)


def _error(exc: BaseException, kind: str) -> None:
    sys.stderr.write(json.dumps({"schema": nio.SCHEMA, "error": kind, "message": str(exc)}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    try:
        ns = parse_args(argv)
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else EXIT_USAGE
    except (CliError, OSError) as exc:
        _error(exc, "usage")
        return EXIT_USAGE
    try:
        text = ns.func(ns)
        nio.write(ns.out, text)
    except (ValueError, OSError) as exc:
        _error(exc, type(exc).__name__)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
