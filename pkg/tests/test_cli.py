from __future__ import annotations

import json

import pytest

from negaspec import io as nio
from negaspec.cli import main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_grid_inclusive():
    g = parse_grid("0:0.5:0.01")
    assert len(g) == 51 and g[0] == 0.0 and g[-1] == 0.5
    assert parse_grid("0:0.3:0.1") == [0.0, 0.1, 0.2, 0.3]
    assert parse_grid("0.1,0.2") == [0.1, 0.2]


def test_scan_row_count_and_half_row(capsys):
    code, out, _ = run(capsys, "scan", "--d", "2", "--noise", "z", "--L", "4,8,16", "--p", "0:0.5:0.01")
    assert code == 0
    header, rows = nio.read_csv(out)
    assert len(rows) == 3 * 51
    assert header["schema"] == "negaspec/1" and len(header["config_hash"]) == 16
    last = [r for r in rows if float(r["p"]) == 0.5]
    assert len(last) == 3 and all(float(r["E_topo"]) == 0.0 for r in last)
    assert header["summary"]["p_c"] == 0.5


def test_scan_3d_x_summary(capsys):
    code, out, _ = run(capsys, "scan", "--d", "3", "--noise", "x", "--L", "8,16,32,64", "--p", "0:0.5:0.25")
    header, _ = nio.read_csv(out)
    assert abs(header["summary"]["p_c"] - 0.2929) < 1e-3
    assert abs(header["summary"]["crossings"]["64"] - 0.2929) < 0.02


def test_spectrum_trace(capsys):
    code, out, _ = run(capsys, "spectrum", "--d", "2", "--L", "4", "--pz", "0.2")
    _, rows = nio.read_csv(out)
    assert abs(sum(float(r["lambda"]) * int(r["multiplicity"]) for r in rows) - 1.0) < 1e-10


def test_oracle_delta(capsys):
    code, out, _ = run(capsys, "oracle", "--fixture", "smallest-2d", "--pz", "0.3")
    header, _ = nio.read_csv(out)
    assert code == 0 and header["summary"]["max_abs_delta"] < 1e-8


def test_qcmap_json(capsys):
    code, out, _ = run(capsys, "qcmap", "--M", "4,8", "--format", "json")
    doc = json.loads(out)
    assert doc["summary"]["gauss_degeneracy_gamma0"] == 4 and len(doc["rows"]) == 2


def test_mc_logz(capsys):
    code, out, _ = run(capsys, "mc", "--model", "ising2d", "--L", "3", "--beta", "0.3",
                       "--points", "8", "--sweeps", "300", "--thermalization", "30")
    header, rows = nio.read_csv(out)
    assert code == 0 and len(rows) == 1 and header["seeds"]


def test_byte_identical(capsys, tmp_path):
    args = ["mc", "--model", "ising2d", "--L", "3", "--beta", "0.3", "--points", "6",
            "--sweeps", "200", "--thermalization", "20", "--seed", "9"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scan settings\nd = 3\nnoise = z\nL = 2,3\np = 0:0.5:0.25\n")
    _, out, _ = run(capsys, "scan", "--config", str(cfg))
    header, rows = nio.read_csv(out)
    assert len(rows) == 6 and header["config"]["d"] == 3
    _, out, _ = run(capsys, "scan", "--config", str(cfg), "--L", "4")
    _, rows = nio.read_csv(out)
    assert len(rows) == 3 and rows[0]["L"] == "4"


@pytest.mark.parametrize("argv", [
    ["scan", "--p", "0:0.7:0.1"],
    ["scan", "--bogus"],
    ["spectrum", "--pz", "0.9"],
    ["scan", "--noise", "q"],
])
def test_errors_are_json(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code != 0
    doc = json.loads(err.strip().splitlines()[-1])
    assert doc["schema"] == "negaspec/1" and doc["message"]


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    code, _, err = run(capsys, "scan", "--config", str(cfg))
    assert code == 2 and "nonsense" in json.loads(err)["message"]
