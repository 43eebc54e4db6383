import json
from pathlib import Path

import pytest

from dunklriesz.cli import main

CFG = Path(__file__).resolve().parent.parent / "configs"


def run(args):
    return main([str(a) for a in args])


def test_usage_exit_code():
    assert main([]) == 2


def test_unknown_function_rejected(tmp_path):
    with pytest.raises(SystemExit):
        run(["transform", "--setup", CFG / "n1g05.cfg", "--out", tmp_path,
             "--function", "nope"])


def test_transform_subcommand(tmp_path):
    rc = run(["transform", "--setup", CFG / "n1g05.cfg", "--out", tmp_path,
              "--tol", "1e-6"])
    assert rc == 0
    csv = tmp_path / "transform_n1g05_gauss_half.csv"
    assert csv.exists()
    header = csv.read_text().splitlines()[0]
    assert header == "x1,re,im"


def test_translate_subcommand(tmp_path):
    rc = run(["translate", "--setup", CFG / "n1g05.cfg", "--out", tmp_path,
              "--x", "0.7", "--tol", "1e-5"])
    assert rc == 0
    lines = (tmp_path / "translate_n1g05_gauss_half.csv").read_text().splitlines()
    assert lines[0] == "y1,spectral,radial,difference"
    assert len(lines) > 100


def test_riesz_subcommand_and_determinism(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    args = ["riesz", "--setup", CFG / "n1g05.cfg", "--pairs", "3",
            "--seed", "11"]
    assert run(args + ["--out", out1]) == 0
    assert run(args + ["--out", out2]) == 0
    c1 = (out1 / "riesz_n1g05.csv").read_bytes()
    c2 = (out2 / "riesz_n1g05.csv").read_bytes()
    assert c1 == c2


def test_hormander_subcommand(tmp_path):
    rc = run(["hormander-check", "--setup", CFG / "n1g05.cfg",
              "--out", tmp_path, "--samples", "5", "--seed", "3"])
    assert rc == 0
    payload = json.loads((tmp_path / "hormander_n1g05.json").read_text())
    assert len(payload["values"]) == 5
    assert payload["sup"] == max(payload["values"])
    rc2 = run(["hormander-check", "--setup", CFG / "n1g05.cfg",
               "--out", tmp_path / "again", "--samples", "5", "--seed", "3"])
    again = json.loads((tmp_path / "again" / "hormander_n1g05.json").read_text())
    assert again == payload


def test_cz_subcommand(tmp_path):
    rc = run(["cz-decompose", "--setup", CFG / "n1g05.cfg", "--out", tmp_path,
              "--level", "0.05"])
    assert rc == 0
    payload = json.loads((tmp_path / "cz_n1g05_gauss_half.json").read_text())
    assert payload["properties"]["reconstruction_error"] < 1e-12


def test_lp_scan_subcommand(tmp_path):
    rc = run(["lp-scan", "--setup", CFG / "n1g05.cfg", "--out", tmp_path,
              "--p-grid", "1.5,2.0", "--random-count", "2", "--seed", "5"])
    assert rc == 0
    payload = json.loads((tmp_path / "lp_scan_n1g05.json").read_text())
    assert float(payload["sup_ratio_per_p"]["0"]["2.0"]) <= 1.0 + 1e-6


def test_poly_check_subcommand():
    assert main(["poly-check", "--count", "5"]) == 0


def test_selftest_subcommand(tmp_path):
    rc = run(["selftest", "--setup", CFG / "n1g05.cfg", "--out", tmp_path])
    assert rc == 0
    summary = (tmp_path / "selftest_n1g05.txt").read_text()
    assert "FAIL" not in summary


def test_bad_setup_file(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("dimension = 1\n")
    assert run(["transform", "--setup", bad, "--out", tmp_path]) == 1
