import csv
import io
import json

import pytest
from numpy.testing import assert_allclose

from zeromodes.cli import main


def test_verify_identities_pass(tmp_path):
    out = tmp_path / "a.json"
    assert main(["verify", "--suite", "identities", "--d", "3", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert rows and all(r["gap"] <= r["tol"] for r in rows)
    assert {r["id"] for r in rows} >= {"ZM_LY/d3", "DIAMAG/d3"}


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", "--suite", "appendix", "--d", "5", "--seed", "7",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_failure_exit_code(capsys):
    assert main(["verify", "--suite", "identities", "--tol", "1e-30"]) == 1
    rows = json.loads(capsys.readouterr().out)
    failed = [r for r in rows if r["gap"] > r["tol"]]
    assert failed and "debug" in failed[0]


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nope"],
    ["bounds"],
    ["minimize", "--problem", "other"],
    [],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_bad_dimension_is_usage_error():
    assert main(["verify", "--suite", "appendix", "--d", "42"]) == 2


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("ZM_THREADS", "many")
    assert main(["bounds", "--family", "lossyau"]) == 2


def test_bounds_loss_yau(capsys):
    assert main(["bounds", "--family", "lossyau"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    by = {r["theorem"]: r for r in rows}
    assert_allclose(float(by["MAGNETIC"]["ratio"]), 2.0, rtol=1e-9)
    assert_allclose(float(by["IMPROVEDZ"]["z"]), 208507.46, rtol=1e-6)
    assert_allclose(float(by["IMPROVEDZ"]["z_bound"]), 25038.49, rtol=1e-6)


@pytest.mark.parametrize("family,d", [("lambda", 5), ("monopole", 3), ("hls", 5),
                                      ("dunnemin", 5), ("appendix", 7)])
def test_bounds_families(family, d, capsys):
    assert main(["bounds", "--family", family, "--d", str(d)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert all(float(r["ratio"]) >= 1 - 1e-9 for r in rows)


def test_minimize_json(tmp_path):
    out = tmp_path / "m.json"
    assert main(["minimize", "--problem", "hardysobolev", "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["pass"] and abs(res["gap"]) < 1e-3


def test_scan_small(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["scan", "--grid", "12", "--extent", "4", "--steps", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,lambda1,residual,iters" and len(lines) == 4
    assert "minimum lambda1" in capsys.readouterr().err
