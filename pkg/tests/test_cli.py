import json
import math

import numpy as np
import pytest

from metricurv import spaces as S
from metricurv.cli import emit_report, run


def _write_tree(tmp_path):
    t = S.make_tree("star", leaves=4, leg=1.0)
    path = tmp_path / "tree.json"
    S.save_space(t, str(path))
    return str(path)


def _write_l1_square(tmp_path):
    m = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
    path = tmp_path / "l1square.json"
    path.write_text(json.dumps({"kind": "finite", "matrix": m}))
    return str(path)


def _payload(capsysbinary):
    out = capsysbinary.readouterr().out
    return json.loads(out.decode())


def test_hyperbolicity_tree(tmp_path, capsysbinary):
    rc = run(["hyperbolicity", "--space", _write_tree(tmp_path)])
    assert rc == 0
    body = _payload(capsysbinary)
    assert body["payload"][0]["constant"] == 0.0


def test_four_point_l1_square(tmp_path, capsysbinary):
    rc = run([
        "four-point", "--space", _write_l1_square(tmp_path),
        "--kappa", "0", "--orderings", "all",
    ])
    assert rc == 0
    body = _payload(capsysbinary)
    assert body["payload"][0]["constant"] == pytest.approx(2.0, abs=1e-8)


def test_convert_contains_cat0_constant(capsysbinary):
    rc = run(["convert", "--from", "cat0"])
    assert rc == 0
    body = _payload(capsysbinary)
    assert body["payload"][0]["implied"]["rcat0"] == pytest.approx(2 + math.sqrt(3))


def test_exit_code_on_missing_space():
    assert run(["rcat", "--make", "nonsense:oops=1"]) == 2
    assert run(["rcat"]) == 2


def test_exit_code_on_bad_matrix(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "finite", "matrix": [[0, 3], [2, 0]]}))
    assert run(["hyperbolicity", "--space", str(path)]) == 2
    err = capsys.readouterr().err
    assert "asym" in err


def test_exit_code_on_unknown_flag():
    assert run(["four-point", "--nope"]) == 2


def test_build_roundtrip(tmp_path, capsysbinary):
    out_space = tmp_path / "grid.json"
    rc = run([
        "build", "--make", "grid:norm=l2,halfwidth=1,step=0.5",
        "--out-space", str(out_space),
    ])
    assert rc == 0
    reloaded = S.load_space(str(out_space))
    assert reloaded.n == 25


def test_reports_byte_identical_across_runs(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = [
        "rcat", "--make", "grid:norm=l1,halfwidth=2,step=1",
        "--samples", "10", "--pairs", "5", "--seed", "3",
    ]
    assert run(argv + ["--out", str(out1)]) == 0
    assert run(argv + ["--out", str(out2)]) == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_table_format_carries_witness(tmp_path, capsysbinary):
    rc = run([
        "rcat", "--make", "circle:n=8,circumference=8",
        "--samples", "8", "--pairs", "4", "--format", "table",
    ])
    assert rc == 0
    text = capsysbinary.readouterr().out.decode()
    assert "witness" in text and "triangle" in text


def test_emit_report_quantizes_floats():
    env = {"version": "x", "command": "c", "config": {}, "payload": [{"v": 1 / 3}]}
    data = emit_report(env, "json")
    assert b"0.333333333333" in data


def test_bolicity_and_cn_and_lemmas_commands(capsysbinary):
    assert run(["bolicity", "--make", "tree:shape=star,leaves=5", "--samples", "10"]) == 0
    capsysbinary.readouterr()
    assert run(["cn", "--make", "circle:n=8,circumference=8", "--samples", "10"]) == 0
    capsysbinary.readouterr()
    assert run(["lemmas", "--samples", "50"]) == 0
    body = _payload(capsysbinary)
    assert all(p.get("pass", True) for p in body["payload"])


def test_weak_rcat_command(capsysbinary):
    assert run(["weak-rcat", "--make", "grid:norm=l1,halfwidth=2,step=1", "--samples", "10"]) == 0
    body = _payload(capsysbinary)
    assert body["payload"][0]["constant"] >= 0.0
