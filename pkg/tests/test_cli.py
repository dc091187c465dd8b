import csv
import json

import pytest

from orbitforge.cli import main
from orbitforge.repro import twosided_exp
from orbitforge.serialize import dumps, weight_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_alias_and_exit_code(capsys):
    code, out, _ = run(capsys, "check", "--weight", "ex52_v1.json", "--gamma", "all", "--shifts", "half_line_pos")
    assert code == 0
    rep = json.loads(out)
    assert rep["reports"][0]["verdict"]["type"] == "holds_certified"
    assert rep["config"]["weight"] == "ex52_v1.json" and "version" in rep


def test_check_inconclusive_exit_code(capsys):
    code, _, _ = run(capsys, "check", "--weight", "ex52_v1", "--gamma", "grid:pow2:10", "--shifts", "half_line_pos")
    assert code == 2


def test_salas_and_schedule(capsys):
    code, out, _ = run(capsys, "check", "--weight", "ex52_v1", "--criterion", "salas_hyper,theorem_b",
                       "--shifts", "half_line_pos", "--schedule", "m_max=6,eps=pow2")
    assert code == 0
    kinds = [r["verdict"]["type"] for r in json.loads(out)["reports"]]
    assert kinds[0] == "fails_certified"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["check"],
    ["check", "--weight", "missing.json"],
    ["check", "--weight", "ex52_v1", "--gamma", "disc"],
    ["check", "--weight", "ex52_v1", "--schedule", "m_max=x"],
    ["check", "--weight", "ex52_v1", "--criterion", "nope"],
    ["mnorm", "--weight", "ex52_v1", "--s", "1.5"],
])
def test_usage_and_input_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_bad_json_field_is_named(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"space": "Z", "window": {"lo": 0, "hi": 0, "values": [1.0]},
                             "left_tail": {"kind": "cubic"}}))
    code, _, err = run(capsys, "check", "--weight", str(p))
    assert code == 1 and "left_tail.kind" in err


def test_weight_file_roundtrip(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text(dumps(weight_to_json(twosided_exp())))
    code, out, _ = run(capsys, "mnorm", "--weight", str(p), "--s", "3")
    assert code == 0 and json.loads(out)["result"]["value"] == 8.0


def test_synth_verify_roundtrip(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["synth", "--weight", "twosided_exp", "--gamma", "singleton:1", "--steps", "8", "--trunc", "8"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "verify", "--weight", "twosided_exp", "--candidate", str(a))
    assert code == 0 and json.loads(out)["result"]["verified"]


def test_verify_detects_tampering(tmp_path, capsys):
    a = tmp_path / "a.json"
    main(["synth", "--weight", "twosided_exp", "--gamma", "singleton:1", "--steps", "6", "--trunc", "6",
          "--out", str(a)])
    data = json.loads(a.read_text())
    data["result"]["components"][0]["entries"][0]["re"] += 0.5
    a.write_text(json.dumps(data))
    code, _, _ = run(capsys, "verify", "--weight", "twosided_exp", "--candidate", str(a))
    assert code == 1


def test_synth_inconclusive(capsys, tmp_path):
    p = tmp_path / "flat.json"
    p.write_text(json.dumps({"space": "Z", "window": {"lo": 0, "hi": 0, "values": [1.0]},
                             "left_tail": {"kind": "log2affine", "a": 0.0, "b": 0.0},
                             "right_tail": {"kind": "log2affine", "a": 0.0, "b": 0.0}}))
    code, out, _ = run(capsys, "synth", "--weight", str(p), "--gamma", "singleton:1", "--steps", "3",
                       "--horizon", "32")
    assert code == 2 and json.loads(out)["result"]["type"] == "inconclusive"


def test_repro_claim2_csv(tmp_path):
    out = tmp_path / "claim2.csv"
    assert main(["repro", "claim2", "--p", "2", "--n", "2..12", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 11
    assert all(float(r["integral_p"]) >= float(r["lower_bound"]) for r in rows)


def test_norm_and_real_mnorm(capsys):
    code, out, _ = run(capsys, "norm", "--weight", "r_peaks", "--vector", "claim2_vector", "--p", "1", "--n-max", "6")
    assert code == 0 and json.loads(out)["result"]["norm"] > 0
    code, out, _ = run(capsys, "mnorm", "--weight", "r_peaks", "--s", "0.0625")
    res = json.loads(out)["result"]
    assert code == 0 and 2 <= res["value"] <= 32 and res["certified"] is False
