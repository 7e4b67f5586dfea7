import json
import subprocess
import sys

import numpy as np
import pytest

from koszulspec import formats
from koszulspec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pair(tmp_path, capsys):
    path = tmp_path / "pair.json"
    assert run(capsys, "gen", "diagonal", "--values", "1,3;2,4", "-o", str(path))[0] == 0
    return path


def test_gen_diagonal(pair, capsys, tmp_path):
    T = formats.tuple_from_json(formats.read_json(pair))
    np.testing.assert_array_equal(T[0], np.diag([1, 2]))
    code, out, _ = run(capsys, "gen", "diagonal", "--values", "1,3;2,4", "-o", str(tmp_path / "b.json"))
    summary = json.loads(out)
    assert code == 0 and summary == {"n": 2, "dim": 2, "commuting_defect": 0.0, "double_commuting_defect": 0.0}


def test_gen_refuses_overwrite(pair, capsys):
    code, _, err = run(capsys, "gen", "diagonal", "--values", "5", "-o", str(pair))
    assert code == 2 and "--force" in err
    assert run(capsys, "gen", "diagonal", "--values", "5", "-o", str(pair), "--force")[0] == 0


def test_gen_tensor_and_shift(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(formats.matrix_to_json(np.array([[0, 1], [0, 0]]))))
    b.write_text(json.dumps(formats.matrix_to_json(np.array([[1, 0], [2j, 3]]))))
    code, out, _ = run(capsys, "gen", "tensor", str(a), str(b), "-o", str(tmp_path / "t.json"))
    assert code == 0 and json.loads(out)["double_commuting_defect"] == 0.0 and json.loads(out)["dim"] == 4
    code, out, _ = run(capsys, "gen", "shift", "1,2", "-o", str(tmp_path / "s.json"))
    assert code == 0 and json.loads(out)["dim"] == 3


def test_gen_conjugated_is_reproducible(tmp_path, capsys):
    for name in ("x.json", "y.json"):
        run(capsys, "gen", "conjugated", "--values", "1,1j;2,-1", "--seed", "4", "-o", str(tmp_path / name))
    assert (tmp_path / "x.json").read_text() == (tmp_path / "y.json").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "diagonal", "--values", "1,x"],
        ["gen", "diagonal", "--values", "1,2;3"],
        ["gen", "diagonal"],
        ["gen", "shift", "1,-2"],
        ["gen", "tensor", "only-one.json"],
    ],
)
def test_gen_invalid_spec_exit_2(argv, tmp_path, capsys):
    assert run(capsys, *argv, "-o", str(tmp_path / "o.json"))[0] == 2


def test_classify(tmp_path, capsys):
    run(capsys, "gen", "shift", "1,2", "-o", str(tmp_path / "s.json"))
    code, out, _ = run(capsys, "classify", str(tmp_path / "s.json"), "--p", "0.25,0.5,1")
    rep = json.loads(out)
    assert code == 0
    assert [v["holds"] for v in rep["per_operator"][0]["p_hyponormal_for"]] == [False] * 3
    Q = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))[0]
    (tmp_path / "u.json").write_text(json.dumps(formats.matrix_to_json(Q)))
    rep = json.loads(run(capsys, "classify", str(tmp_path / "u.json"))[1])
    assert rep["per_operator"][0]["is_log_hyponormal"]["holds"] is True


def test_classify_missing_file(capsys):
    assert run(capsys, "classify", "/nonexistent/t.json")[0] == 2


def test_classify_noncommuting_is_data(tmp_path, capsys):
    J = np.array([[0, 1], [0, 0]])
    obj = {"n": 2, "dim": 2, "matrices": [formats.matrix_to_json(J), formats.matrix_to_json(J.T)]}
    (tmp_path / "j.json").write_text(json.dumps(obj))
    code, out, _ = run(capsys, "classify", str(tmp_path / "j.json"))
    assert code == 0 and json.loads(out)["commuting_defect"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "koszul-check", str(tmp_path / "j.json"))
    assert code == 0 and json.loads(out)["chain_defect"] == pytest.approx(1.0)
    assert run(capsys, "scan", str(tmp_path / "j.json"), "--radius", "1", "--res", "5")[0] == 4


def test_koszul_check(pair, capsys):
    code, out, _ = run(capsys, "koszul-check", str(pair))
    rep = json.loads(out)
    assert code == 0 and rep["chain_defect"] == 0.0
    assert [b["shape"] for b in rep["boundaries"]] == [[2, 4], [4, 2]]
    assert rep["split_defects"] == [{"k": 1, "defect": 0.0}]


def test_scan_json_and_csv(pair, tmp_path, capsys):
    out = tmp_path / "cloud.json"
    code, _, _ = run(capsys, "scan", str(pair), "--center", "1.5,3.5", "--radius", "1", "--res", "5",
                     "--local-min", "-o", str(out))
    cloud = formats.cloud_from_json(formats.read_json(out))
    assert code == 0 and len(cloud) == 2 and cloud.threshold > 0
    code, text, _ = run(capsys, "scan", str(pair), "--center", "1.5,3.5", "--radius", "1", "--res", "5", "--csv")
    assert code == 0 and text.startswith("z1_re,z1_im,z2_re,z2_im,residual")


def test_scan_single_operator(tmp_path, capsys):
    run(capsys, "gen", "diagonal", "--values", "1;2", "-o", str(tmp_path / "d.json"))
    code, out, _ = run(capsys, "scan", str(tmp_path / "d.json"), "--radius", "3", "--res", "61", "--threshold", "0.05")
    Z = formats.cloud_from_json(json.loads(out)).coords()[:, 0]
    assert code == 0 and len(Z) == 2
    assert all(min(abs(z - 1), abs(z - 2)) <= 0.1 for z in Z)


def test_scan_threshold_zero_gives_empty_cloud(tmp_path, capsys):
    run(capsys, "gen", "conjugated", "--values", "0.37+0.11j;-1.23", "-o", str(tmp_path / "c.json"))
    code, out, _ = run(capsys, "scan", str(tmp_path / "c.json"), "--radius", "2", "--res", "21", "--threshold", "0")
    assert code == 0 and json.loads(out)["points"] == []


def test_scan_zero_operator(tmp_path, capsys):
    run(capsys, "gen", "diagonal", "--values", "0", "-o", str(tmp_path / "z.json"))
    code, out, _ = run(capsys, "scan", str(tmp_path / "z.json"), "--center", "0.01", "--radius", "1", "--res", "11")
    Z = formats.cloud_from_json(json.loads(out)).coords()[:, 0]
    nearest = 0.01 + 0.2 * np.round(-0.01 / 0.2)
    assert code == 0 and np.min(np.abs(Z - nearest)) <= 1e-12


def test_scan_errors(pair, tmp_path, capsys):
    assert run(capsys, "scan", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "scan", str(pair), "--res", "1")[0] == 2
    assert run(capsys, "scan", str(pair), "--radius", "-1")[0] == 2
    assert run(capsys, "scan", str(pair), "--threshold", "-1")[0] == 2
    run(capsys, "gen", "diagonal", "--values", "1,2,3", "-o", str(tmp_path / "t3.json"))
    assert run(capsys, "scan", str(tmp_path / "t3.json"), "--radius", "1", "--res", "3")[0] == 3


def test_size_guard_exit_3(pair, capsys, monkeypatch):
    monkeypatch.setenv("KOSZULSPEC_MAX_DIM", "2")
    assert run(capsys, "koszul-check", str(pair))[0] == 3


def test_point(pair, capsys):
    code, out, _ = run(capsys, "point", str(pair), "--z", "1,3", "--witness")
    rep = json.loads(out)
    assert code == 0 and rep["member"] and rep["witness"]["residuals"] == [0.0, 0.0]
    code, out, _ = run(capsys, "point", str(pair), "--z", "1,4")
    assert code == 0 and not json.loads(out)["member"]
    assert run(capsys, "point", str(pair), "--z", "1,4", "--witness")[0] == 4
    assert run(capsys, "point", str(pair), "--z", "1")[0] == 2


def test_map_verify(pair, capsys, tmp_path):
    code, out, _ = run(capsys, "map-verify", str(pair), "--f", "power:0.5")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass" and rep["mode"] == "equality"
    assert {"thresholds", "f", "tolerance"} <= set(rep)
    code, out, _ = run(capsys, "map-verify", str(pair), "--f", "identity")
    rep = json.loads(out)
    assert code == 0 and (rep["forward"], rep["backward"]) == (0.0, 0.0)
    code, _, err = run(capsys, "map-verify", str(pair), "--f", "log")
    assert code == 4 and "log|T_j| > 0" in err
    code, out, _ = run(capsys, "map-verify", str(pair), "--f", "identity", "--tol", "1e-300",
                       "--center", "0.05", "--radius", "4", "--res", "11")
    assert code == 5 and json.loads(out)["verdict"] == "fail"
    assert run(capsys, "map-verify", str(pair), "--f", "power:x")[0] == 2
    assert run(capsys, "map-verify", str(pair), "--f", "identity", "--tol", "0")[0] == 2
    report = tmp_path / "r.json"
    assert run(capsys, "map-verify", str(pair), "--f", "exp", "--mode", "inclusion", "-o", str(report))[0] == 0
    assert json.loads(report.read_text())["mode"] == "inclusion"


def test_pipeline_is_reproducible(tmp_path, capsys):
    outputs = []
    for tag in "ab":
        t = tmp_path / f"t{tag}.json"
        run(capsys, "gen", "conjugated", "--values", "0.4,1j;-0.8,0.6", "--seed", "3", "-o", str(t))
        run(capsys, "scan", str(t), "--radius", "1.2", "--res", "13", "-o", str(tmp_path / f"s{tag}.json"))
        run(capsys, "map-verify", str(t), "--f", "power:0.5", "--radius", "1.2", "--res", "13",
            "-o", str(tmp_path / f"m{tag}.json"))
        outputs.append([(tmp_path / f"{k}{tag}.json").read_bytes() for k in "tsm"])
    assert outputs[0] == outputs[1]


def test_module_entry_point(pair):
    proc = subprocess.run([sys.executable, "-m", "koszulspec", "koszul-check", str(pair)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 2
