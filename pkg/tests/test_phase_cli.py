import json
import subprocess
import sys

import pytest

from gibbstree.phase_cli import SweepSpec, InputError, main, params_from_spec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_case1(capsys):
    code, out, _ = run(capsys, "classify", "--q", "3", "--k", "2", "--alpha", "0", "--thetaP", "4")
    assert code == 0
    assert json.loads(out)["count"] == 3


def test_classify_case2(capsys):
    code, out, _ = run(capsys, "classify", "--q", "3", "--k", "2", "--a", "5", "--equal-couplings")
    doc = json.loads(out)
    assert code == 0 and doc["case"] == "case2" and doc["count"] == 8
    assert doc["case1"]["count"] == 3


def test_invalid_q(capsys):
    code, _, err = run(capsys, "classify", "--q", "2")
    assert code == 2 and "q must be" in err


def test_unknown_flag(capsys):
    code, _, _ = run(capsys, "classify", "--bogus")
    assert code == 2


def test_sweep_case1_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "thetaP", "--lo", "1", "--hi", "6", "--steps", "51",
                       "--alpha", "0")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "param,count,validated_count"
    assert "\r" not in out
    rows = [l.split(",") for l in lines[1:] if l]
    counts = [(float(x), int(c)) for x, c, _ in rows]
    assert all(c == 1 for x, c in counts if x < 3.82)
    assert all(c == 3 for x, c in counts if x > 3.83)


def test_sweep_case2_pattern(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "a", "--lo", "1.1", "--hi", "6", "--steps", "100",
                       "--equal-couplings", "--format", "json")
    rows = json.loads(out)
    seq = []
    for r in rows:
        if not seq or seq[-1] != r["count"]:
            seq.append(r["count"])
    assert code == 0 and seq == [2, 4, 6, 8]


def test_sweep_agrees_with_classify(capsys):
    _, out, _ = run(capsys, "sweep", "--param", "a", "--lo", "2", "--hi", "5", "--steps", "4",
                    "--equal-couplings", "--format", "json")
    for r in json.loads(out):
        _, c, _ = run(capsys, "classify", "--a", repr(r["param"]), "--equal-couplings")
        assert json.loads(c)["count"] == r["count"]


def test_sweep_parallel_is_deterministic(capsys, monkeypatch):
    argv = ["sweep", "--param", "thetaP", "--lo", "1", "--hi", "9", "--steps", "17", "--alpha", "0.3"]
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("GIBBSTREE_THREADS", "3")
    _, par, _ = run(capsys, *argv)
    assert serial == par


def test_zero_width_sweep(capsys):
    code, _, _ = run(capsys, "sweep", "--lo", "2", "--hi", "2")
    assert code == 2
    with pytest.raises(InputError):
        SweepSpec("thetaP", 1, 2, 1)


def test_thresholds_quartic(capsys):
    code, out, _ = run(capsys, "thresholds", "--classifier", "quartic", "--tol", "1e-3")
    thr = json.loads(out)["thresholds"]
    assert code == 0 and len(thr) == 2
    assert thr[0] == pytest.approx(2.010, abs=1e-2) and thr[1] == pytest.approx(4.921, abs=1e-2)


def test_thresholds_case1_half(capsys):
    code, out, _ = run(capsys, "thresholds", "--classifier", "case1", "--q", "3", "--alpha", "0.5",
                       "--lo", "1", "--hi", "20")
    assert json.loads(out)["thresholds"] == pytest.approx([(1 + 2 * 2**0.5) ** 2], abs=1e-4)


def test_thresholds_case2(capsys):
    _, out, _ = run(capsys, "thresholds", "--classifier", "case2")
    assert len(json.loads(out)["thresholds"]) >= 5


def test_verify_and_perturb(capsys, tmp_path):
    base = ["verify", "--q", "3", "--k", "2", "--alpha", "0", "--thetaP", "5", "--depth", "2"]
    code, out, _ = run(capsys, *base)
    rep = json.loads(out)
    assert code == 0 and len(rep["results"]) == 3
    assert rep["max_deviation"] <= 1e-10
    dest = tmp_path / "v.json"
    code, _, _ = run(capsys, *base, "--perturb", "1.01", "--out", str(dest))
    rep = json.loads(dest.read_text())
    assert code == 1 and rep["max_deviation"] > 1e-4


def test_verify_size_guard(capsys):
    code, _, err = run(capsys, "verify", "--k", "3", "--depth", "4", "--method", "naive", "--thetaP", "5")
    assert code == 3 and "exceed" in err


def test_sample_poly(capsys):
    code, out, _ = run(capsys, "sample-poly", "--a", "1.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["max"] < 0 and doc["sign_changes"] == 0
    _, out, _ = run(capsys, "sample-poly", "--a", "3", "--hi", "20", "--format", "json")
    assert json.loads(out)["sign_changes"] == 2
    _, out, _ = run(capsys, "sample-poly", "--a", "5", "--hi", "75", "--format", "json")
    assert json.loads(out)["sign_changes"] == 4
    _, out, _ = run(capsys, "sample-poly", "--a", "2", "--steps", "3")
    assert out.splitlines()[0] == "x,P" and len(out.splitlines()) == 4


def test_params_file(capsys, tmp_path):
    p = params_from_spec({"q": 3, "k": 2, "alpha": 0.0, "thetaP": 5.0})
    f = tmp_path / "p.json"
    f.write_text(p.to_json())
    code, out, _ = run(capsys, "classify", "--params", str(f))
    assert code == 0 and json.loads(out)["count"] == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gibbstree", "classify", "--thetaP", "2", "--alpha", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["count"] == 1
