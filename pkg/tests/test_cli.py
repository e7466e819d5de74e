import io
import json

import pytest

from riskmix.cli import main
from riskmix.coupling import comonotone_coupling, product_coupling
from riskmix.distribution import make_discrete

A_JSON = {"atoms": [{"x": -10.0, "p": 0.1}, {"x": 0.0, "p": 0.5}, {"x": 5.0, "p": 0.4}]}


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return p

    x = make_discrete([(0, 0.5), (2, 0.5)])
    y = make_discrete([(1, 0.5), (3, 0.5)])
    return {
        "A": write("A.json", A_JSON),
        "samples": write("s.csv", "value\n1\n1\n2\n4\n"),
        "d0": write("d0.json", {"atoms": [{"x": 0, "p": 1}]}),
        "dm10": write("dm10.json", {"atoms": [{"x": -10, "p": 1}]}),
        "nu": write("nu.json", {"points": [{"alpha": 0.2, "weight": 0.5}, {"alpha": 1.0, "weight": 0.5}]}),
        "nu02": write("nu02.json", {"points": [{"alpha": 0.2, "weight": 1.0}]}),
        "nu_bad": write("nu_bad.json", {"points": [{"alpha": 0.2, "weight": 0.5}, {"alpha": 1.0, "weight": 0.4}]}),
        "prod": write("prod.json", product_coupling([x, y]).to_json()),
        "como": write("como.json", comonotone_coupling([x, y]).to_json()),
        "broken": write("broken.json", "{not json"),
        "tmp": tmp_path,
    }


def test_es_tail(files):
    assert run("es", files["A"], "--alpha", 0.2, "--method", "tail") == (0, "0.2,5.0\n")


def test_es_samples(files):
    assert run("es", files["samples"], "--alpha", 1.0) == (0, "1.0,-2.0\n")


def test_es_level_out_of_range(files, caplog):
    code, out = run("es", files["A"], "--alpha", 1.5)
    assert code == 2 and out == ""
    assert "level out of [0,1]" in caplog.text


@pytest.mark.parametrize("method", ["integral", "minimization"])
def test_es_methods(files, method):
    code, out = run("es", files["A"], "--alpha", 0.2, "--alpha", 0.05, "--method", method)
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert [float(v) for _, v in rows] == pytest.approx([5.0, 10.0], abs=1e-12)


def test_es_all_prints_residuals(files):
    code, out = run("es", files["A"], "--alpha", 0.6, "--method", "all")
    alpha, tail, integral, minimum, residual = map(float, out.strip().split(","))
    assert code == 0 and alpha == 0.6
    assert tail == pytest.approx(5 / 3, abs=1e-12)
    assert residual <= 1e-12


def test_es_json(files):
    code, out = run("es", files["A"], "--alpha", 0, "--format", "json")
    assert json.loads(out) == {"alpha": 0.0, "es": 10.0}


def test_parse_errors(files):
    assert run("es", files["broken"], "--alpha", 0.5)[0] == 2
    assert run("es", files["tmp"] / "missing.json", "--alpha", 0.5)[0] == 2
    assert run("es", files["A"])[0] == 2
    bad = files["tmp"] / "bad.csv"
    bad.write_text("value\n1\nabc\n")
    assert run("es", bad, "--alpha", 0.5)[0] == 2
    assert run("nonsense")[0] == 2


def test_curve_breakpoints(files):
    code, out = run("curve", files["A"], "--grid", "breakpoints")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "alpha,es"
    rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    assert [a for a, _ in rows] == pytest.approx([0.0, 0.1, 0.6, 1.0], abs=1e-15)
    assert [v for _, v in rows] == pytest.approx([10.0, 10.0, 5 / 3, -1.0], abs=1e-12)


def test_curve_grid_forms(files):
    code, out = run("curve", files["d0"], "--grid", "n=3")
    assert out.splitlines() == ["alpha,es", "0.0,0.0", "0.5,0.0", "1.0,0.0"]
    assert run("curve", files["A"], "--grid", "") == (0, "alpha,es\n")
    code, out = run("curve", files["A"], "--grid", "0.6,0.1")
    assert out.splitlines()[1].startswith("0.1,")
    assert run("curve", files["A"], "--grid", "n=x")[0] == 2


def test_mix_reports(files):
    code, out = run("mix", files["d0"], files["dm10"], "--beta", "0.5,0.5", "--alpha", 0.1)
    assert code == 0
    lemma, gap = [json.loads(line) for line in out.splitlines()]
    assert lemma["check"] == "lemma"
    assert lemma["report"]["alphas"] == pytest.approx([0.0, 0.2], abs=1e-15)
    assert gap["check"] == "concavity"
    assert gap["report"]["gap"] == pytest.approx(5.0, abs=1e-12)


def test_mix_single_and_mismatch(files):
    code, out = run("mix", files["A"], "--beta", "1", "--alpha", 0.3)
    assert code == 0
    assert json.loads(out.splitlines()[-1])["report"]["gap"] == 0.0
    assert run("mix", files["A"], "--beta", "0.5,0.5", "--alpha", 0.3)[0] == 2
    assert run("mix", files["A"], "--beta", "0.5,x", "--alpha", 0.3)[0] == 2


def test_mix_csv(files):
    code, out = run("mix", files["d0"], files["dm10"], "--alpha", 0.1, "--alpha", 1, "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "check,alpha,lhs,rhs,gap"
    assert lines[2].startswith("concavity,0.1,10.0,5.0,5.0")
    assert len(lines) == 4  # level 1 has no lemma row


def test_joint_product(files):
    code, out = run("joint", files["prod"], "--beta", "0.5,0.5", "--alpha", 0.5)
    reports = {r["check"]: r["report"] for r in map(json.loads, out.splitlines())}
    assert code == 0
    assert reports["convexity"]["gap"] == pytest.approx(0.5, abs=1e-12)
    assert reports["diversification"]["gap"] == pytest.approx(0.5, abs=1e-12)


def test_joint_comonotone(files):
    code, out = run("joint", files["como"], "--beta", "0.5,0.5", "--alpha", 0.5)
    reports = {r["check"]: r["report"] for r in map(json.loads, out.splitlines())}
    assert reports["convexity"]["gap"] == pytest.approx(0.0, abs=1e-12)
    assert reports["convexity"]["equality_expected"] is True


def test_joint_unit_beta(files):
    code, out = run("joint", files["prod"], "--beta", "1,0", "--alpha", 0.5, "--alpha", 0.25)
    assert code == 0
    assert all(abs(json.loads(line)["report"]["gap"]) <= 1e-12 for line in out.splitlines())
    assert run("joint", files["prod"], "--beta", "1", "--alpha", 0.5)[0] == 2


def test_joint_ragged_rows(files):
    bad = files["tmp"] / "bad_joint.json"
    bad.write_text(json.dumps({"probs": [0.5, 0.5], "values": [[0, 1], [2]]}))
    assert run("joint", bad, "--alpha", 0.5)[0] == 2


def test_spectral(files):
    assert run("spectral", files["A"], "--nu", files["nu"]) == (0, "2.0\n")
    assert run("spectral", files["A"], "--nu", files["nu02"]) == (0, "5.0\n")
    assert run("spectral", files["A"], "--nu", files["nu_bad"])[0] == 2


def test_check_empty(files):
    out_path = files["tmp"] / "r.json"
    code, _ = run("check", "--instances", 0, "--no-exhaustive", "--out", out_path)
    report = json.loads(out_path.read_text())
    assert code == 0
    assert report["passed"] and report["sections"]["random"]["instances"] == 0


def test_check_deterministic(files):
    a, b = files["tmp"] / "a.json", files["tmp"] / "b.json"
    for p in (a, b):
        assert run("check", "--seed", 5, "--instances", 20, "--no-exhaustive", "--out", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_check_failure_exit_status(files, monkeypatch):
    import sys

    mod = sys.modules["riskmix.harness"]
    monkeypatch.setattr(mod, "es_integral", lambda d, a: 99.0)
    assert run("check", "--instances", 2, "--no-exhaustive", "--out", files["tmp"] / "f.json")[0] == 1


def test_es_level_zero_every_method(files):
    for method in ("tail", "integral", "minimization"):
        assert run("es", files["A"], "--alpha", 0, "--method", method) == (0, "0.0,10.0\n")
    assert run("es", files["A"], "--alpha", 0, "--method", "all") == (0, "0.0,10.0,10.0,10.0,0.0\n")
