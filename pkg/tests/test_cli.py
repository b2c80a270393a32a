import csv
import io
import json
import math

import pytest

from iwave.cli import run
from iwave.params import dump_params
from iwave.regions import star_point
from iwave.sweep import Axis, SweepSpec, run_sweep, sweep_to_csv


@pytest.fixture
def files(tmp_path, base, hopf_params, resonance_params):
    out = {}
    for name, p in (("base", base), ("hopf", hopf_params), ("res", resonance_params)):
        f = tmp_path / f"{name}.json"
        f.write_text(dump_params(p))
        out[name] = str(f)
    return out


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(ln for ln in fh if not ln.startswith("#")))


def test_regions_map(files, tmp_path):
    out = tmp_path / "map.csv"
    assert run(["regions", "--params", files["base"], "--grid", "50x50", "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ["beta", "alpha", "label", "mode0_imag_count"] and len(rows) == 2501
    assert run(["regions", "map", "--params", files["base"], "--grid", "2x3", "--out", str(out)]) == 0
    assert len(_rows(out)) == 7


def test_coeffs_hopf(files, tmp_path):
    out = tmp_path / "c.json"
    assert run(["coeffs", "--scenario", "hopf", "--params", files["hopf"], "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert set(d) == {"c2_1", "d1_0", "tau1", "classification"} and d["classification"] == "bright"


def test_coeffs_doubly_periodic(files, tmp_path):
    out = tmp_path / "c.json"
    assert run(["coeffs", "--scenario", "doubly-periodic", "--params", files["res"], "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["d1_01"] == 2 * math.pi and d["d2_01"] == 0.0


def test_disprel_curves_scenario(files, tmp_path):
    out, br = tmp_path / "e.csv", tmp_path / "b.csv"
    assert run(["disprel", "--params", files["hopf"], "--out", str(out), "--branch", str(br)]) == 0
    assert _rows(out)[0] == ["k", "s", "mult"] and _rows(br)[0] == ["a", "l1sq", "l2sq"]
    assert run(["curves", "--params", files["base"], "--n", "5", "--out", str(out)]) == 0
    assert {r[0] for r in _rows(out)[1:]} == {"C1", "C2", "C3", "C4"}
    assert run(["scenario", "--params", files["hopf"], "--out", str(out)]) == 0
    assert json.loads(out.read_text())["scenario"] == "HamiltonianHopf-mode1"


def test_orbit_and_wavefield(files, tmp_path):
    out = tmp_path / "o.csv"
    assert run(["orbit", "--params", files["hopf"], "--mu", "1e-3", "--kind", "bright", "--n", "201",
                "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ["x", "ReA", "ImA", "ReB", "ImB", "absA"] and len(rows) == 202
    cf = tmp_path / "dark.json"
    cf.write_text(json.dumps({"c2_1": -1.0, "d1_0": -1.0, "s": 0.5}))
    assert run(["orbit", "--coeffs", str(cf), "--mu=-1e-3", "--kind", "dark", "--n", "101", "--out", str(out)]) == 0
    assert run(["orbit", "--coeffs", str(cf), "--mu", "1e-3", "--kind", "periodic", "--n", "11",
                "--out", str(out)]) == 0
    assert run(["wavefield", "--params", files["res"], "--grid", "5x4", "--out", str(out)]) == 0
    assert len(_rows(out)) == 6
    assert run(["wavefield", "--params", files["hopf"], "--kind", "bright", "--grid", "9x4", "--long",
                "--out", str(out)]) == 0


def test_exit_codes(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rho": 2.0, "h": 1, "alpha": 1, "beta": 0.1, "theta1": 0, "theta2": 0, "nu0": 1}))
    assert run(["scenario", "--params", str(bad)]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "rho" in err[0]
    assert run(["coeffs", "--params", files["base"]]) == 2
    cf = tmp_path / "c.json"
    cf.write_text(json.dumps({"c2_1": -1.0, "d1_0": 1.0, "s": 0.5}))
    # dark orbit requested with bright-type coefficients
    code = run(["orbit", "--coeffs", str(cf), "--mu", "1e-3", "--kind", "dark"])
    assert code == 2
    with pytest.raises(SystemExit) as e:
        run(["regions", "--params", files["base"], "--grid", "0x5"])
    assert e.value.code == 2


def test_numerical_failure_exit(files, monkeypatch):
    from iwave import regions
    from iwave.errors import Inconclusive

    def boom(*a, **k):
        raise Inconclusive("inconclusive: forced")

    monkeypatch.setattr(regions, "detect_scenario", boom)
    assert run(["scenario", "--params", files["base"]]) == 3


def test_sweep_single_cell_matches_point(files, tmp_path, hopf_params):
    out = tmp_path / "s.csv"
    t1 = hopf_params.theta1
    assert run(["sweep", "--params", files["hopf"], "--task", "classify", "--axis", f"theta1:{t1}:{t1}:1",
                "--out", str(out)]) == 0
    rows = _rows(out)
    from iwave.regions import classify

    lab = classify(hopf_params.beta, hopf_params.alpha, hopf_params.rho, hopf_params.h, t1)
    assert rows[1][1:3] == [lab.region, str(lab.mode0_imag_count)]


def test_sweep_spec_file_and_env_threads(files, tmp_path, monkeypatch):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"axes": [{"name": "beta", "min": 0.1, "max": 0.5, "count": 3}], "task": "scenario"}))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["sweep", "--params", files["base"], "--spec", str(spec), "--out", str(out1)]) == 0
    monkeypatch.setenv("IWAVE_THREADS", "3")
    assert run(["sweep", "--params", files["base"], "--spec", str(spec), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    monkeypatch.setenv("IWAVE_THREADS", "zero")
    assert run(["sweep", "--params", files["base"], "--spec", str(spec)]) == 2


def test_sweep_c4_crossing(base):
    bs, as_ = star_point(base.rho, base.h, base.theta1)
    spec = SweepSpec((Axis("alpha", 0.98 * as_, 1.02 * as_, 5),), "classify")
    rows = run_sweep(spec, base.with_(beta=0.5 * bs), threads=2)
    counts = [r[2] for r in rows]
    assert counts[0] == 1 and counts[-1] == 2 and rows[2][1] == "on-C4"


def test_sweep_errors_tagged(base):
    spec = SweepSpec((Axis("beta", -0.1, 0.2, 3),), "classify")
    rows = run_sweep(spec, base, threads=1)
    assert rows[0][-1].startswith("validation:")
    text = sweep_to_csv(spec, rows)
    assert text.splitlines()[0] == "beta,label,mode0_imag_count,error"


def test_sweep_spec_validation():
    from iwave.errors import ValidationError

    with pytest.raises(ValidationError):
        SweepSpec((Axis("gamma", 0, 1, 2),))
    with pytest.raises(ValidationError):
        SweepSpec(tuple(Axis(n, 0, 1, 2) for n in ("rho", "h", "alpha", "beta")))
    with pytest.raises(ValidationError):
        SweepSpec((Axis("rho", 0, 1, 0),))
    with pytest.raises(ValidationError):
        SweepSpec((Axis("s", 0, 1, 2),), "classify")
