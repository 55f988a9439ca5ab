import json
import os
import subprocess
import sys

import numpy as np
import pytest

from nhpme import cli
from nhpme import scenarios as sc
from nhpme.core import DomainError, Field, Grid1D
from nhpme.profiles import LogBarenblatt

SMALL_THM1 = {"scenario": "thm1_N2_zero", "grid": {"n_cells": 320}, "times": [1.0, 10.0, 100.0]}


def _write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def _run(tmp_path, cfg, *extra):
    return cli.main(["run", _write(tmp_path, cfg), "--out", str(tmp_path / "out"), *extra])


def test_exit_pass_and_outputs(tmp_path, capsys):
    assert _run(tmp_path, SMALL_THM1) == sc.EXIT_PASS
    out = capsys.readouterr().out
    assert "PASS scaled_sup_nonincreasing" in out
    d = tmp_path / "out" / "thm1_N2_zero"
    lines = (d / "report.csv").read_text().splitlines()
    assert lines[0] == "t,raw_error,scaled_error,metric"
    assert len(lines) == 4 and all(l.endswith(",scaled_sup") for l in lines[1:])
    t, e, s, _ = lines[2].split(",")
    assert float(s) == pytest.approx(float(e) * 10 ** (1 / 3), rel=1e-15)
    doc = json.loads((d / "summary.json").read_text())
    assert doc["schema_version"] == 1 and doc["exit_code"] == 0 and doc["passed"]
    assert set(doc) >= {"config", "constants", "rates", "checks", "diagnostics", "scenario"}
    assert doc["constants"]["C0"] > 0
    assert (d / "plot" / "plot.py").exists()
    assert (d / "plot" / "solution_t000.dat").exists()


def test_zero_datum_reports_zero_errors(tmp_path):
    cfg = dict(SMALL_THM1, datum={"kind": "zero"})
    assert _run(tmp_path, cfg, "--no-plots") == sc.EXIT_PASS
    d = tmp_path / "out" / "thm1_N2_zero"
    rows = (d / "report.csv").read_text().splitlines()[1:]
    assert all(float(r.split(",")[1]) == 0.0 for r in rows)
    assert not (d / "plot").exists()


def test_exit_threshold(tmp_path):
    cfg = dict(SMALL_THM1, thresholds={"decay_ratio": 1e-9})
    assert _run(tmp_path, cfg) == sc.EXIT_THRESHOLD
    doc = json.loads((tmp_path / "out" / "thm1_N2_zero" / "summary.json").read_text())
    assert doc["exit_code"] == 1 and not doc["checks"]["scaled_sup_decay_ratio"]


@pytest.mark.parametrize("cfg", [
    {"scenario": "nope"},
    {"scenario": "thm2_N2_plateau", "grid": {"n_cells": 200}, "times": [1.0],
     "datum": {"kind": "bump", "amplitude": 1.0, "radius": 1.0, "hole": 0.5}},
    {"scenario": "thm1_N2_zero", "datum": {"kind": "plateau", "K": 1.0, "decay": 1.0}},
    {"scenario": "thm1_N2_zero", "dimension": 1},
    {"scenario": "thm1_N2_zero", "m": 1.0},
    {"scenario": "thm1_N2_zero", "datum": {"kind": "bump", "amplitude": -1.0, "radius": 1.0}},
])
def test_exit_hypothesis(tmp_path, cfg, capsys):
    assert _run(tmp_path, cfg) == sc.EXIT_HYPOTHESIS
    assert "hypothesis violation" in capsys.readouterr().err


def test_exit_hypothesis_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["run", str(p)]) == sc.EXIT_HYPOTHESIS
    p.write_text("[1, 2]")
    assert cli.main(["run", str(p)]) == sc.EXIT_HYPOTHESIS


def test_exit_abort(tmp_path, capsys):
    cfg = dict(SMALL_THM1, solver={"max_steps": 3})
    assert _run(tmp_path, cfg) == sc.EXIT_ABORT
    assert "max_steps" in capsys.readouterr().err


def test_exit_domain_too_small(tmp_path):
    cfg = dict(SMALL_THM1, grid={"s_min": -3.0, "s_max": 3.0, "n_cells": 60})
    assert _run(tmp_path, cfg) == sc.EXIT_ABORT


def test_exit_io(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = _write(tmp_path, SMALL_THM1)
    assert cli.main(["run", cfg, "--out", str(blocker)]) == sc.EXIT_IO
    assert cli.main(["run", str(tmp_path / "missing.json")]) == sc.EXIT_IO


def test_deterministic(tmp_path):
    cfg = _write(tmp_path, SMALL_THM1)
    texts = []
    for k in range(2):
        out = tmp_path / f"o{k}"
        assert cli.main(["run", cfg, "--out", str(out)]) == 0
        d = out / "thm1_N2_zero"
        texts.append(((d / "report.csv").read_bytes(), (d / "summary.json").read_bytes(),
                      (d / "plot" / "solution_t002.dat").read_bytes()))
    assert texts[0] == texts[1]


def test_output_dir_precedence(tmp_path, monkeypatch):
    cfg = sc.resolve_config(dict(SMALL_THM1, output_dir=str(tmp_path / "cfg")))
    monkeypatch.delenv(sc.OUTPUT_ENV, raising=False)
    assert sc.output_dir(cfg) == tmp_path / "cfg" / "thm1_N2_zero"
    monkeypatch.setenv(sc.OUTPUT_ENV, str(tmp_path / "env"))
    assert sc.output_dir(cfg) == tmp_path / "env" / "thm1_N2_zero"
    assert sc.output_dir(cfg, str(tmp_path / "flag")) == tmp_path / "flag" / "thm1_N2_zero"


def test_env_output_dir_via_cli(tmp_path, monkeypatch):
    monkeypatch.setenv(sc.OUTPUT_ENV, str(tmp_path / "env"))
    assert cli.main(["run", _write(tmp_path, SMALL_THM1), "--no-plots"]) == 0
    assert (tmp_path / "env" / "thm1_N2_zero" / "summary.json").exists()


def test_list_scenarios(capsys):
    assert cli.main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for name in sc.SCENARIOS:
        assert name in out


@pytest.mark.parametrize("argv,key,value", [
    (["C0", "mass=1", "m=2"], "C0", (3 / (8 * 3 ** 0.5)) ** (2 / 3)),
    (["k", "M0=1", "m=2"], "k", 2.0),
])
def test_calibrate(argv, key, value, capsys):
    assert cli.main(["calibrate", *argv]) == 0
    assert json.loads(capsys.readouterr().out)[key] == pytest.approx(value, rel=1e-10)


def test_calibrate_xi_and_s0(capsys):
    assert cli.main(["calibrate", "xi_star", "m=2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["xi_star"] > 0 and doc["f_left"] == pytest.approx(1.0, abs=1e-6)
    assert cli.main(["calibrate", "s0", "datum=plateau", "K=1", "decay=1", "m=2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["x0"] == pytest.approx(np.exp(doc["s0"])) and doc["c"] == 1.0
    assert cli.main(["calibrate", "C0", "mass"]) == sc.EXIT_HYPOTHESIS
    assert cli.main(["calibrate", "C0", "m=2"]) == sc.EXIT_HYPOTHESIS


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nhpme.cli", "list-scenarios"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "thm1_N2_zero" in r.stdout


# --- plot data ---------------------------------------------------------------

def test_emit_plot_data_roundtrip(tmp_path):
    g = Grid1D(-3, 3, 50)
    prof = LogBarenblatt(0.4, 2.0)
    fields = [Field(g, t, prof.log_value(g.centers, t)) for t in (1.0, 2.0)]
    written = sc.emit_plot_data(fields, prof, tmp_path, prefix="x_")
    assert {p.name for p in written} == {"x_solution_t000.dat", "x_solution_t001.dat",
                                         "x_profile_t000.dat", "x_profile_t001.dat", "x_plot.py"}
    text = (tmp_path / "x_solution_t001.dat").read_text()
    assert text.splitlines()[0] == "# t = 2"
    data = np.loadtxt(tmp_path / "x_solution_t001.dat")
    np.testing.assert_array_equal(data[:, 0], np.exp(g.centers))
    np.testing.assert_array_equal(data[:, 1], fields[1].values)
    compile((tmp_path / "x_plot.py").read_text(), "plot.py", "exec")


def test_emit_plot_data_empty(tmp_path):
    with pytest.raises(DomainError):
        sc.emit_plot_data([], None, tmp_path)


def test_summary_non_finite_values():
    res = sc.ScenarioResult("thm1_N2_zero", {"a": float("inf")}, constants={"x": float("nan")})
    doc = json.loads(sc.summary_json(res))
    assert doc["config"]["a"] == "inf" and doc["constants"]["x"] == "nan"


# --- non-radial stitching ----------------------------------------------------

NONRAD = {"scenario": "nonradial_N1", "grid": {"s_min": -30.0, "s_max": 40.0, "n_cells": 1400}}


def _two_sided(right, left):
    return dict(NONRAD, datum={"kind": "two_sided", "right": right, "left": left})


def test_stitch_even_datum_halves_agree():
    p = {"kind": "plateau", "K": 1.0, "decay": 1.0, "scale": 2.0}
    res = sc.run_scenario(_two_sided(p, p))
    (tp, _), (tm, _) = res.diagnostics["halves"]["_plus"], res.diagnostics["halves"]["_minus"]
    for a, b in zip(tp, tm):
        np.testing.assert_array_equal(a.values, b.values)
    assert res.constants["x0_plus"] == res.constants["x0_minus"]


def test_stitch_asymmetric_default():
    res = sc.run_scenario({"scenario": "nonradial_N1"})
    assert res.passed
    assert res.constants["x0_plus"] / res.constants["x0_minus"] == pytest.approx(3.0, rel=0.05)


def test_stitch_rejects_discontinuity():
    with pytest.raises(sc.HypothesisViolation, match="discontinuous"):
        sc.run_scenario(_two_sided({"kind": "plateau", "K": 1.0, "decay": 1.0},
                                   {"kind": "plateau", "K": 2.0, "decay": 1.0}))


def test_stitch_zero_origin_uses_peaks():
    cfg = dict(_two_sided({"kind": "bump", "amplitude": 1.0, "radius": 1.0, "hole": 0.5},
                          {"kind": "bump", "amplitude": 2.0, "radius": 1.0, "hole": 0.5}),
               grid={"s_min": -20.0, "s_max": 60.0, "n_cells": 800}, times=[10.0, 100.0])
    res = sc.run_scenario(cfg)
    assert res.constants["profile"] == "peak"
    assert res.constants["M0_minus"] == pytest.approx(2 * res.constants["M0_plus"], rel=1e-12)


def test_figure1_small(tmp_path):
    over = {"grid": {"n_cells": 1500}, "times": [100.0, 400.0, 1000.0]}
    p = _write(tmp_path, over)
    code = cli.main(["figure1", p, "--out", str(tmp_path)])
    assert code in (sc.EXIT_PASS, sc.EXIT_THRESHOLD)
    d = tmp_path / "figure1"
    doc = json.loads((d / "summary.json").read_text())
    assert doc["constants"]["K"] == pytest.approx(0.05)
    assert (d / "plot" / "profile_t002.dat").exists()
