import csv
import io
import math

import numpy as np
import pytest

import dlraman


def test_steady_state_is_a_density_matrix():
    rho = dlraman.steady_state(dlraman.fig2_config(delta4=5.0, phi0=math.pi / 4))
    assert rho.shape == (4, 4)
    assert abs(np.trace(rho) - 1) < 1e-10
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-9


def test_dark_state_trapping():
    cfg = dlraman.beams(omega13=6.0, omega23=3.0, omega14=0.0, omega24=0.0, delta3=2.0, delta4=0.0)
    rho = dlraman.steady_state(cfg)
    dark = np.array([3.0, -6.0, 0, 0]) / math.hypot(3.0, 6.0)
    assert (dark @ rho @ dark).real > 1 - 1e-8


def test_engines_agree_off_resonance():
    cfg = dlraman.fig2_config(delta4=30.0, phi0=0.0)
    ex = dlraman.probe_coherences(cfg, dlraman.Engine.Exact)
    ef = dlraman.probe_coherences(cfg, dlraman.Engine.Effective)
    assert abs(ex[0] - ef[0]) < 0.02 * abs(ex[0])


def test_analytic_two_level_state():
    args = (10.0, 10.0, 1.0, 20.0, math.pi / 2)
    rho = dlraman.two_level_steady_state(dlraman.final_two_level(dlraman.equal_beams(*args)))
    bb, db = dlraman.analytic_equal_beams_state(*args)
    assert rho[1, 1].real == pytest.approx(bb, abs=1e-12)
    assert rho[0, 1] == pytest.approx(db, abs=1e-12)


def test_equal_gain_points_and_cavity():
    cfg = dlraman.fig4_config(delta4=20.0, phi0=0.0)
    med = dlraman.calibrate_medium(cfg, 20.0, dlraman.MediumParams(), 1.8)
    pts = dlraman.equal_gain_points(cfg, 20.0, med, samples=360)
    assert len(pts) == 3
    phi, a14, a24 = max(pts, key=lambda p: p[1] + p[2])
    assert phi == pytest.approx(3 * math.pi / 2, abs=0.1)
    assert a14 > 0 and a24 > 0
    length = dlraman.cavity_length(2 * math.pi * 6.8347e9, 1)
    assert length == pytest.approx(0.043863, rel=1e-4)
    alpha, per_pass = dlraman.threshold_gain(2 * math.pi * 6.8347e9, 1, 0.16)
    assert alpha == pytest.approx(0.16 / (2 * length))
    assert per_pass == pytest.approx(0.08)


def test_run_sweep_csv():
    text = dlraman.run_sweep(dlraman.preset_text("fig2"), ["delta4:-1:1:3"], "effective", ["rho14_im"])
    lines = text.splitlines()
    assert lines[0].startswith("# config-hash=")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert [r["delta4"] for r in rows] == ["-1", "0", "1"]
    assert rows[1]["rho14_im"] == "nan"
    assert rows[1]["error"].startswith("ZeroProbeDetuning")
    assert rows[0]["error"] == ""


def test_errors_carry_a_code():
    with pytest.raises(dlraman.DlramanError) as info:
        dlraman.final_two_level(dlraman.fig4_config(delta4=0.0, phi0=1.0))
    assert info.value.args[0] == "ZeroProbeDetuning"
    with pytest.raises(dlraman.DlramanError) as info:
        dlraman.run_sweep("nonsense = 1\n", ["delta4:0:1:2"])
    assert info.value.args[0] == "ConfigParse"
    with pytest.raises(dlraman.DlramanError):
        dlraman.beams(omega13=-1.0, omega23=1.0, omega14=0.0, omega24=0.0, delta3=0.0, delta4=0.0)


def test_adiabaticity_report():
    good = dlraman.verify_adiabaticity(dlraman.fig2_config(delta4=20.0, phi0=math.pi / 4), 20.0)
    bad = dlraman.verify_adiabaticity(dlraman.fig2_config(delta4=0.5, phi0=math.pi / 4), 20.0)
    assert not good["probe"]["flagged"]
    assert bad["probe"]["flagged"]
