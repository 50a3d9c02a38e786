import math
import os
from pathlib import Path

import pytest

import topdc

ROOT = Path(os.environ.get("TOPDC_SOURCE_DIR", Path(__file__).resolve().parents[2]))
MANIFEST = ROOT / "data" / "sample" / "device.ini"


def test_quantities():
    assert topdc.parse_quantity("1.72 um", "length") == pytest.approx(1.72e-6)
    assert topdc.parse_quantity("2.9e4 GHz", "frequency") == pytest.approx(2.9e13)
    with pytest.raises(topdc.ParseError):
        topdc.parse_quantity("1 mW", "length")


def test_analytic_and_ring_bandwidths():
    tau = topdc.tau_sp_wg_analytic(3.2e-26, 0.01)
    assert tau * tau == pytest.approx(math.sqrt(3) / (9 * 3.2e-26 * 0.01))
    assert topdc.tau_st_wg_analytic(5.5e-26, 0.01) == pytest.approx(4.5e13, rel=0.01)
    ring = topdc.tau_ring("stimulated", 6e7)
    assert ring["tau_inv"] == pytest.approx(3e7)
    with pytest.raises(topdc.PhysicsError):
        topdc.tau_sp_wg_analytic(0.0, 0.01)


def test_dispersion_model_and_numeric_bandwidth():
    model = topdc.DispersionModel.from_csv(str(ROOT / "data" / "sample" / "band_F.csv"))
    wf = topdc.omega_from_wavelength(1.72e-6)
    assert model.group_quantities(wf)["beta2"] == pytest.approx(3.2e-26, rel=0.01)
    st = topdc.tau_st_wg_numeric(model, wf, 0.0, 0.01, wf * 0.8, wf * 1.2)
    mc = topdc.mc_tau_st_wg(model, wf, 0.0, 0.01, wf * 0.8, wf * 1.2, samples=100000, seed=3)
    assert mc["tau_inv"] == pytest.approx(st["tau_inv"], rel=0.05)


def test_phase_matching():
    r = topdc.find_phase_matched(str(MANIFEST), "sp_degenerate", 1.5e-6, 1.9e-6, pump_power=0.1)
    assert r["root"]
    assert r["wavelength"]["F"] == pytest.approx(1.72e-6, rel=1e-3)
    assert abs(r["mismatch"]) <= 1e-3


def test_rates_and_scaling():
    rows = {r["scenario"]: r for r in topdc.rates(str(ROOT / "configs" / "table1.cfg"))}
    assert rows["ring_sp"]["rate"] == pytest.approx(5.9e-3, rel=0.15)
    assert rows["wg_sp"]["rate"] == pytest.approx(12, rel=0.15)
    exps = topdc.scaling_exponents(str(ROOT / "configs" / "table2.cfg"))
    assert exps["wg_st_length"] == pytest.approx(1.5, abs=0.02)
    assert exps["ring_sp_circumference"] == pytest.approx(-2.0, abs=0.02)


def test_overlap():
    mode = str(ROOT / "data" / "sample" / "mode_F.txt")
    area, _phase = topdc.effective_area([mode] * 4, "two_dagger")
    assert 1e-13 < area < 1e-11


def test_cli(tmp_path):
    status, out, err = topdc.run_cli("phasematch", str(ROOT / "configs" / "analysis.cfg"), str(tmp_path), json=True)
    assert status == 0, err
    assert (tmp_path / "phasematch.json").exists()
    assert "fundamental" in out
