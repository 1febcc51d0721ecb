import os
from pathlib import Path

import pytest

import ldes_viability as lv

highspy = pytest.importorskip("highspy")

DATA = Path(os.environ.get("LDES_TEST_DATA_DIR", Path(__file__).resolve().parents[1] / "data"))


def highs_objective(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.modelStatusToString(h.getModelStatus()) == "Optimal"
    return h.getInfo().objective_function_value


def test_toy_baseline_matches_highs(tmp_path):
    q = lv.export_mps(DATA / "toy", tmp_path / "b.mps")
    assert highs_objective(tmp_path / "b.mps") == pytest.approx(q, rel=1e-6)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_synthetic_lps_match_highs(tmp_path, seed):
    d = tmp_path / "syn"
    lv.write_synthetic_state(d, state="HX", horizon_h=24, seed=seed, solar_mw=1500.0, wind_mw=1500.0)
    q = lv.export_mps(d, tmp_path / "b.mps")
    assert highs_objective(tmp_path / "b.mps") == pytest.approx(q, rel=1e-6)

    x = 200.0
    lv.export_mps(d, tmp_path / "o.mps", x_power_mw=x)
    res = lv.analyze(d, grid=[x])
    avoided = res["curve"]["points"][0]["avoided_cost"]
    assert highs_objective(tmp_path / "o.mps") == pytest.approx(q - avoided, rel=1e-6)
