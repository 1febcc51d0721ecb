import json
import os
from pathlib import Path

import pytest

import ldes_viability as lv

DATA = Path(os.environ.get("LDES_TEST_DATA_DIR", Path(__file__).resolve().parents[1] / "data"))
TOY = DATA / "toy"


def test_version():
    assert lv.__version__


def test_validate_toy():
    assert lv.validate(TOY) == ["TOY"]


def test_validate_missing_dir_raises_io_error(tmp_path):
    with pytest.raises(lv.IoError):
        lv.validate(tmp_path / "nope")


def test_errors_share_a_base():
    assert issubclass(lv.ValidationError, lv.LdesError)
    assert issubclass(lv.LdesError, RuntimeError)


def test_analyze_toy_curve():
    res = lv.analyze(TOY, grid=[1.0, 2.0, 4.0])
    assert res["baseline"]["q_star"] == pytest.approx(110.0)
    pts = {p["x_power_mw"]: p["c_vc_per_kw"] for p in res["curve"]["points"]}
    assert pts[1.0] == pytest.approx(0.05, rel=1e-6)
    assert pts[2.0] == pytest.approx(0.025, rel=1e-6)
    assert res["curve"]["x_at_max_mw"] == 1.0


def test_run_writes_artifacts(tmp_path):
    out = tmp_path / "out"
    r = lv.run(TOY, out, grid=[1.0, 2.0])
    assert r["states"] == ["TOY"]
    assert r["failures"] == []
    curve = json.loads((out / "curve.json").read_text())
    assert curve["c_vc_max"] == pytest.approx(0.05, rel=1e-6)
    assert (out / "manifest.json").exists()


def test_bad_backend():
    with pytest.raises(lv.ArgumentError):
        lv.analyze(TOY, grid=[1.0], backend="nope")


def test_classify_and_kmeans():
    assert lv.classify_threshold({"ND": 3881.37, "MD": 3.94}, 1100.0) == ["ND"]
    labels, centers, inertia = lv.kmeans_1d([10, 11, 50, 52, 90], 3)
    assert len(centers) == 3
    assert inertia == pytest.approx(2.5)
    assert labels[0] == labels[1] and labels[2] == labels[3]


def test_grids():
    assert lv.parse_grid("1,2,4") == [1.0, 2.0, 4.0]
    g = lv.log_grid(10.0, 1000.0, 3)
    assert g[0] == 10.0 and g[-1] == 1000.0 and g[1] == pytest.approx(100.0)


def test_synthetic_state_runs(tmp_path):
    d = tmp_path / "syn"
    lv.write_synthetic_state(d, state="PYS", horizon_h=24)
    assert lv.validate(d) == ["PYS"]
    res = lv.analyze(d, grid=[50.0, 200.0])
    assert len(res["curve"]["points"]) == 2
    assert res["metrics"]["state"] == "PYS"
