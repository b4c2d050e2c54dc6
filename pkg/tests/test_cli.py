import json
from pathlib import Path

import pytest

from landmark_maximin.cli import main

DESK = Path(__file__).resolve().parents[1] / "configs" / "desk.json"


@pytest.fixture
def fast_config(tmp_path):
    data = json.loads(DESK.read_text())
    data["grid"]["n_theta"] = 90
    data["optimizer"].update(n_starts=2, max_evals_per_start=60)
    data["sim"].update(sigmas=[1.0], n_random_baselines=2, n_poses=10, n_trials=1)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return path


def test_optimize_writes_constellation(fast_config, tmp_path, capsys):
    assert main(["optimize", "--config", str(fast_config), "--out", str(tmp_path / "o")]) == 0
    data = json.loads((tmp_path / "o" / "constellation.json").read_text())
    assert len(data["points"]) == 3 and data["q"] > 0


def test_eval_q_with_oracle(fast_config, tmp_path, capsys):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"points": [[-4, 0], [4, 9.5], [0, -9.5]]}))
    assert main(["eval-q", "--config", str(fast_config), "--constellation", str(c)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"q", "worst_theta_deg", "worst_permutation"}


def test_localize(fast_config, tmp_path, capsys):
    c = tmp_path / "c.json"
    c.write_text(json.dumps([[-4, 0], [4, 9.5], [0, -9.5]]))
    m = tmp_path / "m.json"
    # observer at the origin with zero yaw, readings shuffled
    m.write_text(json.dumps({"readings": [[0, -9.5], [-4, 0], [4, 9.5]]}))
    assert main(["localize", "--config", str(fast_config), "--constellation", str(c),
                 "--measurements", str(m)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["accepted"] and out["association"] == [2, 0, 1]
    assert abs(out["pose"]["x"]) < 1e-9 and abs(out["pose"]["yaw_deg"]) < 1e-9


def test_localize_incomplete_is_runtime_error(fast_config, tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps([[-4, 0], [4, 9.5], [0, -9.5]]))
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"range_bearing": [[1, 0], [2, 90]]}))
    assert main(["localize", "--config", str(fast_config), "--constellation", str(c),
                 "--measurements", str(m)]) == 2


def test_simulate(fast_config, tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(fast_config), "--out", str(out)]) == 0
    assert (out / "results.csv").exists() and (out / "summary.json").exists()


@pytest.mark.parametrize("kind", ["range", "bearing"])
def test_alias(kind, capsys):
    assert main(["alias", "--kind", kind, "--points", "0", "0", "2", "0", "1", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["verified"]


def test_exit_codes(tmp_path, capsys):
    assert main(["alias", "--kind", "range", "--points", "0", "0", "1", "0", "2", "0"]) == 2
    assert main(["optimize", "--config", str(tmp_path / "missing.json")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
