import json
import math
from pathlib import Path

import pytest

from landmark_maximin.config import ConfigError, load_config, parse_config

DESK = Path(__file__).resolve().parents[1] / "configs" / "desk.json"


def _base():
    return json.loads(DESK.read_text())


def test_desk_config_loads():
    cfg = load_config(DESK)
    geo = cfg.geo()
    assert geo.beta_res == pytest.approx(math.radians(5))
    assert geo.f_g.d_semi == pytest.approx(math.hypot(4, 9.5))
    assert cfg.optimizer_options().rng_seed == cfg.seed


def test_infeasible_geometry_reports_constraint():
    data = _base()
    data["geometry"]["r_sense"] = 20
    with pytest.raises(ConfigError, match="R_a \\+ d_semi <= R_sense"):
        parse_config(data)


@pytest.mark.parametrize("path, value, field", [
    (("m",), 9, "m"),
    (("grid", "n_theta"), 4, "grid.n_theta"),
    (("geometry", "r_res"), -1, "geometry.r_res"),
    (("sim", "kinds"), ["sonar"], "sim.kinds"),
])
def test_errors_name_the_field(path, value, field):
    data = _base()
    node = data
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    with pytest.raises(ConfigError, match=field.replace(".", "\\.")):
        parse_config(data)


def test_unknown_keys_rejected():
    data = _base()
    data["extra"] = 1
    with pytest.raises(ConfigError, match="extra"):
        parse_config(data)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        load_config(tmp_path / "nope.json")
