import math
from pathlib import Path

import pytest

from cogarch import ConfigError
from cogarch.config import parse_config

MINIMAL_SIM = """
command = simulate
seed = 7
params.theta = 0.04
params.eta = 0.053
params.phi = 0.04
params.gamma = 0.3
levy.rate = 1.0
sim.horizon = 100.0
"""


def test_minimal_simulate_defaults():
    cfg = parse_config(MINIMAL_SIM)
    assert cfg.command == "simulate"
    assert cfg.seed == 7
    assert cfg.sim_grid_step == 1.0
    assert cfg.sim_sigma2_init == "stationary"
    assert cfg.levy.assumed_s == 3.0  # pseudo convention by default
    assert cfg.levy.moment(2) == pytest.approx(1.0)
    assert cfg.params.gamma == 0.3
    assert cfg.threads >= 1
    assert len(cfg.hash) == 12


def test_gamma_out_of_range_reports_line():
    text = MINIMAL_SIM.replace("params.gamma = 0.3", "params.gamma = 1.2")
    with pytest.raises(ConfigError, match=r"gamma must lie in \[0,1\)") as err:
        parse_config(text)
    assert err.value.line == 7  # the params.gamma line


def test_config_error_carries_offending_line():
    lines = MINIMAL_SIM.splitlines()
    assert lines[6] == "params.gamma = 0.3"


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(MINIMAL_SIM + "\nlevy.jump-rate = 2\n")


def test_type_mismatch_reports_line():
    text = MINIMAL_SIM.replace("sim.horizon = 100.0", "sim.horizon = ten")
    with pytest.raises(ConfigError, match="expected a number"):
        parse_config(text)


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(MINIMAL_SIM + "\nseed = 8\n")


def test_missing_seed_for_stochastic_command():
    text = MINIMAL_SIM.replace("seed = 7\n", "")
    with pytest.raises(ConfigError, match="seed"):
        parse_config(text)


def test_command_mismatch_rejected():
    with pytest.raises(ConfigError, match="command"):
        parse_config(MINIMAL_SIM, command="moments")


def test_command_override_fills_missing():
    text = MINIMAL_SIM.replace("command = simulate\n", "")
    cfg = parse_config(text, command="simulate")
    assert cfg.command == "simulate"
    with pytest.raises(ConfigError, match="command"):
        parse_config(text)


def test_estimate_requires_existing_data(tmp_path):
    text = "command = estimate\nestimate.data = /nonexistent/file.csv\n"
    with pytest.raises(ConfigError, match="not found"):
        parse_config(text)
    data = tmp_path / "returns.csv"
    data.write_text("value\n0.1\n-0.2\n")
    cfg = parse_config(f"command = estimate\nestimate.data = {data}\nestimate.delta = 1.0\n")
    assert cfg.estimate_method == "both"


def test_levy_two_point_and_s_convention():
    text = """
command = moments
params.theta = 0.04
params.eta = 0.053
params.phi = 0.04
params.gamma = 0.0
levy.rate = 2.0
levy.jumps = two-point
levy.magnitude = 1.0
levy.assumed-s = use-true
"""
    cfg = parse_config(text)
    assert cfg.levy.assumed_s is None
    assert cfg.levy.moment(2) == pytest.approx(1.0)  # normalized
    assert cfg.levy.s_for_estimation() == pytest.approx(cfg.levy.moment(4))


def test_inline_comments_and_blank_lines():
    text = MINIMAL_SIM + "\n# trailing comment\n\nsim.grid-step = 0.5  # fine grid\n"
    cfg = parse_config(text)
    assert cfg.sim_grid_step == 0.5


def test_malformed_line_rejected():
    with pytest.raises(ConfigError, match="key = value"):
        parse_config("command simulate\n")
    with pytest.raises(ConfigError, match="missing value"):
        parse_config("command =\n")


def test_fig1_config_parses():
    text = (Path(__file__).parent.parent / "configs" / "fig1.cfg").read_text()
    cfg = parse_config(text)
    assert cfg.params.theta == 0.0001
    assert cfg.params.eta == pytest.approx(-math.log(0.9))
    assert cfg.params.phi == pytest.approx(1.0 / 18.0)
    assert cfg.params.gamma == 0.3
    assert cfg.levy.rate == 1.0
    assert cfg.sim_horizon == 1000.0
