import numpy as np
import pytest

from cogarch import LevySpec, ParamSet, returns_on_grid, simulate
from cogarch.cli import main
from cogarch.csvio import write_returns

SIM_CFG = """
command = simulate
seed = 7
params.theta = 0.04
params.eta = 0.053
params.phi = 0.04
params.gamma = 0.3
levy.rate = 1.0
sim.horizon = 200.0
sim.grid-step = 1.0
"""

MOMENTS_CFG = """
command = moments
params.theta = 0.04
params.eta = 0.053
params.phi = 0.04
params.gamma = 0.3
levy.rate = 1.0
moments.lags = 5
"""

FIRSTJUMP_CFG = """
command = firstjump
seed = 99
params.theta = 0.04
params.eta = 0.053
params.phi = 0.04
params.gamma = 0.3
levy.rate = 1.0
firstjump.horizon = 10.0
firstjump.dt-levels = 0.5,0.1
firstjump.paths = 20
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture(scope="module")
def demo_series(tmp_path_factory):
    # simulated return files reused across CLI tests: one that inverts
    # cleanly (seed 50) and one whose summary is infeasible (seed 51)
    root = tmp_path_factory.mktemp("series")
    params = ParamSet(theta=0.04, eta=0.053, phi=0.04, gamma=0.3)
    levy = LevySpec.compound_poisson(rate=1.0)
    out = {}
    for name, seed in (("good", 50), ("infeasible", 51)):
        path = simulate(params, levy, horizon=20_000.0, seed=seed)
        series = returns_on_grid(path, np.arange(0.0, 20_000.5, 1.0))
        f = root / f"{name}.csv"
        write_returns(series, f, version="test")
        out[name] = str(f)
    return out


def test_simulate_writes_grid_and_events(tmp_path):
    cfg = write_cfg(
        tmp_path,
        SIM_CFG + f"output.path = {tmp_path}/path.csv\noutput.events = {tmp_path}/events.csv\n",
    )
    assert main(["simulate", "--config", cfg]) == 0
    lines = (tmp_path / "path.csv").read_text().splitlines()
    assert lines[0].startswith("#") and "seed=7" in lines[0]
    assert lines[1] == "time,sigma2,G"
    assert len(lines) == 2 + 201
    events = (tmp_path / "events.csv").read_text().splitlines()
    assert events[1] == "time,jump,sigma2_before,sigma2_after"


def test_simulate_rerun_byte_identical(tmp_path):
    cfg_a = write_cfg(tmp_path, SIM_CFG + f"output.path = {tmp_path}/a.csv\n", "a.cfg")
    assert main(["simulate", "--config", cfg_a]) == 0
    first = (tmp_path / "a.csv").read_bytes()
    assert main(["simulate", "--config", cfg_a]) == 0
    assert (tmp_path / "a.csv").read_bytes() == first


def test_simulate_seed_override_changes_output(tmp_path):
    cfg = write_cfg(tmp_path, SIM_CFG + f"output.path = {tmp_path}/p.csv\n")
    assert main(["simulate", "--config", cfg]) == 0
    base = (tmp_path / "p.csv").read_bytes()
    assert main(["simulate", "--config", cfg, "--seed", "8"]) == 0
    assert (tmp_path / "p.csv").read_bytes() != base


def test_moments_outputs_quantities(tmp_path, capsys):
    cfg = write_cfg(tmp_path, MOMENTS_CFG)
    assert main(["moments", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "psi1,-0.009" in out
    assert "sigma2_mean,4.255" in out
    assert "sq_return_cov_lag5," in out


def test_moments_csv_file(tmp_path):
    cfg = write_cfg(tmp_path, MOMENTS_CFG + f"output.path = {tmp_path}/m.csv\n")
    assert main(["moments", "--config", cfg]) == 0
    text = (tmp_path / "m.csv").read_text()
    assert "quantity,value" in text
    assert "return_fourth_moment" in text


def test_firstjump_levels_csv(tmp_path):
    cfg = write_cfg(tmp_path, FIRSTJUMP_CFG + f"output.path = {tmp_path}/fj.csv\n")
    assert main(["firstjump", "--config", cfg]) == 0
    lines = (tmp_path / "fj.csv").read_text().splitlines()
    assert lines[1] == "n,dt,m,err_sigma2,err_G"
    assert len(lines) == 4
    # refinement reduces both terminal errors
    coarse = [float(x) for x in lines[2].split(",")]
    fine = [float(x) for x in lines[3].split(",")]
    assert fine[3] < coarse[3] and fine[4] < coarse[4]


def test_estimate_mom_report(tmp_path, demo_series):
    cfg = write_cfg(
        tmp_path,
        f"command = estimate\nestimate.data = {demo_series['good']}\n"
        f"estimate.method = mom\noutput.path = {tmp_path}/report.txt\n",
    )
    assert main(["estimate", "--config", cfg]) == 0
    report = (tmp_path / "report.txt").read_text()
    assert "mom.theta = " in report
    assert "mom.gamma = " in report
    assert "n_returns = 20000" in report


def test_estimate_infeasible_exit_code(tmp_path, demo_series, capsys):
    cfg = write_cfg(
        tmp_path,
        f"command = estimate\nestimate.data = {demo_series['infeasible']}\n"
        f"estimate.method = mom\n",
    )
    assert main(["estimate", "--config", cfg]) == 2
    assert "outside [1, 2)" in capsys.readouterr().err


def test_estimate_acf_failure_exit_code(tmp_path, capsys):
    rng = np.random.default_rng(1)
    data = tmp_path / "iid.csv"
    data.write_text("value\n" + "\n".join(f"{x:.6f}" for x in rng.standard_normal(5000)) + "\n")
    cfg = write_cfg(
        tmp_path,
        f"command = estimate\nestimate.data = {data}\nestimate.delta = 1.0\n"
        f"estimate.method = mom\n",
    )
    assert main(["estimate", "--config", cfg]) == 1
    assert "autocorrelation" in capsys.readouterr().err


def test_estimate_pmle_manual_init(tmp_path, demo_series):
    cfg = write_cfg(
        tmp_path,
        f"command = estimate\nestimate.data = {demo_series['good']}\n"
        f"estimate.method = pmle\nestimate.init = manual\n"
        "params.theta = 0.04\nparams.eta = 0.053\nparams.phi = 0.04\nparams.gamma = 0.3\n"
        f"output.path = {tmp_path}/report.txt\noutput.json = {tmp_path}/report.json\n",
    )
    assert main(["estimate", "--config", cfg]) == 0
    report = (tmp_path / "report.txt").read_text()
    assert "pmle.loglik = " in report
    assert "pmle.converged = 1" in report
    import json

    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["fits"][0]["method"] == "pmle"
    assert 0 < payload["fits"][0]["params"]["gamma"] < 1
    assert "loglik" in payload["fits"][0]["diagnostics"]


def test_missing_config_file_exit_code(capsys):
    assert main(["simulate", "--config", "/does/not/exist.cfg"]) == 1
    assert "error" in capsys.readouterr().err


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SIM_CFG.replace("0.3", "1.7"))
    assert main(["simulate", "--config", cfg]) == 1
    assert "gamma" in capsys.readouterr().err


def test_mom_roundtrip_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "command = mom-roundtrip\n")
    assert main(["mom-roundtrip", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "parameter sets checked: " in out
    n = int(out.split("parameter sets checked: ")[1].splitlines()[0])
    assert n >= 500
    err = float(out.split("max relative error: ")[1].splitlines()[0])
    assert err < 1e-8
