"""Command-line interface.

Subcommands: simulate, moments, firstjump, estimate, mom-roundtrip.
Each takes ``--config FILE`` (flat key = value text) plus a few
overriding flags.  Exit codes: 0 on success, 2 when a moment summary is
infeasible for inversion, 1 on any other error.  Reruns with identical
config and seed produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .csvio import format_float, read_returns, write_csv
from .errors import CogarchError, ConfigError, InfeasibleMomentsError
from .estimate import mom_fit, mom_roundtrip, pmle_fit
from .firstjump import refinement_study
from .levy import log_integral
from .model import psi_values, return_moments, sigma2_autocov, sigma2_moment, stationarity
from .simulate import returns_on_grid, simulate

__all__ = ["main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogarch",
        description="Simulate and estimate asymmetric continuous-time GARCH models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="flat key = value configuration file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--output", help="override output.path")
        return p

    add("simulate", "sample one exact trajectory and write it on a grid")
    add("moments", "print the analytic moments implied by the parameters")
    add("firstjump", "measure discretization error across refinement levels")
    est = add("estimate", "fit parameters to a return series")
    est.add_argument("--method", choices=("mom", "pmle", "both"), help="override estimate.method")
    est.add_argument(
        "--s-convention",
        choices=("pseudo", "true"),
        help="fourth-moment convention: pseudo uses 3, true uses the configured driver",
    )
    est.add_argument("--init", choices=("mom", "manual"), help="override estimate.init")
    est.add_argument("--data", help="override estimate.data")
    est.add_argument("--delta", type=float, help="grid step for value-only data files")
    add("mom-roundtrip", "check the forward/inverse moment maps on a parameter grid")
    return parser


def _load_config(args) -> RunConfig:
    text = Path(args.config).read_text(encoding="utf-8")
    cfg = parse_config(text, command=args.command)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.output is not None:
        cfg.output_path = args.output
    if getattr(args, "data", None) is not None:
        cfg.estimate_data = args.data
    if getattr(args, "delta", None) is not None:
        cfg.estimate_delta = args.delta
    if getattr(args, "method", None) is not None:
        cfg.estimate_method = args.method
    if getattr(args, "init", None) is not None:
        cfg.estimate_init = args.init
    if getattr(args, "s_convention", None) is not None:
        if args.s_convention == "true" and cfg.levy is None:
            raise ConfigError(
                "--s-convention true needs a levy section describing the driver"
            )
        if cfg.levy is not None:
            from dataclasses import replace

            cfg.levy = replace(
                cfg.levy, assumed_s=3.0 if args.s_convention == "pseudo" else None
            )
    return cfg


def _run_simulate(cfg: RunConfig) -> None:
    path = simulate(
        cfg.params,
        cfg.levy,
        cfg.sim_horizon,
        sigma2_0=cfg.sim_sigma2_init,
        seed=cfg.seed,
        burn_in=cfg.sim_burn_in,
    )
    n = int(np.floor(cfg.sim_horizon / cfg.sim_grid_step + 1e-9))
    grid = cfg.sim_grid_step * np.arange(n + 1)
    rows = zip(grid, path.sigma2_at(grid), path.g_at(grid))
    out = cfg.output_path or "cogarch-path.csv"
    write_csv(out, ["time", "sigma2", "G"], rows, __version__, cfg.seed, cfg.hash)
    print(f"wrote {n + 1} grid points, {path.n_events} events -> {out}")
    if cfg.output_events:
        write_csv(
            cfg.output_events,
            ["time", "jump", "sigma2_before", "sigma2_after"],
            zip(path.times, path.jumps, path.sigma2_before, path.sigma2_after),
            __version__,
            cfg.seed,
            cfg.hash,
        )
        print(f"wrote {path.n_events} events -> {cfg.output_events}")


def _run_moments(cfg: RunConfig) -> None:
    params, levy = cfg.params, cfg.levy
    r = cfg.moments_grid_step
    rep = stationarity(params, levy)
    pv = psi_values(params, levy)
    rows: list[tuple[str, float]] = [
        ("psi1", pv.psi1),
        ("psi2", pv.psi2),
        ("log_integral", log_integral(levy, params)),
        ("log_condition", float(rep.log_condition)),
        ("psi1_negative", float(rep.psi1_negative)),
        ("psi2_negative", float(rep.psi2_negative)),
        ("levy_second_moment", levy.moment(2)),
        ("levy_fourth_moment", levy.moment(4)),
    ]
    if rep.psi1_negative:
        rows.append(("sigma2_mean", sigma2_moment(params, levy, 1)))
        rm = return_moments(params, levy, r)
        rows.append(("return_mean", rm.mean))
        rows.append(("return_second_moment", rm.second))
        if rep.psi2_negative:
            rows.append(("sigma2_second_moment", sigma2_moment(params, levy, 2)))
            rows.append(("sigma2_autocov_lag1", sigma2_autocov(params, levy, 1.0)))
            rows.append(("return_fourth_moment", rm.fourth))
            for i in range(1, cfg.moments_lags + 1):
                rows.append((f"sq_return_cov_lag{i}", rm.cov_sq(i * r)))
    if cfg.output_path:
        write_csv(cfg.output_path, ["quantity", "value"], rows, __version__, cfg.seed, cfg.hash)
        print(f"wrote {len(rows)} rows -> {cfg.output_path}")
    else:
        for name, value in rows:
            print(f"{name},{format_float(value)}")


def _run_firstjump(cfg: RunConfig) -> None:
    records = refinement_study(
        cfg.params,
        cfg.levy,
        cfg.firstjump_horizon,
        cfg.firstjump_dt_levels,
        cfg.firstjump_paths,
        cfg.seed,
    )
    rows = [
        (r["level"], r["dt"], r["threshold"], r["err_sigma2"], r["err_g"]) for r in records
    ]
    out = cfg.output_path or "cogarch-firstjump.csv"
    write_csv(out, ["n", "dt", "m", "err_sigma2", "err_G"], rows, __version__, cfg.seed, cfg.hash)
    for r in records:
        print(
            f"level {r['level']}: dt={r['dt']:g} m={r['threshold']:.4g} "
            f"err_sigma2={r['err_sigma2']:.6g} err_G={r['err_g']:.6g}"
        )
    print(f"wrote {len(rows)} levels -> {out}")


def _report_lines(prefix: str, report) -> list[str]:
    p = report.params
    lines = [
        f"{prefix}theta = {format_float(p.theta)}",
        f"{prefix}eta = {format_float(p.eta)}",
        f"{prefix}phi = {format_float(p.phi)}",
        f"{prefix}gamma = {format_float(p.gamma)}",
    ]
    for key, value in sorted(report.diagnostics.items()):
        if isinstance(value, (int, float, np.floating, np.integer)):
            lines.append(f"{prefix}{key} = {format_float(value)}")
        elif isinstance(value, tuple):
            lines.append(f"{prefix}{key} = " + ",".join(format_float(v) for v in value))
    if report.standard_errors:
        for key, value in report.standard_errors.items():
            lines.append(f"{prefix}se.{key} = {format_float(value)}")
    return lines


def _report_json(report) -> dict:
    p = report.params
    out = {
        "method": report.method,
        "params": {"theta": p.theta, "eta": p.eta, "phi": p.phi, "gamma": p.gamma},
        "diagnostics": {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in report.diagnostics.items()
            if isinstance(v, (bool, int, float, str, tuple, np.floating, np.integer))
        },
    }
    if report.standard_errors:
        out["standard_errors"] = report.standard_errors
    return out


def _run_estimate(cfg: RunConfig) -> None:
    series = read_returns(cfg.estimate_data, delta=cfg.estimate_delta)
    s_moment = 3.0
    if cfg.levy is not None:
        s_moment = cfg.levy.s_for_estimation()
    header = f"# cogarch {__version__} config={cfg.hash}"
    if cfg.seed is not None:
        header += f" seed={cfg.seed}"
    lines = [header, f"n_returns = {len(series)}"]
    reports = []
    mom_report = None
    if cfg.estimate_method in ("mom", "both"):
        mom_report = mom_fit(
            series,
            s_moment=s_moment,
            max_lag=cfg.estimate_max_lag,
            bootstrap=cfg.estimate_bootstrap,
            seed=cfg.seed or 0,
        )
        lines += _report_lines("mom.", mom_report)
        reports.append(mom_report)
    if cfg.estimate_method in ("pmle", "both"):
        if cfg.estimate_init == "manual":
            init = cfg.params
        elif mom_report is not None:
            init = mom_report.params
        else:
            init = "mom"
        pmle_report = pmle_fit(
            series,
            init=init,
            s_moment=s_moment,
            bootstrap=cfg.estimate_bootstrap,
            seed=cfg.seed or 0,
            threads=cfg.threads,
        )
        lines += _report_lines("pmle.", pmle_report)
        reports.append(pmle_report)
    text = "\n".join(lines) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
        print(f"wrote report -> {cfg.output_path}")
    else:
        sys.stdout.write(text)
    if cfg.output_json:
        payload = {
            "version": __version__,
            "config": cfg.hash,
            "seed": cfg.seed,
            "n_returns": len(series),
            "fits": [_report_json(r) for r in reports],
        }
        Path(cfg.output_json).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote structured report -> {cfg.output_json}")


def _run_roundtrip(cfg: RunConfig) -> None:
    result = mom_roundtrip(
        deltas=cfg.roundtrip_deltas, min_sets=cfg.roundtrip_min_sets
    )
    print(f"parameter sets checked: {result['n_sets']}")
    print(f"max relative error: {format_float(result['max_rel_error'])}")
    if cfg.output_path:
        write_csv(
            cfg.output_path,
            ["delta", "theta", "eta", "phi", "gamma", "rel_error"],
            result["records"],
            __version__,
            cfg.seed,
            cfg.hash,
        )
        print(f"wrote {len(result['records'])} rows -> {cfg.output_path}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        runner = {
            "simulate": _run_simulate,
            "moments": _run_moments,
            "firstjump": _run_firstjump,
            "estimate": _run_estimate,
            "mom-roundtrip": _run_roundtrip,
        }[cfg.command]
        runner(cfg)
    except InfeasibleMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CogarchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
