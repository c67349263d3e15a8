"""Flat key-value run configuration.

One ``key = value`` per line; sections are expressed by dotted key
prefixes (``params.theta``, ``levy.rate``, ...).  Lines starting with
``#`` and blank lines are ignored; inline comments after ``#`` are
stripped.  Parsing validates types and parameter invariants immediately
and reports errors with the offending line number.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .levy import LevySpec, NormalJumps, TwoPointJumps
from .model import ParamSet

__all__ = ["RunConfig", "parse_config", "config_hash"]

COMMANDS = ("simulate", "moments", "firstjump", "estimate", "mom-roundtrip")
STOCHASTIC_COMMANDS = ("simulate", "firstjump")

_DEFAULT_DT_LEVELS = (0.5, 0.1, 0.02, 0.004)


@dataclass
class RunConfig:
    """Validated run configuration for one CLI invocation."""

    command: str
    seed: int | None = None
    threads: int = 1
    params: ParamSet | None = None
    levy: LevySpec | None = None
    sim_horizon: float | None = None
    sim_grid_step: float = 1.0
    sim_sigma2_init: float | str = "stationary"
    sim_burn_in: float | None = None
    moments_grid_step: float = 1.0
    moments_lags: int = 10
    firstjump_horizon: float = 10.0
    firstjump_dt_levels: tuple = _DEFAULT_DT_LEVELS
    firstjump_paths: int = 200
    estimate_data: str | None = None
    estimate_delta: float | None = None
    estimate_method: str = "both"
    estimate_init: str = "mom"
    estimate_max_lag: int | None = None
    estimate_bootstrap: int = 0
    roundtrip_deltas: tuple = (0.1, 1.0, 5.0)
    roundtrip_min_sets: int = 500
    output_path: str | None = None
    output_events: str | None = None
    output_json: str | None = None
    text: str = field(default="", repr=False)

    @property
    def hash(self) -> str:
        return config_hash(self.text)


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _parse_float(raw, line, key, positive=False, nonnegative=False):
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}", line) from None
    if v != v:
        raise ConfigError(f"{key}: NaN is not allowed", line)
    if positive and not v > 0:
        raise ConfigError(f"{key} must be positive, got {v}", line)
    if nonnegative and v < 0:
        raise ConfigError(f"{key} must be non-negative, got {v}", line)
    return v


def _parse_int(raw, line, key, positive=False):
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}", line) from None
    if positive and v <= 0:
        raise ConfigError(f"{key} must be positive, got {v}", line)
    return v


def _parse_bool(raw, line, key):
    low = raw.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {raw!r}", line)


def _parse_choice(raw, line, key, choices):
    if raw not in choices:
        raise ConfigError(f"{key} must be one of {', '.join(choices)}; got {raw!r}", line)
    return raw


def _parse_float_list(raw, line, key):
    try:
        vals = tuple(float(part) for part in raw.split(","))
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {raw!r}", line) from None
    if not vals or any(v <= 0 for v in vals):
        raise ConfigError(f"{key}: entries must be positive numbers", line)
    return vals


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse configuration text into a validated RunConfig.

    ``command`` overrides any command key in the text (the CLI
    subcommand wins).  Raises ConfigError with a line reference on
    unknown keys, malformed values, or invariant violations.
    """
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", lineno)
        key, raw_value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("missing key before '='", lineno)
        if not raw_value:
            raise ConfigError(f"missing value for key {key!r}", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        entries[key] = (raw_value, lineno)

    def take(key):
        return entries.pop(key, (None, None))

    cfg_kwargs: dict = {}

    raw, line = take("command")
    if command is not None:
        if raw is not None and raw != command:
            raise ConfigError(
                f"config says command = {raw!r} but {command!r} was requested", line
            )
        cfg_kwargs["command"] = command
    elif raw is not None:
        cfg_kwargs["command"] = _parse_choice(raw, line, "command", COMMANDS)
    else:
        raise ConfigError("missing required key 'command'")

    raw, line = take("seed")
    if raw is not None:
        cfg_kwargs["seed"] = _parse_int(raw, line, "seed")

    raw, line = take("threads")
    if raw is not None:
        cfg_kwargs["threads"] = _parse_int(raw, line, "threads", positive=True)
    else:
        env = os.environ.get("COGARCH_THREADS")
        cfg_kwargs["threads"] = max(1, int(env)) if env and env.isdigit() else 1

    # model parameters; each field is range checked on its own line
    p_vals = {}
    for name, checks in (
        ("theta", dict(positive=True)),
        ("eta", dict(positive=True)),
        ("phi", dict(positive=True)),
        ("gamma", dict()),
    ):
        raw, line = take(f"params.{name}")
        if raw is not None:
            v = _parse_float(raw, line, f"params.{name}", **checks)
            if name == "gamma" and not 0.0 <= v < 1.0:
                raise ConfigError(f"gamma must lie in [0,1), got {v}", line)
            p_vals[name] = v
    if p_vals:
        missing = {"theta", "eta", "phi"} - set(p_vals)
        if missing:
            raise ConfigError(f"incomplete params section, missing {sorted(missing)}")
        cfg_kwargs["params"] = ParamSet(
            theta=p_vals["theta"], eta=p_vals["eta"], phi=p_vals["phi"],
            gamma=p_vals.get("gamma", 0.0),
        )

    # driver
    levy_keys = {k for k in entries if k.startswith("levy.")}
    if levy_keys:
        raw, line = take("levy.kind")
        if raw is not None:
            _parse_choice(raw, line, "levy.kind", ("compound-poisson",))
        raw, line = take("levy.rate")
        rate = _parse_float(raw, line, "levy.rate", positive=True) if raw is not None else 1.0
        raw, line = take("levy.jumps")
        kind = (
            _parse_choice(raw, line, "levy.jumps",
                          ("standard-normal", "scaled-normal", "two-point"))
            if raw is not None
            else "standard-normal"
        )
        raw, line = take("levy.scale")
        scale = _parse_float(raw, line, "levy.scale", positive=True) if raw is not None else None
        raw, line = take("levy.magnitude")
        magnitude = (
            _parse_float(raw, line, "levy.magnitude", positive=True) if raw is not None else None
        )
        if kind == "standard-normal":
            jumps = NormalJumps(1.0)
        elif kind == "scaled-normal":
            jumps = NormalJumps(scale if scale is not None else 1.0)
        else:
            jumps = TwoPointJumps(magnitude if magnitude is not None else 1.0)
        raw, line = take("levy.normalize")
        normalize = _parse_bool(raw, line, "levy.normalize") if raw is not None else True
        raw, line = take("levy.assumed-s")
        if raw is None:
            assumed_s = 3.0
        elif raw == "use-true":
            assumed_s = None
        else:
            assumed_s = _parse_float(raw, line, "levy.assumed-s", positive=True)
        cfg_kwargs["levy"] = LevySpec.compound_poisson(
            rate=rate, jumps=jumps, normalize=normalize, assumed_s=assumed_s
        )

    simple = {
        "sim.horizon": ("sim_horizon", lambda r, l: _parse_float(r, l, "sim.horizon", positive=True)),
        "sim.grid-step": ("sim_grid_step", lambda r, l: _parse_float(r, l, "sim.grid-step", positive=True)),
        "sim.burn-in": ("sim_burn_in", lambda r, l: _parse_float(r, l, "sim.burn-in", positive=True)),
        "moments.grid-step": ("moments_grid_step", lambda r, l: _parse_float(r, l, "moments.grid-step", positive=True)),
        "moments.lags": ("moments_lags", lambda r, l: _parse_int(r, l, "moments.lags", positive=True)),
        "firstjump.horizon": ("firstjump_horizon", lambda r, l: _parse_float(r, l, "firstjump.horizon", positive=True)),
        "firstjump.dt-levels": ("firstjump_dt_levels", lambda r, l: _parse_float_list(r, l, "firstjump.dt-levels")),
        "firstjump.paths": ("firstjump_paths", lambda r, l: _parse_int(r, l, "firstjump.paths", positive=True)),
        "estimate.data": ("estimate_data", lambda r, l: r),
        "estimate.delta": ("estimate_delta", lambda r, l: _parse_float(r, l, "estimate.delta", positive=True)),
        "estimate.method": ("estimate_method", lambda r, l: _parse_choice(r, l, "estimate.method", ("mom", "pmle", "both"))),
        "estimate.init": ("estimate_init", lambda r, l: _parse_choice(r, l, "estimate.init", ("mom", "manual"))),
        "estimate.max-lag": ("estimate_max_lag", lambda r, l: _parse_int(r, l, "estimate.max-lag", positive=True)),
        "estimate.bootstrap": ("estimate_bootstrap", lambda r, l: _parse_int(r, l, "estimate.bootstrap")),
        "roundtrip.deltas": ("roundtrip_deltas", lambda r, l: _parse_float_list(r, l, "roundtrip.deltas")),
        "roundtrip.min-sets": ("roundtrip_min_sets", lambda r, l: _parse_int(r, l, "roundtrip.min-sets", positive=True)),
        "output.path": ("output_path", lambda r, l: r),
        "output.events": ("output_events", lambda r, l: r),
        "output.json": ("output_json", lambda r, l: r),
    }
    for key, (attr, conv) in simple.items():
        raw, line = take(key)
        if raw is not None:
            cfg_kwargs[attr] = conv(raw, line)

    raw, line = take("sim.sigma2-init")
    if raw is not None:
        if raw == "stationary":
            cfg_kwargs["sim_sigma2_init"] = "stationary"
        else:
            cfg_kwargs["sim_sigma2_init"] = _parse_float(
                raw, line, "sim.sigma2-init", nonnegative=True
            )

    if entries:
        key, (_, line) = next(iter(entries.items()))
        raise ConfigError(f"unknown key {key!r}", line)

    cfg = RunConfig(text=text, **cfg_kwargs)
    _validate_for_command(cfg)
    return cfg


def _validate_for_command(cfg: RunConfig) -> None:
    cmd = cfg.command
    if cmd in STOCHASTIC_COMMANDS and cfg.seed is None:
        raise ConfigError(f"command {cmd!r} is stochastic and requires a seed")
    if cmd in ("simulate", "moments", "firstjump"):
        if cfg.params is None:
            raise ConfigError(f"command {cmd!r} requires a params section")
        if cfg.levy is None:
            raise ConfigError(f"command {cmd!r} requires a levy section")
    if cmd == "simulate" and cfg.sim_horizon is None:
        raise ConfigError("command 'simulate' requires sim.horizon")
    if cmd == "estimate":
        if cfg.estimate_data is None:
            raise ConfigError("command 'estimate' requires estimate.data")
        if not Path(cfg.estimate_data).exists():
            raise ConfigError(f"estimate.data file not found: {cfg.estimate_data}")
        if cfg.estimate_init == "manual" and cfg.params is None:
            raise ConfigError("estimate.init = manual requires a params section")
        if cfg.estimate_bootstrap > 0 and cfg.seed is None:
            raise ConfigError("bootstrap standard errors require a seed")
