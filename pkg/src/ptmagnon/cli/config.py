"""Scenario configuration files.

Flat ``key = value`` lines, dotted keys for grouped settings, ``#`` comments::

    params.kappa_a = -1
    params.chi = 0.1
    sweep.variable = delta
    sweep.from = -5
    sweep.to = 5
    sweep.points = 201
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError, ParameterError
from ..params import SystemParams

__all__ = ["SweepSpec", "ScenarioConfig", "parse_config", "SWEEP_VARIABLES", "KEYS"]

SWEEP_VARIABLES = ("delta", "g", "kappa_a", "chi")
SOLVERS = ("analytic", "lindblad", "both")
VARIANTS = ("amplitude_sum", "probability")
GAIN_MODELS = ("negative_rate", "gain_dissipator")

# key -> value type
KEYS = {
    "params.delta": float,
    "params.delta_a": float,
    "params.delta_m": float,
    "params.kappa_a": float,
    "params.kappa_m": float,
    "params.g": float,
    "params.chi": float,
    "params.omega_d": float,
    "cutoffs.magnon": int,
    "cutoffs.photon": int,
    "solver": str,
    "g2_variant": str,
    "gain_model": str,
    "allow_unstable": bool,
    "sweep.variable": str,
    "sweep.from": float,
    "sweep.to": float,
    "sweep.points": int,
    "output.csv": str,
    "output.plot": str,
}

_PARAM_FIELDS = {
    "params.delta_a": "delta_a",
    "params.delta_m": "delta_m",
    "params.kappa_a": "kappa_a",
    "params.kappa_m": "kappa_m",
    "params.g": "g",
    "params.chi": "chi",
    "params.omega_d": "omega_d_amp",
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int = 201

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.points)

    def apply(self, params: SystemParams, x: float) -> SystemParams:
        if self.variable == "delta":
            return params.with_delta(x)
        if self.variable == "g":
            return replace(params, g=x)
        if self.variable == "kappa_a":
            return replace(params, kappa_a=x)
        if self.variable == "chi":
            return replace(params, chi=x)
        raise ValueError(self.variable)


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams = field(default_factory=SystemParams)
    cutoffs: tuple[int, int] = (5, 5)
    solver: str = "both"
    g2_variant: str = "amplitude_sum"
    gain_model: str = "negative_rate"
    allow_unstable: bool = False
    sweep: SweepSpec | None = None
    csv_path: str | None = None
    plot_path: str | None = None


def _parse_value(raw: str, typ, key: str, line: int):
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        raw = raw[1:-1]
    try:
        if typ is bool:
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if typ is int:
            f = float(raw)
            if not f.is_integer():
                raise ValueError(raw)
            return int(f)
        if typ is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError(raw)
            return v
        return raw
    except ValueError:
        raise ConfigError(f"expected {typ.__name__}, got {raw!r}", key=key, line=line) from None


def _choice(value, allowed, key, line):
    if value not in allowed:
        raise ConfigError(f"must be one of {', '.join(allowed)}; got {value!r}", key=key, line=line)
    return value


def parse_config(text: str, overrides: list[str] | None = None) -> ScenarioConfig:
    """Parse and validate a scenario; ``overrides`` are extra ``key=value`` lines."""
    entries: dict[str, tuple[object, int]] = {}
    lines = text.splitlines() + list(overrides or [])
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        entries[key] = (_parse_value(value, KEYS[key], key, lineno), lineno)

    def get(key, default=None):
        return entries[key][0] if key in entries else default

    def line(key):
        return entries[key][1] if key in entries else None

    pkw = {}
    if "params.delta" in entries:
        for k in ("params.delta_a", "params.delta_m"):
            if k in entries:
                raise ConfigError("conflicts with params.delta", key=k, line=line(k))
        pkw["delta_a"] = pkw["delta_m"] = get("params.delta")
    for key, fname in _PARAM_FIELDS.items():
        if key in entries:
            pkw[fname] = get(key)
    try:
        params = SystemParams(**pkw)
    except ParameterError as exc:
        bad = next((k for k in _PARAM_FIELDS if _PARAM_FIELDS[k] in str(exc)), None)
        raise ConfigError(str(exc), key=bad, line=line(bad) if bad else None) from None

    cut = (get("cutoffs.magnon", 5), get("cutoffs.photon", 5))
    for key, v in zip(("cutoffs.magnon", "cutoffs.photon"), cut):
        if v < 1:
            raise ConfigError("cutoff must be >= 1", key=key, line=line(key))

    solver = _choice(get("solver", "both"), SOLVERS, "solver", line("solver"))
    variant = _choice(get("g2_variant", "amplitude_sum"), VARIANTS, "g2_variant", line("g2_variant"))
    gain = _choice(get("gain_model", "negative_rate"), GAIN_MODELS, "gain_model", line("gain_model"))
    if solver in ("analytic", "both") and params.omega_d_amp <= 0:
        raise ConfigError("analytic solver needs omega_d > 0", key="params.omega_d", line=line("params.omega_d"))

    sweep = None
    sweep_keys = [k for k in entries if k.startswith("sweep.")]
    if sweep_keys:
        for k in ("sweep.variable", "sweep.from", "sweep.to"):
            if k not in entries:
                raise ConfigError("missing sweep setting", key=k, line=None)
        var = _choice(get("sweep.variable"), SWEEP_VARIABLES, "sweep.variable", line("sweep.variable"))
        points = get("sweep.points", 201)
        if points < 1:
            raise ConfigError("must be >= 1", key="sweep.points", line=line("sweep.points"))
        start, stop = get("sweep.from"), get("sweep.to")
        if start > stop:
            raise ConfigError("sweep.from must be <= sweep.to", key="sweep.from", line=line("sweep.from"))
        if points > 1 and start == stop:
            raise ConfigError("a multi-point sweep needs sweep.from < sweep.to", key="sweep.to", line=line("sweep.to"))
        if var in ("g", "chi") and start < 0:
            raise ConfigError(f"{var} cannot be negative", key="sweep.from", line=line("sweep.from"))
        sweep = SweepSpec(var, start, stop, points)

    return ScenarioConfig(
        params=params,
        cutoffs=cut,
        solver=solver,
        g2_variant=variant,
        gain_model=gain,
        allow_unstable=get("allow_unstable", False),
        sweep=sweep,
        csv_path=get("output.csv"),
        plot_path=get("output.plot"),
    )
