"""Scenario configuration files.

A scenario is a TOML document with four tables::

    [pulse]
    beta = 0.25
    delta = 0.9
    T = 1.0

    [channel]
    tau1 = 0.0
    tau2 = 0.45
    snr_db = 20.0          # or: power = 100.0 and sigma0_sq = 1.0
    N = 20

    [run]
    kind = "region"        # region | sweep | convergence
    mode = "time"          # time | frequency
    weight_count = 65

    [output]
    csv_path = "region.csv"
    svg_path = "region.svg"
    precision = 12

``snr_db`` and ``power`` accept either one number (both users) or a
two-element list (per-user values).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .pulse import PulseSpec
from .region import COMPARISONS, MODES
from .toeplitz import ChannelSpec

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "parse_config"]

KINDS = ("region", "sweep", "convergence")

_KNOWN = {
    "pulse": {"beta", "delta", "T"},
    "channel": {"tau1", "tau2", "snr_db", "power", "sigma0_sq", "N"},
    "run": {"kind", "mode", "weight_count", "grid_M", "n_list", "tau_list", "comparison",
            "seed", "n_random", "allow_floor"},
    "output": {"csv_path", "svg_path", "precision"},
}


class ConfigError(ValueError):
    """Invalid configuration; ``path`` is the dotted field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ScenarioConfig:
    pulse: PulseSpec
    chan: ChannelSpec
    kind: str = "region"
    mode: str = "time"
    weight_count: int = 65
    grid_m: int = 1024
    n_list: tuple = ()
    tau_list: tuple = ()
    comparison: str | None = None
    seed: int = 0
    n_random: int = 8
    allow_floor: bool = False
    csv_path: str = "region.csv"
    svg_path: str | None = None
    precision: int = 12
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _number(table, key, path, default=None, *, integer=False, positive=False, nonneg=False):
    if key not in table:
        if default is None:
            raise ConfigError(f"{path}.{key}", "required field is missing")
        return default
    val = table[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {val!r}")
    if integer and (int(val) != val):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {val!r}")
    if not math.isfinite(val):
        raise ConfigError(f"{path}.{key}", "must be finite")
    if positive and val <= 0:
        raise ConfigError(f"{path}.{key}", f"must be positive, got {val!r}")
    if nonneg and val < 0:
        raise ConfigError(f"{path}.{key}", f"must be nonnegative, got {val!r}")
    return int(val) if integer else float(val)


def _pair(table, key, path):
    val = table[key]
    if isinstance(val, list):
        if len(val) != 2:
            raise ConfigError(f"{path}.{key}", "per-user list must have two entries")
        sub = {str(i): v for i, v in enumerate(val)}
        return tuple(_number(sub, str(i), f"{path}.{key}") for i in range(2))
    v = _number(table, key, path)
    return (v, v)


def _choice(table, key, path, options, default):
    val = table.get(key, default)
    if val not in options:
        raise ConfigError(f"{path}.{key}", f"must be one of {options}, got {val!r}")
    return val


def _number_list(table, key, path, *, integer=False):
    val = table.get(key, [])
    if not isinstance(val, list):
        raise ConfigError(f"{path}.{key}", "expected a list")
    sub = {str(i): v for i, v in enumerate(val)}
    return tuple(_number(sub, str(i), f"{path}.{key}", integer=integer, nonneg=True)
                 for i in range(len(val)))


def parse_config(doc: dict) -> ScenarioConfig:
    """Validate a parsed TOML document and build a :class:`ScenarioConfig`."""
    for section, table in doc.items():
        if section not in _KNOWN:
            raise ConfigError(section, "unknown section")
        if not isinstance(table, dict):
            raise ConfigError(section, "expected a table")
        for key in table:
            if key not in _KNOWN[section]:
                raise ConfigError(f"{section}.{key}", "unknown field")
    p = doc.get("pulse", {})
    c = doc.get("channel", {})
    r = doc.get("run", {})
    o = doc.get("output", {})

    beta = _number(p, "beta", "pulse", 0.25, nonneg=True)
    if beta > 1.0:
        raise ConfigError("pulse.beta", f"must lie in [0, 1], got {beta}")
    delta = _number(p, "delta", "pulse", 1.0, positive=True)
    if delta > 1.0:
        raise ConfigError("pulse.delta", f"must lie in (0, 1], got {delta}")
    pulse = PulseSpec(beta=beta, T=_number(p, "T", "pulse", 1.0, positive=True), delta=delta)

    has_snr = "snr_db" in c
    has_power = "power" in c or "sigma0_sq" in c
    if has_snr == has_power:
        raise ConfigError("channel.snr_db",
                          "give exactly one of snr_db or (power, sigma0_sq)")
    if has_snr:
        s0 = 1.0
        power = tuple(s0 * 10.0 ** (v / 10.0) for v in _pair(c, "snr_db", "channel"))
    else:
        if "power" not in c:
            raise ConfigError("channel.power", "required together with sigma0_sq")
        s0 = _number(c, "sigma0_sq", "channel", 1.0, positive=True)
        power = _pair(c, "power", "channel")
        for i, v in enumerate(power):
            if v <= 0:
                raise ConfigError(f"channel.power.{i}", "must be positive")
    tau1 = _number(c, "tau1", "channel", 0.0, nonneg=True)
    tau2 = _number(c, "tau2", "channel", 0.0, nonneg=True)
    if tau2 < tau1:
        raise ConfigError("channel.tau2", "must be >= tau1")
    if tau2 > pulse.T:
        raise ConfigError("channel.tau2", f"must not exceed T = {pulse.T}")
    n = _number(c, "N", "channel", 16, integer=True, positive=True)
    chan = ChannelSpec(tau=(tau1, tau2), sigma0_sq=s0, power=power, n_symbols=n)

    kind = _choice(r, "kind", "run", KINDS, "region")
    mode = _choice(r, "mode", "run", MODES, "time")
    comparison = _choice(r, "comparison", "run", COMPARISONS, None)
    weight_count = _number(r, "weight_count", "run", 65, integer=True)
    if weight_count < 3:
        raise ConfigError("run.weight_count", "must be at least 3")
    grid_m = _number(r, "grid_M", "run", 1024, integer=True, positive=True)
    n_list = _number_list(r, "n_list", "run", integer=True)
    tau_list = _number_list(r, "tau_list", "run")
    if mode == "time" and kind != "convergence" and n < 2:
        raise ConfigError("channel.N", "time-domain runs need N >= 2")
    if kind == "convergence":
        if not n_list:
            raise ConfigError("run.n_list", "required for kind = 'convergence'")
        if list(n_list) != sorted(n_list) or min(n_list) < 2:
            raise ConfigError("run.n_list", "must be ascending with entries >= 2")
    if kind == "sweep":
        if not tau_list:
            raise ConfigError("run.tau_list", "required for kind = 'sweep'")
        for i, t in enumerate(tau_list):
            if t > pulse.T:
                raise ConfigError(f"run.tau_list.{i}", f"must lie in [0, T = {pulse.T}]")

    allow_floor = r.get("allow_floor", False)
    if not isinstance(allow_floor, bool):
        raise ConfigError("run.allow_floor", f"expected true or false, got {allow_floor!r}")

    precision = _number(o, "precision", "output", 12, integer=True, positive=True)
    if precision > 17:
        raise ConfigError("output.precision", "at most 17 significant digits")
    csv_path = o.get("csv_path", "sweep.csv" if kind == "sweep" else "region.csv")
    svg_path = o.get("svg_path")
    for key, val in (("csv_path", csv_path), ("svg_path", svg_path)):
        if val is not None and (not isinstance(val, str) or not val):
            raise ConfigError(f"output.{key}", "expected a non-empty string")

    return ScenarioConfig(
        pulse=pulse, chan=chan, kind=kind, mode=mode, weight_count=weight_count,
        grid_m=grid_m, n_list=n_list, tau_list=tau_list, comparison=comparison,
        seed=_number(r, "seed", "run", 0, integer=True, nonneg=True),
        n_random=_number(r, "n_random", "run", 8, integer=True, nonneg=True),
        allow_floor=allow_floor,
        csv_path=csv_path, svg_path=svg_path, precision=precision, raw=doc)


def load_config(path: str) -> ScenarioConfig:
    """Read and validate a scenario file."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"not valid TOML: {exc}") from None
    return parse_config(doc)
