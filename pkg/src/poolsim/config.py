"""Scenario configuration: validation, band plans, config-file parsing.

A scenario fully describes one simulated system: node densities, the
spectrum regime (exclusive / partial / full pooling), the coordination
mode, antenna geometries, and the Monte Carlo controls.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field

from .errors import ConfigError, Invalid, UnsupportedBandPlan


class PoolingMode(str, enum.Enum):
    EXCLUSIVE = "exclusive"
    PARTIAL = "partial"
    FULL = "full"


class CoordinationMode(str, enum.Enum):
    INTRA_ONLY = "intra_only"
    INTER_OPERATOR = "inter_operator"


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment description.

    Distances are meters, densities per km^2, carrier in GHz, bandwidth
    in MHz, powers in dBm.  ``ue_array == (1, 1)`` means an
    omnidirectional UE antenna.
    """

    region_side: float = 1000.0
    n_operators: int = 4
    bs_density_per_op: float = 100.0
    ue_density_per_op: float = 800.0
    carrier: float = 32.0
    total_bandwidth: float = 1200.0
    pooling_mode: PoolingMode = PoolingMode.EXCLUSIVE
    coordination_mode: CoordinationMode = CoordinationMode.INTRA_ONLY
    bs_array: tuple[int, int] = (32, 32)
    ue_array: tuple[int, int] = (4, 4)
    n_rf_chains_bs: int = 6
    tx_power_total: float = 25.0
    noise_figure: float = 7.0
    slots_per_drop: int = 200
    pf_window: float = 0.1
    n_drops: int = 50
    master_seed: int = 20260827
    deployment_law: str = "fixed"  # "fixed" or "poisson"
    association: str = "balanced"  # "balanced" or "max_rsrp"
    sinr_cap_db: float | None = 20.0
    channel_overrides: tuple[tuple[str, float], ...] = ()

    def replace(self, **kw) -> "ScenarioConfig":
        return dataclasses.replace(self, **kw)

    @property
    def area_km2(self) -> float:
        return (self.region_side / 1000.0) ** 2


# Interval arithmetic ------------------------------------------------------


def bands_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    """True iff the half-open intervals share positive measure."""
    return max(a[0], b[0]) < min(a[1], b[1])


@dataclass(frozen=True)
class BandPlan:
    """Per-operator frequency intervals [f_lo, f_hi) in MHz from pool start."""

    intervals: tuple[tuple[float, float], ...]
    total_bandwidth: float

    def width(self, op: int) -> float:
        lo, hi = self.intervals[op]
        return hi - lo

    def overlap(self, op_a: int, op_b: int) -> bool:
        return bands_overlap(self.intervals[op_a], self.intervals[op_b])

    def overlap_matrix(self):
        n = len(self.intervals)
        return [[self.overlap(i, j) for j in range(n)] for i in range(n)]


def band_plan(pooling_mode: PoolingMode, total_bandwidth: float,
              n_operators: int) -> BandPlan:
    """Expand a pooling regime into per-operator frequency intervals.

    Exclusive splits the pool evenly; partial pairs the first and second
    halves of the operators on the two half-pools; full gives everyone
    the whole pool.
    """
    mode = PoolingMode(pooling_mode)
    b = float(total_bandwidth)
    n = int(n_operators)
    if mode is PoolingMode.EXCLUSIVE:
        w = b / n
        ivals = tuple((i * w, (i + 1) * w) for i in range(n))
    elif mode is PoolingMode.PARTIAL:
        if n % 2 != 0:
            raise UnsupportedBandPlan(
                f"partial pooling requires an even operator count, got {n}")
        half = b / 2.0
        ivals = tuple((0.0, half) if i < n // 2 else (half, b)
                      for i in range(n))
    else:  # FULL
        ivals = tuple((0.0, b) for _ in range(n))
    return BandPlan(intervals=ivals, total_bandwidth=b)


# Validation ---------------------------------------------------------------


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every type invariant; raise ConfigError listing all violations."""
    errs: list[Invalid] = []
    if cfg.n_operators < 2:
        errs.append(Invalid("n_operators", "must be >= 2"))
    if cfg.total_bandwidth <= 0:
        errs.append(Invalid("total_bandwidth", "must be > 0"))
    elif cfg.n_operators >= 2 and cfg.total_bandwidth % cfg.n_operators != 0:
        errs.append(Invalid(
            "total_bandwidth",
            f"{cfg.total_bandwidth} MHz not divisible by "
            f"{cfg.n_operators} operators"))
    if cfg.region_side <= 0:
        errs.append(Invalid("region_side", "must be > 0"))
    if cfg.bs_density_per_op <= 0:
        errs.append(Invalid("bs_density_per_op", "must be > 0"))
    if cfg.ue_density_per_op <= 0:
        errs.append(Invalid("ue_density_per_op", "must be > 0"))
    if cfg.carrier <= 0:
        errs.append(Invalid("carrier", "must be > 0"))
    for name, arr in (("bs_array", cfg.bs_array), ("ue_array", cfg.ue_array)):
        if len(arr) != 2 or arr[0] < 1 or arr[1] < 1:
            errs.append(Invalid(name, "both dimensions must be >= 1"))
    if cfg.n_rf_chains_bs < 1:
        errs.append(Invalid("n_rf_chains_bs", "must be >= 1"))
    if not (0.0 < cfg.pf_window <= 1.0):
        errs.append(Invalid("pf_window", "must be in (0, 1]"))
    if cfg.slots_per_drop < 1:
        errs.append(Invalid("slots_per_drop", "must be >= 1"))
    if cfg.n_drops < 1:
        errs.append(Invalid("n_drops", "must be >= 1"))
    if cfg.master_seed < 0 or cfg.master_seed >= 2**64:
        errs.append(Invalid("master_seed", "must fit in 64 bits"))
    if cfg.deployment_law not in ("fixed", "poisson"):
        errs.append(Invalid("deployment_law", "must be 'fixed' or 'poisson'"))
    if cfg.association not in ("balanced", "max_rsrp"):
        errs.append(Invalid("association", "must be 'balanced' or 'max_rsrp'"))
    if cfg.sinr_cap_db is not None and cfg.sinr_cap_db <= 0:
        errs.append(Invalid("sinr_cap_db", "must be > 0 or 'none'"))
    if errs:
        raise ConfigError(errs)
    return cfg


def validation_errors(cfg: ScenarioConfig) -> list[Invalid]:
    """Like validate() but returns the violation list instead of raising."""
    try:
        validate(cfg)
    except ConfigError as e:
        return e.violations
    return []


# Config-file / override parsing -------------------------------------------

_POOLING_ALIASES = {
    "exclusive": PoolingMode.EXCLUSIVE,
    "partial": PoolingMode.PARTIAL,
    "full": PoolingMode.FULL,
}
_COORD_ALIASES = {
    "intra_only": CoordinationMode.INTRA_ONLY,
    "intraonly": CoordinationMode.INTRA_ONLY,
    "inter_operator": CoordinationMode.INTER_OPERATOR,
    "interoperator": CoordinationMode.INTER_OPERATOR,
}


def _parse_array(text: str) -> tuple[int, int]:
    parts = text.lower().replace(" ", "").split("x")
    if len(parts) != 2:
        raise ValueError(f"expected ROWSxCOLS, got {text!r}")
    return (int(parts[0]), int(parts[1]))


def _coerce(key: str, text: str):
    text = text.strip()
    if key in ("n_operators", "n_rf_chains_bs", "slots_per_drop",
               "n_drops", "master_seed"):
        return int(text)
    if key in ("region_side", "bs_density_per_op", "ue_density_per_op",
               "carrier", "total_bandwidth", "tx_power_total",
               "noise_figure", "pf_window"):
        return float(text)
    if key == "pooling_mode":
        try:
            return _POOLING_ALIASES[text.lower()]
        except KeyError:
            raise ValueError(f"unknown pooling mode {text!r}")
    if key == "coordination_mode":
        try:
            return _COORD_ALIASES[text.lower()]
        except KeyError:
            raise ValueError(f"unknown coordination mode {text!r}")
    if key in ("bs_array", "ue_array"):
        return _parse_array(text)
    if key in ("deployment_law", "association"):
        return text.lower()
    if key == "sinr_cap_db":
        return None if text.lower() in ("none", "off") else float(text)
    raise KeyError(key)


_KNOWN_KEYS = {f.name for f in dataclasses.fields(ScenarioConfig)} - {
    "channel_overrides"}


def apply_settings(cfg: ScenarioConfig, settings: dict[str, str],
                   source: str = "config") -> ScenarioConfig:
    """Apply raw key=value settings; unknown keys are hard errors."""
    errs: list[Invalid] = []
    updates = {}
    channel = dict(cfg.channel_overrides)
    for key, raw in settings.items():
        if key.startswith("channel."):
            try:
                channel[key[len("channel."):]] = float(raw)
            except ValueError:
                errs.append(Invalid(key, f"not a number: {raw!r}"))
            continue
        if key not in _KNOWN_KEYS:
            errs.append(Invalid(key, f"unknown {source} key"))
            continue
        try:
            updates[key] = _coerce(key, raw)
        except (ValueError, KeyError) as e:
            errs.append(Invalid(key, str(e)))
    if errs:
        raise ConfigError(errs)
    updates["channel_overrides"] = tuple(sorted(channel.items()))
    return cfg.replace(**updates)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse UTF-8 key=value lines with '#' comments into a raw mapping."""
    out: dict[str, str] = {}
    errs: list[Invalid] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            errs.append(Invalid(f"line {lineno}", f"expected key=value: {line!r}"))
            continue
        key, value = stripped.split("=", 1)
        out[key.strip()] = value.strip()
    if errs:
        raise ConfigError(errs)
    return out


def load_config(path, overrides: dict[str, str] | None = None,
                base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Read a config file, apply CLI overrides, validate."""
    cfg = base or ScenarioConfig()
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            cfg = apply_settings(cfg, parse_config_text(fh.read()))
    if overrides:
        cfg = apply_settings(cfg, overrides, source="override")
    return validate(cfg)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Flat echo of a config, suitable for meta.json."""
    d = {}
    for f in dataclasses.fields(ScenarioConfig):
        v = getattr(cfg, f.name)
        if isinstance(v, enum.Enum):
            v = v.value
        elif f.name in ("bs_array", "ue_array"):
            v = f"{v[0]}x{v[1]}"
        elif f.name == "channel_overrides":
            v = dict(v)
        d[f.name] = v
    return d
