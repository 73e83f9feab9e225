"""Figure presets: the experiment matrices behind the reference charts.

Each preset expands to a list of scenario configs; exclusive-pooling
baselines are included per sweep group so gains are always computable.
"""

from __future__ import annotations

from .config import CoordinationMode, PoolingMode, ScenarioConfig

PRESET_NAMES = ("fig1a", "fig1b", "fig2a", "fig2b")


def _fig1(base: ScenarioConfig, ue_array) -> list[ScenarioConfig]:
    shared = base.replace(
        carrier=32.0, bs_density_per_op=100.0,
        bs_array=(32, 32), ue_array=ue_array,
        coordination_mode=CoordinationMode.INTRA_ONLY)
    return [shared.replace(pooling_mode=m)
            for m in (PoolingMode.EXCLUSIVE, PoolingMode.PARTIAL,
                      PoolingMode.FULL)]


def _fig2(base: ScenarioConfig, carrier: float, bs_array,
          ue_array) -> list[ScenarioConfig]:
    out = []
    for density in (50.0, 200.0):
        shared = base.replace(
            carrier=carrier, bs_density_per_op=density,
            bs_array=bs_array, ue_array=ue_array)
        out.append(shared.replace(
            pooling_mode=PoolingMode.EXCLUSIVE,
            coordination_mode=CoordinationMode.INTRA_ONLY))
        for coord in (CoordinationMode.INTRA_ONLY,
                      CoordinationMode.INTER_OPERATOR):
            out.append(shared.replace(pooling_mode=PoolingMode.FULL,
                                      coordination_mode=coord))
    return out


def expand_preset(name: str,
                  base: ScenarioConfig | None = None) -> list[ScenarioConfig]:
    base = base or ScenarioConfig()
    if name == "fig1a":
        return _fig1(base, (4, 4))
    if name == "fig1b":
        return _fig1(base, (1, 1))
    if name == "fig2a":
        return _fig2(base, 32.0, (32, 32), (4, 4))
    if name == "fig2b":
        return _fig2(base, 73.0, (64, 64), (8, 8))
    raise KeyError(f"unknown preset {name!r}; known: {PRESET_NAMES}")


def describe_preset(name: str) -> str:
    from .harness import scenario_id
    lines = [f"{name}:"]
    for cfg in expand_preset(name):
        lines.append(f"  {scenario_id(cfg)}  coordination={cfg.coordination_mode.value}")
    return "\n".join(lines)
