"""Monte Carlo campaigns: drops, percentiles, pooling gains, confidence.

Scenarios in one sweep group share seeds, so pooling/coordination
variants are compared on identical topologies and channels (paired
design).  The unit of parallelism is the drop; aggregation is a
deterministic keyed merge, so results do not depend on worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import PoolingMode, ScenarioConfig, validate
from .engine import run_drop
from .errors import (DegenerateBaseline, EmptySamples, MissingBaseline,
                     TooFewDrops)

PERCENTILES = (5, 50, 95)


def percentile(samples, p: float) -> float:
    """Linear-interpolation percentile (index h = (n-1) p / 100)."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise EmptySamples("percentile of an empty sample set")
    return float(np.percentile(arr, p, method="linear"))


def pooling_gain(scenario_samples, baseline_samples, p: float) -> float:
    """Relative percentile gain of a scenario over the baseline, in percent."""
    base = percentile(baseline_samples, p)
    if base <= 0:
        raise DegenerateBaseline(f"baseline {p}th percentile is {base}")
    return 100.0 * (percentile(scenario_samples, p) - base) / base


def confidence_interval(per_drop_values) -> float:
    """95% normal-approximation CI half-width on the mean of drop values."""
    vals = np.asarray(per_drop_values, dtype=float)
    if vals.size < 2:
        raise TooFewDrops("confidence interval needs at least 2 drops")
    return float(1.96 * vals.std(ddof=1) / np.sqrt(vals.size))


# Scenario execution ---------------------------------------------------------


def scenario_id(cfg: ScenarioConfig) -> str:
    ua = f"{cfg.ue_array[0]}x{cfg.ue_array[1]}"
    coord = "inter" if cfg.coordination_mode.value == "inter_operator" \
        else "intra"
    return (f"{cfg.pooling_mode.value}-{coord}-d{cfg.bs_density_per_op:g}"
            f"-c{cfg.carrier:g}-ue{ua}")


@dataclass
class ScenarioResult:
    """Per-UE rates of one scenario, kept per drop for paired statistics."""

    cfg: ScenarioConfig
    drop_rates: list[np.ndarray]  # indexed by drop

    @property
    def pooled(self) -> np.ndarray:
        return np.concatenate(self.drop_rates)

    def per_drop_percentile(self, p: float) -> np.ndarray:
        return np.array([percentile(r, p) for r in self.drop_rates])


def run_scenario(cfg: ScenarioConfig, jobs: int = 1,
                 progress=None) -> ScenarioResult:
    cfg = validate(cfg)
    indices = list(range(cfg.n_drops))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(zip(indices, pool.map(
                run_drop, [cfg] * len(indices), indices)))
    else:
        results = {}
        for i in indices:
            results[i] = run_drop(cfg, i)
            if progress:
                progress(cfg, i)
    return ScenarioResult(cfg=cfg, drop_rates=[results[i] for i in indices])


# Campaigns ------------------------------------------------------------------


def group_key(cfg: ScenarioConfig) -> tuple:
    """Scenarios comparable under common random numbers share this key."""
    return (cfg.region_side, cfg.n_operators, cfg.bs_density_per_op,
            cfg.ue_density_per_op, cfg.carrier, cfg.total_bandwidth,
            cfg.bs_array, cfg.ue_array, cfg.n_rf_chains_bs,
            cfg.tx_power_total, cfg.noise_figure, cfg.slots_per_drop,
            cfg.pf_window, cfg.n_drops, cfg.master_seed)


@dataclass
class PercentileGain:
    percentile: int
    baseline_bps: float
    scenario_bps: float
    gain_pct: float
    ci_pct: float  # 95% half-width on the paired per-drop gain


@dataclass
class GainReport:
    scenario: ScenarioConfig
    baseline: ScenarioConfig
    gains: dict[int, PercentileGain]
    n_drops: int


def gain_report(scenario: ScenarioResult, baseline: ScenarioResult,
                percentiles=PERCENTILES) -> GainReport:
    gains = {}
    for p in percentiles:
        base_pooled = percentile(baseline.pooled, p)
        if base_pooled <= 0:
            raise DegenerateBaseline(
                f"baseline {p}th percentile is {base_pooled}")
        scen_pooled = percentile(scenario.pooled, p)
        gain = 100.0 * (scen_pooled - base_pooled) / base_pooled
        # Paired per-drop differences, normalized by the pooled baseline
        # percentile so drops with a degenerate baseline stay finite.
        diff = (scenario.per_drop_percentile(p)
                - baseline.per_drop_percentile(p))
        ci = confidence_interval(100.0 * diff / base_pooled)
        gains[p] = PercentileGain(
            percentile=p, baseline_bps=base_pooled, scenario_bps=scen_pooled,
            gain_pct=gain, ci_pct=ci)
    return GainReport(scenario=scenario.cfg, baseline=baseline.cfg,
                      gains=gains, n_drops=scenario.cfg.n_drops)


def run_campaign(sweep: list[ScenarioConfig], jobs: int = 1,
                 progress=None) -> list[GainReport]:
    """Run every config and report gains versus its group's exclusive baseline."""
    groups: dict[tuple, list[ScenarioConfig]] = {}
    for cfg in sweep:
        groups.setdefault(group_key(cfg), []).append(cfg)
    reports: list[GainReport] = []
    for key, cfgs in groups.items():
        baselines = [c for c in cfgs
                     if c.pooling_mode is PoolingMode.EXCLUSIVE]
        if not baselines:
            raise MissingBaseline(
                f"sweep group {key} has no exclusive-pooling baseline")
        results = {id(c): run_scenario(c, jobs=jobs, progress=progress)
                   for c in cfgs}
        base = results[id(baselines[0])]
        for c in cfgs:
            reports.append(gain_report(results[id(c)], base))
    return reports


# Output files ---------------------------------------------------------------

CSV_HEADER = ("scenario_id,pooling,coordination,carrier_ghz,bs_density,"
              "ue_array,percentile,rate_bps,gain_pct,ci_pct,n_drops")


def reports_to_csv(reports: list[GainReport]) -> str:
    """Deterministic summary CSV, one row per (scenario, percentile)."""
    rows = []
    for rep in reports:
        cfg = rep.scenario
        for p in sorted(rep.gains):
            g = rep.gains[p]
            rows.append((
                scenario_id(cfg), cfg.pooling_mode.value,
                cfg.coordination_mode.value, f"{cfg.carrier:g}",
                f"{cfg.bs_density_per_op:g}",
                f"{cfg.ue_array[0]}x{cfg.ue_array[1]}", str(p),
                f"{g.scenario_bps:.6g}", f"{g.gain_pct:.6g}",
                f"{g.ci_pct:.6g}", str(rep.n_drops)))
    rows.sort()
    return "\n".join([CSV_HEADER] + [",".join(r) for r in rows]) + "\n"


def rates_to_jsonl(result: ScenarioResult) -> str:
    lines = []
    for i, rates in enumerate(result.drop_rates):
        lines.append(json.dumps(
            {"scenario_id": scenario_id(result.cfg), "drop": i,
             "rates_bps": [round(float(r), 3) for r in rates]}))
    return "\n".join(lines) + "\n"
