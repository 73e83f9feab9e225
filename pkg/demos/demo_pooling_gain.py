"""Compare exclusive vs. full spectrum pooling on paired drops.

Runs a small two-operator campaign at desk scale and prints the rate
percentiles and pooling gains the harness reports. Takes about a minute
on one core.
"""

from poolsim.config import CoordinationMode, PoolingMode, ScenarioConfig
from poolsim.harness import PERCENTILES, run_campaign


def main():
    shared = dict(
        region_side=400.0, n_operators=2, total_bandwidth=400.0,
        bs_density_per_op=75.0, ue_density_per_op=800.0,
        coordination_mode=CoordinationMode.INTRA_ONLY,
        slots_per_drop=20, n_drops=8, master_seed=11)
    sweep = [ScenarioConfig(pooling_mode=PoolingMode.EXCLUSIVE, **shared),
             ScenarioConfig(pooling_mode=PoolingMode.FULL, **shared)]

    reports = run_campaign(sweep)
    for rep in reports:
        name = rep.scenario.pooling_mode.value
        cells = []
        for p in PERCENTILES:
            g = rep.gains[p]
            cells.append(f"p{p}: {g.scenario_bps / 1e6:8.1f} Mb/s "
                         f"({g.gain_pct:+6.1f}% ± {g.ci_pct:.1f})")
        print(f"{name:9s} " + "  ".join(cells))


if __name__ == "__main__":
    main()
