"""Walk through one Monte Carlo drop and inspect a scheduled UE.

Builds a small full-pooling scenario, runs one slot of the greedy PF
coordinator, and prints the link budget of the first scheduled UE.
"""

import numpy as np

from poolsim import engine
from poolsim.config import CoordinationMode, PoolingMode, ScenarioConfig
from poolsim.linkbudget import sinr_report
from poolsim.scheduler import greedy_select, schedule_slot


def main():
    cfg = ScenarioConfig(
        region_side=400.0, n_operators=2, total_bandwidth=400.0,
        bs_density_per_op=50.0, ue_density_per_op=150.0,
        pooling_mode=PoolingMode.FULL,
        coordination_mode=CoordinationMode.INTRA_ONLY,
        slots_per_drop=10, n_drops=1, master_seed=42)

    ctx = engine.build_drop_context(cfg, drop_index=0)
    print(f"topology: {ctx.n_bs} BSs, {ctx.n_ue} UEs, "
          f"{int(ctx.served.sum())} served")

    throughputs = np.full(ctx.n_ue, 1.0)
    sched = schedule_slot(ctx, cfg.coordination_mode, throughputs)
    print(f"slot schedule: {len(sched)} simultaneous beams")

    sel = greedy_select(ctx, cfg.coordination_mode, throughputs)
    rep = sinr_report(int(sched.assignments[0].ue), ctx, sel)
    print(f"UE {rep.ue}: signal {rep.signal_dbm:.1f} dBm, "
          f"noise {rep.noise_dbm:.1f} dBm, SINR {rep.sinr_db:.1f} dB, "
          f"rate {rep.rate_bps / 1e6:.1f} Mb/s")

    rates = engine.simulate_slots(ctx)
    print(f"drop complete: median long-term rate "
          f"{np.median(rates[rates > 0]) / 1e6:.1f} Mb/s, "
          f"5th percentile {np.percentile(rates, 5) / 1e6:.1f} Mb/s")


if __name__ == "__main__":
    main()
