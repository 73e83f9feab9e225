"""One Monte Carlo drop end to end: deploy, realize channels, simulate slots.

Seeding: every drop derives independent RNG streams from
(master_seed, drop_index) for topology and channels.  Neither depends
on the pooling regime or the coordination mode, so scenarios that
differ only in those fields see byte-identical topologies and channel
realizations (common random numbers).
"""

from __future__ import annotations

import numpy as np

from .channel import ChannelParams, realize_links
from .config import CoordinationMode, ScenarioConfig
from .context import THROUGHPUT_FLOOR, DropContext, build_context
from .deployment import TWO_PI, Topology, drop_network, pairwise_torus
from .linkbudget import rates_for_selection
from .scheduler import greedy_select, update_throughputs

_TOPO_STREAM, _CHANNEL_STREAM = 0, 1


def _stream(cfg: ScenarioConfig, drop_index: int, which: int):
    ss = np.random.SeedSequence([int(cfg.master_seed), int(drop_index), which])
    return np.random.default_rng(ss)


def drop_topology(cfg: ScenarioConfig, drop_index: int) -> Topology:
    seed = np.random.SeedSequence(
        [int(cfg.master_seed), int(drop_index), _TOPO_STREAM]
    ).generate_state(1)[0]
    return drop_network(cfg, int(seed))


def build_drop_context(cfg: ScenarioConfig, drop_index: int) -> DropContext:
    """Deploy nodes, realize all B*U links, associate, and precompute gains."""
    topo = drop_topology(cfg, drop_index)
    dist, aod_geo = pairwise_torus(topo.bs_pos, topo.ue_pos, cfg.region_side)
    aoa_geo = np.mod(aod_geo + np.pi, TWO_PI)

    params = ChannelParams.for_carrier(cfg.carrier, cfg.channel_overrides)
    rng_ch = _stream(cfg, drop_index, _CHANNEL_STREAM)
    links = realize_links(dist.ravel(), aod_geo.ravel(), aoa_geo.ravel(),
                          params, rng_ch)
    return build_context(cfg, topo, links)


def simulate_slots(ctx: DropContext, slots: int | None = None) -> np.ndarray:
    """Run the PF slot loop; per-UE long-term rate = mean rate over slots."""
    cfg = ctx.cfg
    slots = cfg.slots_per_drop if slots is None else slots
    mode = CoordinationMode(cfg.coordination_mode)
    t = np.full(ctx.n_ue, THROUGHPUT_FLOOR)
    total = np.zeros(ctx.n_ue)
    for _ in range(slots):
        sel = greedy_select(ctx, mode, t)
        rates, *_ = rates_for_selection(ctx, sel)
        total += rates
        t = update_throughputs(t, rates, cfg.pf_window)
    return total / slots


def run_drop(cfg: ScenarioConfig, drop_index: int) -> np.ndarray:
    """Per-UE long-term rates for one drop; deterministic in (cfg, drop_index)."""
    ctx = build_drop_context(cfg, drop_index)
    return simulate_slots(ctx)
