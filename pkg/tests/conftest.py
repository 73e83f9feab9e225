"""Shared fixtures: small scenarios that run in well under a second."""

import pytest

from poolsim import engine
from poolsim.config import CoordinationMode, PoolingMode, ScenarioConfig


def tiny_config(**kw) -> ScenarioConfig:
    """A 2-operator desk scenario small enough for per-test simulation."""
    base = dict(
        region_side=300.0,
        n_operators=2,
        bs_density_per_op=45.0,   # ~4 BSs per operator
        ue_density_per_op=90.0,   # ~8 UEs per operator
        total_bandwidth=200.0,
        slots_per_drop=4,
        n_drops=3,
        master_seed=7,
    )
    base.update(kw)
    return ScenarioConfig(**base)


@pytest.fixture(scope="session")
def tiny_full_ctx():
    """One built drop context: full pooling, intra-only coordination."""
    cfg = tiny_config(pooling_mode=PoolingMode.FULL,
                      coordination_mode=CoordinationMode.INTRA_ONLY)
    return engine.build_drop_context(cfg, 0)


@pytest.fixture(scope="session")
def tiny_exclusive_ctx():
    cfg = tiny_config(pooling_mode=PoolingMode.EXCLUSIVE,
                      coordination_mode=CoordinationMode.INTRA_ONLY)
    return engine.build_drop_context(cfg, 0)
