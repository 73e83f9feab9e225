import pytest

from poolsim.config import CoordinationMode, PoolingMode, validate
from poolsim.harness import group_key
from poolsim.presets import PRESET_NAMES, describe_preset, expand_preset

from conftest import tiny_config


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_expand_to_valid_configs(name):
    for cfg in expand_preset(name):
        validate(cfg)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_every_group_has_exclusive_baseline(name):
    groups = {}
    for cfg in expand_preset(name):
        groups.setdefault(group_key(cfg), []).append(cfg)
    for cfgs in groups.values():
        assert any(c.pooling_mode is PoolingMode.EXCLUSIVE for c in cfgs)


def test_fig1_matrices():
    a = expand_preset("fig1a")
    assert [c.pooling_mode for c in a] == [
        PoolingMode.EXCLUSIVE, PoolingMode.PARTIAL, PoolingMode.FULL]
    assert all(c.carrier == 32.0 and c.bs_density_per_op == 100.0
               and c.ue_array == (4, 4) for c in a)
    b = expand_preset("fig1b")
    assert all(c.ue_array == (1, 1) for c in b)


@pytest.mark.parametrize("name,carrier,bs,ue", [
    ("fig2a", 32.0, (32, 32), (4, 4)),
    ("fig2b", 73.0, (64, 64), (8, 8)),
])
def test_fig2_matrices(name, carrier, bs, ue):
    cfgs = expand_preset(name)
    assert len(cfgs) == 6  # 2 densities x (exclusive, full-intra, full-inter)
    assert {c.bs_density_per_op for c in cfgs} == {50.0, 200.0}
    assert all(c.carrier == carrier and c.bs_array == bs
               and c.ue_array == ue for c in cfgs)
    inter = [c for c in cfgs
             if c.coordination_mode is CoordinationMode.INTER_OPERATOR]
    assert len(inter) == 2
    assert all(c.pooling_mode is PoolingMode.FULL for c in inter)


def test_preset_respects_base_overrides():
    base = tiny_config()
    for cfg in expand_preset("fig2a", base):
        assert cfg.region_side == 300.0
        assert cfg.n_drops == base.n_drops


def test_unknown_preset_raises():
    with pytest.raises(KeyError):
        expand_preset("fig9z")


def test_describe_preset_mentions_scenarios():
    text = describe_preset("fig1a")
    assert "fig1a:" in text and "partial" in text and "full" in text
