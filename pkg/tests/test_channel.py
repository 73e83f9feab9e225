import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from poolsim.channel import (ChannelParams, LinkState, gen_clusters,
                             path_loss_db, realize_link, realize_links,
                             sample_state, state_probabilities)
from poolsim.errors import StateOutage

from conftest import tiny_config


def test_state_probabilities_sum_to_one_over_distance_sweep():
    params = ChannelParams()
    d = np.linspace(0.0, 2000.0, 4001)
    p_out, p_los, p_nlos = state_probabilities(d, params)
    np.testing.assert_allclose(p_out + p_los + p_nlos, 1.0, rtol=0, atol=1e-12)
    assert np.all(p_out >= 0) and np.all(p_los >= 0) and np.all(p_nlos >= 0)


def test_outage_impossible_at_short_range():
    params = ChannelParams()
    p_out, _, _ = state_probabilities(params.b_out / params.a_out - 1.0,
                                      params)
    assert p_out == 0.0


@given(d=st.floats(0.0, 5000.0))
def test_state_probabilities_always_a_distribution(d):
    p = state_probabilities(d, ChannelParams())
    assert sum(p) == pytest.approx(1.0, abs=1e-12)
    assert all(x >= -1e-15 for x in p)


def test_carrier_parameter_selection():
    low = ChannelParams.for_carrier(32.0)
    high = ChannelParams.for_carrier(73.0)
    assert (low.alpha_nlos, low.beta_nlos) == (72.0, 2.92)
    assert (high.alpha_nlos, high.beta_nlos) == (86.6, 2.45)
    assert high.lambda_clusters == 1.9


def test_carrier_overrides_and_unknown_keys():
    p = ChannelParams.for_carrier(32.0, (("zeta_db", 2.0),))
    assert p.zeta_db == 2.0
    with pytest.raises(KeyError):
        ChannelParams.for_carrier(32.0, (("bogus", 1.0),))


def test_path_loss_formula_deterministic_part():
    params = ChannelParams()
    pl = path_loss_db(100.0, LinkState.LOS, params)
    assert pl == pytest.approx(61.4 + 2.0 * 10.0 * math.log10(100.0))
    # Distance floored at 1 m.
    assert path_loss_db(0.01, LinkState.NLOS, params) == pytest.approx(72.0)


def test_path_loss_outage_has_no_parameters():
    with pytest.raises(StateOutage):
        path_loss_db(10.0, LinkState.OUTAGE, ChannelParams())


def test_sample_state_deterministic_under_seed():
    params = ChannelParams()
    a = [sample_state(150.0, params, np.random.default_rng(s))
         for s in range(64)]
    b = [sample_state(150.0, params, np.random.default_rng(s))
         for s in range(64)]
    assert a == b
    assert len(set(a)) > 1  # mixed states at mid range


# Clusters --------------------------------------------------------------------


@given(seed=st.integers(0, 2000))
def test_cluster_fractions_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    clusters = gen_clusters(LinkState.NLOS, ChannelParams(), 0.3, 1.2, rng)
    total = sum(c.fraction for c in clusters)
    assert abs(total - 1.0) <= 1e-9
    fracs = [c.fraction for c in clusters]
    assert fracs == sorted(fracs, reverse=True)
    assert len(clusters) >= 1


def test_los_strongest_cluster_at_geometric_bearing():
    for seed in range(50):
        rng = np.random.default_rng(seed)
        clusters = gen_clusters(LinkState.LOS, ChannelParams(), 0.7, 2.1, rng)
        assert clusters[0].aod == pytest.approx(0.7)
        assert clusters[0].aoa == pytest.approx(2.1)


def test_gen_clusters_rejects_outage():
    with pytest.raises(StateOutage):
        gen_clusters(LinkState.OUTAGE, ChannelParams(), 0.0, 0.0,
                     np.random.default_rng(0))


def test_realize_link_outage_is_empty_and_infinite():
    cfg = tiny_config()
    # Far beyond the outage knee almost every link is in outage.
    hit = 0
    for seed in range(40):
        r = realize_link((0.0, 0.0), (0.0, 140.0),
                         cfg.replace(region_side=4000.0),
                         np.random.default_rng(seed))
        if r.state is LinkState.OUTAGE:
            hit += 1
            assert math.isinf(r.path_loss_db) and r.clusters == ()
    assert hit == 0  # 140 m is below the outage knee (b/a = 156 m)


# Batch realization ------------------------------------------------------------


def _batch(seed=0, n=300):
    rng = np.random.default_rng(seed)
    d = rng.uniform(5.0, 400.0, n)
    dep = rng.uniform(0.0, 2 * math.pi, n)
    arr = rng.uniform(0.0, 2 * math.pi, n)
    links = realize_links(d, dep, arr, ChannelParams(),
                          np.random.default_rng(seed + 1))
    return d, dep, arr, links


def test_batch_fractions_sum_to_one_per_link():
    _, _, _, links = _batch()
    for i in range(links.n_links):
        lo, hi = links.start[i], links.start[i + 1]
        if links.state[i] == LinkState.OUTAGE:
            assert hi == lo and math.isinf(links.path_loss_db[i])
        else:
            assert abs(links.frac[lo:hi].sum() - 1.0) <= 1e-9
            assert np.all(np.diff(links.frac[lo:hi]) <= 1e-12)


def test_batch_los_first_cluster_geometric():
    d, dep, arr, links = _batch(seed=3)
    los = np.nonzero(links.state == LinkState.LOS)[0]
    assert los.size > 0
    for i in los:
        lo = links.start[i]
        assert links.aod[lo] == pytest.approx(dep[i])
        assert links.aoa[lo] == pytest.approx(arr[i])
        assert links.eod_off[lo] == 0.0 and links.eoa_off[lo] == 0.0


def test_batch_is_deterministic():
    _, _, _, a = _batch(seed=9)
    _, _, _, b = _batch(seed=9)
    assert np.array_equal(a.state, b.state)
    assert np.array_equal(a.path_loss_db, b.path_loss_db)
    assert np.array_equal(a.frac, b.frac)


def test_batch_realization_view_matches_arrays():
    _, _, _, links = _batch(seed=4)
    i = int(np.nonzero(links.state != LinkState.OUTAGE)[0][0])
    r = links.realization(i)
    lo, hi = links.start[i], links.start[i + 1]
    assert len(r.clusters) == hi - lo
    assert r.clusters[0].fraction == pytest.approx(links.frac[lo])
    assert r.path_loss_db == pytest.approx(links.path_loss_db[i])
