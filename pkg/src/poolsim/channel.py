"""Long-term mmWave link model: LOS/NLOS/outage state, path loss, clusters.

Each (BS, UE) link gets a state drawn from distance-dependent
probabilities, a lognormally shadowed path loss, and a small set of
propagation clusters (power fraction + departure/arrival azimuth).
Everything is long-term: one realization holds for a whole drop.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .deployment import TWO_PI, bearing, torus_distance
from .errors import StateOutage


class LinkState(enum.IntEnum):
    LOS = 0
    NLOS = 1
    OUTAGE = 2


class Cluster(NamedTuple):
    fraction: float
    aod: float  # departure azimuth at the BS, radians
    aoa: float  # arrival azimuth at the UE, radians


@dataclass(frozen=True)
class ChannelParams:
    """Blockage, path-loss and cluster statistics for one carrier."""

    a_out: float = 1.0 / 30.0      # 1/m, outage growth rate
    b_out: float = 5.2             # outage offset (outage impossible below b/a)
    a_los: float = 1.0 / 67.1      # 1/m, LOS decay rate
    alpha_los: float = 61.4        # dB
    beta_los: float = 2.0
    sigma_los: float = 5.8         # dB
    alpha_nlos: float = 72.0       # dB
    beta_nlos: float = 2.92
    sigma_nlos: float = 8.7        # dB
    lambda_clusters: float = 1.8   # mean cluster count before max(1, .)
    r_tau: float = 2.8             # cluster power decay exponent
    zeta_db: float = 4.0           # cluster power lognormal spread, dB
    elev_spread_deg: float = 30.0  # per-cluster elevation offset std, degrees

    @classmethod
    def for_carrier(cls, carrier_ghz: float,
                    overrides=()) -> "ChannelParams":
        """Default parameter set for the carrier, with optional overrides.

        Below 50 GHz the 28/32 GHz measurement fits apply; at and above
        50 GHz the 73 GHz fits do.
        """
        if carrier_ghz < 50.0:
            base = cls()
        else:
            base = cls(alpha_los=69.8, beta_los=2.0, sigma_los=5.8,
                       alpha_nlos=86.6, beta_nlos=2.45, sigma_nlos=8.0,
                       lambda_clusters=1.9)
        ov = dict(overrides)
        if ov:
            base = dataclass_replace(base, ov)
        return base

    def for_state(self, state: LinkState):
        """(alpha, beta, sigma) triple for a non-outage state."""
        if state == LinkState.LOS:
            return self.alpha_los, self.beta_los, self.sigma_los
        if state == LinkState.NLOS:
            return self.alpha_nlos, self.beta_nlos, self.sigma_nlos
        raise StateOutage("no path-loss parameters for an outage link")


def dataclass_replace(params: ChannelParams, overrides: dict) -> ChannelParams:
    import dataclasses
    known = {f.name for f in dataclasses.fields(ChannelParams)}
    bad = set(overrides) - known
    if bad:
        raise KeyError(f"unknown channel parameter(s): {sorted(bad)}")
    return dataclasses.replace(params, **overrides)


@dataclass(frozen=True)
class ChannelRealization:
    state: LinkState
    path_loss_db: float  # +inf for outage
    clusters: tuple[Cluster, ...]  # empty iff outage


# State model ---------------------------------------------------------------


def state_probabilities(d, params: ChannelParams):
    """(p_out, p_los, p_nlos) at distance d (meters); sums exactly to 1."""
    d = np.asarray(d, dtype=float)
    p_out = np.clip(1.0 - np.exp(-params.a_out * d + params.b_out), 0.0, 1.0)
    p_los = (1.0 - p_out) * np.exp(-params.a_los * d)
    p_nlos = 1.0 - p_out - p_los
    return p_out, p_los, p_nlos


def sample_state(d: float, params: ChannelParams,
                 rng: np.random.Generator) -> LinkState:
    p_out, p_los, _ = state_probabilities(d, params)
    u = rng.random()
    if u < p_out:
        return LinkState.OUTAGE
    if u < p_out + p_los:
        return LinkState.LOS
    return LinkState.NLOS


# Path loss -----------------------------------------------------------------


def path_loss_db(d: float, state: LinkState, params: ChannelParams,
                 rng: np.random.Generator | None = None) -> float:
    """alpha + beta * 10 log10(d) + lognormal shadowing; d floored at 1 m."""
    alpha, beta, sigma = params.for_state(state)
    pl = alpha + beta * 10.0 * math.log10(max(d, 1.0))
    if rng is not None:
        pl += sigma * rng.standard_normal()
    return pl


# Clusters ------------------------------------------------------------------


def _raw_cluster_powers(k: int, params: ChannelParams,
                        rng: np.random.Generator) -> np.ndarray:
    u = rng.random(k)
    z = rng.normal(0.0, params.zeta_db, k)
    return u ** (params.r_tau - 1.0) * 10.0 ** (-0.1 * z)


def gen_clusters(state: LinkState, params: ChannelParams,
                 geometric_bearing_dep: float, geometric_bearing_arr: float,
                 rng: np.random.Generator) -> tuple[Cluster, ...]:
    """Sample the cluster set of a non-outage link.

    Power fractions are sorted descending and normalized to sum 1; in
    the LOS state the strongest cluster sits at the geometric bearings.
    """
    if state == LinkState.OUTAGE:
        raise StateOutage("outage links carry no clusters")
    k = max(1, int(rng.poisson(params.lambda_clusters)))
    raw = _raw_cluster_powers(k, params, rng)
    aod = rng.uniform(0.0, TWO_PI, k)
    aoa = rng.uniform(0.0, TWO_PI, k)
    order = np.argsort(-raw, kind="stable")
    frac = raw[order] / raw.sum()
    aod, aoa = aod[order], aoa[order]
    if state == LinkState.LOS:
        aod[0] = geometric_bearing_dep
        aoa[0] = geometric_bearing_arr
    return tuple(Cluster(float(f), float(d_), float(a_))
                 for f, d_, a_ in zip(frac, aod, aoa))


OUTAGE_REALIZATION = ChannelRealization(
    state=LinkState.OUTAGE, path_loss_db=math.inf, clusters=())


def realize_link(bs, ue, cfg, rng: np.random.Generator) -> ChannelRealization:
    """Full long-term realization of one BS -> UE link."""
    params = ChannelParams.for_carrier(cfg.carrier, cfg.channel_overrides)
    d = torus_distance(bs, ue, cfg.region_side)
    state = sample_state(d, params, rng)
    if state == LinkState.OUTAGE:
        return OUTAGE_REALIZATION
    pl = path_loss_db(d, state, params, rng)
    if d > 0:
        dep = bearing(bs, ue, cfg.region_side)
        arr = bearing(ue, bs, cfg.region_side)
    else:
        dep, arr = 0.0, math.pi
    clusters = gen_clusters(state, params, dep, arr, rng)
    return ChannelRealization(state=state, path_loss_db=pl, clusters=clusters)


# Vectorized batch realization (the per-drop fast path) ----------------------


@dataclass
class LinkSet:
    """Struct-of-arrays channel realizations for n links.

    Clusters are stored flat; link i owns entries
    ``start[i]:start[i+1]``.  Outage links own zero entries and carry
    +inf path loss.
    """

    state: np.ndarray          # (n,) LinkState values
    path_loss_db: np.ndarray   # (n,)
    start: np.ndarray          # (n+1,) cluster offsets
    frac: np.ndarray           # (m,) sorted descending within each link
    aod: np.ndarray            # (m,)
    aoa: np.ndarray            # (m,)
    eod_off: np.ndarray = None  # (m,) departure elevation offsets, radians
    eoa_off: np.ndarray = None  # (m,) arrival elevation offsets, radians

    def __post_init__(self):
        if self.eod_off is None:
            self.eod_off = np.zeros_like(self.frac)
        if self.eoa_off is None:
            self.eoa_off = np.zeros_like(self.frac)

    @property
    def n_links(self) -> int:
        return self.state.shape[0]

    def realization(self, i: int) -> ChannelRealization:
        if self.state[i] == LinkState.OUTAGE:
            return OUTAGE_REALIZATION
        lo, hi = self.start[i], self.start[i + 1]
        clusters = tuple(
            Cluster(float(f), float(d), float(a))
            for f, d, a in zip(self.frac[lo:hi], self.aod[lo:hi],
                               self.aoa[lo:hi]))
        return ChannelRealization(state=LinkState(int(self.state[i])),
                                  path_loss_db=float(self.path_loss_db[i]),
                                  clusters=clusters)


def realize_links(d: np.ndarray, dep_geo: np.ndarray, arr_geo: np.ndarray,
                  params: ChannelParams, rng: np.random.Generator) -> LinkSet:
    """Batch realization of n links given distances and geometric bearings.

    Applies the same per-link model as realize_link; the draw order is
    phase-major (all states, all shadowing, ...) so the whole batch is a
    deterministic function of the rng stream alone.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    p_out, p_los, _ = state_probabilities(d, params)
    u = rng.random(n)
    state = np.full(n, LinkState.NLOS, dtype=np.int8)
    state[u < p_out + p_los] = LinkState.LOS
    state[u < p_out] = LinkState.OUTAGE
    los = state == LinkState.LOS
    out = state == LinkState.OUTAGE

    z = rng.standard_normal(n)
    alpha = np.where(los, params.alpha_los, params.alpha_nlos)
    beta = np.where(los, params.beta_los, params.beta_nlos)
    sigma = np.where(los, params.sigma_los, params.sigma_nlos)
    pl = alpha + beta * 10.0 * np.log10(np.maximum(d, 1.0)) + sigma * z
    pl[out] = np.inf

    k = np.maximum(1, rng.poisson(params.lambda_clusters, n))
    k[out] = 0
    start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(k, out=start[1:])
    m = int(start[-1])

    u_pow = rng.random(m)
    z_pow = rng.normal(0.0, params.zeta_db, m)
    raw = u_pow ** (params.r_tau - 1.0) * 10.0 ** (-0.1 * z_pow)
    aod = rng.uniform(0.0, TWO_PI, m)
    aoa = rng.uniform(0.0, TWO_PI, m)
    sigma_el = math.radians(params.elev_spread_deg)
    eod_off = rng.normal(0.0, sigma_el, m)
    eoa_off = rng.normal(0.0, sigma_el, m)

    link_id = np.repeat(np.arange(n), k)
    order = np.lexsort((-raw, link_id))
    raw, aod, aoa = raw[order], aod[order], aoa[order]
    eod_off, eoa_off = eod_off[order], eoa_off[order]
    totals = np.add.reduceat(raw, start[:-1][k > 0])
    norm = np.zeros(n)
    norm[k > 0] = totals
    frac = raw / np.repeat(norm, k)

    first = start[:-1][los & (k > 0)]
    aod[first] = np.asarray(dep_geo, dtype=float)[los & (k > 0)]
    aoa[first] = np.asarray(arr_geo, dtype=float)[los & (k > 0)]
    eod_off[first] = 0.0
    eoa_off[first] = 0.0

    return LinkSet(state=state, path_loss_db=pl, start=start,
                   frac=frac, aod=aod, aoa=aoa,
                   eod_off=eod_off, eoa_off=eoa_off)
