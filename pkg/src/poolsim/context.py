"""Per-drop working state: association, beam gains, interference matrix.

A DropContext condenses one drop's topology and channel realizations
into the arrays the scheduler and link budget operate on:

* ``sg[u]``    unit-power serving gain over path loss for UE u,
* ``cg[v, u]`` unit-power interference gain at victim u when the
  assignment serving UE v is active (v's serving BS transmitting on
  v's beam, u listening on its own fixed beam),
* per-UE noise and bandwidth from the band plan.

Gains are "unit power": multiply by the per-beam transmit power in mW
to get received power in mW.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antenna import ArrayGeometry, ula_gain_u, upa_gain_vec
from .channel import LinkSet, LinkState
from .config import BandPlan, ScenarioConfig, band_plan
from .deployment import Topology
from .linkbudget import db_to_lin, noise_power_dbm

THROUGHPUT_FLOOR = 1.0  # bit/s; keeps ln(T) and PF ratios finite

# Serving-BS choices per UE: the scheduler may serve a UE from any of
# its N_SERVING_CHOICES strongest own-operator BSs, each paired with
# the link's N_BEAM_CHOICES strongest clusters.
N_SERVING_CHOICES = 4
N_BEAM_CHOICES = 2


@dataclass
class DropContext:
    cfg: ScenarioConfig
    plan: BandPlan
    topo: Topology
    assoc: np.ndarray        # (U,) associated BS id, -1 if unserved
    served: np.ndarray       # (U,) bool
    cand_bs: np.ndarray      # (M,) candidate's serving BS id, -1 unserved
    sg: np.ndarray           # (M,) serving gain / path loss per candidate
    cg: np.ndarray           # (M, M) interference gain, aggressor x victim
    ue_beam_az: np.ndarray   # (M,) UE beam steering azimuth per candidate
    bs_steer_az: np.ndarray  # (M,) BS beam azimuth per candidate
    bw_hz: np.ndarray        # (U,)
    noise_lin_mw: np.ndarray  # (U,)
    mask_intra: np.ndarray   # (U, U) same-operator indicator
    mask_inter: np.ndarray   # (U, U) band-overlap indicator
    links: LinkSet = field(repr=False, default=None)

    # Candidate layout: each served UE has
    # N_SERVING_CHOICES * N_BEAM_CHOICES (BS, beam) candidates;
    # candidate id k = ue * n_choices + choice.

    @property
    def n_ue(self) -> int:
        return self.assoc.shape[0]

    @property
    def n_cand(self) -> int:
        return self.sg.shape[0]

    @property
    def cand_ue(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_ue), self.n_cand // self.n_ue)

    @property
    def n_bs(self) -> int:
        return self.topo.bs_pos.shape[0]

    @property
    def tx_lin_mw(self) -> float:
        return float(db_to_lin(self.cfg.tx_power_total))

    @property
    def cap_lin(self):
        if self.cfg.sinr_cap_db is None:
            return None
        return float(db_to_lin(self.cfg.sinr_cap_db))

    @property
    def beta(self) -> float:
        return self.cfg.pf_window


def _top_cluster_angles(links: LinkSet):
    """Per-link angles of the two strongest clusters (fractions are sorted
    descending); links with a single cluster repeat it for both choices."""
    n = links.n_links
    shape = (n, N_BEAM_CHOICES)
    aod = np.zeros(shape)
    aoa = np.zeros(shape)
    eod = np.zeros(shape)
    eoa = np.zeros(shape)
    counts = links.start[1:] - links.start[:-1]
    has = counts > 0
    for c in range(N_BEAM_CHOICES):
        idx = links.start[:-1] + np.minimum(c, np.maximum(counts - 1, 0))
        sel = idx[has]
        aod[has, c] = links.aod[sel]
        aoa[has, c] = links.aoa[sel]
        eod[has, c] = links.eod_off[sel]
        eoa[has, c] = links.eoa_off[sel]
    return aod, aoa, eod, eoa, has


def _associate(rsrp: np.ndarray, topo: Topology, cfg: ScenarioConfig):
    """Pick a serving BS per UE from the (B, U) own-operator RSRP map.

    Policy "max_rsrp": plain argmax (ties -> lowest BS id); UEs with no
    positive RSRP stay unserved (-1).  Policy "balanced" (default):
    each operator's BSs take at most
    ``max(n_rf_chains_bs, ceil(ue_count / bs_count))`` UEs and UEs
    claim slots in descending best-RSRP order, falling back to the
    strongest BS that still has room; a UE whose reachable BSs are all
    full keeps its max-RSRP server.
    """
    n_bs, n_ue = rsrp.shape
    assoc = np.argmax(rsrp, axis=0).astype(np.int64)
    best = rsrp[assoc, np.arange(n_ue)]
    assoc[best <= 0.0] = -1
    if cfg.association == "max_rsrp":
        return assoc
    cap = np.zeros(n_bs, dtype=np.int64)
    for op in range(cfg.n_operators):
        bs_ids = np.nonzero(topo.bs_op == op)[0]
        if bs_ids.size == 0:
            continue
        ue_ct = int((topo.ue_op == op).sum())
        cap[bs_ids] = max(cfg.n_rf_chains_bs, -(-ue_ct // bs_ids.size))
    load = np.zeros(n_bs, dtype=np.int64)
    out = np.full(n_ue, -1, dtype=np.int64)
    for u in np.argsort(-best, kind="stable"):
        if best[u] <= 0.0:
            continue
        for b in np.argsort(-rsrp[:, u], kind="stable"):
            if rsrp[b, u] <= 0.0:
                out[u] = assoc[u]
                break
            if load[b] < cap[b]:
                out[u] = b
                load[b] += 1
                break
        else:
            out[u] = assoc[u]
    return out


def build_context(cfg: ScenarioConfig, topo: Topology,
                  links: LinkSet) -> DropContext:
    """Associate UEs, fix beams, and precompute all slot-invariant gains.

    ``links`` holds the B*U link realizations in BS-major order
    (link index = b * U + u).  Interference paths pick up the vertical
    array factor of both arrays (each steered in elevation at the
    cluster it serves), so a beam aimed along one cluster is attenuated
    toward clusters at a different elevation.  Serving paths are
    elevation-aligned by construction and keep the full ``rows``
    factor.
    """
    plan = band_plan(cfg.pooling_mode, cfg.total_bandwidth, cfg.n_operators)
    n_bs, n_ue = topo.n_bs, topo.n_ue
    bs_rows, bs_cols = cfg.bs_array
    ue_rows, ue_cols = cfg.ue_array

    pl_lin = db_to_lin(links.path_loss_db).reshape(n_bs, n_ue)
    aod_c, aoa_c, eod_c, eoa_c, has = _top_cluster_angles(links)

    # Per-cluster steering tables: entries 0 and 1 aim both ends of a
    # link at its two strongest clusters, in azimuth and in elevation
    # (sine space).
    steer_aod = [aod_c[:, 0], aod_c[:, 1]]
    steer_aoa = [aoa_c[:, 0], aoa_c[:, 1]]
    steer_ubs = [np.sin(eod_c[:, 0]), np.sin(eod_c[:, 1])]
    steer_uue = [np.sin(eoa_c[:, 0]), np.sin(eoa_c[:, 1])]
    n_clusters = len(steer_aod)

    counts = (links.start[1:] - links.start[:-1])
    link_of_entry = np.repeat(np.arange(links.n_links), counts)
    u_of_entry = link_of_entry % n_ue
    u_bs_ent = np.sin(links.eod_off)
    u_ue_ent = np.sin(links.eoa_off)

    # Effective gain per (link, cluster choice), summed over the link's
    # clusters.
    g_eff = np.zeros((links.n_links, n_clusters))
    for c in range(n_clusters):
        g_bs = upa_gain_vec(bs_rows, bs_cols,
                            steer_aod[c][link_of_entry], links.aod)
        g_ue = upa_gain_vec(ue_rows, ue_cols,
                            steer_aoa[c][link_of_entry], links.aoa)
        w = links.frac * g_bs * g_ue
        w = w * (ula_gain_u(bs_rows, steer_ubs[c][link_of_entry],
                            u_bs_ent) / bs_rows)
        w = w * (ula_gain_u(ue_rows, steer_uue[c][link_of_entry],
                            u_ue_ent) / ue_rows)
        np.add.at(g_eff[:, c], link_of_entry, w)

    # Association among own-operator BSs on strongest-beam RSRP.
    with np.errstate(divide="ignore", invalid="ignore"):
        rsrp = (g_eff[:, 0].reshape(n_bs, n_ue) / pl_lin)
    rsrp = np.nan_to_num(rsrp, nan=0.0, posinf=0.0)
    own = topo.bs_op[:, None] == topo.ue_op[None, :]
    rsrp = np.where(own, rsrp, 0.0)
    assoc = _associate(rsrp, topo, cfg)
    served = assoc >= 0

    # Candidate serving BSs per UE: the associated BS and the next-best
    # own-operator BS (falling back to the associated one when there is
    # no second reachable BS).  Each pairs with the link's two strongest
    # clusters, so every UE carries four (BS, beam) candidates the
    # scheduler can pick from.
    uu = np.arange(n_ue)
    n_serv = N_SERVING_CHOICES
    alt = [np.maximum(assoc, 0)]
    r2 = rsrp.copy()
    r2[alt[0], uu] = 0.0
    for _ in range(n_serv - 1):
        bsn = np.argmax(r2, axis=0).astype(np.int64)
        hasn = r2[bsn, uu] > 0.0
        bsn = np.where(hasn, bsn, alt[-1])
        alt.append(bsn)
        r2[bsn, uu] = 0.0

    cand_bs_u = np.stack([a for a in alt for _ in range(2)],
                         axis=1)                    # (U, 2 * n_serv)
    cand_cl = (0, 1) * n_serv
    n_choices = len(cand_cl)
    n_cand = n_ue * n_choices
    cand_bs = np.where(served[:, None], cand_bs_u, -1).ravel()

    ue_beam_az = np.zeros(n_cand)
    bs_steer_az = np.zeros(n_cand)
    sg = np.zeros(n_cand)
    ue_steer_uel = np.zeros(n_cand)
    bs_steer_uel = np.zeros(n_cand)
    for c in range(n_choices):
        kk = uu * n_choices + c
        cl = cand_cl[c]
        li = cand_bs_u[:, c] * n_ue + uu
        ue_beam_az[kk] = np.where(served, steer_aoa[cl][li], 0.0)
        bs_steer_az[kk] = np.where(served, steer_aod[cl][li], 0.0)
        with np.errstate(divide="ignore"):
            inv_pl = np.where(served,
                              1.0 / pl_lin[cand_bs_u[:, c], uu], 0.0)
        sg[kk] = g_eff[li, cl] * np.nan_to_num(inv_pl, posinf=0.0)
        ue_steer_uel[kk] = np.where(served, steer_uue[cl][li], 0.0)
        bs_steer_uel[kk] = np.where(served, steer_ubs[cl][li], 0.0)

    # Interference gain matrix cg[aggressor candidate, victim candidate].
    cg = np.zeros((n_cand, n_cand))
    start = links.start
    for b in range(n_bs):
        agg_cands = np.nonzero(cand_bs == b)[0]
        lo, hi = start[b * n_ue], start[(b + 1) * n_ue]
        if hi == lo or agg_cands.size == 0:
            continue
        e_ue = u_of_entry[lo:hi]
        frac = links.frac[lo:hi]
        aod_e = links.aod[lo:hi]
        aoa_e = links.aoa[lo:hi]
        pl_e = pl_lin[b, e_ue]
        base = np.where(served[e_ue], frac / pl_e, 0.0)
        obs_bs = u_bs_ent[lo:hi]
        obs_ue = u_ue_ent[lo:hi]
        # Receive factor at each victim for each of its beam choices.
        g_rx = []
        for cv in range(n_choices):
            kv = e_ue * n_choices + cv
            g = upa_gain_vec(ue_rows, ue_cols, ue_beam_az[kv], aoa_e)
            g = g * (ula_gain_u(ue_rows, ue_steer_uel[kv], obs_ue)
                     / ue_rows)
            g_rx.append(base * g)
        for ka in agg_cands:
            g_bs = upa_gain_vec(bs_rows, bs_cols, bs_steer_az[ka], aod_e)
            g_bs = g_bs * (ula_gain_u(bs_rows, bs_steer_uel[ka],
                                      obs_bs) / bs_rows)
            for cv in range(n_choices):
                cg[ka, cv::n_choices] += np.bincount(
                    e_ue, weights=g_rx[cv] * g_bs, minlength=n_ue)
    # A beam never interferes with its own UE, whichever choices are
    # involved.
    diag = np.arange(n_ue) * n_choices
    for ca in range(n_choices):
        for cv in range(n_choices):
            cg[diag + ca, diag + cv] = 0.0
    cg[:, np.repeat(~served, n_choices)] = 0.0

    widths_mhz = np.array([plan.width(op) for op in range(cfg.n_operators)])
    bw_hz = widths_mhz[topo.ue_op] * 1e6
    noise_lin = db_to_lin(np.array([
        noise_power_dbm(w * 1e6, cfg.noise_figure) for w in widths_mhz]))
    noise_lin_mw = noise_lin[topo.ue_op]

    overlap = np.array(plan.overlap_matrix(), dtype=bool)
    mask_intra = topo.ue_op[:, None] == topo.ue_op[None, :]
    mask_inter = overlap[np.ix_(topo.ue_op, topo.ue_op)]

    return DropContext(
        cfg=cfg, plan=plan, topo=topo, assoc=assoc, served=served,
        cand_bs=cand_bs,
        sg=sg, cg=cg, ue_beam_az=ue_beam_az, bs_steer_az=bs_steer_az,
        bw_hz=bw_hz, noise_lin_mw=noise_lin_mw,
        mask_intra=mask_intra, mask_inter=mask_inter, links=links,
    )


def linkset_from_realizations(realizations, n_bs: int, n_ue: int) -> LinkSet:
    """Assemble a LinkSet from per-link ChannelRealization objects.

    ``realizations`` maps (bs, ue) to a ChannelRealization; missing
    pairs are treated as outage.  Intended for hand-built test
    instances.
    """
    import math as _math
    n = n_bs * n_ue
    state = np.full(n, LinkState.OUTAGE, dtype=np.int8)
    pl = np.full(n, _math.inf)
    counts = np.zeros(n, dtype=np.int64)
    frac, aod, aoa = [], [], []
    for b in range(n_bs):
        for u in range(n_ue):
            r = realizations.get((b, u))
            if r is None or r.state == LinkState.OUTAGE:
                continue
            i = b * n_ue + u
            state[i] = r.state
            pl[i] = r.path_loss_db
            counts[i] = len(r.clusters)
            for c in r.clusters:
                frac.append(c.fraction)
                aod.append(c.aod)
                aoa.append(c.aoa)
    start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=start[1:])
    return LinkSet(state=state, path_loss_db=pl, start=start,
                   frac=np.array(frac), aod=np.array(aod),
                   aoa=np.array(aoa))
