"""Proportional-fair user selection and beam assignment.

Each slot a greedy optimizer adds (BS, UE, beam) assignments one at a
time, always taking the candidate with the largest marginal gain of the
predicted PF objective sum(ln((1-beta) T_u + beta r_hat_u)), and stops
when no candidate improves it.  The marginal gain accounts both for the
candidate's own term and for the rate loss its beam inflicts on
already-selected assignments, so a beam whose interference costs more
than it contributes is muted.

Coordination modes differ only in interference visibility: with
intra-operator coordination each operator's optimizer sees only its own
selections (cross-operator interference still hits the realized rates);
with inter-operator coordination a single optimizer spans every group
of operators whose bands overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .antenna import Beam
from .config import CoordinationMode
from .context import THROUGHPUT_FLOOR, DropContext
from .linkbudget import lin_to_db, selection_powers

_INV_LN2 = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class BeamAssignment:
    bs: int
    ue: int
    bs_beam: Beam
    ue_beam: Beam
    power_dbm: float


@dataclass(frozen=True)
class SlotSchedule:
    assignments: tuple[BeamAssignment, ...]

    @property
    def ues(self) -> np.ndarray:
        return np.array([a.ue for a in self.assignments], dtype=np.int64)

    def __len__(self):
        return len(self.assignments)


def pf_objective(throughputs) -> float:
    """sum_u ln(T_u); throughputs must be strictly positive."""
    t = np.asarray(throughputs, dtype=float)
    if np.any(t <= 0):
        raise ValueError("PF objective needs strictly positive throughputs")
    return float(np.log(t).sum())


def update_throughputs(throughputs, rates, pf_window: float,
                       floor: float = THROUGHPUT_FLOOR) -> np.ndarray:
    """EWMA throughput update, clamped at the floor; unscheduled rates are 0."""
    if not (0.0 < pf_window <= 1.0):
        raise ValueError("pf_window must be in (0, 1]")
    t = np.asarray(throughputs, dtype=float)
    r = np.asarray(rates, dtype=float)
    return np.maximum(floor, (1.0 - pf_window) * t + pf_window * r)


def _operator_groups(ctx: DropContext, mode: CoordinationMode):
    """Operator sets the optimizer spans: singletons for intra-operator
    coordination, connected components of the band-overlap graph otherwise."""
    n_op = ctx.cfg.n_operators
    if mode is CoordinationMode.INTRA_ONLY:
        return [[op] for op in range(n_op)]
    overlap = np.array(ctx.plan.overlap_matrix(), dtype=bool)
    seen, groups = set(), []
    for op in range(n_op):
        if op in seen:
            continue
        comp, frontier = {op}, [op]
        while frontier:
            cur = frontier.pop()
            for other in range(n_op):
                if other not in comp and overlap[cur, other]:
                    comp.add(other)
                    frontier.append(other)
        seen |= comp
        groups.append(sorted(comp))
    return groups


def _greedy_cache(ctx: DropContext, mode: CoordinationMode):
    """Slot-invariant greedy inputs, cached per coordination mode."""
    cache = getattr(ctx, "_greedy_cache", None)
    if cache is None:
        cache = {}
        ctx._greedy_cache = cache
    if mode in cache:
        return cache[mode]
    p_prov = ctx.tx_lin_mw / ctx.cfg.n_rf_chains_bs
    visible = ctx.mask_intra if mode is CoordinationMode.INTRA_ONLY \
        else ctx.mask_inter
    n_choices = ctx.n_cand // ctx.n_ue
    groups = []
    for ops in _operator_groups(ctx, mode):
        m_ues = np.nonzero(ctx.served & np.isin(ctx.topo.ue_op, ops))[0]
        if m_ues.size == 0:
            continue
        # Candidate ids of every beam choice of every member UE.
        members = (m_ues[:, None] * n_choices
                   + np.arange(n_choices)).ravel()
        ue_of = np.repeat(m_ues, n_choices)
        groups.append({
            "cands": members,
            "ue_of": ue_of,
            "c_pw": (p_prov * ctx.cg[np.ix_(members, members)]
                     * visible[np.ix_(ue_of, ue_of)]),
            "s_pw": p_prov * ctx.sg[members],
            "noise": ctx.noise_lin_mw[ue_of],
            "bw": ctx.bw_hz[ue_of],
            "assoc": ctx.cand_bs[members],
        })
    cache[mode] = groups
    return groups


@numba.njit(cache=True, fastmath=False)
def _greedy_kernel(c_pw, s_pw, noise, bw, th, base, beta, cap,
                   assoc, ue_of, n_rf, sel):  # pragma: no cover - compiled
    """Greedy add loop plus prune pass over one visibility group.

    Returns the number of selections written to ``sel`` (local candidate
    indices, in pick order).  ``cap`` is the linear SINR cap (inf for
    uncapped).  Ties in the marginal gain resolve to the lowest index.
    """
    inv_ln2 = 1.0 / np.log(2.0)
    m = s_pw.size
    cand_mask = np.ones(m, np.bool_)
    interference = np.zeros(m)
    n_bs = 0
    for c in range(m):
        if assoc[c] + 1 > n_bs:
            n_bs = assoc[c] + 1
    rf_used = np.zeros(n_bs, np.int64)
    sel_terms = np.empty(m)
    noise_eps = 1e-6 * noise
    ns = 0

    while True:
        best = -1
        best_delta = 1e-12
        for c in range(m):
            if not cand_mask[c]:
                continue
            sinr = s_pw[c] / (interference[c] + noise[c])
            if sinr > cap:
                sinr = cap
            delta = np.log(th[c] + beta * bw[c] * np.log1p(sinr)
                           * inv_ln2) - base[c]
            # Damage terms are never positive, so a candidate whose own
            # gain already trails the incumbent cannot win; the same
            # bound lets the damage loop stop early.
            if delta <= best_delta:
                continue
            for si in range(ns):
                s = sel[si]
                add = c_pw[c, s]
                if add < noise_eps[s]:
                    continue  # sub-noise-floor: cannot move the PF term
                sinr_m = s_pw[s] / (interference[s] + add + noise[s])
                if sinr_m > cap:
                    sinr_m = cap
                delta += np.log(th[s] + beta * bw[s] * np.log1p(sinr_m)
                                * inv_ln2) - sel_terms[si]
                if delta <= best_delta:
                    break
            if delta > best_delta:
                best_delta = delta
                best = c
        if best < 0:
            break
        pick = best
        for c in range(m):  # one beam per UE
            if ue_of[c] == ue_of[pick]:
                cand_mask[c] = False
        bs = assoc[pick]
        rf_used[bs] += 1
        if rf_used[bs] >= n_rf:
            for c in range(m):
                if assoc[c] == bs:
                    cand_mask[c] = False
        for c in range(m):
            interference[c] += c_pw[pick, c]
        sel[ns] = pick
        ns += 1
        for si in range(ns):
            s = sel[si]
            sinr_s = s_pw[s] / (interference[s] + noise[s])
            if sinr_s > cap:
                sinr_s = cap
            sel_terms[si] = np.log(
                th[s] + beta * bw[s] * np.log1p(sinr_s) * inv_ln2)

    # Prune pass: the add loop can only see damage to assignments picked
    # earlier, so a weak UE picked late is never protected from aggressors
    # picked before it.  Re-examine the finished selection and drop any
    # assignment whose removal raises the group objective, repeating until
    # no single removal helps.
    while ns > 1:
        best = -1
        best_gain = 1e-12
        for ki in range(ns):
            k = sel[ki]
            gain = base[k] - sel_terms[ki]
            for si in range(ns):
                if si == ki:
                    continue
                s = sel[si]
                sinr_wo = s_pw[s] / (interference[s] - c_pw[k, s] + noise[s])
                if sinr_wo > cap:
                    sinr_wo = cap
                gain += np.log(th[s] + beta * bw[s] * np.log1p(sinr_wo)
                               * inv_ln2) - sel_terms[si]
            if gain > best_gain:
                best_gain = gain
                best = ki
        if best < 0:
            break
        k = sel[best]
        for c in range(m):
            interference[c] -= c_pw[k, c]
        for ki in range(best, ns - 1):
            sel[ki] = sel[ki + 1]
        ns -= 1
        for si in range(ns):
            s = sel[si]
            sinr_s = s_pw[s] / (interference[s] + noise[s])
            if sinr_s > cap:
                sinr_s = cap
            sel_terms[si] = np.log(
                th[s] + beta * bw[s] * np.log1p(sinr_s) * inv_ln2)
    return ns


def _greedy_group(group, t_hold, beta, cap, n_rf, out: list):
    """Greedy selection within one visibility group.

    Candidates are (UE, beam choice) pairs; picking one retires every
    other choice of the same UE.  Appends global candidate ids to
    ``out``.
    """
    cands = group["cands"]
    ue_of = group["ue_of"]
    th = t_hold[ue_of]
    sel = np.empty(cands.size, dtype=np.int64)
    ns = _greedy_kernel(
        group["c_pw"], group["s_pw"], group["noise"], group["bw"],
        th, np.log(th), beta, math.inf if cap is None else float(cap),
        group["assoc"], ue_of, n_rf, sel)
    out.extend(int(cands[k]) for k in sel[:ns])


def greedy_select(ctx: DropContext, mode: CoordinationMode,
                  throughputs: np.ndarray) -> np.ndarray:
    """One slot's greedy selection; returns candidate ids in pick order.

    A candidate is a (UE, beam choice) pair with id
    ``ue * n_choices + choice``; at most one choice per UE is selected.
    Deterministic: ties in the marginal gain resolve to the lowest
    candidate id within a group, groups in operator order.  Rate
    predictions use a
    provisional equal split of the BS power over its full RF-chain
    budget; final powers are renormalized once the beam count is fixed.
    """
    mode = CoordinationMode(mode)
    beta = ctx.beta
    cap = ctx.cap_lin
    # Tiny floor keeps ln(t_hold) finite in the full-replacement case
    # (pf_window = 1), where the PF weight degenerates.
    t_hold = np.maximum(
        (1.0 - beta) * np.maximum(throughputs, THROUGHPUT_FLOOR), 1e-12)
    selected: list[int] = []
    for group in _greedy_cache(ctx, mode):
        _greedy_group(group, t_hold, beta, cap,
                      ctx.cfg.n_rf_chains_bs, selected)
    return np.array(selected, dtype=np.int64)


def schedule_slot(ctx: DropContext, mode: CoordinationMode,
                  throughputs: np.ndarray) -> SlotSchedule:
    """Greedy selection wrapped into explicit beam assignments.

    Per-beam transmit power is the BS total split equally over its
    active beams this slot.
    """
    sel = greedy_select(ctx, mode, throughputs)
    if sel.size == 0:
        return SlotSchedule(assignments=())
    powers_dbm = np.atleast_1d(lin_to_db(selection_powers(ctx, sel)))
    ue_ids = ctx.cand_ue[sel]
    assignments = tuple(
        BeamAssignment(
            bs=int(ctx.cand_bs[k]),
            ue=int(u),
            bs_beam=Beam(float(ctx.bs_steer_az[k])),
            ue_beam=Beam(float(ctx.ue_beam_az[k])),
            power_dbm=float(p),
        )
        for k, u, p in zip(sel, ue_ids, powers_dbm))
    return SlotSchedule(assignments=assignments)
