"""Noise, SINR and rate computation for a complete multi-operator slot.

All power arithmetic is done in linear milliwatts; dB only at the
interfaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotScheduled

NOISE_DENSITY_DBM_HZ = -174.0


def db_to_lin(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def lin_to_db(x_lin):
    return 10.0 * np.log10(np.asarray(x_lin, dtype=float))


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise over the band plus receiver noise figure."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be > 0")
    return NOISE_DENSITY_DBM_HZ + 10.0 * math.log10(bandwidth_hz) \
        + noise_figure_db


def slot_rate(sinr_linear, bandwidth_hz, sinr_cap_linear=None):
    """Shannon rate with an optional spectral-efficiency cap."""
    s = np.asarray(sinr_linear, dtype=float)
    if sinr_cap_linear is not None:
        s = np.minimum(s, sinr_cap_linear)
    r = np.asarray(bandwidth_hz, dtype=float) * np.log2(1.0 + s)
    return r if r.ndim else float(r)


@dataclass(frozen=True)
class SINRReport:
    ue: int
    signal_dbm: float
    intra_interference_dbm: float  # -inf when zero
    inter_interference_dbm: float
    noise_dbm: float
    sinr_db: float
    rate_bps: float


def selection_powers(ctx, sel: np.ndarray) -> np.ndarray:
    """Per-assignment transmit power (mW): equal split over each BS's beams.

    ``sel`` holds candidate ids.
    """
    sel = np.asarray(sel, dtype=np.int64)
    bs = ctx.cand_bs[sel]
    counts = np.bincount(bs, minlength=ctx.n_bs)
    return ctx.tx_lin_mw / counts[bs]


def rates_for_selection(ctx, sel: np.ndarray):
    """Actual per-UE rates for one slot's selected candidates.

    Returns (rates (U,), sinr_lin (len(sel),), signal_mw, i_intra_mw,
    i_inter_mw) with unscheduled UEs at rate 0.  Interference counts
    every other assignment whose operator band overlaps the victim's.
    """
    rates = np.zeros(ctx.n_ue)
    sel = np.asarray(sel, dtype=np.int64)
    if sel.size == 0:
        z = np.zeros(0)
        return rates, z, z, z, z
    ue = ctx.cand_ue[sel]
    p = selection_powers(ctx, sel)
    signal = p * ctx.sg[sel]
    # Interference split by the interferer's operator relation to the
    # victim; only band-overlapping assignments contribute.
    sub = ctx.cg[np.ix_(sel, sel)]
    vis = ctx.mask_inter[np.ix_(ue, ue)]
    same = ctx.mask_intra[np.ix_(ue, ue)]
    i_intra = p @ (sub * (vis & same))
    i_inter = p @ (sub * (vis & ~same))
    sinr = signal / (i_intra + i_inter + ctx.noise_lin_mw[ue])
    rates[ue] = slot_rate(sinr, ctx.bw_hz[ue], ctx.cap_lin)
    return rates, sinr, signal, i_intra, i_inter


def sinr_report(ue: int, ctx, sel: np.ndarray) -> SINRReport:
    """Full SINR/rate report for one scheduled UE under the slot's selection."""
    sel = np.asarray(sel, dtype=np.int64)
    where = np.nonzero(ctx.cand_ue[sel] == ue)[0]
    if where.size == 0:
        raise NotScheduled(f"UE {ue} is not in the slot schedule")
    _, sinr, signal, i_intra, i_inter = rates_for_selection(ctx, sel)
    i = int(where[0])

    def dbm(x):
        return float(lin_to_db(x)) if x > 0 else -math.inf

    return SINRReport(
        ue=ue,
        signal_dbm=dbm(signal[i]),
        intra_interference_dbm=dbm(i_intra[i]),
        inter_interference_dbm=dbm(i_inter[i]),
        noise_dbm=dbm(ctx.noise_lin_mw[ue]),
        sinr_db=float(lin_to_db(sinr[i])),
        rate_bps=float(slot_rate(sinr[i], ctx.bw_hz[ue], ctx.cap_lin)),
    )
