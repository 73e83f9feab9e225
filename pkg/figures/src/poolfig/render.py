"""Grouped-bar rendering of pooling-gain summaries.

Each figure is a fixed matrix of (scenario filter, percentile) cells
read from a summary.csv produced by the simulator.  Bars are grouped by
percentile (5th / 50th / 95th) with one bar series per scenario variant
and 95% confidence whiskers.  Rendering is a pure function of the CSV:
fonts, sizes, and colors are pinned, and SVG output is byte-stable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .errors import MissingCell, SchemaMismatch

EXPECTED_HEADER = [
    "scenario_id", "pooling", "coordination", "carrier_ghz", "bs_density",
    "ue_array", "percentile", "rate_bps", "gain_pct", "ci_pct", "n_drops",
]

PERCENTILES = (5, 50, 95)

# One bar series = rows matching these (pooling, coordination, carrier,
# bs_density, ue_array) values, one row per percentile.
@dataclass(frozen=True)
class Series:
    label: str
    pooling: str
    coordination: str
    carrier: str
    bs_density: str
    ue_array: str

    @property
    def key(self) -> str:
        return (f"{self.pooling}/{self.coordination}/carrier={self.carrier}"
                f"/density={self.bs_density}/ue={self.ue_array}")


def _fig1_series(ue_array: str) -> tuple[str, list[Series]]:
    title = ("Pooling gain vs exclusive, 32 GHz, 100 BSs/km^2, "
             f"{ue_array} UE array" if ue_array != "1x1" else
             "Pooling gain vs exclusive, 32 GHz, 100 BSs/km^2, omni UE")
    series = [
        Series("Partial pooling", "partial", "intra_only", "32", "100",
               ue_array),
        Series("Full pooling", "full", "intra_only", "32", "100", ue_array),
    ]
    return title, series


def _fig2_series(carrier: str, ue_array: str) -> tuple[str, list[Series]]:
    title = (f"Full-pooling gain vs exclusive, {carrier} GHz, "
             "with/without inter-operator coordination")
    series = []
    for density in ("50", "200"):
        for coord, tag in (("intra_only", "no coord"),
                           ("inter_operator", "coord")):
            series.append(Series(
                f"{density} BSs/km^2, {tag}", "full", coord, carrier,
                density, ue_array))
    return title, series


def figure_matrix(figure_id: str) -> tuple[str, list[Series]]:
    if figure_id == "fig1a":
        return _fig1_series("4x4")
    if figure_id == "fig1b":
        return _fig1_series("1x1")
    if figure_id == "fig2a":
        return _fig2_series("32", "4x4")
    if figure_id == "fig2b":
        return _fig2_series("73", "8x8")
    raise KeyError(f"unknown figure id {figure_id!r}; known: {FIGURE_IDS}")


FIGURE_IDS = ("fig1a", "fig1b", "fig2a", "fig2b")


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    in_path: str
    out_path: str


def load_summary(path) -> list[dict[str, str]]:
    """Read and schema-check a summary CSV."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file") from None
        if header != EXPECTED_HEADER:
            raise SchemaMismatch(
                f"{path}: header {header!r} does not match expected "
                f"{EXPECTED_HEADER!r}")
        rows = [dict(zip(EXPECTED_HEADER, r)) for r in reader if r]
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    return rows


def _lookup(rows: list[dict[str, str]], s: Series,
            percentile: int) -> dict[str, str]:
    for row in rows:
        if (row["pooling"] == s.pooling
                and row["coordination"] == s.coordination
                and row["carrier_ghz"] == s.carrier
                and row["bs_density"] == s.bs_density
                and row["ue_array"] == s.ue_array
                and row["percentile"] == str(percentile)):
            return row
    raise MissingCell(s.key, percentile)


def extract_matrix(rows, series: list[Series]):
    """(gains, cis) per series over the percentile groups; hard-fails on gaps."""
    gains, cis = [], []
    for s in series:
        g_row, c_row = [], []
        for p in PERCENTILES:
            row = _lookup(rows, s, p)
            g_row.append(float(row["gain_pct"]))
            c_row.append(float(row["ci_pct"]))
        gains.append(g_row)
        cis.append(c_row)
    return gains, cis


_COLORS = ("#3b6ea5", "#c23b22", "#6aa84f", "#e0a800")


def _draw(title: str, series: list[Series], gains, cis) -> Figure:
    fig = Figure(figsize=(6.4, 4.0), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    n_series = len(series)
    group_w = 0.8
    bar_w = group_w / n_series
    centers = list(range(len(PERCENTILES)))
    for i, s in enumerate(series):
        xs = [c - group_w / 2 + bar_w * (i + 0.5) for c in centers]
        ax.bar(xs, gains[i], width=bar_w * 0.9, color=_COLORS[i % 4],
               label=s.label, yerr=cis[i], capsize=3,
               error_kw={"elinewidth": 1.0, "ecolor": "#333333"})
    ax.set_xticks(centers)
    ax.set_xticklabels([f"{p}th percentile" for p in PERCENTILES])
    ax.set_ylabel("Rate gain vs exclusive allocation [%]")
    ax.set_title(title, fontsize=10)
    ax.axhline(0.0, color="#555555", linewidth=0.8)
    ax.legend(fontsize=8)
    ax.grid(axis="y", linewidth=0.3, alpha=0.6)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> list[str]:
    """Render one figure to SVG and PNG; returns the written paths."""
    title, series = figure_matrix(spec.figure_id)
    rows = load_summary(spec.in_path)
    gains, cis = extract_matrix(rows, series)

    # Pin everything nondeterministic so SVG re-renders byte-identically.
    matplotlib.rcParams["svg.hashsalt"] = "poolfig"
    matplotlib.rcParams["svg.fonttype"] = "path"

    fig = _draw(title, series, gains, cis)
    out = Path(spec.out_path)
    svg_path = out.with_suffix(".svg")
    png_path = out.with_suffix(".png")
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    fig.savefig(png_path, format="png", metadata={"Software": None})
    return [str(svg_path), str(png_path)]
