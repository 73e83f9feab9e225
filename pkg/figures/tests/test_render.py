import csv
import pathlib

import pytest

from poolfig import FigureSpec, MissingCell, SchemaMismatch, render
from poolfig.cli import main
from poolfig.render import (PERCENTILES, extract_matrix, figure_matrix,
                            load_summary)

GOLDEN = pathlib.Path(__file__).parent / "golden_summary.csv"


def _drop_row(tmp_path, predicate):
    """Copy the golden CSV without the rows matching predicate."""
    with open(GOLDEN, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    kept = [rows[0]] + [r for r in rows[1:]
                        if not predicate(dict(zip(rows[0], r)))]
    out = tmp_path / "partial.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(kept)
    return out


def test_fig1a_matrix_is_three_groups_by_two_series():
    _, series = figure_matrix("fig1a")
    gains, cis = extract_matrix(load_summary(GOLDEN), series)
    assert len(series) == 2
    assert all(len(g) == len(PERCENTILES) == 3 for g in gains)
    # Values land where the CSV put them.
    assert gains[0][0] == pytest.approx(25.0)
    assert gains[1][2] == pytest.approx(57.9)
    assert cis[1][0] == pytest.approx(7.2)


def test_fig2_matrix_is_three_groups_by_four_series():
    for fid in ("fig2a", "fig2b"):
        _, series = figure_matrix(fid)
        gains, _ = extract_matrix(load_summary(GOLDEN), series)
        assert len(series) == 4
        assert all(len(g) == 3 for g in gains)


def test_fig1b_reads_omni_rows():
    _, series = figure_matrix("fig1b")
    gains, _ = extract_matrix(load_summary(GOLDEN), series)
    assert gains[0][0] < 0 and gains[1][0] < 0  # 5th percentile negative


@pytest.mark.parametrize("fid", ["fig1a", "fig1b", "fig2a", "fig2b"])
def test_render_writes_svg_and_png(fid, tmp_path):
    out = tmp_path / f"{fid}.svg"
    written = render(FigureSpec(fid, str(GOLDEN), str(out)))
    assert sorted(pathlib.Path(p).suffix for p in written) == [".png", ".svg"]
    for p in written:
        assert pathlib.Path(p).stat().st_size > 0


def test_svg_rerender_is_byte_stable(tmp_path):
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    render(FigureSpec("fig1a", str(GOLDEN), str(a)))
    render(FigureSpec("fig1a", str(GOLDEN), str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_missing_cell_is_hard_error(tmp_path):
    broken = _drop_row(
        tmp_path, lambda r: r["pooling"] == "full"
        and r["ue_array"] == "4x4" and r["bs_density"] == "100"
        and r["percentile"] == "50")
    with pytest.raises(MissingCell) as exc:
        render(FigureSpec("fig1a", str(broken), str(tmp_path / "x.svg")))
    assert exc.value.percentile == 50


def test_empty_csv_is_schema_mismatch(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("fig1a", str(empty), str(tmp_path / "x.svg")))


def test_wrong_header_is_schema_mismatch(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("fig1a", str(bad), str(tmp_path / "x.svg")))


def test_cli_renders_and_reports_paths(tmp_path, capsys):
    out = tmp_path / "fig2a.svg"
    code = main(["render", "--figure", "fig2a", "--in", str(GOLDEN),
                 "--out", str(out)])
    assert code == 0
    paths = capsys.readouterr().out.splitlines()
    assert len(paths) == 2 and all(pathlib.Path(p).exists() for p in paths)


def test_cli_missing_cell_exit_code(tmp_path):
    broken = _drop_row(tmp_path, lambda r: r["percentile"] == "95"
                       and r["pooling"] == "partial")
    code = main(["render", "--figure", "fig1a", "--in", str(broken),
                 "--out", str(tmp_path / "x.svg")])
    assert code == 3


def test_cli_usage_error():
    assert main(["render", "--figure", "nope", "--in", "x", "--out", "y"]) == 2
