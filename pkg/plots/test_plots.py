"""Figure rendering: CSV parsing, grouping into lines, axis conventions,
error reporting, and end-to-end rendering from freshly produced CSVs."""

import subprocess
import sys

import matplotlib.pyplot as plt
import pytest

from plots import FigureSpec, PlotError, main, render

PUSH_CSV = """\
impl,operation,parameter,iterations,mean_ns,median_ns,p99_ns,stddev_ns
lf,push,1,100,500,480,900,50
lf,push,128,100,520,500,950,55
lf,push,1024,100,560,540,1000,60
locked,push,1,100,700,690,1200,70
locked,push,128,100,900,880,1500,90
locked,push,1024,100,1800,1750,2600,180
chaselev,push,1,100,600,580,1100,60
chaselev,push,128,100,24000,23000,40000,2400
chaselev,push,1024,100,210000,205000,320000,21000
"""

STEAL_CSV = """\
impl,operation,parameter,iterations,mean_ns,median_ns,p99_ns,stddev_ns
lf,steal,10,100,300000,290000,500000,30000
lf,steal,60,100,310000,300000,520000,31000
lf,steal_opt,10,100,180000,175000,300000,18000
lf,steal_opt,60,100,60000,58000,100000,6000
"""

SCALING_CSV = """\
nodes,threads,wall_ms,visited,steals
2000,1,12.5,2000,0
2000,2,13.1,2000,3
2000,4,14.0,2000,9
500,1,3.2,500,0
500,2,3.5,500,2
500,4,3.9,500,5
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _render(tmp_path, kind, csv_text, **kw):
    spec = FigureSpec(kind=kind,
                      input_path=_write(tmp_path, f"{kind}.csv", csv_text),
                      output_path=str(tmp_path / f"{kind}.png"), **kw)
    fig = render(spec)
    return fig, fig.axes[0]


# -- grouping and shapes --------------------------------------------------------

def test_push_figure_one_line_per_impl(tmp_path):
    fig, ax = _render(tmp_path, "push", PUSH_CSV)
    lines = ax.get_lines()
    assert len(lines) == 3
    assert sorted(t.get_text() for t in ax.get_legend().get_texts()) \
        == ["chaselev", "lf", "locked"]
    for line in lines:
        assert len(line.get_xdata()) == 3    # one point per batch size
    assert (tmp_path / "push.png").stat().st_size > 0
    plt.close(fig)


def test_steal_figure_separates_variants(tmp_path):
    fig, ax = _render(tmp_path, "steal", STEAL_CSV)
    labels = sorted(t.get_text() for t in ax.get_legend().get_texts())
    assert labels == ["lf steal", "lf steal_opt"]
    plt.close(fig)


def test_scaling_figure_is_loglog_with_one_line_per_size(tmp_path):
    fig, ax = _render(tmp_path, "scaling", SCALING_CSV)
    assert len(ax.get_lines()) == 2
    assert ax.get_xscale() == "log"
    assert ax.get_yscale() == "log"
    plt.close(fig)


def test_points_are_sorted_by_x(tmp_path):
    # scaling CSV rows arrive grouped by size, not by thread count
    shuffled = SCALING_CSV.splitlines()
    shuffled = "\n".join([shuffled[0]] + shuffled[1:][::-1]) + "\n"
    fig, ax = _render(tmp_path, "scaling", shuffled)
    for line in ax.get_lines():
        xs = list(line.get_xdata())
        assert xs == sorted(xs)
    plt.close(fig)


def test_render_is_deterministic(tmp_path):
    fig1, ax1 = _render(tmp_path, "push", PUSH_CSV)
    fig2, ax2 = _render(tmp_path, "push", PUSH_CSV)
    data1 = [line.get_xydata().tolist() for line in ax1.get_lines()]
    data2 = [line.get_xydata().tolist() for line in ax2.get_lines()]
    assert data1 == data2
    plt.close(fig1)
    plt.close(fig2)


def test_log_flags_apply(tmp_path):
    fig, ax = _render(tmp_path, "push", PUSH_CSV, log_x=True, log_y=True)
    assert ax.get_xscale() == "log"
    assert ax.get_yscale() == "log"
    plt.close(fig)


# -- degenerate and malformed input ------------------------------------------------

def test_header_only_csv_renders_empty_axes(tmp_path):
    header = PUSH_CSV.splitlines()[0] + "\n"
    code = main(["--kind", "push",
                 "--in", _write(tmp_path, "empty.csv", header),
                 "--out", str(tmp_path / "empty.png")])
    assert code == 0
    assert (tmp_path / "empty.png").stat().st_size > 0


def test_malformed_row_names_the_line(tmp_path):
    bad = PUSH_CSV.replace("lf,push,128,100,520", "lf,push,oops,100,520")
    spec = FigureSpec("push", _write(tmp_path, "bad.csv", bad),
                      str(tmp_path / "bad.png"))
    with pytest.raises(PlotError, match="line 3"):
        render(spec)


def test_missing_column_is_rejected(tmp_path):
    headerless = SCALING_CSV   # lacks the bench columns entirely
    spec = FigureSpec("push", _write(tmp_path, "wrong.csv", headerless),
                      str(tmp_path / "wrong.png"))
    with pytest.raises(PlotError, match="missing required column"):
        render(spec)


def test_unknown_kind_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--kind", "violin",
              "--in", _write(tmp_path, "x.csv", PUSH_CSV),
              "--out", str(tmp_path / "x.png")])
    assert exc.value.code == 2


def test_missing_input_file_fails_cleanly(tmp_path, capsys):
    code = main(["--kind", "push", "--in", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "x.png")])
    assert code == 1
    assert "error" in capsys.readouterr().err


# -- acceptance: render every kind from freshly produced CSVs -----------------------

def _run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "bulksteal.cli"] + args,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


def test_acceptance_all_kinds_from_real_csvs(tmp_path):
    push_csv = tmp_path / "push.csv"
    steal_csv = tmp_path / "steal.csv"
    scaling_csv = tmp_path / "scaling.csv"
    _run_cli(["bench", "push", "--impl", "lf,locked,chaselev",
              "--batch-sizes", "1,16", "--iters", "20", "--warmup", "2",
              "--out", str(push_csv)])
    _run_cli(["bench", "steal", "--impl", "lf,locked",
              "--proportions", "10,50", "--initial-size", "200",
              "--iters", "20", "--warmup", "2", "--out", str(steal_csv)])
    _run_cli(["dag", "--nodes", "500,2000", "--threads", "1,2",
              "--out", str(scaling_csv)])

    expected_lines = {"push": 3, "steal": 2, "scaling": 2}
    for kind, source in (("push", push_csv), ("steal", steal_csv),
                         ("scaling", scaling_csv)):
        out = tmp_path / f"fig_{kind}.png"
        fig = render(FigureSpec(kind, str(source), str(out)))
        assert out.stat().st_size > 0, f"{kind}: empty image"
        assert len(fig.axes[0].get_lines()) == expected_lines[kind]
        print(f"\nPASS plots {kind}: rendered {expected_lines[kind]} "
              f"line(s) to {out.name} ({out.stat().st_size} bytes)")
        plt.close(fig)
