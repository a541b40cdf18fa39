"""Parameter sweeps behind each figure, and their CSV / plot-script output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .curves import compute_curve
from .modem import ModulationScheme
from .montecarlo import SimulationConfig, simulate_ser_sweep

__all__ = ["Table", "FIGURES", "build_figure", "render_csv", "write_csv", "write_plot_script"]

S = ModulationScheme
QAM_4x2 = S.rqam(4, 2, 1.0)
# Monte Carlo points are taken every 2.5 dB where the analysis predicts a
# countable error rate for the configured budget.
MC_STEP_DB = 2.5
MC_MIN_SER = 1e-5


@dataclass
class Table:
    """Named columns sharing one row index; ``kind`` is the plot style."""

    name: str
    columns: dict[str, np.ndarray]
    kind: str = "curves"
    meta: dict = field(default_factory=dict)


def _curves(name, grid, series, workers):
    cols = {"snr_db": grid}
    for label, scheme, n, method in series:
        cols[label] = compute_curve(scheme, n, grid, method, workers=workers).values
    return Table(name, cols)


def _fig2(grid, symbols, seed, workers):
    series = [(f"irs_N{n}", QAM_4x2, n, "closed-form") for n in (16, 32)]
    series += [("awgn_exact", QAM_4x2, None, "awgn-exact"),
               ("awgn_bound", QAM_4x2, None, "awgn-bound")]
    return [_curves("fig2", grid, series, workers)]


FIG3_N = (4, 8, 16, 32, 64, 128, 256)


def _mc_grid(grid):
    k = grid / MC_STEP_DB
    return grid[np.isclose(k, np.rint(k))]


def _fig3(grid, symbols, seed, workers):
    analytic = _curves(
        "fig3", grid, [(f"N{n}", QAM_4x2, n, "closed-form") for n in FIG3_N], workers
    )
    rows = {k: [] for k in ("N", "snr_db", "closed_form", "ser", "std_error", "errors", "symbols")}
    coarse = _mc_grid(grid)
    for k, n in enumerate(FIG3_N):
        pred = dict(zip(grid, analytic.columns[f"N{n}"]))
        pts = [x for x in coarse if pred[x] >= MC_MIN_SER]
        if not pts:
            continue
        cfg = SimulationConfig(QAM_4x2, n, pts[0], num_symbols=symbols, seed=seed + k)
        for x, rep in zip(pts, simulate_ser_sweep(cfg, pts, workers=workers)):
            rows["N"].append(n)
            rows["snr_db"].append(x)
            rows["closed_form"].append(pred[x])
            rows["ser"].append(rep.ser_estimate)
            rows["std_error"].append(rep.standard_error)
            rows["errors"].append(rep.errors_counted)
            rows["symbols"].append(rep.symbols_sent)
    mc = Table("fig3_montecarlo", {k: np.array(v) for k, v in rows.items()}, kind="points")
    return [analytic, mc]


FIG4_N = (16, 32, 64, 128)


def _fig4(grid, symbols, seed, workers):
    series = [
        (f"{mi}x{mq}_b{beta:g}_N{n}", S.rqam(mi, mq, beta), n, "closed-form")
        for n in FIG4_N
        for mi, mq in ((8, 4), (16, 2))
        for beta in (1.0, 8.0)
    ]
    return [_curves("fig4", grid, series, workers)]


def _fig5(grid, symbols, seed, workers):
    series = [
        (f"8x4_b{beta:g}_N{n}", S.rqam(8, 4, beta), n, "closed-form")
        for n in (32, 64)
        for beta in (0.25, 0.5, 0.75, 1.0)
    ]
    return [_curves("fig5", grid, series, workers)]


FIG6_SCHEMES = (
    ("M2", S.bpsk()),
    ("M4", S.rqam(2, 2, 1.0)),
    ("M8", S.rqam(4, 2, 1.0)),
    ("M16", S.rqam(4, 4, 1.0)),
    ("M32", S.rqam(8, 4, 1.0)),
    ("M64", S.rqam(8, 8, 1.0)),
    ("M128", S.rqam(16, 8, 1.0)),
    ("M256", S.rqam(16, 16, 1.0)),
)


def _fig6(grid, symbols, seed, workers):
    series = [(label, scheme, 32, "closed-form") for label, scheme in FIG6_SCHEMES]
    return [_curves("fig6", grid, series, workers)]


FIG7_N = (16, 32, 64, 128)


def _fig7(grid, symbols, seed, workers):
    series = []
    for n in FIG7_N:
        series.append((f"rqam8x4_N{n}", S.rqam(8, 4, 1.0), n, "closed-form"))
        series.append((f"xqam32_N{n}", S.xqam(32), n, "closed-form"))
    return [_curves("fig7", grid, series, workers)]


FIGURES: dict[str, Callable] = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
}


def build_figure(fig_id, grid, symbols=1_000_000, seed=0, workers: Optional[int] = None):
    """Evaluate every table of figure ``fig_id`` on the SNR grid."""
    return FIGURES[fig_id](np.asarray(grid, dtype=float), symbols, seed, workers)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)  # shortest round-trip form


def render_csv(table: Table, manifest: dict) -> str:
    """CSV text with a ``#``-prefixed JSON manifest as its first line."""
    names = list(table.columns)
    cols = [table.columns[k] for k in names]
    lines = ["# " + json.dumps(manifest, sort_keys=True), ",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: Path, table: Table, manifest: dict) -> None:
    Path(path).write_text(render_csv(table, manifest))


_PLOT_TEMPLATE = '''\
"""Plot {fig_id} from the CSV files next to this script (requires matplotlib)."""
import csv
import pathlib

import matplotlib.pyplot as plt

HERE = pathlib.Path(__file__).resolve().parent


def load(name):
    with open(HERE / name) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    return {{h: [float(r[i]) for r in body] for i, h in enumerate(header)}}


fig, ax = plt.subplots()
for name, kind in {tables!r}:
    data = load(name)
    if kind == "curves":
        x = data.pop("snr_db")
        for label, y in data.items():
            ax.semilogy(x, [max(v, 1e-300) for v in y], label=label)
    else:
        for n in sorted(set(data["N"])):
            idx = [i for i, v in enumerate(data["N"]) if v == n]
            ax.semilogy([data["snr_db"][i] for i in idx], [data["ser"][i] for i in idx],
                        "o", mfc="none", label=f"sim N={{int(n)}}")
ax.set_xlabel("average SNR (dB)")
ax.set_ylabel("ASER")
ax.set_ylim(1e-8, 1)
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=7)
fig.savefig(HERE / "{fig_id}.pdf")
'''


def write_plot_script(path: Path, fig_id: str, tables: list[Table]) -> None:
    spec = [(f"{t.name}.csv", t.kind) for t in tables]
    Path(path).write_text(_PLOT_TEMPLATE.format(fig_id=fig_id, tables=spec))
