"""Batch chart rendering for CSV reports.

SVG output is made byte-reproducible by pinning matplotlib's id salt and
dropping the creation-date metadata.
"""
from __future__ import annotations

import csv
import io
from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "svg.hashsalt": "expanderhyp",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


class PlotError(ValueError):
    pass


def read_series(text: str, x: str, y: str, group: str = "family"):
    """Group numeric (x, y) points by the ``group`` column (one series if it is absent)."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise PlotError("CSV has no data rows")
    header = rows[0].keys()
    for col in (x, y):
        if col not in header:
            raise PlotError(f"missing column {col!r}")
    series: OrderedDict[str, list[tuple[float, float]]] = OrderedDict()
    for row in rows:
        if row[x] in ("", None) or row[y] in ("", None):
            continue
        try:
            point = (float(row[x]), float(row[y]))
        except ValueError:
            raise PlotError(f"non-numeric value in {x!r} or {y!r}") from None
        series.setdefault(row.get(group) or "all", []).append(point)
    if not series:
        raise PlotError("no numeric points to plot")
    return series


def render_svg(series, x: str, y: str, title: str | None = None) -> str:
    xs = [px for pts in series.values() for px, _ in pts]
    log_x = min(xs) > 0 and max(xs) / min(xs) >= 10
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for name in sorted(series):
            pts = sorted(series[name])
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=4, lw=1,
                    label=name)
        if log_x:
            ax.set_xscale("log", base=2)
        ax.set_xlabel(x)
        ax.set_ylabel(y)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def plot_csv(text: str, x: str, y: str, group: str = "family") -> str:
    return render_svg(read_series(text, x, y, group), x, y)
