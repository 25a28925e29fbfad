"""Figure rendering for sweep results.

Turns aggregated sweep series into PNG files, one figure per configuration
and constraint kind: the bound value on a log x axis, the mean achieved
complementary metric on y, one line per heuristic.  Written next to the
delimited outputs so a sweep leaves a self-contained report directory.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .heuristics import CANONICAL_NAMES, native_mode

_MARKERS = {"h1": "o", "h2a": "s", "h2b": "^", "h3": "d", "h4": "v", "h5": "x"}

_AXIS_LABELS = {
    "period": ("fixed period", "mean latency of feasible runs"),
    "latency": ("fixed latency", "mean period of feasible runs"),
}


def render_figures(
    series: dict[tuple[str, int, int, str], tuple[tuple[float, float, int], ...]],
    out_dir,
    *,
    dpi: int = 150,
) -> list[str]:
    """Render one PNG per (family, n, p, constraint kind) present in series.

    Thresholds with no feasible run are dropped from the lines.  Returns the
    written paths in deterministic order.
    """
    os.makedirs(out_dir, exist_ok=True)
    figures: dict[tuple[str, int, int, str], list[str]] = {}
    for family, n, p, heuristic in sorted(series):
        kind = native_mode(heuristic)
        figures.setdefault((family, n, p, kind), []).append(heuristic)
    paths = []
    for (family, n, p, kind), names in sorted(figures.items()):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for heuristic in sorted(names, key=CANONICAL_NAMES.index):
            points = [
                (t, mean)
                for t, mean, count in series[(family, n, p, heuristic)]
                if count > 0
            ]
            if not points:
                continue
            xs, ys = zip(*points)
            ax.plot(xs, ys, marker=_MARKERS[heuristic], markersize=4, label=heuristic)
        xlabel, ylabel = _AXIS_LABELS[kind]
        ax.set_xscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(f"{family} n={n} p={p}")
        ax.grid(alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, f"{family}_n{n}_p{p}_fixed_{kind}.png")
        fig.savefig(path, dpi=dpi)
        plt.close(fig)
        paths.append(path)
    return paths
