"""Figure rendering for bound-curve reports.

Everything here is display-only: the exact integers computed elsewhere
are converted to floats for the axes, never the other way around.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)


def render_curve(rows, path) -> None:
    """Semilog chart of the bound chain; rows come from the curve command.

    Each row needs attributes n, lower, exact, upper_floor, layer; the
    optional entries may be None and are simply left off the chart.
    """
    fig, ax = plt.subplots(figsize=(8, 5))

    def series(attr):
        pts = [(r.n, getattr(r, attr)) for r in rows if getattr(r, attr) is not None]
        return [p[0] for p in pts], [float(p[1]) for p in pts]

    for attr, label, style in (
        ("lower", "proved lower bound", "o-"),
        ("exact", "exact count (mixed-size family)", "s-"),
        ("upper_floor", "upper bound floor", "^-"),
        ("layer", "layer-only sequences", "d--"),
    ):
        xs, ys = series(attr)
        if xs:
            ax.plot(xs, ys, style, label=label, markersize=4)
    ax.set_yscale("log")
    ax.set_xlabel("number of points n")
    ax.set_ylabel("peeling sequences")
    ax.set_title("Peeling-sequence counts and bounds")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
