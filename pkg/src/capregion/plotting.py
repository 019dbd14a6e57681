"""SVG figures for region overlays and delay sweeps.

Plots are presentation only; the CSV files written next to them are the
data contract.
"""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# reproducible SVG ids and no creation date in the file
matplotlib.rcParams["svg.hashsalt"] = "capregion"
matplotlib.rcParams["svg.fonttype"] = "none"

_STYLES = ["-", "--", "-.", ":"]


def _save(fig, path):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(suffix=".svg", dir=directory)
    os.close(fd)
    try:
        fig.savefig(tmp, format="svg", metadata={"Date": None})
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.remove(tmp)


def plot_regions(regions: dict, path: str, title: str = ""):
    """Overlay region boundaries; ``regions`` maps legend label to RateRegion."""
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    for i, (label, region) in enumerate(regions.items()):
        pts = region.points
        ax.plot(pts[:, 0], pts[:, 1], _STYLES[i % len(_STYLES)], lw=1.4, label=label)
    ax.set_xlabel(r"$R_1$ (bits per $T$)")
    ax.set_ylabel(r"$R_2$ (bits per $T$)")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, loc="lower left")
    fig.tight_layout()
    _save(fig, path)


def plot_tau_sweep(rows, path: str, delta_T: float, title: str = ""):
    """Sum-rate capacity against the delay difference, in units of ``delta T``."""
    rows = sorted(rows)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot([r[0] / delta_T for r in rows], [r[1] for r in rows], "o-", lw=1.2)
    ax.set_xlabel(r"$\tau / (\delta T)$")
    ax.set_ylabel(r"max $R_1 + R_2$ (bits per $T$)")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
