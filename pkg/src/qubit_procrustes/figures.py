"""Optional PNG rendering of sweep rows.  Needs matplotlib (the ``figures`` extra)."""
from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["render_sweep"]


def _label(r) -> str:
    rad = float(np.linalg.norm(r))
    if rad == 0.0:
        return "r = 0"
    theta = float(np.arccos(np.clip(r[2] / rad, -1.0, 1.0)))
    phi = float(np.arctan2(r[1], r[0])) % (2 * np.pi)
    return f"|r|={rad:.3g}, phi={phi:.3g}, theta={theta:.3g}"


def render_sweep(rows, param: str, directory, stem: str) -> list:
    """Write ``<stem>_d_n.png`` and ``<stem>_theta.png``; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    # rows come grouped by input state, in order
    groups: dict = {}
    for row in rows:
        groups.setdefault(tuple(row.r.tolist()), []).append(row)

    paths = []
    for column, ylabel in (("d_n", "D_N"), ("theta", "Theta [rad]")):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for key, grp in groups.items():
            x = [row.param for row in grp]
            y = [getattr(row, column) for row in grp]
            ax.plot(x, y, marker=".", lw=1.2, label=_label(np.array(key)))
        ax.set_xlabel(param)
        ax.set_ylabel(ylabel)
        ax.grid(alpha=0.3)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = directory / f"{stem}_{column}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths
