"""Figure rendering for region scans.

Renders an accessible-region grid to an image file: the feasible set as a
shaded area, the zero contour of the step-1 margin (minimal-noise boundary)
as a thick line, and the product bound as a dashed curve.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .criteria import RegionGrid
from .states import XiLike, _as_xi

__all__ = ["render_region"]


def render_region(
    grid: RegionGrid,
    source: XiLike,
    path,
    dpi: int = 150,
) -> None:
    """Render a region grid to ``path`` (format chosen by extension)."""
    src = _as_xi(source)
    xs, ys = grid.grid_x, grid.grid_y
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    ax.pcolormesh(
        xs,
        ys,
        grid.feasible.T.astype(float),
        cmap="Greys",
        vmin=0.0,
        vmax=2.5,
        shading="nearest",
    )
    ax.contour(
        xs,
        ys,
        grid.f1_values.T,
        levels=[0.0],
        colors="black",
        linewidths=2.0,
    )
    bound = abs(src.xi3 * src.xi4) * grid.xi1_pp / src.xi1
    x_pos = np.linspace(max(xs.min(), 1e-6), max(xs.max(), 1e-6), 512)
    for sign in (1.0, -1.0):
        curve = sign * bound / x_pos
        inside = (curve >= ys.min()) & (curve <= ys.max())
        ax.plot(x_pos[inside], curve[inside], "k--", linewidth=1.0)
    ax.plot([src.xi3], [src.xi4], marker="*", color="tab:red", markersize=9)
    ax.set_xlim(xs.min(), xs.max())
    ax.set_ylim(ys.min(), ys.max())
    ax.set_xlabel("target xi3")
    ax.set_ylabel("target xi4")
    ax.set_title(f"reachable correlations at xi1'' = {grid.xi1_pp:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
