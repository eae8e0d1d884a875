"""Basin map of the kinetic ODE over the unit box.

Each lattice point from a portrait CSV is drawn as a filled square colored by
its basin class (two colors for the two attractors, grey for unresolved
points), the equilibria from the summary JSON are overplotted as black dots
with their stability labels, and in the bistable regime a > 1 the straight
separatrix segment w2 = (b-1)/(a-1) * w1 is drawn from the origin to the edge
of the box.  Layout constants are module level for the same reason as in
:mod:`lvplots.heatmap`: pixel positions in the saved image depend only on dpi.
"""

from __future__ import annotations

import numpy as np
import matplotlib.pyplot as plt
from matplotlib.lines import Line2D

from .io import PortraitTable

__all__ = [
    "FIGSIZE",
    "DPI",
    "AXES_RECT",
    "XLIM",
    "YLIM",
    "BASIN_COLORS",
    "OTHER_COLOR",
    "separatrix_segment",
    "render_portrait",
]

FIGSIZE = (5.6, 5.2)  # inches; saved image is FIGSIZE * dpi pixels
DPI = 100
AXES_RECT = (0.12, 0.10, 0.78, 0.80)
XLIM = (-0.03, 1.03)
YLIM = (-0.03, 1.03)
BASIN_COLORS = {
    "ToOneZero": "#e08214",  # orange: first species takes the box
    "ToZeroOne": "#8073ac",  # purple: second species takes the box
}
OTHER_COLOR = "#c8c8c8"


def separatrix_segment(a: float, b: float):
    """Endpoints of the straight separatrix inside the unit box, or None.

    The segment w2 = (b-1)/(a-1) * w1 through the origin only separates the
    two basins in the bistable regime a > 1, b > 1.
    """
    if a <= 1.0 or b <= 1.0:
        return None
    slope = (b - 1.0) / (a - 1.0)
    w1_end = min(1.0, 1.0 / slope)
    return (0.0, 0.0), (w1_end, slope * w1_end)


def _marker_area(w1: np.ndarray, w2: np.ndarray, dpi: int) -> float:
    """Square-marker area (pt^2) that tiles the lattice without much overlap."""
    spacing = np.inf
    for coords in (w1, w2):
        unique = np.unique(coords)
        if unique.size > 1:
            spacing = min(spacing, float(np.diff(unique).min()))
    if not np.isfinite(spacing):
        spacing = 0.05
    axes_width_pt = AXES_RECT[2] * FIGSIZE[0] * 72.0
    side_pt = spacing / (XLIM[1] - XLIM[0]) * axes_width_pt * 0.92
    return float(np.clip(side_pt**2, 6.0, 900.0))


def render_portrait(table: PortraitTable, out_path: object, dpi: int = DPI) -> None:
    """Save the basin lattice with equilibria and, for a > 1, the separatrix."""
    fig = plt.figure(figsize=FIGSIZE, dpi=dpi)
    try:
        ax = fig.add_axes(AXES_RECT)
        area = _marker_area(table.w1, table.w2, dpi)
        classes = np.asarray(table.classes)
        handles = []
        seen = []
        for cls in classes:
            if cls not in seen:
                seen.append(cls)
        for cls in seen:
            mask = classes == cls
            color = BASIN_COLORS.get(cls, OTHER_COLOR)
            ax.scatter(
                table.w1[mask],
                table.w2[mask],
                s=area,
                c=color,
                marker="s",
                linewidths=0,
            )
            handles.append(
                Line2D([], [], marker="s", linestyle="", color=color, label=cls)
            )

        segment = separatrix_segment(table.a, table.b)
        if segment is not None:
            (x0, y0), (x1, y1) = segment
            ax.plot([x0, x1], [y0, y1], "k--", linewidth=1.3)
            handles.append(
                Line2D([], [], linestyle="--", color="black", label="separatrix")
            )

        for eq in table.equilibria:
            ax.plot(eq.w1, eq.w2, "ko", markersize=6, zorder=5)
            ax.annotate(
                eq.label,
                (eq.w1, eq.w2),
                textcoords="offset points",
                xytext=(5, 5),
                fontsize=7,
            )

        ax.set_xlim(*XLIM)
        ax.set_ylim(*YLIM)
        ax.set_xlabel("w1(0)")
        ax.set_ylabel("w2(0)")
        ax.set_title(f"kinetic basins   a={table.a:g}, b={table.b:g}", fontsize=10)
        ax.legend(handles=handles, loc="upper right", fontsize=7, framealpha=0.92)
        fig.savefig(out_path, dpi=dpi)
    finally:
        plt.close(fig)
