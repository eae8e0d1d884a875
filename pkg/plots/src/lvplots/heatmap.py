"""Two-panel space-time heatmap of a trajectory CSV.

Both panels share one colormap whose range is pinned to the state box [0, 1]:
the color scale never adapts to the data, so images rendered from different
runs are directly comparable and a uniform field renders as a uniform panel.
The figure layout is fixed by the module constants below (axes rectangles in
figure fractions, figure size in inches), which makes pixel positions in the
saved image a pure function of the dpi — callers can locate panel interiors
without parsing the image.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

import matplotlib.pyplot as plt

from .io import Trajectory

__all__ = [
    "FIGSIZE",
    "DPI",
    "CMAP",
    "VRANGE",
    "PANEL_RECTS",
    "CBAR_RECT",
    "render_heatmap",
]

FIGSIZE = (9.6, 4.2)  # inches; saved image is FIGSIZE * dpi pixels
DPI = 100
CMAP = "viridis"
VRANGE = (0.0, 1.0)  # colormap range is the state box, never the data range
PANEL_RECTS = (
    (0.065, 0.11, 0.40, 0.75),  # y1 panel (left, bottom, width, height)
    (0.525, 0.11, 0.40, 0.75),  # y2 panel
)
CBAR_RECT = (0.945, 0.11, 0.013, 0.75)


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def _control_text(config: Dict[str, object]) -> Optional[str]:
    controls = config.get("controls")
    if not isinstance(controls, dict):
        return None

    def one(channel: str) -> str:
        entry = controls.get(channel)
        if not isinstance(entry, dict):
            return "?"
        if entry.get("mode") == "dirichlet_const":
            return _fmt(entry.get("value"))
        return str(entry.get("mode", "?"))

    return (
        f"controls y1=({one('y1_left')},{one('y1_right')}) "
        f"y2=({one('y2_left')},{one('y2_right')})"
    )


def _init_text(config: Dict[str, object]) -> Optional[str]:
    init = config.get("init")
    if not isinstance(init, dict):
        return None
    if init.get("kind") == "constant":
        return f"init=({_fmt(init.get('y1'))},{_fmt(init.get('y2'))})"
    return f"init={init.get('kind', '?')}"


def _annotation(config: Dict[str, object]) -> str:
    """One-line run description assembled from whatever the config carries."""
    parts = []
    grid = config.get("grid")
    if isinstance(grid, dict) and "L" in grid:
        parts.append(f"L={_fmt(grid['L'])}")
    params = config.get("params")
    if isinstance(params, dict):
        for key in ("a", "b"):
            if key in params:
                parts.append(f"{key}={_fmt(params[key])}")
    if "scheme" in config:
        parts.append(str(config["scheme"]))
    dt = config.get("resolved_dt", config.get("dt"))
    if isinstance(dt, (int, float)):
        parts.append(f"dt={_fmt(dt)}")
    if "t_end" in config:
        parts.append(f"T={_fmt(config['t_end'])}")
    for text in (_control_text(config), _init_text(config)):
        if text:
            parts.append(text)
    return "   ".join(parts)


def render_heatmap(trajectory: Trajectory, out_path: object, dpi: int = DPI) -> None:
    """Save a two-panel (y1 | y2) space-time image, x horizontal, t vertical."""
    t, x = trajectory.t, trajectory.x
    extent = (float(x[0]), float(x[-1]), float(t[0]), float(t[-1]))
    fig = plt.figure(figsize=FIGSIZE, dpi=dpi)
    try:
        image = None
        for rect, field, name in (
            (PANEL_RECTS[0], trajectory.y1, "y1"),
            (PANEL_RECTS[1], trajectory.y2, "y2"),
        ):
            ax = fig.add_axes(rect)
            image = ax.imshow(
                field,
                origin="lower",
                aspect="auto",
                interpolation="nearest",
                extent=extent,
                cmap=CMAP,
                vmin=VRANGE[0],
                vmax=VRANGE[1],
            )
            ax.set_title(name, fontsize=10)
            ax.set_xlabel("x")
            if rect is PANEL_RECTS[0]:
                ax.set_ylabel("t")
            else:
                ax.set_yticklabels([])
        cax = fig.add_axes(CBAR_RECT)
        fig.colorbar(image, cax=cax)
        annotation = _annotation(trajectory.config)
        if annotation:
            fig.suptitle(annotation, fontsize=8.5)
        fig.savefig(out_path, dpi=dpi)
    finally:
        plt.close(fig)
