"""Figures for competition-diffusion artifacts.

Renders space-time heatmaps of trajectory CSVs and basin maps of kinetic
phase-portrait CSVs, both as written by the ``lvcontrol`` command-line tool.
The coupling is file-based only: this package reads the simulator's CSV/JSON
artifacts and never imports the simulation code.
"""

from .io import (
    Equilibrium,
    InputError,
    PortraitTable,
    Trajectory,
    find_portrait_summary,
    load_portrait,
    load_trajectory,
)
from .heatmap import render_heatmap
from .portrait import render_portrait, separatrix_segment

__all__ = [
    "Equilibrium",
    "InputError",
    "PortraitTable",
    "Trajectory",
    "find_portrait_summary",
    "load_portrait",
    "load_trajectory",
    "render_heatmap",
    "render_portrait",
    "separatrix_segment",
]

__version__ = "0.1.0"
