"""Traveling-front computation for the bistable competition system.

In the strong-competition regime (a, b > 1) the two monoculture states are
connected by a monotone front whose signed speed c decides which species
invades.  With the orientation "left state (0,1), right state (1,0)",
unbalanced competition a < b gives c < 0: the species-1 state conquers
leftward.  `estimate_front` measures c by simulating on a wide interval
with the asymptotic states pinned at the ends, tracking the y1 = 1/2 level
set after a burn-in, and fitting a line to its trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import (
    BoundaryControl,
    CompetitionParams,
    DirichletConst,
    SpeciesState,
    make_grid,
)
from .errors import ConfigError, DomainTooSmallError, UnreliableEstimateError
from .pde import SimConfig, format_sig, simulate

__all__ = [
    "FrontEstimate",
    "estimate_front",
    "write_level_csv",
    "write_front_profile_csv",
]

# Estimates are rejected when the level-set trajectory is not essentially
# linear, or when the front gets closer than this to an endpoint.
_MIN_FIT_R2 = 0.999
_BOUNDARY_MARGIN = 5.0
_MONOTONE_TOL = 1e-3


@dataclass(frozen=True)
class FrontEstimate:
    """Measured front speed and co-moving profile.

    `c` is the signed speed of the y1 = 1/2 level set (negative = moving
    left, i.e. species 1 invades); `profile` is the final state recentered
    so the level set sits at xi = 0, with `xi` the co-moving abscissae;
    `level_track` holds the fitted (t, x_half) samples in centered
    coordinates.
    """

    c: float
    profile: SpeciesState
    fit_r2: float
    level_track: np.ndarray
    xi: np.ndarray

    def __post_init__(self) -> None:
        track = np.asarray(self.level_track, dtype=float)
        if track.ndim != 2 or track.shape[1] != 2 or track.shape[0] < 2:
            raise ConfigError("level track must be a (k, 2) array of (t, x_half) samples")
        if self.fit_r2 < _MIN_FIT_R2:
            raise ConfigError(
                f"front estimate accepted only with fit_r2 >= {_MIN_FIT_R2}, got {self.fit_r2:.6f}"
            )
        d1 = np.diff(self.profile.y1)
        d2 = np.diff(self.profile.y2)
        if d1.min() < -_MONOTONE_TOL or d2.max() > _MONOTONE_TOL:
            raise ConfigError("front profile must be monotone (y1 up, y2 down) to 1e-3")
        object.__setattr__(self, "level_track", track)


def _half_level_position(y1: np.ndarray, nodes: np.ndarray) -> float:
    """Abscissa of the y1 = 1/2 crossing by linear interpolation between the
    bracketing nodes (the front is monotone nondecreasing in x)."""
    idx = int(np.argmax(y1 >= 0.5))
    if idx == 0:
        raise DomainTooSmallError("level set touches the left endpoint")
    lo, hi = y1[idx - 1], y1[idx]
    frac = (0.5 - lo) / (hi - lo) if hi > lo else 0.0
    return float(nodes[idx - 1] + frac * (nodes[idx] - nodes[idx - 1]))


def estimate_front(
    params: CompetitionParams,
    half_width: float = 60.0,
    T: float = 40.0,
    *,
    dx: float = 0.1,
    dt: float = 0.02,
    init_offset: float = 0.0,
) -> FrontEstimate:
    """Measure the bistable front speed for a, b > 1.

    Simulates on (-half_width, half_width) with (0,1) pinned at the left
    end and (1,0) at the right, from step initial data at `init_offset`
    (snapped to the grid), then fits x_half(t) after a burn-in of T/4.

    Raises DomainTooSmallError when the front comes within 5 units of an
    endpoint and UnreliableEstimateError when the linear fit has
    r^2 < 0.999.
    """
    if not (params.a > 1.0 and params.b > 1.0):
        raise ConfigError(
            f"front estimation assumes the bistable regime a, b > 1, got a={params.a}, b={params.b}"
        )
    if half_width < 50.0:
        raise ConfigError(f"half_width must be at least 50, got {half_width}")
    if T <= 0 or dx <= 0 or dt <= 0:
        raise ConfigError("T, dx, dt must be positive")
    if abs(init_offset) > half_width - 2 * _BOUNDARY_MARGIN:
        raise ConfigError("initial step offset too close to an endpoint")

    n = int(round(2.0 * half_width / dx)) + 1
    grid = make_grid(2.0 * half_width, n)
    center = half_width + round(init_offset / grid.dx) * grid.dx
    y1 = np.where(grid.nodes > center, 1.0, 0.0)
    y1[np.isclose(grid.nodes, center)] = 0.5
    init = SpeciesState(t=0.0, y1=y1, y2=1.0 - y1)
    control = BoundaryControl(
        y1_left=DirichletConst(0.0),
        y1_right=DirichletConst(1.0),
        y2_left=DirichletConst(1.0),
        y2_right=DirichletConst(0.0),
    )
    cfg = SimConfig(
        grid=grid,
        params=params,
        control=control,
        init=init,
        t_end=T,
        scheme="imex_cn",
        dt=dt,
        snapshot_stride=max(0.1, dt),
    )
    traj = simulate(cfg)

    times = []
    positions = []
    for snap in traj.snapshots:
        x_half = _half_level_position(snap.y1, grid.nodes)
        if x_half < _BOUNDARY_MARGIN or x_half > 2.0 * half_width - _BOUNDARY_MARGIN:
            raise DomainTooSmallError(
                f"front reached within {_BOUNDARY_MARGIN:g} of an endpoint at t={snap.t:.6g}; "
                f"increase half_width"
            )
        times.append(snap.t)
        positions.append(x_half - half_width)
    times = np.array(times)
    positions = np.array(positions)

    burn_in = T / 4.0
    keep = times >= burn_in
    if int(keep.sum()) < 10:
        raise ConfigError("horizon too short: fewer than 10 samples after burn-in")
    t_fit = times[keep]
    x_fit = positions[keep]
    slope, intercept = np.polyfit(t_fit, x_fit, 1)
    pred = slope * t_fit + intercept
    ss_res = float(np.sum((x_fit - pred) ** 2))
    ss_tot = float(np.sum((x_fit - x_fit.mean()) ** 2))
    if ss_tot <= 1e-12:
        raise UnreliableEstimateError(
            "level set did not move; no reliable linear fit (near-standing front)"
        )
    r2 = 1.0 - ss_res / ss_tot
    if r2 < _MIN_FIT_R2:
        raise UnreliableEstimateError(
            f"level-set trajectory is not linear enough: r2={r2:.6f} < {_MIN_FIT_R2}"
        )

    final = traj.final
    shift = int(round(x_fit[-1] / grid.dx))
    y1c = _shift_with_edges(final.y1, shift)
    y2c = _shift_with_edges(final.y2, shift)
    profile = SpeciesState(t=final.t, y1=y1c, y2=y2c)
    xi = grid.nodes - half_width
    track = np.column_stack([t_fit, x_fit])
    return FrontEstimate(c=float(slope), profile=profile, fit_r2=float(r2), level_track=track, xi=xi)


def _shift_with_edges(y: np.ndarray, shift: int) -> np.ndarray:
    """Translate values by -shift nodes, extending with the edge values (the
    profile is flat at its asymptotic states near the ends)."""
    out = np.empty_like(y)
    if shift >= 0:
        out[: y.size - shift] = y[shift:]
        out[y.size - shift :] = y[-1]
    else:
        out[-shift:] = y[: y.size + shift]
        out[: -shift] = y[0]
    return out


def write_level_csv(path: str, level_track: np.ndarray) -> None:
    """CSV `t,x_half` at 12 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,x_half\n")
        for t, x in np.asarray(level_track, dtype=float):
            fh.write(f"{format_sig(t)},{format_sig(x)}\n")


def write_front_profile_csv(path: str, estimate: FrontEstimate) -> None:
    """CSV `xi,Y1,Y2` of the co-moving profile at 12 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("xi,Y1,Y2\n")
        for x, v1, v2 in zip(estimate.xi, estimate.profile.y1, estimate.profile.y2):
            fh.write(f"{format_sig(x)},{format_sig(v1)},{format_sig(v2)}\n")
