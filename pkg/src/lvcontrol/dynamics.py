"""Space-homogeneous competition kinetics: equilibria, orbits, basins.

The two-species ODE system

    w1' = w1*(1 - w1 - a*w2),    w2' = w2*(1 - b*w1 - w2)

drives the PDE's pointwise behaviour.  This module computes its equilibria
with stability labels derived from the closed-form Jacobian, integrates
orbits with classical RK4, classifies basins of attraction, and samples
phase portraits onto a lattice for plotting.  In the bistable regime a > 1
(with b > 1) the basin boundary contains the straight separatrix segment
w2 = ((b-1)/(a-1))*w1, which classification must and does respect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import CompetitionParams, coexistence_equilibrium, separatrix_value
from .errors import ConfigError, StabilityError
from .pde import format_sig

__all__ = [
    "OdeState",
    "StabilityLabel",
    "EquilibriumInfo",
    "BasinClass",
    "jacobian",
    "equilibria",
    "integrate_ode",
    "classify_basin",
    "phase_portrait",
    "write_portrait_csv",
]

# Orbits may leave the unit box by at most this much before the step size is
# declared too coarse.
_BOX_TOL = 1e-9
# Eigenvalues within this of zero are treated as marginal (no sign label).
_EIG_TOL = 1e-9
# Basin classification: integrate until this close to an attractor, give up
# at this horizon.
_ATTRACTOR_RADIUS = 1e-4
_T_CAP = 500.0
_BASIN_DT = 0.01


@dataclass(frozen=True)
class OdeState:
    """Point in the (w1, w2) phase plane."""

    w1: float
    w2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.w1) and np.isfinite(self.w2)):
            raise ConfigError(f"phase-plane point must be finite, got ({self.w1}, {self.w2})")

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2])


class StabilityLabel(str, Enum):
    ATTRACTIVE = "Attractive"
    SADDLE = "Saddle"
    REPULSIVE = "Repulsive"
    GLOBALLY_ATTRACTING_ON_BOX = "GloballyAttractingOnBox"


@dataclass(frozen=True)
class EquilibriumInfo:
    point: OdeState
    label: StabilityLabel
    eigenvalues: Tuple[float, float]


class BasinClass(str, Enum):
    TO_ZERO_ONE = "ToZeroOne"
    TO_ONE_ZERO = "ToOneZero"
    UNRESOLVED = "OnSeparatrix/Unresolved"


def _rhs(w1, w2, p: CompetitionParams):
    return w1 * (1.0 - w1 - p.a * w2), w2 * (1.0 - p.b * w1 - w2)


def jacobian(p: CompetitionParams, w1: float, w2: float) -> np.ndarray:
    """Closed-form Jacobian of the kinetics at (w1, w2)."""
    return np.array(
        [
            [1.0 - 2.0 * w1 - p.a * w2, -p.a * w1],
            [-p.b * w2, 1.0 - p.b * w1 - 2.0 * w2],
        ]
    )


def _label_from_eigs(eigs: np.ndarray) -> Optional[StabilityLabel]:
    """Sign-based label, or None when an eigenvalue is marginal."""
    re = np.real(eigs)
    if np.any(np.abs(re) <= _EIG_TOL):
        return None
    n_pos = int(np.sum(re > 0))
    if n_pos == 2:
        return StabilityLabel.REPULSIVE
    if n_pos == 0:
        return StabilityLabel.ATTRACTIVE
    return StabilityLabel.SADDLE


def equilibria(p: CompetitionParams) -> List[EquilibriumInfo]:
    """Equilibria of the kinetics with stability labels, for b > 1.

    (0,0), (1,0), (0,1) always exist; the coexistence point joins them when
    a > 1 (at a = 1 it degenerates onto (0,1)).  Labels come from the
    Jacobian eigenvalue signs; the marginal case is the zero eigenvalue of
    (0,1) at a = 1, which keeps the saddle label it carries for a < 1.
    (1,0) is promoted to GloballyAttractingOnBox when a < 1, where it
    attracts every state with w1 > 0.
    """
    if p.b <= 1.0:
        raise ConfigError(f"equilibria analysis assumes b > 1, got b={p.b}")
    out: List[EquilibriumInfo] = []
    points = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    coex = coexistence_equilibrium(p)
    if coex is not None and p.a > 1.0:
        points.append((coex.w1, coex.w2))
    for w1, w2 in points:
        eigs = np.linalg.eigvals(jacobian(p, w1, w2))
        label = _label_from_eigs(eigs)
        if label is None:
            # Only (0,1) at a = 1 is marginal here: eigenvalues (1-a, -1).
            label = StabilityLabel.SADDLE
        if (w1, w2) == (1.0, 0.0) and p.a < 1.0 and label == StabilityLabel.ATTRACTIVE:
            label = StabilityLabel.GLOBALLY_ATTRACTING_ON_BOX
        re = tuple(sorted(float(v) for v in np.real(eigs)))
        out.append(EquilibriumInfo(point=OdeState(w1, w2), label=label, eigenvalues=re))
    return out


# ---------------------------------------------------------------------------
# Orbit integration (classical RK4, fixed step)
# ---------------------------------------------------------------------------


def _rk4_arrays(
    W1: np.ndarray, W2: np.ndarray, p: CompetitionParams, dt: float
) -> Tuple[np.ndarray, np.ndarray]:
    k1a, k1b = _rhs(W1, W2, p)
    k2a, k2b = _rhs(W1 + 0.5 * dt * k1a, W2 + 0.5 * dt * k1b, p)
    k3a, k3b = _rhs(W1 + 0.5 * dt * k2a, W2 + 0.5 * dt * k2b, p)
    k4a, k4b = _rhs(W1 + dt * k3a, W2 + dt * k3b, p)
    return (
        W1 + dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a),
        W2 + dt / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b),
    )


def _check_box_arrays(W1: np.ndarray, W2: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    for name, W in (("w1", W1), ("w2", W2)):
        lo, hi = float(np.min(W)), float(np.max(W))
        if lo < -_BOX_TOL or hi > 1.0 + _BOX_TOL:
            raise StabilityError(
                f"orbit left [0,1] beyond {_BOX_TOL:g} in {name} at t={t:.6g} "
                f"(value {lo if lo < -_BOX_TOL else hi:.6g}); reduce dt"
            )
    return np.clip(W1, 0.0, 1.0), np.clip(W2, 0.0, 1.0)


def integrate_ode(
    w0: OdeState, p: CompetitionParams, T: float, dt: float = 0.01
) -> List[OdeState]:
    """RK4 orbit from w0, recorded every step (T/dt + 1 states).

    The orbit must remain in the unit box to 1e-9; a larger excursion raises
    a step-size error.
    """
    if not (0.0 <= w0.w1 <= 1.0 and 0.0 <= w0.w2 <= 1.0):
        raise ConfigError(f"initial point ({w0.w1}, {w0.w2}) outside the unit box")
    if T <= 0 or dt <= 0:
        raise ConfigError("horizon and step must be positive")
    n_steps = max(1, int(round(T / dt)))
    W1 = np.array([w0.w1])
    W2 = np.array([w0.w2])
    orbit = [w0]
    for k in range(n_steps):
        W1, W2 = _rk4_arrays(W1, W2, p, dt)
        W1, W2 = _check_box_arrays(W1, W2, (k + 1) * dt)
        orbit.append(OdeState(float(W1[0]), float(W2[0])))
    return orbit


# ---------------------------------------------------------------------------
# Basin classification
# ---------------------------------------------------------------------------


def _classify_lattice(
    W1: np.ndarray, W2: np.ndarray, p: CompetitionParams
) -> np.ndarray:
    """Vectorized basin classification of arbitrary point sets.

    Integrates all points simultaneously until each is within 1e-4 of (0,1)
    or (1,0), marking survivors Unresolved at the 500-time-unit cap.
    Returns an integer array: 0 = ToZeroOne, 1 = ToOneZero, 2 = Unresolved.
    """
    m = W1.size
    result = np.full(m, 2, dtype=int)
    active = np.ones(m, dtype=bool)
    w1 = W1.astype(float).copy()
    w2 = W2.astype(float).copy()
    t = 0.0
    check_every = max(1, int(round(1.0 / _BASIN_DT)))
    while t < _T_CAP and np.any(active):
        for _ in range(check_every):
            w1[active], w2[active] = _rk4_arrays(w1[active], w2[active], p, _BASIN_DT)
            t += _BASIN_DT
            if t >= _T_CAP:
                break
        w1[active], w2[active] = _check_box_arrays(w1[active], w2[active], t)
        to01 = active & (np.hypot(w1 - 0.0, w2 - 1.0) < _ATTRACTOR_RADIUS)
        to10 = active & (np.hypot(w1 - 1.0, w2 - 0.0) < _ATTRACTOR_RADIUS)
        result[to01] = 0
        result[to10] = 1
        active &= ~(to01 | to10)
    return result


_BASIN_BY_CODE = (BasinClass.TO_ZERO_ONE, BasinClass.TO_ONE_ZERO, BasinClass.UNRESOLVED)


def classify_basin(w0: OdeState, p: CompetitionParams) -> BasinClass:
    """Which attractor the orbit from w0 reaches.

    For a <= 1 the answer follows the global-attraction structure directly:
    every point with w1 > 0 flows to (1,0) (for b > 1), the w1 = 0 axis
    flows to (0,1), and the origin stays put.  For a > 1, points lying
    exactly on the known straight separatrix segment are reported as
    unresolved (they sit on the basin boundary); all other points are
    integrated until they approach an attractor.
    """
    if not (0.0 <= w0.w1 <= 1.0 and 0.0 <= w0.w2 <= 1.0):
        raise ConfigError(f"basin query point ({w0.w1}, {w0.w2}) outside the unit box")
    if p.a <= 1.0:
        if w0.w1 > 0.0:
            return BasinClass.TO_ONE_ZERO
        if w0.w2 > 0.0:
            return BasinClass.TO_ZERO_ONE
        return BasinClass.UNRESOLVED
    seg_end = (p.a - 1.0) / (p.b - 1.0)
    if w0.w1 <= seg_end:
        h = separatrix_value(p, w0.w1)
        if abs(w0.w2 - h) <= 1e-12 * max(1.0, h):
            return BasinClass.UNRESOLVED
    code = _classify_lattice(np.array([w0.w1]), np.array([w0.w2]), p)[0]
    return _BASIN_BY_CODE[code]


def phase_portrait(
    p: CompetitionParams, grid_density: int
) -> List[Tuple[OdeState, BasinClass]]:
    """Classify a uniform grid_density x grid_density lattice over the box."""
    if grid_density < 2:
        raise ConfigError(f"grid density must be at least 2, got {grid_density}")
    vals = np.linspace(0.0, 1.0, grid_density)
    W1, W2 = np.meshgrid(vals, vals, indexing="ij")
    W1, W2 = W1.ravel(), W2.ravel()
    if p.a <= 1.0:
        codes = np.where(W1 > 0.0, 1, np.where(W2 > 0.0, 0, 2))
    else:
        codes = np.full(W1.size, 2, dtype=int)
        seg_end = (p.a - 1.0) / (p.b - 1.0)
        on_sep = (W1 <= seg_end) & (
            np.abs(W2 - (p.b - 1.0) / (p.a - 1.0) * W1) <= 1e-12
        )
        todo = ~on_sep
        codes[todo] = _classify_lattice(W1[todo], W2[todo], p)
    return [
        (OdeState(float(x), float(y)), _BASIN_BY_CODE[int(c)])
        for x, y, c in zip(W1, W2, codes)
    ]


def write_portrait_csv(path: str, table: Sequence[Tuple[OdeState, BasinClass]]) -> None:
    """CSV `w1_0,w2_0,class` at 12 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("w1_0,w2_0,class\n")
        for state, cls in table:
            fh.write(f"{format_sig(state.w1)},{format_sig(state.w2)},{cls.value}\n")
