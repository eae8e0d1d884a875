"""Shared types for the competition-diffusion control toolkit.

Two species with densities y1, y2 in [0, 1] compete on an interval (0, L):

    dt y1 - dxx y1 = y1 (1 - y1 - a y2)
    dt y2 - dxx y2 = y2 (1 - b y1 - y2)

Boundary densities act as controls constrained to [0, 1].  This module holds
the parameter, grid, state, and boundary-control containers used everywhere
else, plus the closed-form kinetics facts: the coexistence equilibrium and
the straight-line basin separatrix of the space-homogeneous system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from .errors import ConfigError

# Densities may leave [0, 1] by at most this much before a state is rejected.
# Violations at or below the tolerance are clamped; anything larger indicates
# an unstable step and raises.
BOX_TOL = 1e-12


@dataclass(frozen=True)
class CompetitionParams:
    """Competition coefficients: `a` weighs species 2's pressure on species 1,
    `b` weighs species 1's pressure on species 2."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ConfigError(f"competition coefficients must be finite, got a={self.a}, b={self.b}")
        if self.a <= 0 or self.b <= 0:
            raise ConfigError(f"competition coefficients must be positive, got a={self.a}, b={self.b}")

    @property
    def strong_competition(self) -> bool:
        """True in the unbalanced bistable regime b > max(a, 1)."""
        return self.b > max(self.a, 1.0)

    def require_strong_competition(self, where: str) -> None:
        if not self.strong_competition:
            raise ConfigError(f"{where} requires b > max(a, 1); got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [0, L] with n nodes, spacing dx = L/(n-1)."""

    L: float
    n: int
    dx: float
    nodes: np.ndarray

    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    def same_layout(self, other: "Grid1D") -> bool:
        return self.n == other.n and abs(self.L - other.L) <= 1e-12 * max(1.0, abs(self.L))


def make_grid(L: float, n: int) -> Grid1D:
    """Build the uniform grid on [0, L]; requires L > 0 and n >= 3."""
    if not np.isfinite(L) or L <= 0:
        raise ConfigError(f"domain length must be positive, got L={L}")
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise ConfigError(f"node count must be an integer >= 3, got n={n}")
    n = int(n)
    dx = L / (n - 1)
    nodes = np.linspace(0.0, L, n)
    return Grid1D(L=float(L), n=n, dx=dx, nodes=nodes)


def _clamp_box(y: np.ndarray, name: str, tol: float = BOX_TOL) -> np.ndarray:
    """Clamp densities into [0, 1]; violations beyond tol raise with the node."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ConfigError(f"{name} must be a 1-d array, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise ConfigError(f"{name} has a non-finite value at node {bad}")
    lo = float(y.min())
    hi = float(y.max())
    if lo < -tol or hi > 1.0 + tol:
        bad = int(np.argmin(y)) if lo < -tol else int(np.argmax(y))
        raise ConfigError(
            f"{name} leaves [0,1] beyond tolerance {tol:g} at node {bad}: value {y[bad]:.6g}"
        )
    return np.clip(y, 0.0, 1.0)


@dataclass(frozen=True)
class SpeciesState:
    """Pair of density profiles at one time.  Densities live in [0, 1]."""

    t: float
    y1: np.ndarray
    y2: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "y1", _clamp_box(self.y1, "y1"))
        object.__setattr__(self, "y2", _clamp_box(self.y2, "y2"))
        if self.y1.shape != self.y2.shape:
            raise ConfigError(
                f"species profiles must share a grid, got {self.y1.shape} vs {self.y2.shape}"
            )

    @property
    def n(self) -> int:
        return self.y1.shape[0]

    def copy_at(self, t: float) -> "SpeciesState":
        return SpeciesState(t=t, y1=self.y1.copy(), y2=self.y2.copy())


def constant_state(grid: Grid1D, y1: float, y2: float, t: float = 0.0) -> SpeciesState:
    """Spatially constant state on the grid."""
    return SpeciesState(t=t, y1=np.full(grid.n, float(y1)), y2=np.full(grid.n, float(y2)))


# ---------------------------------------------------------------------------
# Boundary controls.  Each of the four channels (species x endpoint) is either
# a Dirichlet value in [0, 1] (constant or piecewise-constant in time) or a
# homogeneous Neumann condition.
# ---------------------------------------------------------------------------

Species = Literal[1, 2]
End = Literal["left", "right"]


@dataclass(frozen=True)
class DirichletConst:
    value: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.value <= 1.0):
            raise ConfigError(f"Dirichlet control value must lie in [0,1], got {self.value}")

    def at(self, t: float) -> float:
        return self.value


@dataclass(frozen=True)
class DirichletPiecewise:
    """Piecewise-constant control: value[i] holds on [breakpoints[i], breakpoints[i+1])."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or vals.ndim != 1 or bp.shape != vals.shape or bp.size == 0:
            raise ConfigError("piecewise control needs matching 1-d breakpoints and values")
        if bp[0] != 0.0:
            raise ConfigError(f"piecewise control must start at t=0, got {bp[0]}")
        if np.any(np.diff(bp) <= 0):
            raise ConfigError("piecewise control breakpoints must be strictly increasing")
        if vals.min() < 0.0 or vals.max() > 1.0:
            raise ConfigError("piecewise control values must lie in [0,1]")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def at(self, t: float) -> float:
        idx = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        idx = max(idx, 0)
        return float(self.values[idx])


@dataclass(frozen=True)
class NeumannZero:
    """Zero-flux endpoint (mirrored ghost node)."""


ChannelMode = Union[DirichletConst, DirichletPiecewise, NeumannZero]


@dataclass(frozen=True)
class BoundaryControl:
    """The four boundary channels: one mode per species per endpoint."""

    y1_left: ChannelMode
    y1_right: ChannelMode
    y2_left: ChannelMode
    y2_right: ChannelMode

    def channel(self, species: Species, end: End) -> ChannelMode:
        return getattr(self, f"y{species}_{end}")

    def is_neumann(self, species: Species, end: End) -> bool:
        return isinstance(self.channel(species, end), NeumannZero)

    def value(self, species: Species, end: End, t: float) -> Optional[float]:
        """Dirichlet value at time t, or None for a Neumann channel."""
        mode = self.channel(species, end)
        if isinstance(mode, NeumannZero):
            return None
        return mode.at(t)

    @staticmethod
    def dirichlet_const(u1: float, u2: float) -> "BoundaryControl":
        """Same constant Dirichlet pair (u1, u2) at both endpoints."""
        return BoundaryControl(
            y1_left=DirichletConst(u1),
            y1_right=DirichletConst(u1),
            y2_left=DirichletConst(u2),
            y2_right=DirichletConst(u2),
        )

    @staticmethod
    def neumann_zero() -> "BoundaryControl":
        return BoundaryControl(NeumannZero(), NeumannZero(), NeumannZero(), NeumannZero())

    def is_constant_pair(self, u1: float, u2: float, tol: float = 0.0) -> bool:
        """True when every channel is Dirichlet-constant at the given pair."""
        for species, want in ((1, u1), (2, u2)):
            for end in ("left", "right"):
                mode = self.channel(species, end)
                if not isinstance(mode, DirichletConst):
                    return False
                if abs(mode.value - want) > tol:
                    return False
        return True


# ---------------------------------------------------------------------------
# Kinetics facts for the space-homogeneous system.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoexistencePoint:
    """Interior equilibrium ((a-1)/(ab-1), (b-1)/(ab-1)); inside the open box
    only when a > 1 (given b > 1)."""

    w1: float
    w2: float


def coexistence_equilibrium(p: CompetitionParams) -> Optional[CoexistencePoint]:
    """Coexistence equilibrium of the kinetics, or None when it sits outside
    the box (a < 1).  At a = 1 the point degenerates onto (0, 1)."""
    if p.a < 1.0:
        return None
    denom = p.a * p.b - 1.0
    if denom == 0.0:
        raise ConfigError(f"coexistence equilibrium is singular at ab=1 (a={p.a}, b={p.b})")
    w1 = (p.a - 1.0) / denom
    w2 = (p.b - 1.0) / denom
    return CoexistencePoint(w1=w1, w2=w2)


def separatrix_value(p: CompetitionParams, y: float) -> float:
    """Height of the straight-line basin boundary w2 = ((b-1)/(a-1)) w1 of the
    homogeneous kinetics, defined for a > 1 on 0 <= y <= (a-1)/(b-1)."""
    if p.a <= 1.0:
        raise ConfigError(f"separatrix is undefined for a <= 1 (got a={p.a})")
    y_max = (p.a - 1.0) / (p.b - 1.0)
    if not (0.0 <= y <= y_max):
        raise ConfigError(f"separatrix argument {y} outside [0, {y_max:.6g}]")
    return (p.b - 1.0) / (p.a - 1.0) * y
