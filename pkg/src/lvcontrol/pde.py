"""Time integration of the competition-diffusion system on an interval.

Two schemes:

* ``explicit``: forward Euler with centered diffusion.  Under the default
  step bound the update is monotone in the competitive order, so discrete
  comparison and the [0, 1] box are preserved to rounding.
* ``imex_cn``: trapezoidal (Crank-Nicolson) diffusion via a tridiagonal
  solve per species per step, explicit reaction, default dt = dx.  A few
  damped (backward Euler) startup steps absorb rough initial data; the
  scheme is not monotone, so tiny transient box overshoots are clamped.

Steady states are found by marching the damped (backward Euler) variant,
whose fixed points are exactly the discrete steady equations, then checking
the elliptic residual directly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .core import (
    BOX_TOL,
    BoundaryControl,
    CompetitionParams,
    Grid1D,
    SpeciesState,
)
from .errors import ConfigError, NonConvergedError, StabilityError

SCHEMES = ("explicit", "imex_cn")

# Forward-Euler bound: diffusion number <= 0.4 and reaction step <= 0.1 of the
# fastest kinetic rate.  Keeps the explicit update monotone, hence box- and
# order-preserving.
EXPLICIT_DIFFUSION_NUMBER = 0.4
EXPLICIT_REACTION_FRACTION = 0.1

# Damped startup steps for the trapezoidal scheme (rough data would otherwise
# ring; backward Euler kills the high-frequency content first).
IMEX_STARTUP_STEPS = 8

# The trapezoidal scheme lacks a discrete maximum principle; transient
# overshoots of the box are clamped up to this slack and fatal beyond it.
# Measured overshoot on the bundled configurations stays below 1e-13; the
# slack is defensive headroom, not an accuracy statement.
IMEX_BOX_SLACK = 1e-6


def stability_dt(grid: Grid1D, params: CompetitionParams) -> float:
    """Largest admissible explicit step for the given grid and kinetics."""
    return min(
        EXPLICIT_DIFFUSION_NUMBER * grid.dx**2,
        EXPLICIT_REACTION_FRACTION / (1.0 + max(params.a, params.b)),
    )


def auto_dt(scheme: str, grid: Grid1D, params: CompetitionParams) -> float:
    if scheme == "explicit":
        return stability_dt(grid, params)
    return grid.dx


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to reproduce one run."""

    grid: Grid1D
    params: CompetitionParams
    control: BoundaryControl
    init: SpeciesState
    t_end: float
    scheme: str = "explicit"
    dt: Union[str, float] = "auto"
    snapshot_stride: Optional[float] = None

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if not np.isfinite(self.t_end) or self.t_end <= 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.init.n != self.grid.n:
            raise ConfigError(
                f"initial state has {self.init.n} nodes but the grid has {self.grid.n}"
            )
        if self.snapshot_stride is not None and self.snapshot_stride <= 0:
            raise ConfigError("snapshot_stride must be positive")
        self.resolved_dt()  # validate eagerly

    def resolved_dt(self) -> float:
        if self.dt == "auto":
            return auto_dt(self.scheme, self.grid, self.params)
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.scheme == "explicit":
            bound = stability_dt(self.grid, self.params)
            if dt > bound * (1 + 1e-12):
                raise ConfigError(
                    f"explicit dt={dt:g} exceeds the stability bound {bound:g}"
                )
        return dt

    def resolved_stride(self) -> float:
        return self.snapshot_stride if self.snapshot_stride is not None else self.t_end / 200.0

    def to_json_dict(self) -> dict:
        """Resolved config for provenance.  Profile initial data is summarized
        by a digest; constant initial data is stored verbatim."""
        y1, y2 = self.init.y1, self.init.y2
        if np.all(y1 == y1[0]) and np.all(y2 == y2[0]):
            init: dict = {"kind": "constant", "y1": float(y1[0]), "y2": float(y2[0])}
        else:
            digest = hashlib.sha256(y1.tobytes() + y2.tobytes()).hexdigest()[:16]
            init = {"kind": "profile", "n": int(self.init.n), "sha256_16": digest}
        return {
            "version": 1,
            "grid": {"L": self.grid.L, "n": self.grid.n},
            "params": {"a": self.params.a, "b": self.params.b},
            "scheme": self.scheme,
            "dt": self.dt if self.dt == "auto" else float(self.dt),
            "resolved_dt": self.resolved_dt(),
            "t_end": self.t_end,
            "snapshot_stride": self.resolved_stride(),
            "init": init,
            "controls": _control_json(self.control),
        }


def _control_json(control: BoundaryControl) -> dict:
    out = {}
    for species in (1, 2):
        for end in ("left", "right"):
            mode = control.channel(species, end)  # type: ignore[arg-type]
            key = f"y{species}_{end}"
            if control.is_neumann(species, end):  # type: ignore[arg-type]
                out[key] = {"mode": "neumann_zero"}
            elif hasattr(mode, "breakpoints"):
                out[key] = {
                    "mode": "dirichlet_piecewise",
                    "breakpoints": [float(v) for v in mode.breakpoints],
                    "values": [float(v) for v in mode.values],
                }
            else:
                out[key] = {"mode": "dirichlet_const", "value": float(mode.value)}
    return out


# ---------------------------------------------------------------------------
# Steppers
# ---------------------------------------------------------------------------


def _reaction(y1: np.ndarray, y2: np.ndarray, p: CompetitionParams) -> Tuple[np.ndarray, np.ndarray]:
    return y1 * (1.0 - y1 - p.a * y2), y2 * (1.0 - p.b * y1 - y2)


class _ExplicitStepper:
    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.dx2 = cfg.grid.dx**2
        self.p = cfg.params

    def step(self, y1: np.ndarray, y2: np.ndarray, t: float, dt: float) -> Tuple[np.ndarray, np.ndarray]:
        r = dt / self.dx2
        f1, f2 = _reaction(y1, y2, self.p)
        new1 = y1.copy()
        new2 = y2.copy()
        new1[1:-1] += r * (y1[:-2] - 2.0 * y1[1:-1] + y1[2:]) + dt * f1[1:-1]
        new2[1:-1] += r * (y2[:-2] - 2.0 * y2[1:-1] + y2[2:]) + dt * f2[1:-1]
        t_new = t + dt
        ctl = self.cfg.control
        for species, old, new, f in ((1, y1, new1, f1), (2, y2, new2, f2)):
            for end, i, j in (("left", 0, 1), ("right", -1, -2)):
                u = ctl.value(species, end, t_new)  # type: ignore[arg-type]
                if u is None:  # mirrored ghost: zero flux
                    new[i] = old[i] + r * (2.0 * old[j] - 2.0 * old[i]) + dt * f[i]
                else:
                    new[i] = u
        _enforce_box(new1, new2, BOX_TOL, t_new, "explicit")
        return new1, new2


class _ImexStepper:
    """Theta-method diffusion (theta=1/2 trapezoidal, theta=1 damped) with
    explicit reaction.  One factorized tridiagonal solve per species per step.
    """

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.grid = cfg.grid
        self.p = cfg.params
        self.dx2 = cfg.grid.dx**2
        self._lu_cache: dict = {}

    def _rows(self, species: int) -> Tuple[bool, bool]:
        ctl = self.cfg.control
        return (
            ctl.is_neumann(species, "left"),  # type: ignore[arg-type]
            ctl.is_neumann(species, "right"),  # type: ignore[arg-type]
        )

    def _lu(self, species: int, theta: float, dt: float):
        key = (species, round(theta, 12), round(dt, 15))
        if key in self._lu_cache:
            return self._lu_cache[key]
        n = self.grid.n
        mu = theta * dt / self.dx2
        main = np.full(n, 1.0 + 2.0 * mu)
        lower = np.full(n - 1, -mu)
        upper = np.full(n - 1, -mu)
        neumann_left, neumann_right = self._rows(species)
        if neumann_left:
            upper[0] = -2.0 * mu
        else:
            main[0] = 1.0
            upper[0] = 0.0
        if neumann_right:
            lower[-1] = -2.0 * mu
        else:
            main[-1] = 1.0
            lower[-1] = 0.0
        mat = sp.diags([lower, main, upper], offsets=[-1, 0, 1], format="csc")
        lu = splu(mat)
        self._lu_cache[key] = lu
        return lu

    def _lap(self, y: np.ndarray, species: int) -> np.ndarray:
        out = np.zeros_like(y)
        out[1:-1] = (y[:-2] - 2.0 * y[1:-1] + y[2:]) / self.dx2
        neumann_left, neumann_right = self._rows(species)
        if neumann_left:
            out[0] = (2.0 * y[1] - 2.0 * y[0]) / self.dx2
        if neumann_right:
            out[-1] = (2.0 * y[-2] - 2.0 * y[-1]) / self.dx2
        return out

    def step(
        self, y1: np.ndarray, y2: np.ndarray, t: float, dt: float, theta: float = 0.5
    ) -> Tuple[np.ndarray, np.ndarray]:
        t_new = t + dt
        f1, f2 = _reaction(y1, y2, self.p)
        out = []
        for species, y, f in ((1, y1, f1), (2, y2, f2)):
            rhs = y + (1.0 - theta) * dt * self._lap(y, species) + dt * f
            ctl = self.cfg.control
            u_left = ctl.value(species, "left", t_new)  # type: ignore[arg-type]
            u_right = ctl.value(species, "right", t_new)  # type: ignore[arg-type]
            if u_left is not None:
                rhs[0] = u_left
            if u_right is not None:
                rhs[-1] = u_right
            new = self._lu(species, theta, dt).solve(rhs)
            out.append(new)
        new1, new2 = out
        _enforce_box(new1, new2, IMEX_BOX_SLACK, t_new, "imex_cn")
        return new1, new2


def _enforce_box(y1: np.ndarray, y2: np.ndarray, slack: float, t: float, scheme: str) -> None:
    for name, y in (("y1", y1), ("y2", y2)):
        lo = y.min()
        hi = y.max()
        if lo < -slack or hi > 1.0 + slack:
            node = int(np.argmin(y)) if lo < -slack else int(np.argmax(y))
            raise StabilityError(
                f"{scheme} step at t={t:.6g} pushed {name} outside [0,1] at node {node}: "
                f"value {y[node]:.6g} (slack {slack:g})"
            )
        np.clip(y, 0.0, 1.0, out=y)


def step(state: SpeciesState, cfg: SimConfig, dt: Optional[float] = None) -> SpeciesState:
    """Advance one step with the configured scheme.  Exposed for tests and
    composition; `simulate` is the driver for full runs."""
    h = cfg.resolved_dt() if dt is None else float(dt)
    if h <= 0:
        raise ConfigError(f"dt must be positive, got {dt}")
    if cfg.scheme == "explicit":
        if h > stability_dt(cfg.grid, cfg.params) * (1 + 1e-12):
            raise ConfigError("explicit dt exceeds the stability bound")
        y1, y2 = _ExplicitStepper(cfg).step(state.y1, state.y2, state.t, h)
    else:
        y1, y2 = _ImexStepper(cfg).step(state.y1, state.y2, state.t, h, theta=0.5)
    return SpeciesState(t=state.t + h, y1=y1, y2=y2)


# ---------------------------------------------------------------------------
# Full runs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    config: SimConfig
    snapshots: List[SpeciesState]

    def __post_init__(self) -> None:
        times = [s.t for s in self.snapshots]
        if len(times) < 1 or any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("trajectory snapshot times must be strictly increasing")

    @property
    def final(self) -> SpeciesState:
        return self.snapshots[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])


def simulate(cfg: SimConfig) -> Trajectory:
    """Integrate to t_end, recording snapshots roughly every snapshot_stride
    (always including the initial and final states)."""
    dt = cfg.resolved_dt()
    stride = cfg.resolved_stride()
    y1 = cfg.init.y1.copy()
    y2 = cfg.init.y2.copy()
    t = 0.0
    snapshots = [SpeciesState(t=0.0, y1=y1.copy(), y2=y2.copy())]
    next_snap = stride
    eps = 1e-12 * max(1.0, cfg.t_end)

    if cfg.scheme == "explicit":
        stepper = _ExplicitStepper(cfg)
        do_step = stepper.step
    else:
        stepper = _ImexStepper(cfg)
        counter = {"k": 0}

        def do_step(a, b, tt, h):
            theta = 1.0 if counter["k"] < IMEX_STARTUP_STEPS else 0.5
            counter["k"] += 1
            return stepper.step(a, b, tt, h, theta=theta)

    while t < cfg.t_end - eps:
        h = min(dt, cfg.t_end - t)
        y1, y2 = do_step(y1, y2, t, h)
        t += h
        if t >= next_snap - eps or t >= cfg.t_end - eps:
            snapshots.append(SpeciesState(t=t, y1=y1.copy(), y2=y2.copy()))
            while next_snap <= t + eps:
                next_snap += stride
    return Trajectory(config=cfg, snapshots=snapshots)


class Classification(str, Enum):
    TRIVIAL_ZERO_ONE = "TrivialZeroOne"
    BARRIER = "Barrier"
    ONE_ZERO = "OneZero"
    ZERO_ZERO = "ZeroZero"
    OTHER = "Other"
    NON_CONVERGED = "NonConverged"


@dataclass(frozen=True)
class SteadyOutcome:
    profile: SpeciesState
    residual_sup: float
    classification: Classification
    t_reached: float
    monotone_violation: Optional[float] = None


def residual(state: SpeciesState, grid: Grid1D, params: CompetitionParams) -> Tuple[float, float]:
    """Sup-norm of the discrete steady equations over interior nodes."""
    if state.n != grid.n:
        raise ConfigError("state and grid disagree on node count")
    dx2 = grid.dx**2
    y1, y2 = state.y1, state.y2
    lap1 = (y1[:-2] - 2.0 * y1[1:-1] + y1[2:]) / dx2
    lap2 = (y2[:-2] - 2.0 * y2[1:-1] + y2[2:]) / dx2
    f1, f2 = _reaction(y1, y2, params)
    r1 = float(np.max(np.abs(lap1 + f1[1:-1]))) if grid.n > 2 else 0.0
    r2 = float(np.max(np.abs(lap2 + f2[1:-1]))) if grid.n > 2 else 0.0
    return r1, r2


def classify_profile(
    profile: SpeciesState,
    control: BoundaryControl,
    delta: float = 1e-3,
) -> Classification:
    """Label a converged profile.  `delta` separates `numerically zero/one`
    from genuinely interior values; it sits far above solver tolerance."""
    y1, y2 = profile.y1, profile.y2
    if y1.max() < delta and y2.min() > 1.0 - delta:
        return Classification.TRIVIAL_ZERO_ONE
    if y1.min() > 1.0 - delta and y2.max() < delta:
        return Classification.ONE_ZERO
    if y1.max() < delta and y2.max() < delta:
        return Classification.ZERO_ZERO
    if control.is_constant_pair(0.0, 1.0) and y1.max() >= delta:
        return Classification.BARRIER
    return Classification.OTHER


def run_to_steady(
    cfg: SimConfig,
    tol: float = 1e-8,
    t_max: float = 4000.0,
    check_interval: float = 1.0,
    classification_delta: float = 1e-3,
    track_monotone: bool = False,
) -> SteadyOutcome:
    """March the damped implicit scheme until both the time-derivative proxy
    and the elliptic residual drop below tol, then classify the profile.

    Fixed points of the marcher solve the discrete steady equations exactly,
    so the residual criterion is attainable regardless of dt.
    """
    p = cfg.params
    dt = min(0.5 / (1.0 + max(p.a, p.b)), 0.1, check_interval)
    stepper = _ImexStepper(cfg)
    y1 = cfg.init.y1.copy()
    y2 = cfg.init.y2.copy()
    t = 0.0
    prev1, prev2 = y1.copy(), y2.copy()
    t_prev = 0.0
    worst_monotone = 0.0

    steps_per_check = max(1, int(round(check_interval / dt)))
    while t < t_max - 1e-9:
        for _ in range(steps_per_check):
            if t >= t_max - 1e-12:
                break
            h = min(dt, t_max - t)
            y1, y2 = stepper.step(y1, y2, t, h, theta=1.0)
            t += h
        if track_monotone:
            worst_monotone = max(
                worst_monotone,
                float(np.max(prev1 - y1)),
                float(np.max(y2 - prev2)),
            )
        span = t - t_prev
        proxy = max(
            float(np.max(np.abs(y1 - prev1))),
            float(np.max(np.abs(y2 - prev2))),
        ) / max(span, 1e-300)
        prev1, prev2 = y1.copy(), y2.copy()
        t_prev = t
        if proxy < tol:
            state = SpeciesState(t=t, y1=y1, y2=y2)
            r1, r2 = residual(state, cfg.grid, p)
            if max(r1, r2) < tol:
                return SteadyOutcome(
                    profile=state,
                    residual_sup=max(r1, r2),
                    classification=classify_profile(state, cfg.control, classification_delta),
                    t_reached=t,
                    monotone_violation=worst_monotone if track_monotone else None,
                )
    state = SpeciesState(t=t, y1=y1, y2=y2)
    r1, r2 = residual(state, cfg.grid, p)
    return SteadyOutcome(
        profile=state,
        residual_sup=max(r1, r2),
        classification=Classification.NON_CONVERGED,
        t_reached=t,
        monotone_violation=worst_monotone if track_monotone else None,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def format_sig(v: float) -> str:
    """12 significant digits, locale independent."""
    return f"{v:.12g}"


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """Long-format CSV `t,x,y1,y2`, one row per snapshot per node, with the
    resolved config embedded as a leading comment for provenance."""
    grid = traj.config.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# config: " + json.dumps(traj.config.to_json_dict(), sort_keys=True) + "\n")
        fh.write("t,x,y1,y2\n")
        for snap in traj.snapshots:
            t_str = format_sig(snap.t)
            for x, v1, v2 in zip(grid.nodes, snap.y1, snap.y2):
                fh.write(f"{t_str},{format_sig(x)},{format_sig(v1)},{format_sig(v2)}\n")


def read_trajectory_frames(path: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Read a trajectory CSV back as (times, x, Y1, Y2) with Y* shaped
    (n_times, n_nodes).  Comment lines are skipped."""
    # genfromtxt with names=True would take a leading comment line as the
    # header, so skip the comment block explicitly.
    n_comments = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            n_comments += 1
    data = np.genfromtxt(path, delimiter=",", names=True, skip_header=n_comments)
    t = np.unique(data["t"])
    x = np.unique(data["x"])
    nt, nx = t.size, x.size
    if data.shape[0] != nt * nx:
        raise ConfigError(f"trajectory CSV {path} is not a complete t-x lattice")
    y1 = data["y1"].reshape(nt, nx)
    y2 = data["y2"].reshape(nt, nx)
    return t, x, y1, y2
