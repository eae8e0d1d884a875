"""Finite-horizon boundary-control optimization.

The four boundary channels (each species at each endpoint) are
piecewise-constant in time over equal segments of [0, T], with values
constrained to [0, 1].  The objective penalizes the terminal distance to a
target state plus a running distance along the trajectory:

    J(u) = w_terminal ||y(T) - g||^2  +  w_running  int_0^T ||y(t) - g||^2 dt

with spatial L2 norms (trapezoid quadrature) and a trapezoid rule in time.

Optimization is projected gradient descent with Armijo backtracking and
clipping to the admissible box.  Gradients come either from central finite
differences over the control coordinates (default, cheap at desk scale) or
from the discrete adjoint of the internal forward model (exact for the same
discretization, one backward sweep per gradient).

The internal forward model is the damped implicit-diffusion scheme on
interior unknowns with boundary values injected from the controls.  Its
fixed points solve the discrete steady equations; its monotonicity keeps
every iterate inside the state box, so the objective is smooth in u.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .core import CompetitionParams, Grid1D, SpeciesState
from .errors import ConfigError
from .pde import format_sig

CHANNELS = ("y1_left", "y1_right", "y2_left", "y2_right")


def _as_profile(value: Union[float, np.ndarray], n: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise ConfigError(f"{name} must be a scalar or an array of {n} nodes")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ConfigError(f"{name} must lie in [0,1]")
    return arr


@dataclass(frozen=True)
class ControlProblem:
    """Steering problem: drive `init` toward (`target_y1`, `target_y2`) on
    [0, T] through the four boundary channels, n_segments values each."""

    grid: Grid1D
    params: CompetitionParams
    init: SpeciesState
    target_y1: Union[float, np.ndarray]
    target_y2: Union[float, np.ndarray]
    T: float
    n_segments: int
    w_terminal: float = 1.0
    w_running: float = 0.1
    dt: Union[str, float] = "auto"

    def __post_init__(self) -> None:
        if self.T <= 0 or not np.isfinite(self.T):
            raise ConfigError(f"horizon must be positive, got T={self.T}")
        if not isinstance(self.n_segments, (int, np.integer)) or self.n_segments < 1:
            raise ConfigError(f"n_segments must be a positive integer, got {self.n_segments}")
        if self.init.n != self.grid.n:
            raise ConfigError("initial state and grid disagree on node count")
        if self.w_terminal < 0 or self.w_running < 0:
            raise ConfigError("objective weights must be nonnegative")
        object.__setattr__(self, "target_y1", _as_profile(self.target_y1, self.grid.n, "target_y1"))
        object.__setattr__(self, "target_y2", _as_profile(self.target_y2, self.grid.n, "target_y2"))

    def resolved_dt(self) -> float:
        if self.dt == "auto":
            nominal = self.grid.dx
        else:
            nominal = float(self.dt)
            if nominal <= 0 or not np.isfinite(nominal):
                raise ConfigError(f"dt must be positive, got {self.dt}")
        n_steps = max(1, int(np.ceil(self.T / nominal - 1e-12)))
        return self.T / n_steps

    def to_json_dict(self) -> dict:
        g1, g2 = np.asarray(self.target_y1), np.asarray(self.target_y2)
        tgt = {
            "y1": float(g1[0]) if np.all(g1 == g1[0]) else [float(v) for v in g1],
            "y2": float(g2[0]) if np.all(g2 == g2[0]) else [float(v) for v in g2],
        }
        return {
            "version": 1,
            "grid": {"L": self.grid.L, "n": self.grid.n},
            "params": {"a": self.params.a, "b": self.params.b},
            "T": self.T,
            "n_segments": self.n_segments,
            "w_terminal": self.w_terminal,
            "w_running": self.w_running,
            "dt": self.dt if self.dt == "auto" else float(self.dt),
            "resolved_dt": self.resolved_dt(),
            "target": tgt,
        }


class _ForwardModel:
    """Damped implicit-diffusion forward model on interior unknowns, plus its
    discrete adjoint.  Control layout: u[channel, segment] with channels in
    CHANNELS order."""

    def __init__(self, problem: ControlProblem):
        self.pb = problem
        grid = problem.grid
        p = problem.params
        self.m = grid.n - 2
        self.dt = problem.resolved_dt()
        self.n_steps = int(round(problem.T / self.dt))
        self.dx2 = grid.dx**2
        mu = self.dt / self.dx2
        main = np.full(self.m, 1.0 + 2.0 * mu)
        off = np.full(self.m - 1, -mu)
        self.S = splu(sp.diags([off, main, off], offsets=[-1, 0, 1], format="csc"))
        # spatial trapezoid weights (interior part and the dx/2 boundary part)
        self.w_int = np.full(self.m, grid.dx)
        self.w_bdry = grid.dx / 2.0
        # time trapezoid weights over steps 0..N
        self.tau = np.ones(self.n_steps + 1)
        self.tau[0] = self.tau[-1] = 0.5
        self.g1 = np.asarray(problem.target_y1)
        self.g2 = np.asarray(problem.target_y2)
        self.a = p.a
        self.b = p.b

    def segment_of(self, t: float) -> int:
        j = int(t / self.pb.T * self.pb.n_segments)
        return min(max(j, 0), self.pb.n_segments - 1)

    def _boundary_running_cost(self, u: np.ndarray, k: int) -> float:
        """Boundary-node quadrature of the misfit at step k >= 1."""
        t = k * self.dt
        j = self.segment_of(t)
        q = 0.0
        for c, (g, side) in enumerate(
            ((self.g1, 0), (self.g1, -1), (self.g2, 0), (self.g2, -1))
        ):
            q += self.w_bdry * (u[c, j] - g[side]) ** 2
        return q

    def forward(self, u: np.ndarray, keep_states: bool = False):
        """Run the model; returns (J, states) where states has shape
        (n_steps + 1, 2, m) when kept."""
        pb = self.pb
        u = np.asarray(u, dtype=float)
        if u.shape != (4, pb.n_segments):
            raise ConfigError(f"controls must have shape (4, {pb.n_segments})")
        if u.min() < -1e-12 or u.max() > 1.0 + 1e-12:
            raise ConfigError("control values must lie in [0,1]")
        dt, m, N = self.dt, self.m, self.n_steps
        y1 = pb.init.y1[1:-1].copy()
        y2 = pb.init.y2[1:-1].copy()
        states = np.empty((N + 1, 2, m)) if keep_states else None
        if keep_states:
            states[0, 0], states[0, 1] = y1, y2

        def interior_q(a1, a2):
            return float(
                np.dot(self.w_int, (a1 - self.g1[1:-1]) ** 2 + (a2 - self.g2[1:-1]) ** 2)
            )

        # running cost at t=0 uses the initial boundary values, not controls
        init_bdry = sum(
            self.w_bdry * (v - g[side]) ** 2
            for v, g, side in (
                (pb.init.y1[0], self.g1, 0),
                (pb.init.y1[-1], self.g1, -1),
                (pb.init.y2[0], self.g2, 0),
                (pb.init.y2[-1], self.g2, -1),
            )
        )
        running = self.tau[0] * (interior_q(y1, y2) + init_bdry)
        coef = dt / self.dx2
        for k in range(1, N + 1):
            j = self.segment_of(k * dt)
            f1 = y1 * (1.0 - y1 - self.a * y2)
            f2 = y2 * (1.0 - self.b * y1 - y2)
            rhs1 = y1 + dt * f1
            rhs2 = y2 + dt * f2
            rhs1[0] += coef * u[0, j]
            rhs1[-1] += coef * u[1, j]
            rhs2[0] += coef * u[2, j]
            rhs2[-1] += coef * u[3, j]
            y1 = self.S.solve(rhs1)
            y2 = self.S.solve(rhs2)
            if keep_states:
                states[k, 0], states[k, 1] = y1, y2
            running += self.tau[k] * (interior_q(y1, y2) + self._boundary_running_cost(u, k))
        jN = self.pb.n_segments - 1
        terminal = interior_q(y1, y2) + self._boundary_running_cost(u, N)
        J = pb.w_terminal * terminal + pb.w_running * dt * running
        return (J, states) if keep_states else (J, (y1, y2))

    def gradient_adjoint(self, u: np.ndarray) -> Tuple[float, np.ndarray]:
        """Exact gradient of the discrete objective by one backward sweep."""
        pb = self.pb
        J, states = self.forward(u, keep_states=True)
        dt, N = self.dt, self.n_steps
        wR, wT = pb.w_running, pb.w_terminal
        g1i, g2i = self.g1[1:-1], self.g2[1:-1]
        grad = np.zeros((4, pb.n_segments))

        yN1, yN2 = states[N, 0], states[N, 1]
        lam1 = 2.0 * (wT + wR * dt * self.tau[N]) * self.w_int * (yN1 - g1i)
        lam2 = 2.0 * (wT + wR * dt * self.tau[N]) * self.w_int * (yN2 - g2i)
        coef = dt / self.dx2
        for k in range(N - 1, -1, -1):
            mu1 = self.S.solve(lam1)
            mu2 = self.S.solve(lam2)
            j = self.segment_of((k + 1) * dt)
            grad[0, j] += coef * mu1[0]
            grad[1, j] += coef * mu1[-1]
            grad[2, j] += coef * mu2[0]
            grad[3, j] += coef * mu2[-1]
            y1, y2 = states[k, 0], states[k, 1]
            d11 = 1.0 + dt * (1.0 - 2.0 * y1 - self.a * y2)
            d22 = 1.0 + dt * (1.0 - self.b * y1 - 2.0 * y2)
            new1 = d11 * mu1 - dt * self.b * y2 * mu2
            new2 = -dt * self.a * y1 * mu1 + d22 * mu2
            if wR > 0 and k > 0:
                new1 += 2.0 * wR * dt * self.tau[k] * self.w_int * (y1 - g1i)
                new2 += 2.0 * wR * dt * self.tau[k] * self.w_int * (y2 - g2i)
            lam1, lam2 = new1, new2
        # direct boundary-quadrature terms (controls appear in the cost itself)
        for k in range(1, N + 1):
            j = self.segment_of(k * dt)
            scale = 2.0 * wR * dt * self.tau[k] * self.w_bdry
            if k == N:
                scale += 2.0 * wT * self.w_bdry
            grad[0, j] += scale * (u[0, j] - self.g1[0])
            grad[1, j] += scale * (u[1, j] - self.g1[-1])
            grad[2, j] += scale * (u[2, j] - self.g2[0])
            grad[3, j] += scale * (u[3, j] - self.g2[-1])
        return J, grad

    def gradient_fd(self, u: np.ndarray, h: float = 1e-6) -> Tuple[float, np.ndarray]:
        """Central finite differences over the 4 * n_segments coordinates."""
        J0, _ = self.forward(u)
        grad = np.zeros_like(u)
        for c in range(4):
            for j in range(u.shape[1]):
                up = u.copy()
                dn = u.copy()
                up[c, j] = min(1.0, u[c, j] + h)
                dn[c, j] = max(0.0, u[c, j] - h)
                span = up[c, j] - dn[c, j]
                if span == 0.0:
                    continue
                Jp, _ = self.forward(up)
                Jm, _ = self.forward(dn)
                grad[c, j] = (Jp - Jm) / span
        return J0, grad

    def full_profile(self, u: np.ndarray, y1_int: np.ndarray, y2_int: np.ndarray, t: float) -> SpeciesState:
        j = self.segment_of(t)
        y1 = np.concatenate(([u[0, j]], y1_int, [u[1, j]]))
        y2 = np.concatenate(([u[2, j]], y2_int, [u[3, j]]))
        return SpeciesState(t=t, y1=y1, y2=y2)


def objective(problem: ControlProblem, controls: np.ndarray) -> float:
    """Objective value J(u) for piecewise-constant controls of shape
    (4, n_segments) in CHANNELS order."""
    J, _ = _ForwardModel(problem).forward(np.asarray(controls, dtype=float))
    return J


@dataclass(frozen=True)
class OptResult:
    controls: np.ndarray
    J_history: List[float]
    terminal_misfit_sup: float
    final_state: SpeciesState
    iterations: int
    stop_reason: str
    gradient_kind: str

    def to_json_dict(self, problem: Optional[ControlProblem] = None) -> dict:
        out = {
            "version": 1,
            "controls": {
                name: [float(v) for v in self.controls[c]] for c, name in enumerate(CHANNELS)
            },
            "J_history": [float(v) for v in self.J_history],
            "terminal_misfit_sup": float(self.terminal_misfit_sup),
            "iterations": self.iterations,
            "stop_reason": self.stop_reason,
            "gradient": self.gradient_kind,
        }
        if problem is not None:
            out["problem"] = problem.to_json_dict()
        return out


def default_initial_controls(problem: ControlProblem) -> np.ndarray:
    """Hold every channel at the target's boundary trace."""
    g1, g2 = np.asarray(problem.target_y1), np.asarray(problem.target_y2)
    u = np.empty((4, problem.n_segments))
    u[0, :] = g1[0]
    u[1, :] = g1[-1]
    u[2, :] = g2[0]
    u[3, :] = g2[-1]
    return np.clip(u, 0.0, 1.0)


def structured_guesses(problem: ControlProblem) -> List[np.ndarray]:
    """Candidate warm starts: the target-hold schedule plus two-phase
    schedules that first push species 1 in from the boundary, then hold.
    Steering across the bistable kinetics usually needs such an invasion
    phase; plain descent from the hold schedule stalls in its basin."""
    hold = default_initial_controls(problem)
    guesses = [hold]
    for k in range(1, problem.n_segments):
        u = hold.copy()
        u[0, :k] = 1.0
        u[1, :k] = 1.0
        u[2, :k] = 0.0
        u[3, :k] = 0.0
        guesses.append(u)
    return guesses


def terminal_misfit_sup(problem: ControlProblem, model: _ForwardModel, u: np.ndarray,
                        y1_int: np.ndarray, y2_int: np.ndarray) -> float:
    final = model.full_profile(u, y1_int, y2_int, problem.T)
    g1, g2 = np.asarray(problem.target_y1), np.asarray(problem.target_y2)
    return float(max(np.max(np.abs(final.y1 - g1)), np.max(np.abs(final.y2 - g2))))


def optimize_controls(
    problem: ControlProblem,
    u0: Union[None, str, np.ndarray] = None,
    max_iters: int = 200,
    step0: float = 1.0,
    gradient: str = "fd",
    rel_tol: float = 1e-6,
    armijo_c: float = 1e-4,
    max_backtracks: int = 30,
) -> OptResult:
    """Projected gradient descent with Armijo backtracking.

    u0 may be an explicit (4, n_segments) array, "target" for the hold
    schedule, or None/"auto" to score the structured guesses by objective
    value and descend from the best one.
    """
    if gradient not in ("fd", "adjoint"):
        raise ConfigError(f"gradient must be 'fd' or 'adjoint', got {gradient!r}")
    model = _ForwardModel(problem)

    if isinstance(u0, np.ndarray):
        u = np.clip(np.asarray(u0, dtype=float), 0.0, 1.0)
        if u.shape != (4, problem.n_segments):
            raise ConfigError(f"u0 must have shape (4, {problem.n_segments})")
    elif u0 == "target":
        u = default_initial_controls(problem)
    elif u0 is None or u0 == "auto":
        candidates = structured_guesses(problem)
        scores = [model.forward(c)[0] for c in candidates]
        u = candidates[int(np.argmin(scores))].copy()
    else:
        raise ConfigError(f"unrecognized u0 {u0!r}")

    grad_fn = model.gradient_adjoint if gradient == "adjoint" else model.gradient_fd
    J, g = grad_fn(u)
    history = [J]
    alpha = step0
    stop_reason = "max_iters"
    it = 0
    for it in range(1, max_iters + 1):
        accepted = False
        trial_alpha = alpha
        for _ in range(max_backtracks + 1):
            cand = np.clip(u - trial_alpha * g, 0.0, 1.0)
            decrease_ref = float(np.sum(g * (u - cand)))
            J_new, _ = model.forward(cand)
            if J_new <= J - armijo_c * decrease_ref and J_new < J:
                accepted = True
                break
            trial_alpha *= 0.5
        if not accepted:
            stop_reason = "line_search_stalled"
            break
        rel_drop = (J - J_new) / max(abs(J), 1e-300)
        u = cand
        J = J_new
        history.append(J)
        alpha = trial_alpha * 1.5
        if rel_drop < rel_tol:
            stop_reason = "rel_tol"
            break
        J, g = grad_fn(u)  # refresh gradient at the accepted point
        J = history[-1]
    _, (y1f, y2f) = model.forward(u)
    misfit = terminal_misfit_sup(problem, model, u, y1f, y2f)
    final = model.full_profile(u, y1f, y2f, problem.T)
    return OptResult(
        controls=u,
        J_history=history,
        terminal_misfit_sup=misfit,
        final_state=final,
        iterations=it,
        stop_reason=stop_reason,
        gradient_kind=gradient,
    )


def write_opt_result_json(result: OptResult, problem: ControlProblem, path: str) -> None:
    doc = result.to_json_dict(problem)
    grid = problem.grid
    final = result.final_state
    doc["final_state"] = {
        "t": final.t,
        "x": [float(format_sig(v)) for v in grid.nodes],
        "y1": [float(format_sig(v)) for v in final.y1],
        "y2": [float(format_sig(v)) for v in final.y2],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
