"""Executable structural checks on simulated trajectories.

Each check turns one of the system's order-theoretic facts into a nodewise
numerical verification on trajectory data and returns a `CheckReport`:

* `check_comparison` — the comparison principle: orderings between a
  sub-trajectory and a super-trajectory, once true on the parabolic
  boundary, hold everywhere (species 2 ordered oppositely to species 1).
* `check_sum_supersolution` — sigma = ((a+b+2)/4)(y1+y2) is a discrete
  supersolution of the logistic equation along any admissible trajectory.
* `check_no_joint_extinction` — on domains longer than pi, total mass
  cannot be steered to zero: late-time sup(y1+y2) stays above a fixed
  fraction of the logistic steady state's maximum.
* `check_neumann_basin` — under zero-flux boundaries, initial states on the
  species-2 side of the kinetic separatrix converge uniformly to (0, 1).

Discrete inequalities reuse the solver's own stencils, so a failure means
the scheme's structure is broken, not that a different discretization
disagrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BoundaryControl, CompetitionParams, Grid1D, SpeciesState
from .elliptic import solve_logistic_steady
from .errors import ConfigError, NonConvergedError
from .pde import Classification, SimConfig, Trajectory, run_to_steady

__all__ = [
    "CheckReport",
    "check_comparison",
    "check_sum_supersolution",
    "check_no_joint_extinction",
    "check_neumann_basin",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a structural check.

    `passed` is None when the check's premise does not apply to the data
    (reported as N/A rather than a silent pass); `worst` locates the
    largest violation (or the tightest margin for lower-bound checks).
    """

    check: str
    passed: Optional[bool]
    worst_t: float
    worst_x: float
    worst_value: float
    tolerance: float
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "pass": self.passed,
            "worst": {"t": self.worst_t, "x": self.worst_x, "value": self.worst_value},
            "tolerance": self.tolerance,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _stack(traj: Trajectory):
    y1 = np.stack([s.y1 for s in traj.snapshots])
    y2 = np.stack([s.y2 for s in traj.snapshots])
    return traj.times, y1, y2


def check_comparison(traj_sub: Trajectory, traj_super: Trajectory, tol: float = 1e-8) -> CheckReport:
    """Verify y1_sub <= y1_super + tol and y2_super <= y2_sub + tol at every
    node of every snapshot.

    Both trajectories must share the grid and snapshot times; the ordering
    must already hold on the parabolic boundary (initial time and endpoints),
    otherwise the comparison premise is violated and the check refuses to run.
    """
    g_sub, g_super = traj_sub.config.grid, traj_super.config.grid
    if not g_sub.same_layout(g_super):
        raise ConfigError("comparison check needs both trajectories on the same grid")
    t_sub, y1s, y2s = _stack(traj_sub)
    t_sup, y1S, y2S = _stack(traj_super)
    if t_sub.shape != t_sup.shape or np.max(np.abs(t_sub - t_sup)) > 1e-9 * max(1.0, t_sub[-1]):
        raise ConfigError("comparison check needs identical snapshot times")

    edge = np.concatenate(
        [
            (y1s[0] - y1S[0]),
            (y2S[0] - y2s[0]),
            (y1s[:, [0, -1]] - y1S[:, [0, -1]]).ravel(),
            (y2S[:, [0, -1]] - y2s[:, [0, -1]]).ravel(),
        ]
    )
    if float(edge.max()) > tol:
        raise ConfigError(
            "parabolic-boundary ordering does not hold; the comparison premise is violated "
            f"(worst {float(edge.max()):.3e})"
        )

    v1 = y1s - y1S
    v2 = y2S - y2s
    worst = max(float(v1.max()), float(v2.max()))
    field_ = v1 if v1.max() >= v2.max() else v2
    k, i = np.unravel_index(int(np.argmax(field_)), field_.shape)
    return CheckReport(
        check="comparison",
        passed=bool(worst <= tol),
        worst_t=float(t_sub[k]),
        worst_x=float(g_sub.nodes[i]),
        worst_value=worst,
        tolerance=tol,
    )


def check_sum_supersolution(traj: Trajectory, tol: float = 0.05) -> CheckReport:
    """Verify that sigma = ((a+b+2)/4)(y1+y2) is a discrete supersolution of
    the logistic equation along the trajectory:

        (sigma_{k+1} - sigma_k)/dt - D2 sigma_k >= sigma_k (1 - sigma_k) - tol

    at interior nodes, with forward time differences between snapshots and
    the solver's central space stencil.  `tol` absorbs the snapshot-stride
    discretization error; the continuous inequality has nonnegative slack.
    """
    p = traj.config.params
    grid = traj.config.grid
    times, y1, y2 = _stack(traj)
    if times.size < 2:
        raise ConfigError("sum-supersolution check needs at least two snapshots")
    scale = (p.a + p.b + 2.0) / 4.0
    sigma = scale * (y1 + y2)
    dt = np.diff(times)[:, None]
    lap = (sigma[:-1, :-2] - 2.0 * sigma[:-1, 1:-1] + sigma[:-1, 2:]) / grid.dx**2
    lhs = (sigma[1:, 1:-1] - sigma[:-1, 1:-1]) / dt - lap
    rhs = sigma[:-1, 1:-1] * (1.0 - sigma[:-1, 1:-1])
    defect = rhs - lhs  # positive where the supersolution inequality fails
    worst = float(defect.max())
    k, i = np.unravel_index(int(np.argmax(defect)), defect.shape)
    return CheckReport(
        check="sum_supersolution",
        passed=bool(worst <= tol),
        worst_t=float(times[k]),
        worst_x=float(grid.nodes[i + 1]),
        worst_value=worst,
        tolerance=tol,
    )


def check_no_joint_extinction(traj: Trajectory, grid: Grid1D, delta: float = 0.1) -> CheckReport:
    """Late-time persistence of total mass on domains longer than pi.

    Verifies inf over the last quarter of snapshots of sup_x (y1 + y2)
    against (4/(a+b+2)) * (1-delta) * max Theta, with Theta the positive
    logistic steady state.  Inapplicable (N/A) when L <= pi; vacuous when
    the initial state is identically zero (the excluded initial datum).
    """
    p = traj.config.params
    times, y1, y2 = _stack(traj)
    theta = solve_logistic_steady(grid)
    if theta.trivial:
        return CheckReport(
            check="no_joint_extinction",
            passed=None,
            worst_t=float(times[-1]),
            worst_x=0.0,
            worst_value=0.0,
            tolerance=0.0,
            note="inapplicable: L <= pi has no positive logistic steady state",
        )
    zeta0 = y1[0] + y2[0]
    if float(zeta0.max()) == 0.0:
        return CheckReport(
            check="no_joint_extinction",
            passed=True,
            worst_t=float(times[0]),
            worst_x=0.0,
            worst_value=0.0,
            tolerance=0.0,
            note="vacuous: zero initial state is excluded from the persistence claim",
        )
    bound = (4.0 / (p.a + p.b + 2.0)) * (1.0 - delta) * float(theta.theta.max())
    late = times >= times[0] + 0.75 * (times[-1] - times[0])
    zeta = y1[late] + y2[late]
    sup_per_snapshot = zeta.max(axis=1)
    k = int(np.argmin(sup_per_snapshot))
    worst_val = float(sup_per_snapshot[k])
    i = int(np.argmax(zeta[k]))
    return CheckReport(
        check="no_joint_extinction",
        passed=bool(worst_val >= bound),
        worst_t=float(times[late][k]),
        worst_x=float(grid.nodes[i]),
        worst_value=worst_val,
        tolerance=bound,
    )


def check_neumann_basin(
    params: CompetitionParams,
    grid: Grid1D,
    init: SpeciesState,
    *,
    tol: float = 0.01,
    t_max: float = 2000.0,
) -> CheckReport:
    """Zero-flux run from initial data on the species-2 side of the kinetic
    separatrix; verifies uniform convergence to (0, 1).

    Premises: a > 1 and y2(x, 0) >= ((b-1)/(a-1)) y1(x, 0) at every node
    with strict inequality somewhere.  Violations report N/A.
    """
    if init.n != grid.n:
        raise ConfigError("init and grid disagree on node count")
    if params.a <= 1.0:
        return CheckReport(
            check="neumann_basin",
            passed=None,
            worst_t=0.0,
            worst_x=0.0,
            worst_value=0.0,
            tolerance=tol,
            note="inapplicable: separatrix premise needs a > 1",
        )
    slope = (params.b - 1.0) / (params.a - 1.0)
    margin = init.y2 - slope * init.y1
    if float(margin.min()) < 0.0 or float(margin.max()) <= 0.0:
        i = int(np.argmin(margin))
        return CheckReport(
            check="neumann_basin",
            passed=None,
            worst_t=0.0,
            worst_x=float(grid.nodes[i]),
            worst_value=float(margin[i]),
            tolerance=tol,
            note="inapplicable: initial state is not above the separatrix",
        )
    control = BoundaryControl.neumann_zero()
    cfg = SimConfig(
        grid=grid, params=params, control=control, init=init, t_end=t_max, scheme="imex_cn"
    )
    outcome = run_to_steady(cfg, tol=1e-8, t_max=t_max)
    if outcome.classification == Classification.NON_CONVERGED:
        raise NonConvergedError(
            f"zero-flux run did not settle by t={t_max:g} (residual {outcome.residual_sup:.3e})"
        )
    y1f, y2f = outcome.profile.y1, outcome.profile.y2
    dev = np.maximum(np.abs(y1f), np.abs(1.0 - y2f))
    i = int(np.argmax(dev))
    worst = float(dev[i])
    return CheckReport(
        check="neumann_basin",
        passed=bool(worst <= tol),
        worst_t=float(outcome.t_reached),
        worst_x=float(grid.nodes[i]),
        worst_value=worst,
        tolerance=tol,
    )
