"""Structural checks on simulated trajectories."""

from __future__ import annotations

import json

import numpy as np
import pytest

from lvcontrol.checks import (
    check_comparison,
    check_neumann_basin,
    check_no_joint_extinction,
    check_sum_supersolution,
)
from lvcontrol.core import (
    BoundaryControl,
    CompetitionParams,
    SpeciesState,
    constant_state,
    make_grid,
)
from lvcontrol.errors import ConfigError
from lvcontrol.pde import SimConfig, simulate


def _run(grid, params, control, init, t_end=2.0, stride=0.25):
    cfg = SimConfig(
        grid=grid, params=params, control=control, init=init,
        t_end=t_end, scheme="imex_cn", dt=0.01, snapshot_stride=stride,
    )
    return simulate(cfg)


@pytest.fixture(scope="module")
def grid():
    return make_grid(6.0, 121)


@pytest.fixture(scope="module")
def params():
    return CompetitionParams(a=1.5, b=3.5)


class TestComparison:
    def test_ordered_pair_stays_ordered(self, grid, params):
        sub = _run(grid, params, BoundaryControl.dirichlet_const(0.2, 0.6),
                   constant_state(grid, 0.3, 0.7))
        sup = _run(grid, params, BoundaryControl.dirichlet_const(0.4, 0.4),
                   constant_state(grid, 0.5, 0.5))
        report = check_comparison(sub, sup)
        assert report.passed is True
        assert report.worst_value <= 1e-8

    def test_grid_mismatch_rejected(self, grid, params):
        other = make_grid(6.0, 61)
        sub = _run(grid, params, BoundaryControl.dirichlet_const(0.0, 1.0),
                   constant_state(grid, 0.0, 1.0), t_end=0.5)
        sup = _run(other, params, BoundaryControl.dirichlet_const(1.0, 0.0),
                   constant_state(other, 1.0, 0.0), t_end=0.5)
        with pytest.raises(ConfigError):
            check_comparison(sub, sup)

    def test_snapshot_time_mismatch_rejected(self, grid, params):
        sub = _run(grid, params, BoundaryControl.dirichlet_const(0.0, 1.0),
                   constant_state(grid, 0.0, 1.0), t_end=0.5)
        sup = _run(grid, params, BoundaryControl.dirichlet_const(1.0, 0.0),
                   constant_state(grid, 1.0, 0.0), t_end=1.0)
        with pytest.raises(ConfigError):
            check_comparison(sub, sup)

    def test_unordered_initial_data_rejected(self, grid, params):
        sub = _run(grid, params, BoundaryControl.dirichlet_const(0.0, 1.0),
                   constant_state(grid, 0.8, 0.2), t_end=0.5)
        sup = _run(grid, params, BoundaryControl.dirichlet_const(0.0, 1.0),
                   constant_state(grid, 0.2, 0.8), t_end=0.5)
        with pytest.raises(ConfigError, match="premise"):
            check_comparison(sub, sup)

    def test_report_json_shape(self, grid, params):
        ctrl = BoundaryControl.dirichlet_const(0.5, 0.5)
        traj = _run(grid, params, ctrl, constant_state(grid, 0.5, 0.5), t_end=0.5)
        doc = check_comparison(traj, traj).to_json_dict()
        assert set(doc) == {"check", "pass", "worst", "tolerance", "note"}
        assert set(doc["worst"]) == {"t", "x", "value"}
        json.loads(check_comparison(traj, traj).to_json())


class TestSumSupersolution:
    def test_holds_along_generic_run(self, grid, params):
        traj = _run(grid, params, BoundaryControl.dirichlet_const(1.0, 1.0),
                    constant_state(grid, 0.9, 0.9), t_end=3.0)
        report = check_sum_supersolution(traj)
        assert report.passed is True
        # the continuous inequality has strictly nonnegative slack
        assert report.worst_value < 0.01

    def test_single_snapshot_rejected(self, grid, params):
        traj = _run(grid, params, BoundaryControl.dirichlet_const(0.5, 0.5),
                    constant_state(grid, 0.5, 0.5), t_end=0.5)
        truncated = type(traj)(config=traj.config, snapshots=traj.snapshots[:1])
        with pytest.raises(ConfigError):
            check_sum_supersolution(truncated)

    def test_tampered_trajectory_fails(self, grid, params):
        """A trajectory that is not a solution of the system should be caught:
        freezing the state while time advances breaks the inequality wherever
        sigma(1 - sigma) > 0."""
        traj = _run(grid, params, BoundaryControl.dirichlet_const(0.3, 0.3),
                    constant_state(grid, 0.15, 0.15), t_end=2.0)
        frozen = [SpeciesState(t=s.t, y1=traj.snapshots[0].y1, y2=traj.snapshots[0].y2)
                  for s in traj.snapshots]
        fake = type(traj)(config=traj.config, snapshots=frozen)
        report = check_sum_supersolution(fake)
        assert report.passed is False


class TestNoJointExtinction:
    def test_persists_on_long_domain(self, params):
        g = make_grid(4.0, 81)
        traj = _run(g, params, BoundaryControl.dirichlet_const(0.0, 0.0),
                    constant_state(g, 0.6, 0.4), t_end=40.0, stride=2.0)
        report = check_no_joint_extinction(traj, g)
        assert report.passed is True
        assert report.worst_value >= report.tolerance

    def test_short_domain_is_na(self, params):
        g = make_grid(3.0, 61)
        traj = _run(g, params, BoundaryControl.dirichlet_const(0.0, 0.0),
                    constant_state(g, 0.6, 0.4), t_end=5.0)
        report = check_no_joint_extinction(traj, g)
        assert report.passed is None
        assert "inapplicable" in report.note

    def test_zero_initial_state_is_vacuous(self, params):
        g = make_grid(4.0, 81)
        traj = _run(g, params, BoundaryControl.dirichlet_const(0.0, 0.0),
                    constant_state(g, 0.0, 0.0), t_end=5.0)
        report = check_no_joint_extinction(traj, g)
        assert report.passed is True
        assert "vacuous" in report.note


class TestNeumannBasin:
    def test_above_separatrix_settles_to_zero_one(self, params):
        g = make_grid(8.0, 101)
        report = check_neumann_basin(params, g, constant_state(g, 0.05, 0.8))
        assert report.passed is True
        assert report.worst_value <= 0.01

    def test_weak_competition_is_na(self):
        g = make_grid(8.0, 101)
        report = check_neumann_basin(
            CompetitionParams(a=0.5, b=3.5), g, constant_state(g, 0.05, 0.8)
        )
        assert report.passed is None
        assert "a > 1" in report.note

    def test_below_separatrix_is_na(self, params):
        g = make_grid(8.0, 101)
        # slope is 5: y2 = 0.2 < 5 * 0.3 at every node
        report = check_neumann_basin(params, g, constant_state(g, 0.3, 0.2))
        assert report.passed is None
        assert "separatrix" in report.note

    def test_on_separatrix_without_strictness_is_na(self, params):
        g = make_grid(8.0, 101)
        report = check_neumann_basin(params, g, constant_state(g, 0.1, 0.5))
        assert report.passed is None
