"""Core types: parameters, grids, states, boundary controls, equilibria."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvcontrol.core import (
    BOX_TOL,
    BoundaryControl,
    CompetitionParams,
    DirichletConst,
    DirichletPiecewise,
    NeumannZero,
    SpeciesState,
    coexistence_equilibrium,
    constant_state,
    make_grid,
    separatrix_value,
)
from lvcontrol.errors import ConfigError


class TestCompetitionParams:
    def test_positive_finite_required(self):
        CompetitionParams(a=1.5, b=3.5)
        for bad in [(0.0, 1.0), (1.0, -2.0), (np.nan, 1.0), (1.0, np.inf)]:
            with pytest.raises(ConfigError):
                CompetitionParams(a=bad[0], b=bad[1])

    def test_strong_competition_flag(self):
        assert CompetitionParams(a=1.5, b=3.5).strong_competition
        assert not CompetitionParams(a=1.5, b=1.2).strong_competition
        assert not CompetitionParams(a=0.5, b=0.8).strong_competition


class TestGrid:
    def test_make_grid_layout(self):
        g = make_grid(8.0, 201)
        assert g.n == 201
        assert g.nodes[0] == 0.0 and g.nodes[-1] == 8.0
        assert np.isclose(g.dx, 8.0 / 200)

    def test_minimum_nodes(self):
        with pytest.raises(ConfigError):
            make_grid(1.0, 2)
        with pytest.raises(ConfigError):
            make_grid(-1.0, 11)


class TestSpeciesState:
    def test_clamps_rounding_noise(self):
        g = make_grid(1.0, 11)
        y = np.full(11, 1.0 + 0.5 * BOX_TOL)
        s = SpeciesState(t=0.0, y1=y, y2=np.zeros(11) - 0.5 * BOX_TOL)
        assert s.y1.max() <= 1.0 and s.y2.min() >= 0.0

    def test_rejects_out_of_box(self):
        with pytest.raises(ConfigError):
            SpeciesState(t=0.0, y1=np.full(11, 1.1), y2=np.zeros(11))
        with pytest.raises(ConfigError):
            SpeciesState(t=0.0, y1=np.zeros(11), y2=np.full(11, -0.1))


class TestControls:
    def test_const_channel_bounds(self):
        DirichletConst(value=0.0)
        DirichletConst(value=1.0)
        with pytest.raises(ConfigError):
            DirichletConst(value=1.2)

    def test_piecewise_validation(self):
        DirichletPiecewise(breakpoints=(0.0, 1.0), values=(0.2, 0.8))
        with pytest.raises(ConfigError):
            DirichletPiecewise(breakpoints=(0.5, 1.0), values=(0.2, 0.8))  # must start at 0
        with pytest.raises(ConfigError):
            DirichletPiecewise(breakpoints=(0.0, 1.0, 0.5), values=(0.2, 0.8, 0.3))
        with pytest.raises(ConfigError):
            DirichletPiecewise(breakpoints=(0.0, 1.0), values=(0.2, 1.8))

    def test_piecewise_lookup_holds_left_value(self):
        ch = DirichletPiecewise(breakpoints=(0.0, 1.0, 2.0), values=(0.1, 0.5, 0.9))
        assert ch.at(0.0) == 0.1
        assert ch.at(0.999) == 0.1
        assert ch.at(1.0) == 0.5
        assert ch.at(5.0) == 0.9

    def test_constant_pair_detection(self):
        c = BoundaryControl.dirichlet_const(0.0, 1.0)
        assert c.is_constant_pair(0.0, 1.0)
        assert not c.is_constant_pair(1.0, 0.0)
        n = BoundaryControl.neumann_zero()
        assert not n.is_constant_pair(0.0, 1.0)
        assert n.is_neumann(1, "left") and n.is_neumann(2, "right")
        assert n.value(1, "left", 0.0) is None
        assert c.value(2, "right", 3.0) == 1.0


class TestCoexistence:
    def test_strong_regime_point(self):
        p = CompetitionParams(a=1.5, b=3.5)
        c = coexistence_equilibrium(p)
        assert c is not None
        assert np.isclose(c.w1, 1.0 / 8.5, atol=1e-12)
        assert np.isclose(c.w2, 5.0 / 8.5, atol=1e-12)
        # it solves the kinetic fixed-point equations
        assert np.isclose(1.0 - c.w1 - p.a * c.w2, 0.0, atol=1e-12)
        assert np.isclose(1.0 - p.b * c.w1 - c.w2, 0.0, atol=1e-12)

    def test_weak_a_has_no_interior_point(self):
        assert coexistence_equilibrium(CompetitionParams(a=0.5, b=2.0)) is None

    def test_degenerate_product_rejected(self):
        with pytest.raises(ConfigError):
            coexistence_equilibrium(CompetitionParams(a=2.0, b=0.5))

    def test_boundary_case_a_equals_one(self):
        c = coexistence_equilibrium(CompetitionParams(a=1.0, b=3.5))
        assert c is not None and c.w1 == 0.0 and c.w2 == 1.0


class TestSeparatrix:
    def test_slope_five_in_reference_regime(self):
        p = CompetitionParams(a=1.5, b=3.5)
        assert np.isclose(separatrix_value(p, 0.1), 0.5, atol=1e-12)

    def test_needs_strong_a(self):
        with pytest.raises(ConfigError):
            separatrix_value(CompetitionParams(a=0.5, b=2.0), 0.1)

    def test_domain_restricted_to_premise_segment(self):
        p = CompetitionParams(a=1.5, b=3.5)
        with pytest.raises(ConfigError):
            separatrix_value(p, 0.5)  # beyond (a-1)/(b-1) = 0.2


@settings(max_examples=50, deadline=None, derandomize=True)
@given(
    a=st.floats(1.0 + 1e-6, 5.0),
    b=st.floats(1.0 + 1e-6, 8.0),
)
def test_coexistence_point_always_inside_open_box(a, b):
    """For a > 1 (and b > a so competition is ordered) the interior
    equilibrium lies strictly inside (0,1)^2 on the separatrix line."""
    p = CompetitionParams(a=a, b=b)
    if a * b == 1.0:
        return
    c = coexistence_equilibrium(p)
    if a <= 1.0 or c is None:
        return
    if a * b > 1.0:
        assert 0.0 < c.w1 < 1.0 and 0.0 < c.w2 < 1.0
        slope = (b - 1.0) / (a - 1.0)
        assert np.isclose(c.w2, slope * c.w1, rtol=1e-9)


def test_constant_state_builds_on_grid(grid8):
    s = constant_state(grid8, 0.3, 0.6)
    assert s.n == grid8.n
    assert np.all(s.y1 == 0.3) and np.all(s.y2 == 0.6)
