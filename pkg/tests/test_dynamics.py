"""Kinetic ODE: equilibria labels, orbits, basins, phase portraits."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvcontrol.core import CompetitionParams
from lvcontrol.dynamics import (
    BasinClass,
    OdeState,
    StabilityLabel,
    classify_basin,
    equilibria,
    integrate_ode,
    jacobian,
    phase_portrait,
    write_portrait_csv,
)
from lvcontrol.errors import ConfigError


def _by_point(infos, w1, w2, tol=1e-9):
    for info in infos:
        if abs(info.point.w1 - w1) < tol and abs(info.point.w2 - w2) < tol:
            return info
    raise AssertionError(f"no equilibrium at ({w1}, {w2})")


class TestEquilibria:
    def test_strong_regime_labels(self, strong_params):
        infos = equilibria(strong_params)
        assert len(infos) == 4
        assert _by_point(infos, 0, 0).label == StabilityLabel.REPULSIVE
        assert _by_point(infos, 1, 0).label == StabilityLabel.ATTRACTIVE
        assert _by_point(infos, 0, 1).label == StabilityLabel.ATTRACTIVE
        coex = _by_point(infos, 2 / 17, 10 / 17)
        assert coex.label == StabilityLabel.SADDLE

    def test_coexistence_eigenvalues_exact(self, strong_params):
        """At (a, b) = (1.5, 3.5) the interior Jacobian has eigenvalues
        exactly 5/17 (unstable) and -1 (stable): det(J + I) =
        (1-w1)(1-w2) - a b w1 w2 vanishes identically at the fixed point."""
        coex = _by_point(equilibria(strong_params), 2 / 17, 10 / 17)
        eigs = sorted(coex.eigenvalues)
        assert np.isclose(eigs[0], -1.0, atol=1e-9)
        assert np.isclose(eigs[1], 5.0 / 17.0, atol=1e-9)

    def test_weak_a_globally_attracting_corner(self):
        infos = equilibria(CompetitionParams(a=0.5, b=2.0))
        assert len(infos) == 3  # no interior point
        assert _by_point(infos, 1, 0).label == StabilityLabel.GLOBALLY_ATTRACTING_ON_BOX
        assert _by_point(infos, 0, 0).label == StabilityLabel.REPULSIVE
        assert _by_point(infos, 0, 1).label == StabilityLabel.SADDLE

    def test_marginal_case_a_equals_one(self):
        infos = equilibria(CompetitionParams(a=1.0, b=3.5))
        assert _by_point(infos, 0, 1).label == StabilityLabel.SADDLE

    def test_requires_unbalanced_competition(self):
        with pytest.raises(ConfigError):
            equilibria(CompetitionParams(a=1.5, b=0.8))

    def test_labels_consistent_with_eigenvalues(self):
        for a, b in [(1.2, 2.0), (2.0, 3.0), (0.5, 3.5), (3.0, 4.0)]:
            for info in equilibria(CompetitionParams(a=a, b=b)):
                eigs = np.array(info.eigenvalues)
                if info.label == StabilityLabel.REPULSIVE:
                    assert np.all(eigs > 0)
                elif info.label == StabilityLabel.SADDLE:
                    assert eigs.min() <= 0 <= eigs.max()
                else:  # attractive variants
                    assert np.all(eigs < 0)


class TestJacobian:
    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(w1=st.floats(0.0, 1.0), w2=st.floats(0.0, 1.0))
    def test_matches_finite_differences(self, w1, w2):
        p = CompetitionParams(a=1.5, b=3.5)
        J = jacobian(p, w1, w2)
        h = 1e-6

        def f(u, v):
            return np.array([u * (1 - u - p.a * v), v * (1 - p.b * u - v)])

        fd = np.column_stack(
            [
                (f(w1 + h, w2) - f(w1 - h, w2)) / (2 * h),
                (f(w1, w2 + h) - f(w1, w2 - h)) / (2 * h),
            ]
        )
        assert np.allclose(np.asarray(J), fd, atol=1e-6)


class TestOrbits:
    def test_rk4_reaches_corner(self, strong_params):
        orbit = integrate_ode(OdeState(0.05, 0.8), strong_params, T=80.0)
        final = orbit[-1]
        assert abs(final.w1) < 1e-6 and abs(final.w2 - 1.0) < 1e-6

    def test_orbit_on_separatrix_reaches_interior_point(self, strong_params):
        """The separatrix line is ODE-invariant; on it the flow contracts
        toward the interior equilibrium.  The horizon is kept moderate:
        rounding noise transverse to the line is amplified at the unstable
        rate 5/17, so exact tracking is only observable for e^(5T/17)
        within float precision."""
        orbit = integrate_ode(OdeState(0.05, 0.25), strong_params, T=30.0)
        for s in orbit[:: len(orbit) // 20]:
            assert abs(s.w2 - 5.0 * s.w1) < 1e-9
        final = orbit[-1]
        assert abs(final.w1 - 2 / 17) < 1e-9 and abs(final.w2 - 10 / 17) < 1e-9

    def test_rk4_observed_order_at_least_3_8(self, strong_params):
        ref = integrate_ode(OdeState(0.3, 0.4), strong_params, T=2.0, dt=1e-4)[-1]
        errs = []
        dts = [0.08, 0.04, 0.02]
        for dt in dts:
            end = integrate_ode(OdeState(0.3, 0.4), strong_params, T=2.0, dt=dt)[-1]
            errs.append(np.hypot(end.w1 - ref.w1, end.w2 - ref.w2))
        orders = [
            np.log(errs[i] / errs[i + 1]) / np.log(dts[i] / dts[i + 1])
            for i in range(len(dts) - 1)
        ]
        assert min(orders) >= 3.8, f"observed orders {orders}"


class TestBasins:
    def test_reference_points(self, strong_params):
        assert classify_basin(OdeState(0.0, 0.5), strong_params) == BasinClass.TO_ZERO_ONE
        assert classify_basin(OdeState(0.5, 0.5), strong_params) == BasinClass.TO_ONE_ZERO
        assert classify_basin(OdeState(0.1, 0.5), strong_params) == BasinClass.UNRESOLVED

    def test_weak_a_shortcut(self):
        p = CompetitionParams(a=0.5, b=2.0)
        assert classify_basin(OdeState(0.7, 0.9), p) == BasinClass.TO_ONE_ZERO
        assert classify_basin(OdeState(0.0, 0.4), p) == BasinClass.TO_ZERO_ONE
        assert classify_basin(OdeState(0.0, 0.0), p) == BasinClass.UNRESOLVED

    def test_separatrix_splits_half_spaces(self, strong_params):
        above = OdeState(0.1, 0.5 + 1e-3)
        below = OdeState(0.1, 0.5 - 1e-3)
        assert classify_basin(above, strong_params) == BasinClass.TO_ZERO_ONE
        assert classify_basin(below, strong_params) == BasinClass.TO_ONE_ZERO


class TestPortrait:
    def test_density_validation(self, strong_params):
        with pytest.raises(ConfigError):
            phase_portrait(strong_params, 1)

    def test_lattice_50_accounting(self, strong_params):
        table = phase_portrait(strong_params, 50)
        assert len(table) == 2500
        counts = {}
        for _, cls in table:
            counts[cls] = counts.get(cls, 0) + 1
        # exactly the lattice points landing on w2 = 5 w1 stay unresolved:
        # w1 = k/49 for k = 0..9 (w2 = 5k/49 <= 1)
        assert counts[BasinClass.UNRESOLVED] == 10
        assert counts[BasinClass.TO_ZERO_ONE] + counts[BasinClass.TO_ONE_ZERO] == 2490
        # species 2 wins only above the steep separatrix: a thin wedge
        assert counts[BasinClass.TO_ZERO_ONE] < counts[BasinClass.TO_ONE_ZERO]

    def test_csv_round_trip(self, strong_params, tmp_path):
        table = phase_portrait(strong_params, 5)
        path = tmp_path / "portrait.csv"
        write_portrait_csv(str(path), table)
        lines = path.read_text().splitlines()
        assert lines[0] == "w1_0,w2_0,class"
        assert len(lines) == 26
        assert lines[1].split(",")[2] in {c.value for c in BasinClass}
