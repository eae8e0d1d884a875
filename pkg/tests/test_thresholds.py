"""Critical-parameter search: barrier indicator, bisection, length sweeps."""

from __future__ import annotations

import json

import numpy as np
import pytest

from lvcontrol.errors import BracketError, ConfigError, ResolutionFailureError
from lvcontrol.thresholds import (
    ThresholdResult,
    barrier_exists,
    find_a_star,
    find_b_star,
    sweep_L,
)


class TestIndicator:
    def test_reference_points(self):
        assert barrier_exists(1.5, 3.5, 8.0)
        assert not barrier_exists(1.5, 2.6, 8.0)
        assert barrier_exists(1.5, 2.6, 16.0)
        assert not barrier_exists(1.5, 3.5, 3.0)


@pytest.fixture(scope="module")
def b_star():
    return find_b_star(1.5, 8.0, (2.6, 3.5), 0.05)


class TestBStar:
    def test_value_inside_bracket(self, b_star):
        assert 2.6 < b_star.value < 3.5
        assert b_star.bracket[1] - b_star.bracket[0] <= 0.05
        assert b_star.bracket[0] <= b_star.value <= b_star.bracket[1]

    def test_indicator_monotone_across_evaluations(self, b_star):
        evals = sorted(b_star.evaluations)
        flags = [flag for _, flag in evals]
        # once the barrier appears it never disappears as b grows
        assert flags == sorted(flags)

    def test_bisection_evaluation_count(self, b_star):
        # bracket 0.9 wide, tol 0.05 -> ceil(log2(18)) = 5 interior probes
        # plus the two endpoint checks
        assert len(b_star.evaluations) <= 8

    def test_json_payload(self, b_star):
        doc = b_star.to_json_dict()
        assert doc["which"] == "bStar"
        assert doc["grid"] == {"L": 8.0, "n": 201}
        assert doc["tol"] == 0.05
        json.dumps(doc)  # serializable

    def test_refinement_stability(self, b_star):
        refined = find_b_star(1.5, 8.0, (2.6, 3.5), 0.05, n=401)
        assert abs(refined.value - b_star.value) < 0.1

    def test_bad_bracket_raises(self):
        with pytest.raises(BracketError):
            find_b_star(1.5, 8.0, (3.6, 3.8), 0.05)  # indicator same at both ends
        with pytest.raises(ConfigError):
            find_b_star(1.5, 8.0, (3.5, 2.6), 0.05)  # reversed endpoints


class TestAStar:
    def test_value_and_direction(self):
        result = find_a_star(3.5, 8.0, (2.0, 5.0), 0.1)
        # barrier present at small a, absent at large a
        by_a = sorted(result.evaluations)
        flags = [flag for _, flag in by_a]
        assert flags == sorted(flags, reverse=True)
        assert 2.0 < result.value < 5.0

    def test_exceeds_diffusive_lower_bound(self):
        """a* can never fall below the mass-persistence bound
        1 - pi^2/L^2 coming from the logistic threshold."""
        result = find_a_star(3.5, 8.0, (2.0, 5.0), 0.1)
        assert result.value >= 1.0 - np.pi**2 / 64.0


class TestSweep:
    def test_transition_located(self):
        res = sweep_L(1.5, 3.5, [3.0, 8.0, 16.0])
        assert [e[1] for e in res.entries] == [False, True, True]
        assert res.transition == (3.0, 8.0)

    def test_threaded_matches_serial(self):
        serial = sweep_L(1.5, 3.5, [3.0, 8.0, 16.0], threads=1)
        fanned = sweep_L(1.5, 3.5, [3.0, 8.0, 16.0], threads=3)
        assert [tuple(e) for e in serial.entries] == [tuple(e) for e in fanned.entries]

    def test_requires_increasing_lengths(self):
        with pytest.raises(Exception):
            sweep_L(1.5, 3.5, [8.0, 3.0])

    def test_non_monotone_indicator_rejected(self):
        """A sweep whose indicator flips back and forth cannot define a
        transition and must fail loudly."""
        from lvcontrol.thresholds import _require_monotone_indicator

        with pytest.raises(ResolutionFailureError):
            _require_monotone_indicator([(1.0, False), (2.0, True), (3.0, False)], increasing=True)


class TestResultValidation:
    def test_rejects_value_outside_bracket(self):
        with pytest.raises(Exception):
            ThresholdResult(
                which="bStar",
                value=5.0,
                bracket=(2.6, 2.7),
                evaluations=[(2.6, False), (2.7, True)],
                grid_L=8.0,
                grid_n=201,
                tol=0.1,
                runtime_s=0.0,
            )
