"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from lvcontrol.core import CompetitionParams, make_grid


@pytest.fixture
def strong_params() -> CompetitionParams:
    """Strong-competition regime used throughout the barrier experiments."""
    return CompetitionParams(a=1.5, b=3.5)


@pytest.fixture
def weak_params() -> CompetitionParams:
    """Sub-threshold competition: no barrier at L=8."""
    return CompetitionParams(a=1.5, b=2.6)


@pytest.fixture
def grid8():
    return make_grid(8.0, 201)


def random_profile(rng: np.random.Generator, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Smooth-ish random profile in [lo, hi]: random nodes low-pass filtered
    so states are physically plausible rather than white noise."""
    raw = rng.uniform(0.0, 1.0, n)
    kernel = np.ones(7) / 7.0
    smooth = np.convolve(raw, kernel, mode="same")
    smooth = (smooth - smooth.min()) / max(smooth.max() - smooth.min(), 1e-12)
    return lo + (hi - lo) * smooth
