"""Barrier-existence thresholds in b, a, and the domain-length sweep.

A "barrier" is a nontrivial steady state under the segregating boundary
values (0, 1) reached from the species-1-saturated initial state (1, 0);
its presence blocks boundary steering toward (0, 1).  The indicator

    barrier_exists(a, b, L)

is monotone: barriers persist when b or L grows or a shrinks.  This module
bisects the indicator to locate the critical b* (at fixed a, L) and a*
(at fixed b, L), and sweeps L for the empirical transition interval.  Every
probe evaluates the same cold-start indicator; independence of probes keeps
the estimated thresholds free of marching hysteresis.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .core import CompetitionParams, constant_state, make_grid
from .elliptic import solve_barrier
from .errors import BracketError, ConfigError, NonConvergedError, ResolutionFailureError
from .pde import Classification

__all__ = [
    "ThresholdResult",
    "LSweepResult",
    "barrier_exists",
    "find_b_star",
    "find_a_star",
    "sweep_L",
]


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection estimate of a barrier-existence threshold."""

    which: str  # "bStar" or "aStar"
    value: float
    bracket: Tuple[float, float]
    evaluations: List[Tuple[float, bool]]
    grid_L: float
    grid_n: int
    tol: float
    runtime_s: float

    def __post_init__(self) -> None:
        if self.which not in ("bStar", "aStar"):
            raise ConfigError(f"unknown threshold kind {self.which!r}")
        lo, hi = self.bracket
        if hi - lo > self.tol * (1 + 1e-12):
            raise ConfigError("final bracket wider than the requested tolerance")
        if not (lo <= self.value <= hi):
            raise ConfigError("threshold value must lie inside the final bracket")
        _require_monotone_indicator(self.evaluations, increasing=self.which == "bStar")

    def to_json_dict(self) -> dict:
        return {
            "which": self.which,
            "value": self.value,
            "bracket": list(self.bracket),
            "tol": self.tol,
            "evaluations": [[param, flag] for param, flag in self.evaluations],
            "grid": {"L": self.grid_L, "n": self.grid_n},
            "runtime_s": self.runtime_s,
        }


@dataclass(frozen=True)
class LSweepResult:
    """Barrier indicator across increasing domain lengths."""

    entries: List[Tuple[float, bool]]
    transition: Optional[Tuple[float, float]]  # (last L without, first L with)

    def to_json_dict(self) -> dict:
        return {
            "entries": [[L, flag] for L, flag in self.entries],
            "transition": list(self.transition) if self.transition else None,
        }


def _require_monotone_indicator(evals: Sequence[Tuple[float, bool]], increasing: bool) -> None:
    """The barrier indicator must be a step function of the swept parameter
    (False then True when increasing, True then False when decreasing)."""
    ordered = sorted(evals)
    flags = [flag for _, flag in ordered]
    if not increasing:
        flags = flags[::-1]
    if any(a and not b for a, b in zip(flags, flags[1:])):
        raise ResolutionFailureError(
            f"barrier indicator is not monotone across the recorded evaluations: {ordered}"
        )


def barrier_exists(
    a: float,
    b: float,
    L: float,
    *,
    n: int = 201,
    tol: float = 1e-8,
    t_max: float = 4000.0,
) -> bool:
    """True when marching from the (1, 0) state under boundary values (0, 1)
    settles on a nontrivial (Barrier) steady profile.

    Domains with L <= pi cannot carry a barrier; the march confirms rather
    than assumes this.  A non-converged march is indeterminate and raises.
    """
    if a <= 0 or b <= 0 or L <= 0:
        raise ConfigError(f"parameters must be positive, got a={a}, b={b}, L={L}")
    grid = make_grid(L, n)
    params = CompetitionParams(a=a, b=b)
    outcome = solve_barrier(params, grid, constant_state(grid, 1.0, 0.0), tol=tol, t_max=t_max)
    if outcome.classification == Classification.NON_CONVERGED:
        raise NonConvergedError(
            f"barrier indicator indeterminate at (a={a}, b={b}, L={L}): "
            f"march residual {outcome.residual_sup:.3e} at t={outcome.t_reached:g}"
        )
    return outcome.classification == Classification.BARRIER


def _bisect(
    which: str,
    probe,
    bracket: Tuple[float, float],
    tol: float,
    grid_L: float,
    grid_n: int,
    barrier_at_hi: bool,
) -> ThresholdResult:
    t0 = time.perf_counter()
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (lo < hi):
        raise ConfigError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
    if tol <= 0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    evals: List[Tuple[float, bool]] = []

    def indicator(x: float) -> bool:
        flag = probe(x)
        evals.append((x, flag))
        return flag

    flag_lo = indicator(lo)
    flag_hi = indicator(hi)
    if flag_lo != (not barrier_at_hi) or flag_hi != barrier_at_hi:
        raise BracketError(
            f"{which} bracket does not straddle the indicator: "
            f"barrier({lo:g})={flag_lo}, barrier({hi:g})={flag_hi}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if indicator(mid) == flag_hi:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(
        which=which,
        value=0.5 * (lo + hi),
        bracket=(lo, hi),
        evaluations=evals,
        grid_L=grid_L,
        grid_n=grid_n,
        tol=tol,
        runtime_s=time.perf_counter() - t0,
    )


def find_b_star(
    a: float,
    L: float,
    bracket: Tuple[float, float],
    tol: float,
    *,
    n: int = 201,
) -> ThresholdResult:
    """Bisect the smallest b (within the bracket) at which a barrier exists.

    Requires no barrier at bracket[0] and a barrier at bracket[1].
    """
    return _bisect(
        "bStar",
        lambda b: barrier_exists(a, b, L, n=n),
        bracket,
        tol,
        grid_L=L,
        grid_n=n,
        barrier_at_hi=True,
    )


def find_a_star(
    b: float,
    L: float,
    bracket: Tuple[float, float],
    tol: float,
    *,
    n: int = 201,
) -> ThresholdResult:
    """Bisect the largest a (within the bracket) at which a barrier exists.

    Barriers favor small a: requires a barrier at bracket[0] and none at
    bracket[1].
    """
    return _bisect(
        "aStar",
        lambda a: barrier_exists(a, b, L, n=n),
        bracket,
        tol,
        grid_L=L,
        grid_n=n,
        barrier_at_hi=False,
    )


def sweep_L(
    a: float,
    b: float,
    L_values: Sequence[float],
    *,
    n: int = 201,
    threads: int = 1,
) -> LSweepResult:
    """Evaluate the barrier indicator across increasing domain lengths and
    report the empirical transition interval."""
    Ls = [float(L) for L in L_values]
    if any(y <= x for x, y in zip(Ls, Ls[1:])):
        raise ConfigError("L_values must be strictly increasing")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(lambda L: barrier_exists(a, b, L, n=n), Ls))
    else:
        flags = [barrier_exists(a, b, L, n=n) for L in Ls]
    entries = list(zip(Ls, flags))
    _require_monotone_indicator(entries, increasing=True)
    transition: Optional[Tuple[float, float]] = None
    for (L_prev, f_prev), (L_next, f_next) in zip(entries, entries[1:]):
        if not f_prev and f_next:
            transition = (L_prev, L_next)
            break
    if transition is None and entries and entries[0][1]:
        transition = None  # barrier everywhere sampled; no interval inside the sweep
    return LSweepResult(entries=entries, transition=transition)
