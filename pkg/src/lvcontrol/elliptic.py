"""Steady states and constructive subsolutions for the competition system.

Three kinds of object live here:

* scalar logistic-type boundary-value profiles (`solve_logistic_steady` and
  the shared damped-Newton/marching solver behind it),
* the two-species barrier steady state obtained by time-marching under the
  segregating boundary pair (0, 1) (`solve_barrier`, `BarrierProfile`),
* explicit piecewise subsolution pairs that certify a barrier exists for
  suitable parameters (`construct_bbarrier_subsolution` for large b,
  `construct_a_small_subsolution` for small a), plus the nodewise verifier
  `verify_subsolution` that checks the defining differential inequalities
  on the discrete grid.

The constructions snap every junction onto a grid node and solve each scalar
piece as a *discrete* BVP on the aligned subgrid, so the verifier's central
differences reproduce the defining relations to solver tolerance instead of
only up to O(dx**2) discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_banded

from .core import (
    BoundaryControl,
    CompetitionParams,
    Grid1D,
    SpeciesState,
    coexistence_equilibrium,
    make_grid,
)
from .errors import ConfigError, NonConvergedError, SearchFailureError
from .pde import Classification, SimConfig, SteadyOutcome, format_sig, run_to_steady

__all__ = [
    "DELTA_TRIVIAL",
    "LogisticProfile",
    "BarrierProfile",
    "SubsolutionRecipe",
    "VerificationReport",
    "solve_logistic_steady",
    "solve_barrier",
    "as_barrier_profile",
    "construct_psi_lemma",
    "construct_bbarrier_subsolution",
    "construct_a_small_subsolution",
    "verify_subsolution",
    "barrier_exceeds_coexistence",
    "write_profile_csv",
]

# Profiles whose sup falls below this are reported as the trivial (zero)
# steady state.  It sits far above the 1e-10 solver tolerance and far below
# any genuinely positive profile (whose sup is O(1)).
DELTA_TRIVIAL = 1e-6

_NEWTON_TOL = 1e-10
_NEWTON_MAX_ITERS = 50
_NEWTON_MAX_HALVINGS = 30


# ---------------------------------------------------------------------------
# Scalar solver: -u'' = u*(kappa - q(x) - u), Dirichlet ends
# ---------------------------------------------------------------------------


def _kpp_residual(u: np.ndarray, dx: float, kappa: float, q: np.ndarray) -> np.ndarray:
    """Interior residual of the discrete BVP (length n-2)."""
    lap = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / dx**2
    return lap + u[1:-1] * (kappa - q[1:-1] - u[1:-1])


def _kpp_newton(
    u0: np.ndarray, dx: float, kappa: float, q: np.ndarray, bc: Tuple[float, float]
) -> Optional[np.ndarray]:
    """Damped Newton on the interior unknowns; None if it fails to converge."""
    u = u0.copy()
    u[0], u[-1] = bc
    m = u.size - 2
    if m <= 0:
        return u
    for _ in range(_NEWTON_MAX_ITERS):
        res = _kpp_residual(u, dx, kappa, q)
        rnorm = float(np.max(np.abs(res)))
        if rnorm < _NEWTON_TOL:
            return u
        # Tridiagonal Jacobian of the interior residual in banded form.
        diag = -2.0 / dx**2 + kappa - q[1:-1] - 2.0 * u[1:-1]
        band = np.zeros((3, m))
        band[0, 1:] = 1.0 / dx**2
        band[1, :] = diag
        band[2, :-1] = 1.0 / dx**2
        try:
            du = solve_banded((1, 1), band, -res)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        for _ in range(_NEWTON_MAX_HALVINGS):
            trial = u.copy()
            trial[1:-1] = u[1:-1] + lam * du
            tnorm = float(np.max(np.abs(_kpp_residual(trial, dx, kappa, q))))
            if tnorm < rnorm * (1.0 - 1e-4 * lam) or tnorm < _NEWTON_TOL:
                u = trial
                break
            lam *= 0.5
        else:
            return None
    return None


def _kpp_march(
    u0: np.ndarray, dx: float, kappa: float, q: np.ndarray, bc: Tuple[float, float]
) -> np.ndarray:
    """Implicit-diffusion, explicit-reaction march to the attracting steady
    state.  The step is small enough that the map is monotone on [0, 1]."""
    u = u0.copy()
    u[0], u[-1] = bc
    m = u.size - 2
    if m <= 0:
        return u
    qmax = float(q.max()) if q.size else 0.0
    dt = 0.5 / (1.0 + abs(kappa) + qmax + 2.0)
    mu = dt / dx**2
    band = np.zeros((3, m))
    band[0, 1:] = -mu
    band[1, :] = 1.0 + 2.0 * mu
    band[2, :-1] = -mu
    t = 0.0
    t_max = 4000.0
    while t < t_max:
        rhs = u[1:-1] + dt * u[1:-1] * (kappa - q[1:-1] - u[1:-1])
        rhs[0] += mu * u[0]
        rhs[-1] += mu * u[-1]
        new = solve_banded((1, 1), band, rhs)
        change = float(np.max(np.abs(new - u[1:-1]))) / dt
        u[1:-1] = new
        t += dt
        if change < 1e-9:
            break
    return u


def _solve_kpp_bvp(
    dx: float,
    kappa: float,
    q: np.ndarray,
    bc: Tuple[float, float],
    init: np.ndarray,
    reject_trivial: bool = False,
) -> np.ndarray:
    """Solve -u'' = u*(kappa - q(x) - u) with Dirichlet data `bc`, residual
    below 1e-10, by damped Newton with a monotone-marching fallback.

    With `reject_trivial`, a Newton iterate captured by the zero root or by
    a sign-changing root counts as a failure (the positive profile is
    wanted); the march then ascends to the positive attractor before Newton
    polishes it.
    """
    u = _kpp_newton(init, dx, kappa, q, bc)
    if u is not None and reject_trivial and (u.max() < DELTA_TRIVIAL or u.min() < 0.0):
        u = None
    if u is None:
        marched = _kpp_march(init, dx, kappa, q, bc)
        u = _kpp_newton(marched, dx, kappa, q, bc)
        if u is None:
            res = float(np.max(np.abs(_kpp_residual(marched, dx, kappa, q))))
            if res < _NEWTON_TOL:
                return marched
            raise NonConvergedError(
                f"scalar BVP solver failed: Newton stalled and marching left residual {res:.3e}"
            )
    return u


# ---------------------------------------------------------------------------
# Logistic steady state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogisticProfile:
    """Steady state of the scalar logistic equation with zero Dirichlet data."""

    grid: Grid1D
    theta: np.ndarray
    trivial: bool

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta, dtype=float)
        if theta.shape != (self.grid.n,):
            raise ConfigError("logistic profile shape does not match the grid")
        if abs(theta[0]) > 1e-9 or abs(theta[-1]) > 1e-9:
            raise ConfigError("logistic profile must vanish at the endpoints")
        if self.trivial != bool(theta.max() < DELTA_TRIVIAL):
            raise ConfigError("trivial flag inconsistent with the profile")
        if not self.trivial and theta[1:-1].min() <= 0.0:
            raise ConfigError("nontrivial logistic profile must be positive on the interior")
        object.__setattr__(self, "theta", theta)


def solve_logistic_steady(grid: Grid1D) -> LogisticProfile:
    """Steady state of u_t = u'' + u(1-u) with zero Dirichlet data.

    For L <= pi only the zero state exists and it is returned directly; for
    L > pi the positive profile is computed by damped Newton (marching
    fallback) from the half-sine seed, to residual below 1e-8.
    """
    if grid.L <= math.pi:
        return LogisticProfile(grid=grid, theta=np.zeros(grid.n), trivial=True)
    init = 0.5 * np.sin(math.pi * grid.nodes / grid.L)
    q = np.zeros(grid.n)
    theta = _solve_kpp_bvp(grid.dx, 1.0, q, (0.0, 0.0), init, reject_trivial=True)
    return LogisticProfile(grid=grid, theta=theta, trivial=bool(theta.max() < DELTA_TRIVIAL))


# ---------------------------------------------------------------------------
# Barrier steady state (two species, boundary pair (0, 1))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BarrierProfile:
    """Converged steady pair under the segregating boundary values (0, 1)."""

    grid: Grid1D
    phi: np.ndarray
    psi: np.ndarray
    residual_sup: float

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        if phi.shape != (self.grid.n,) or psi.shape != (self.grid.n,):
            raise ConfigError("barrier profile shape does not match the grid")
        if max(abs(phi[0]), abs(phi[-1])) > 1e-6 or max(abs(psi[0] - 1), abs(psi[-1] - 1)) > 1e-6:
            raise ConfigError("barrier profile must satisfy phi=0, psi=1 at the endpoints")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    @property
    def trivial(self) -> bool:
        """True when the pair is the trivial (0, 1) state rather than a
        genuinely interior barrier (phi, psi strictly inside (0, 1))."""
        phi_in, psi_in = self.phi[1:-1], self.psi[1:-1]
        return not (
            phi_in.min() > 0.0 and phi_in.max() < 1.0 and psi_in.min() > 0.0 and psi_in.max() < 1.0
        )


def solve_barrier(
    params: CompetitionParams,
    grid: Grid1D,
    init: SpeciesState,
    *,
    tol: float = 1e-8,
    t_max: float = 4000.0,
    track_monotone: bool = False,
) -> SteadyOutcome:
    """March the system under boundary values (0, 1) until steady and
    classify the limit (`TrivialZeroOne` vs `Barrier`).

    With `track_monotone` the outcome records the worst violation of
    "species 1 nondecreasing / species 2 nonincreasing in time", which a
    verified subsolution initial state keeps at zero (up to 1e-8).
    """
    control = BoundaryControl.dirichlet_const(0.0, 1.0)
    cfg = SimConfig(
        grid=grid,
        params=params,
        control=control,
        init=init,
        t_end=t_max,
        scheme="imex_cn",
    )
    return run_to_steady(cfg, tol=tol, t_max=t_max, track_monotone=track_monotone)


def as_barrier_profile(outcome: SteadyOutcome, grid: Grid1D) -> BarrierProfile:
    """Repackage a converged steady outcome as a BarrierProfile."""
    if outcome.classification == Classification.NON_CONVERGED:
        raise NonConvergedError(
            f"cannot form a barrier profile from a non-converged outcome "
            f"(residual {outcome.residual_sup:.3e} at t={outcome.t_reached:g})"
        )
    return BarrierProfile(
        grid=grid,
        phi=outcome.profile.y1.copy(),
        psi=outcome.profile.y2.copy(),
        residual_sup=outcome.residual_sup,
    )


def barrier_exceeds_coexistence(phi: np.ndarray, psi: np.ndarray, params: CompetitionParams) -> bool:
    """True when some node has phi above the coexistence value of species 1
    or psi below that of species 2 — the property that lets a barrier block
    every invasion attempt when both competition coefficients exceed one."""
    coex = coexistence_equilibrium(params)
    if coex is None:
        raise ConfigError("coexistence point undefined for these parameters")
    return bool(np.any(phi > coex.w1) or np.any(psi < coex.w2))


# ---------------------------------------------------------------------------
# Constructive subsolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsolutionRecipe:
    """Constants behind a constructed barrier subsolution.

    epsilon, R, C are the free constants of the construction (depth of the
    species-2 dip, width of the inner interval, slope margin); M = (L-R)/2
    is the wing half-width; b_bar is the competition coefficient found by
    the doubling search; delta and theta_len record the interior-smallness
    level and the boundary-layer width implied by the search, kept for
    audit only.
    """

    a: float
    L: float
    epsilon: float
    R: float
    M: float
    C: float
    b_bar: float
    delta: float
    theta_len: float

    def __post_init__(self) -> None:
        lo = max((self.a - 1.0) / self.a, 0.0) if self.a > 0 else 0.0
        if self.a <= 0:
            raise ConfigError("recipe requires a > 0")
        if not (lo < self.epsilon < 1.0):
            raise ConfigError(
                f"epsilon {self.epsilon:.6g} outside the admissible interval ({lo:.6g}, 1)"
            )
        r_lo = max(math.pi, self.L - 4.0 * math.sqrt(2.0 * self.epsilon))
        if not (r_lo < self.R < self.L):
            raise ConfigError(f"R {self.R:.6g} outside the admissible interval ({r_lo:.6g}, {self.L:.6g})")
        if abs(self.M - (self.L - self.R) / 2.0) > 1e-9:
            raise ConfigError("M must equal (L-R)/2")
        if self.M > 2.0 * math.sqrt(2.0 * self.epsilon) + 1e-12:
            raise ConfigError("M exceeds the parabola-extension bound 2*sqrt(2*epsilon)")
        if self.C <= 4.0 * self.epsilon / (self.L - self.R):
            raise ConfigError("C must exceed 4*epsilon/(L-R)")
        if self.delta <= 0 or self.theta_len <= 0:
            raise ConfigError("audit constants delta and theta_len must be positive")


def construct_psi_lemma(
    R: float, eps: float, C: float, phi: np.ndarray
) -> Tuple[float, np.ndarray]:
    """Find a coefficient b_bar such that the solution of

        -psi'' = psi*(1 - b_bar*phi - psi),  psi(0) = psi(R) = 1 - eps

    stays strictly below 1-eps on the interior and has steep one-sided
    slopes: psi'(0) < -C and psi'(R) > C.  b_bar is searched over a
    doubling schedule; the first success is returned with its profile.
    """
    phi = np.asarray(phi, dtype=float)
    if R <= math.pi:
        raise ConfigError(f"psi construction needs R > pi, got R={R:.6g}")
    if not (0.0 < eps < 1.0):
        raise ConfigError(f"eps must lie in (0,1), got {eps:.6g}")
    if C <= 0.0:
        raise ConfigError(f"C must be positive, got {C:.6g}")
    if phi.ndim != 1 or phi.size < 3:
        raise ConfigError("phi must be a 1-d profile with at least 3 nodes")
    if abs(phi[0]) > 1e-9 or abs(phi[-1]) > 1e-9:
        raise ConfigError("phi must vanish at the endpoints")
    if phi[1:-1].min() <= 0.0:
        raise ConfigError("phi must be positive on the interior")

    dx = R / (phi.size - 1)
    bc = (1.0 - eps, 1.0 - eps)
    b_bar = max(2.0, 2.0 / float(phi.max()))
    psi = np.full(phi.size, 1.0 - eps)
    while b_bar <= 1e6:
        psi = _solve_kpp_bvp(dx, 1.0, b_bar * phi, bc, psi)
        below = bool(psi[1:-1].max() < 1.0 - eps)
        slope_left = (psi[1] - psi[0]) / dx
        slope_right = (psi[-1] - psi[-2]) / dx
        if below and slope_left < -C and slope_right > C:
            return b_bar, psi
        b_bar *= 2.0
    raise SearchFailureError(
        f"no coefficient up to 1e6 produced the required dip (last slopes "
        f"{slope_left:.3g}/{slope_right:.3g}, target +-{C:.3g})"
    )


def _snap_wing_width(L: float, eps: float, dx: float) -> int:
    """Number of grid cells in each wing, snapping the junctions onto nodes
    while keeping R inside its admissible interval."""
    r_lo = max(math.pi, L - 4.0 * math.sqrt(2.0 * eps))
    if L <= r_lo:
        raise ConfigError(f"domain length {L:.6g} leaves no admissible inner interval")
    r_mid = 0.5 * (r_lo + L)
    m_idx = int(round((L - r_mid) / (2.0 * dx)))
    # Snapping must keep 1 <= m_idx and r_lo < R < L.
    while m_idx >= 1 and L - 2 * m_idx * dx <= r_lo:
        m_idx -= 1
    if m_idx < 1:
        raise ConfigError(
            f"grid too coarse to place a wing inside ({r_lo:.6g}, {L:.6g}); refine the grid"
        )
    return m_idx


def construct_bbarrier_subsolution(
    a: float, L: float, *, n: int = 401
) -> Tuple[SubsolutionRecipe, SpeciesState]:
    """Build a generalized subsolution certifying a barrier for large b.

    The inner interval carries the positive profile of
    -phi'' = phi*(1 - a(1-eps) - phi) and the species-2 dip from
    `construct_psi_lemma`; the wings extend species 2 by exact parabolas
    and species 1 by zero.  All junctions sit on grid nodes, so the
    returned pair passes `verify_subsolution` at solver tolerance for the
    parameters (a, b_bar).
    """
    if a <= 0:
        raise ConfigError(f"competition coefficient a must be positive, got {a:.6g}")
    if L <= math.pi:
        raise ConfigError(
            f"construction needs L > pi so the inner interval can exceed pi, got L={L:.6g}"
        )
    if n < 9:
        raise ConfigError("need at least 9 nodes")
    dx = L / (n - 1)

    # Free constants: eps at the midpoint of its admissible interval, then
    # pushed toward 1 if needed so the inner logistic profile is nontrivial
    # (its effective length sqrt(kappa)*R must exceed pi).
    lo = max((a - 1.0) / a, 0.0)
    eps = 0.5 * (lo + 1.0)
    for _ in range(60):
        kappa = 1.0 - a * (1.0 - eps)
        m_idx = _snap_wing_width(L, eps, dx)
        R = L - 2 * m_idx * dx
        if kappa > 0 and math.sqrt(kappa) * R > math.pi * 1.05:
            break
        eps = 0.5 * (eps + 1.0)
    else:
        raise SearchFailureError("no epsilon makes the inner profile nontrivial on this domain")

    M = m_idx * dx
    C = 2.0 * (4.0 * eps / (L - R))

    # Inner species-1 profile on the aligned subgrid.
    n_inner = n - 2 * m_idx
    x_inner = np.linspace(0.0, R, n_inner)
    seed = 0.5 * kappa * np.sin(math.pi * x_inner / R)
    phi = _solve_kpp_bvp(dx, kappa, np.zeros(n_inner), (0.0, 0.0), seed, reject_trivial=True)
    if phi[1:-1].min() <= 0.0 or phi.max() < DELTA_TRIVIAL:
        raise NonConvergedError("inner profile collapsed to the trivial state")

    b_bar, psi = construct_psi_lemma(R, eps, C, phi)

    # Audit constants from the slope-and-smallness argument: interior level
    # delta below the boundary value, boundary-layer width theta.
    delta = 0.5 * (1.0 - eps)
    theta_len = 0.5 * min(C / 3.0, (1.0 - eps - delta) / (6.0 * C))

    # Assemble on the full grid: zero/parabola wings + inner profiles.
    x = np.linspace(0.0, L, n)
    phi_full = np.zeros(n)
    phi_full[m_idx : m_idx + n_inner] = phi
    psi_full = np.empty(n)
    psi_full[: m_idx + 1] = 1.0 - (eps / M**2) * x[: m_idx + 1] ** 2
    psi_full[m_idx : m_idx + n_inner] = psi
    psi_full[m_idx + n_inner - 1 :] = 1.0 - (eps / M**2) * (L - x[m_idx + n_inner - 1 :]) ** 2

    recipe = SubsolutionRecipe(
        a=a, L=L, epsilon=eps, R=R, M=M, C=C, b_bar=b_bar, delta=delta, theta_len=theta_len
    )
    pair = SpeciesState(t=0.0, y1=phi_full, y2=psi_full)

    grid = make_grid(L, n)
    report = verify_subsolution(pair, CompetitionParams(a=a, b=b_bar), grid, kinks=[M, M + R])
    if not report.passed:
        raise NonConvergedError(
            f"constructed pair failed verification (worst violation {report.worst_violation:.3e} "
            f"at x={report.worst_x:.6g})"
        )
    return recipe, pair


def construct_a_small_subsolution(a: float, b: float, L: float, *, n: int = 401) -> SpeciesState:
    """Subsolution pair certifying a barrier when a < 1 - pi**2/L**2.

    Species 1 is the rescaled logistic profile (1-a)*Theta_l(x*sqrt(1-a))
    with l = sqrt(1-a)*L, species 2 the constant 1.  Solving Theta_l on a
    grid whose spacing is sqrt(1-a)*dx makes the discrete inequality for
    species 1 an exact identity under central differences.
    """
    bound = 1.0 - math.pi**2 / L**2
    if bound <= 0:
        raise ConfigError(
            f"domain length {L:.6g} admits no such subsolution (needs L > pi)"
        )
    if not (0.0 < a < bound):
        raise ConfigError(
            f"need 0 < a < 1 - pi**2/L**2 = {bound:.6g}, got a={a:.6g}"
        )
    if b <= 0:
        raise ConfigError(f"competition coefficient b must be positive, got {b:.6g}")
    ell = math.sqrt(1.0 - a) * L
    theta_ell = solve_logistic_steady(make_grid(ell, n))
    if theta_ell.trivial:
        raise NonConvergedError("rescaled logistic profile is trivial; cannot build the pair")
    y1 = (1.0 - a) * theta_ell.theta
    y2 = np.ones(n)
    return SpeciesState(t=0.0, y1=y1, y2=y2)


# ---------------------------------------------------------------------------
# Verification of the subsolution inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the nodewise subsolution check."""

    passed: bool
    worst_violation: float
    worst_x: float
    worst_species: int
    worst_kind: str  # "interior" or "kink"
    tolerance: float


def verify_subsolution(
    pair: SpeciesState,
    params: CompetitionParams,
    grid: Grid1D,
    kinks: Sequence[float] = (),
) -> VerificationReport:
    """Check the stationary subsolution inequalities on the grid.

    At interior nodes away from kinks the central-difference relations

        y1'' + y1*(1 - y1 - a*y2) >= 0,    y2'' + y2*(1 - b*y1 - y2) <= 0

    must hold to tolerance 1e-6*(1+dx); at each kink the one-sided slopes
    must jump upward for species 1 and downward for species 2 (the sign a
    supremum/infimum junction of two subsolutions produces).
    """
    if pair.n != grid.n:
        raise ConfigError("pair and grid disagree on node count")
    dx = grid.dx
    tol = 1e-6 * (1.0 + dx)
    y1, y2 = pair.y1, pair.y2

    kink_idx = set()
    for xk in kinks:
        idx = int(round(xk / dx))
        if not (0 < idx < grid.n - 1) or abs(grid.nodes[idx] - xk) > 1e-8 * max(1.0, grid.L):
            raise ConfigError(f"kink abscissa {xk:.6g} does not sit on an interior grid node")
        kink_idx.add(idx)

    lap1 = (y1[:-2] - 2.0 * y1[1:-1] + y1[2:]) / dx**2
    lap2 = (y2[:-2] - 2.0 * y2[1:-1] + y2[2:]) / dx**2
    s1 = lap1 + y1[1:-1] * (1.0 - y1[1:-1] - params.a * y2[1:-1])
    s2 = lap2 + y2[1:-1] * (1.0 - params.b * y1[1:-1] - y2[1:-1])

    worst = -np.inf
    worst_x = float(grid.nodes[0])
    worst_species = 1
    worst_kind = "interior"
    for i in range(1, grid.n - 1):
        if i in kink_idx:
            v1 = -((y1[i + 1] - y1[i]) / dx - (y1[i] - y1[i - 1]) / dx)
            v2 = (y2[i + 1] - y2[i]) / dx - (y2[i] - y2[i - 1]) / dx
            kind = "kink"
        else:
            v1 = -s1[i - 1]
            v2 = s2[i - 1]
            kind = "interior"
        for species, v in ((1, v1), (2, v2)):
            if v > worst:
                worst = v
                worst_x = float(grid.nodes[i])
                worst_species = species
                worst_kind = kind
    return VerificationReport(
        passed=bool(worst <= tol),
        worst_violation=float(worst),
        worst_x=worst_x,
        worst_species=worst_species,
        worst_kind=worst_kind,
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def write_profile_csv(path: str, x: np.ndarray, columns: Dict[str, np.ndarray]) -> None:
    """Write profile columns against x as CSV with 12 significant digits."""
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    for name, arr in zip(names, arrays):
        if arr.shape != np.shape(x):
            raise ConfigError(f"column {name!r} does not match the x grid")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x," + ",".join(names) + "\n")
        for i, xv in enumerate(np.asarray(x, dtype=float)):
            fh.write(format_sig(xv) + "," + ",".join(format_sig(arr[i]) for arr in arrays) + "\n")
