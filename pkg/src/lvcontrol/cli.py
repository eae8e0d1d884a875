"""Command-line entry point: experiment configs in, CSV/JSON artifacts out.

Subcommands
-----------
simulate            SimConfig JSON -> trajectory CSV + summary JSON
steady              config JSON -> steady profile CSV + outcome JSON
barrier             flags -> barrier existence JSON (+ profile CSV if found)
threshold {b|a|L}   bisection / sweep -> ThresholdResult or sweep JSON
front               bistable front speed -> summary JSON + level/profile CSVs
ode portrait        basin-classified lattice -> portrait CSV + summary JSON
optimize            ControlProblem JSON -> OptResult JSON + controls CSV
verify {comparison|sum|extinction|neumann}
                    structural checks on trajectory CSVs -> report JSON
figure {base|b|L|coex|odes}
                    named experiment presets; emit their data files

Exit codes: 0 success, 2 configuration error (incl. bad flags/JSON), 3
numerical failure (non-convergence, failed bracket, unreliable fit).

Config documents are strict JSON: a `version` field is required and unknown
keys are rejected, so typos in experiment specs fail loudly instead of
silently falling back to defaults.  The key `resolved_dt` is tolerated on
input because this tool's own outputs include it.  All numeric output is
formatted at 12 significant digits with a locale-independent decimal point.
Every artifact embeds the fully resolved configuration that produced it.
All subcommands are deterministic: reruns with the same config byte-match.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Dict, List, Optional, Sequence

import numpy as np

from .checks import (
    check_comparison,
    check_neumann_basin,
    check_no_joint_extinction,
    check_sum_supersolution,
)
from .control_opt import ControlProblem, optimize_controls, write_opt_result_json
from .core import (
    BoundaryControl,
    CompetitionParams,
    DirichletConst,
    DirichletPiecewise,
    Grid1D,
    NeumannZero,
    SpeciesState,
    coexistence_equilibrium,
    constant_state,
    make_grid,
)
from .dynamics import equilibria, phase_portrait, write_portrait_csv
from .elliptic import as_barrier_profile, barrier_exceeds_coexistence, solve_barrier, write_profile_csv
from .errors import ConfigError, LvControlError, NumericalError
from .pde import (
    Classification,
    SimConfig,
    Trajectory,
    format_sig,
    read_trajectory_frames,
    run_to_steady,
    simulate,
    write_trajectory_csv,
)
from .thresholds import find_a_star, find_b_star, sweep_L
from .waves import estimate_front, write_front_profile_csv, write_level_csv

__all__ = ["build_parser", "run", "main"]

CONFIG_VERSION = 1


# ---------------------------------------------------------------------------
# JSON plumbing
# ---------------------------------------------------------------------------


def _round_floats(obj):
    """Recursively rewrite floats at 12 significant digits so JSON output
    matches the CSV precision policy."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(format_sig(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_round_floats(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    if doc.get("version") != CONFIG_VERSION:
        raise ConfigError(
            f"config {path} must declare \"version\": {CONFIG_VERSION} (got {doc.get('version')!r})"
        )
    return doc


def _reject_unknown(doc: dict, allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}; allowed: {sorted(allowed)}")


def _require(doc: dict, keys: Sequence[str], where: str) -> None:
    missing = sorted(k for k in keys if k not in doc)
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")


def _grid_from_doc(doc: dict, override_n: Optional[int]) -> Grid1D:
    _reject_unknown(doc, ("L", "n"), "grid")
    _require(doc, ("L", "n"), "grid")
    n = override_n if override_n is not None else int(doc["n"])
    return make_grid(float(doc["L"]), n)


def _params_from_doc(doc: dict) -> CompetitionParams:
    _reject_unknown(doc, ("a", "b"), "params")
    _require(doc, ("a", "b"), "params")
    return CompetitionParams(a=float(doc["a"]), b=float(doc["b"]))


def _channel_from_doc(doc: dict, where: str):
    _require(doc, ("mode",), where)
    mode = doc["mode"]
    if mode == "neumann_zero":
        _reject_unknown(doc, ("mode",), where)
        return NeumannZero()
    if mode == "dirichlet_const":
        _reject_unknown(doc, ("mode", "value"), where)
        _require(doc, ("value",), where)
        return DirichletConst(value=float(doc["value"]))
    if mode == "dirichlet_piecewise":
        _reject_unknown(doc, ("mode", "breakpoints", "values"), where)
        _require(doc, ("breakpoints", "values"), where)
        return DirichletPiecewise(
            breakpoints=tuple(float(v) for v in doc["breakpoints"]),
            values=tuple(float(v) for v in doc["values"]),
        )
    raise ConfigError(f"unknown control mode {mode!r} in {where}")


_CHANNEL_KEYS = ("y1_left", "y1_right", "y2_left", "y2_right")


def _control_from_doc(doc: dict) -> BoundaryControl:
    _reject_unknown(doc, _CHANNEL_KEYS, "controls")
    _require(doc, _CHANNEL_KEYS, "controls")
    return BoundaryControl(
        **{key: _channel_from_doc(doc[key], f"controls.{key}") for key in _CHANNEL_KEYS}
    )


def _init_from_doc(doc: dict, grid: Grid1D) -> SpeciesState:
    _require(doc, ("kind",), "init")
    kind = doc["kind"]
    if kind == "constant":
        _reject_unknown(doc, ("kind", "y1", "y2"), "init")
        _require(doc, ("y1", "y2"), "init")
        return constant_state(grid, float(doc["y1"]), float(doc["y2"]))
    if kind == "arrays":
        _reject_unknown(doc, ("kind", "y1", "y2"), "init")
        _require(doc, ("y1", "y2"), "init")
        y1 = np.asarray(doc["y1"], dtype=float)
        y2 = np.asarray(doc["y2"], dtype=float)
        if y1.shape != (grid.n,) or y2.shape != (grid.n,):
            raise ConfigError(
                f"init arrays must have length n={grid.n}, got {y1.shape} and {y2.shape}"
            )
        return SpeciesState(t=0.0, y1=y1, y2=y2)
    if kind == "profile":
        raise ConfigError(
            "init kind 'profile' is a provenance digest and cannot be reloaded; "
            "use kind 'arrays' with explicit values"
        )
    raise ConfigError(f"unknown init kind {kind!r}")


_SIM_KEYS = (
    "version",
    "grid",
    "params",
    "scheme",
    "dt",
    "resolved_dt",
    "t_end",
    "snapshot_stride",
    "init",
    "controls",
)


def _simconfig_from_doc(doc: dict, args: argparse.Namespace, where: str) -> SimConfig:
    _reject_unknown(doc, _SIM_KEYS, where)
    _require(doc, ("grid", "params", "t_end", "init", "controls"), where)
    grid = _grid_from_doc(doc["grid"], args.grid_n)
    if args.grid_n is not None and doc["init"].get("kind") == "arrays":
        raise ConfigError("--grid-n cannot override a config whose init is explicit arrays")
    kwargs = {}
    if doc.get("snapshot_stride") is not None:
        kwargs["snapshot_stride"] = float(doc["snapshot_stride"])
    return SimConfig(
        grid=grid,
        params=_params_from_doc(doc["params"]),
        control=_control_from_doc(doc["controls"]),
        init=_init_from_doc(doc["init"], grid),
        t_end=float(args.t_end if args.t_end is not None else doc["t_end"]),
        scheme=args.scheme if args.scheme is not None else doc.get("scheme", "imex_cn"),
        dt=args.dt if args.dt is not None else doc.get("dt", "auto"),
        **kwargs,
    )


def _read_trajectory(path: str) -> Trajectory:
    """Rebuild a Trajectory from a CSV written by write_trajectory_csv,
    using the embedded `# config:` header for grid/params/controls."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline()
    except OSError as exc:
        raise ConfigError(f"cannot read trajectory {path}: {exc}") from exc
    prefix = "# config:"
    if not first.startswith(prefix):
        raise ConfigError(f"trajectory CSV {path} lacks the embedded '# config:' header")
    doc = json.loads(first[len(prefix) :])
    t, x, y1, y2 = read_trajectory_frames(path)
    if t.size < 2:
        raise ConfigError(f"trajectory CSV {path} needs at least two snapshots")
    grid = make_grid(float(doc["grid"]["L"]), int(doc["grid"]["n"]))
    if x.size != grid.n or float(np.max(np.abs(x - grid.nodes))) > 1e-9 * max(1.0, grid.L):
        raise ConfigError(f"trajectory CSV {path}: node lattice disagrees with embedded grid")
    cfg = SimConfig(
        grid=grid,
        params=_params_from_doc(doc["params"]),
        control=_control_from_doc(doc["controls"]),
        init=SpeciesState(t=0.0, y1=y1[0], y2=y2[0]),
        t_end=float(t[-1]),
        scheme=doc.get("scheme", "imex_cn"),
        dt=float(doc["resolved_dt"]) if "resolved_dt" in doc else "auto",
    )
    snaps = [SpeciesState(t=float(tk), y1=y1[k], y2=y2[k]) for k, tk in enumerate(t)]
    return Trajectory(config=cfg, snapshots=snaps)


def _out(args: argparse.Namespace, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def _final_stats(traj: Trajectory) -> dict:
    final = traj.final
    return {
        "t": final.t,
        "sup_y1": float(final.y1.max()),
        "inf_interior_y2": float(final.y2[1:-1].min()),
        "sup_y2": float(final.y2.max()),
    }


def _steady_from_state(cfg: SimConfig, state: SpeciesState, tol: float, t_max: float):
    restart = SimConfig(
        grid=cfg.grid,
        params=cfg.params,
        control=cfg.control,
        init=SpeciesState(t=0.0, y1=state.y1, y2=state.y2),
        t_end=t_max,
        scheme=cfg.scheme,
        dt=cfg.dt,
    )
    return run_to_steady(restart, tol=tol, t_max=t_max)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _simconfig_from_doc(_load_doc(args.config), args, f"config {args.config}")
    t0 = time.perf_counter()
    traj = simulate(cfg)
    runtime = time.perf_counter() - t0
    traj_path = _out(args, "trajectory.csv")
    write_trajectory_csv(traj, traj_path)
    summary = {
        "config": cfg.to_json_dict(),
        "final": _final_stats(traj),
        "snapshots": len(traj.snapshots),
        "runtime_s": runtime,
    }
    _write_json(_out(args, "simulate_summary.json"), summary)
    print(
        f"simulate: t_end={format_sig(cfg.t_end)} sup_y1={format_sig(summary['final']['sup_y1'])} "
        f"sup_y2={format_sig(summary['final']['sup_y2'])} -> {traj_path}"
    )
    return 0


_STEADY_KEYS = ("version", "grid", "params", "init", "controls", "tol", "t_max")


def _cmd_steady(args: argparse.Namespace) -> int:
    doc = _load_doc(args.config)
    _reject_unknown(doc, _STEADY_KEYS, f"config {args.config}")
    _require(doc, ("grid", "params", "init", "controls"), f"config {args.config}")
    grid = _grid_from_doc(doc["grid"], args.grid_n)
    params = _params_from_doc(doc["params"])
    control = _control_from_doc(doc["controls"])
    init = _init_from_doc(doc["init"], grid)
    tol = float(doc.get("tol", 1e-8))
    t_max = float(doc.get("t_max", 4000.0))
    cfg = SimConfig(grid=grid, params=params, control=control, init=init, t_end=t_max, scheme="imex_cn")
    outcome = run_to_steady(cfg, tol=tol, t_max=t_max)
    profile_path = _out(args, "steady_profile.csv")
    write_profile_csv(profile_path, grid.nodes, {"y1": outcome.profile.y1, "y2": outcome.profile.y2})
    _write_json(
        _out(args, "steady_summary.json"),
        {
            "config": cfg.to_json_dict(),
            "classification": outcome.classification.value,
            "residual_sup": outcome.residual_sup,
            "t_reached": outcome.t_reached,
            "tol": tol,
        },
    )
    print(
        f"steady: {outcome.classification.value} residual={format_sig(outcome.residual_sup)} "
        f"t={format_sig(outcome.t_reached)}"
    )
    return 0


def _cmd_barrier(args: argparse.Namespace) -> int:
    params = CompetitionParams(a=args.a, b=args.b)
    grid = make_grid(args.L, args.grid_n if args.grid_n is not None else 201)
    init = constant_state(grid, 1.0, 0.0)  # cold start fully favoring species 1
    outcome = solve_barrier(params, grid, init, tol=args.tol, t_max=args.t_max)
    exists = outcome.classification == Classification.BARRIER
    doc = {
        "version": 1,
        "params": {"a": params.a, "b": params.b},
        "grid": {"L": grid.L, "n": grid.n},
        "exists": exists,
        "classification": outcome.classification.value,
        "residual_sup": outcome.residual_sup,
        "t_reached": outcome.t_reached,
        "tol": args.tol,
    }
    if exists:
        barrier = as_barrier_profile(outcome, grid)
        doc["exceeds_coexistence"] = barrier_exceeds_coexistence(barrier.phi, barrier.psi, params)
        profile_path = _out(args, "barrier_profile.csv")
        write_profile_csv(profile_path, grid.nodes, {"phi": barrier.phi, "psi": barrier.psi})
        doc["profile_csv"] = os.path.basename(profile_path)
    _write_json(_out(args, "barrier_summary.json"), doc)
    print(f"barrier: exists={exists} classification={outcome.classification.value}")
    return 0


def _cmd_threshold(args: argparse.Namespace) -> int:
    n = args.grid_n if args.grid_n is not None else 201
    if args.which == "b":
        result = find_b_star(args.a, args.L, (args.lo, args.hi), args.tol, n=n)
        path = _out(args, "threshold_b.json")
    elif args.which == "a":
        result = find_a_star(args.b, args.L, (args.lo, args.hi), args.tol, n=n)
        path = _out(args, "threshold_a.json")
    else:  # L sweep
        L_values = [float(v) for v in args.L_values.split(",") if v.strip()]
        sweep = sweep_L(args.a, args.b, L_values, n=n, threads=args.threads)
        path = _out(args, "threshold_L.json")
        doc = sweep.to_json_dict()
        doc.update({"version": 1, "params": {"a": args.a, "b": args.b}, "grid_n": n})
        _write_json(path, doc)
        print(f"threshold L: transition={doc['transition']} -> {path}")
        return 0
    _write_json(path, result.to_json_dict())
    print(f"threshold {args.which}: value={format_sig(result.value)} "
          f"bracket=({format_sig(result.bracket[0])}, {format_sig(result.bracket[1])})")
    return 0


def _cmd_front(args: argparse.Namespace) -> int:
    params = CompetitionParams(a=args.a, b=args.b)
    est = estimate_front(
        params,
        half_width=args.half_width,
        T=args.t_end if args.t_end is not None else 40.0,
        dx=args.dx,
        dt=args.dt if args.dt is not None else 0.02,
    )
    write_level_csv(_out(args, "front_level.csv"), est.level_track)
    write_front_profile_csv(_out(args, "front_profile.csv"), est)
    _write_json(
        _out(args, "front_summary.json"),
        {
            "version": 1,
            "params": {"a": params.a, "b": params.b},
            "half_width": args.half_width,
            "T": args.t_end if args.t_end is not None else 40.0,
            "dx": args.dx,
            "dt": args.dt if args.dt is not None else 0.02,
            "c": est.c,
            "fit_r2": est.fit_r2,
        },
    )
    print(f"front: c={format_sig(est.c)} fit_r2={format_sig(est.fit_r2)}")
    return 0


def _cmd_ode_portrait(args: argparse.Namespace) -> int:
    params = CompetitionParams(a=args.a, b=args.b)
    table = phase_portrait(params, args.density)
    csv_path = _out(args, "portrait.csv")
    write_portrait_csv(csv_path, table)
    eq = [
        {
            "point": [info.point.w1, info.point.w2],
            "label": info.label.value,
            "eigenvalues": list(info.eigenvalues),
        }
        for info in equilibria(params)
    ]
    _write_json(
        _out(args, "portrait_summary.json"),
        {
            "version": 1,
            "params": {"a": params.a, "b": params.b},
            "density": args.density,
            "equilibria": eq,
        },
    )
    counts: Dict[str, int] = {}
    for _, cls in table:
        counts[cls.value] = counts.get(cls.value, 0) + 1
    print(f"ode portrait: {counts} -> {csv_path}")
    return 0


_OPT_KEYS = (
    "version",
    "grid",
    "params",
    "T",
    "n_segments",
    "init",
    "target",
    "w_terminal",
    "w_running",
    "dt",
    "resolved_dt",
    "max_iters",
    "gradient",
    "u0",
)


def _problem_from_doc(doc: dict, args: argparse.Namespace, where: str):
    _reject_unknown(doc, _OPT_KEYS, where)
    _require(doc, ("grid", "params", "T", "n_segments", "init", "target"), where)
    grid = _grid_from_doc(doc["grid"], args.grid_n)
    params = _params_from_doc(doc["params"])
    init = _init_from_doc(doc["init"], grid)
    target = doc["target"]
    if target == "coexistence":
        coex = coexistence_equilibrium(params)
        if coex is None:
            raise ConfigError("target 'coexistence' needs a > 1 (no interior equilibrium)")
        t1, t2 = coex.w1, coex.w2
    else:
        if not isinstance(target, dict):
            raise ConfigError("target must be 'coexistence' or an object with y1 and y2")
        _reject_unknown(target, ("y1", "y2"), "target")
        _require(target, ("y1", "y2"), "target")
        t1 = np.asarray(target["y1"], dtype=float)
        t2 = np.asarray(target["y2"], dtype=float)
    problem = ControlProblem(
        grid=grid,
        params=params,
        init=init,
        target_y1=t1,
        target_y2=t2,
        T=float(doc["T"]),
        n_segments=int(doc["n_segments"]),
        w_terminal=float(doc.get("w_terminal", 1.0)),
        w_running=float(doc.get("w_running", 0.1)),
        dt=args.dt if args.dt is not None else doc.get("dt", "auto"),
    )
    max_iters = int(doc.get("max_iters", 200))
    gradient = doc.get("gradient", "adjoint")
    u0 = doc.get("u0", "auto")
    if isinstance(u0, list):
        u0 = np.asarray(u0, dtype=float)
    return problem, max_iters, gradient, u0


def _write_controls_csv(path: str, problem: ControlProblem, controls: np.ndarray) -> None:
    seg = problem.T / problem.n_segments
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t_start,t_end,y1_left,y1_right,y2_left,y2_right\n")
        for k in range(problem.n_segments):
            row = [k * seg, (k + 1) * seg] + [controls[c, k] for c in range(4)]
            fh.write(",".join(format_sig(v) for v in row) + "\n")


def _run_optimize(problem: ControlProblem, max_iters: int, gradient: str, u0, args, stem: str):
    t0 = time.perf_counter()
    result = optimize_controls(problem, u0=u0, max_iters=max_iters, gradient=gradient)
    runtime = time.perf_counter() - t0
    write_opt_result_json(result, problem, _out(args, f"{stem}_result.json"))
    _write_controls_csv(_out(args, f"{stem}_controls.csv"), problem, result.controls)
    write_profile_csv(
        _out(args, f"{stem}_profile.csv"),
        problem.grid.nodes,
        {"y1": result.final_state.y1, "y2": result.final_state.y2},
    )
    model_tag = f"damped-implicit-Euler(dt={format_sig(problem.resolved_dt())})"
    print(
        f"{stem}: terminal_misfit_sup={format_sig(result.terminal_misfit_sup)} "
        f"iterations={result.iterations} stop={result.stop_reason} "
        f"model={model_tag} runtime={runtime:.1f}s"
    )
    return result, runtime, model_tag


def _cmd_optimize(args: argparse.Namespace) -> int:
    problem, max_iters, gradient, u0 = _problem_from_doc(
        _load_doc(args.config), args, f"config {args.config}"
    )
    _run_optimize(problem, max_iters, gradient, u0, args, "optimize")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.which == "comparison":
        report = check_comparison(
            _read_trajectory(args.sub), _read_trajectory(args.super_), tol=args.tol
        )
    elif args.which == "sum":
        report = check_sum_supersolution(_read_trajectory(args.traj), tol=args.tol)
    elif args.which == "extinction":
        traj = _read_trajectory(args.traj)
        report = check_no_joint_extinction(traj, traj.config.grid, delta=args.delta)
    else:  # neumann
        params = CompetitionParams(a=args.a, b=args.b)
        grid = make_grid(args.L, args.grid_n if args.grid_n is not None else 201)
        init = constant_state(grid, args.y1, args.y2)
        report = check_neumann_basin(params, grid, init, tol=args.tol)
    _write_json(_out(args, f"verify_{args.which}.json"), report.to_json_dict())
    print(json.dumps(_round_floats(report.to_json_dict()), sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

# Named experiment presets; `figure X` runs exactly these configurations.
_FIGURE_PDE = {
    "base": {"L": 8.0, "a": 1.5, "b": 2.6, "T": 60.0},
    "b": {"L": 8.0, "a": 1.5, "b": 3.5, "T": 45.0},
    "L": {"L": 16.0, "a": 1.5, "b": 2.6, "T": 45.0},
}
_FIGURE_COEX = {"L": 24.0, "a": 1.5, "b": 3.5, "T": 100.0, "n": 601, "segments": 10}
_FIGURE_ODES = {"a": 1.5, "b": 3.5, "density": 50}


def _cmd_figure(args: argparse.Namespace) -> int:
    name = args.name
    if name in _FIGURE_PDE:
        spec = _FIGURE_PDE[name]
        n = args.grid_n if args.grid_n is not None else 401
        grid = make_grid(spec["L"], n)
        params = CompetitionParams(a=spec["a"], b=spec["b"])
        cfg = SimConfig(
            grid=grid,
            params=params,
            control=BoundaryControl.dirichlet_const(0.0, 1.0),
            init=constant_state(grid, 1.0, 0.0),
            t_end=args.t_end if args.t_end is not None else spec["T"],
            scheme=args.scheme if args.scheme is not None else "imex_cn",
            dt=args.dt if args.dt is not None else 0.02,
        )
        t0 = time.perf_counter()
        traj = simulate(cfg)
        steady = _steady_from_state(cfg, traj.final, 1e-8, 4000.0)
        runtime = time.perf_counter() - t0
        write_trajectory_csv(traj, _out(args, f"figure_{name}_trajectory.csv"))
        summary = {
            "figure": name,
            "config": cfg.to_json_dict(),
            "final": _final_stats(traj),
            "steady": {
                "classification": steady.classification.value,
                "residual_sup": steady.residual_sup,
                "t_reached": cfg.t_end + steady.t_reached,
            },
            "runtime_s": runtime,
        }
        _write_json(_out(args, f"figure_{name}_summary.json"), summary)
        print(
            f"figure {name}: classification={steady.classification.value} "
            f"sup_y1={format_sig(summary['final']['sup_y1'])} runtime={runtime:.1f}s"
        )
        return 0

    if name == "coex":
        spec = _FIGURE_COEX
        n = args.grid_n if args.grid_n is not None else spec["n"]
        grid = make_grid(spec["L"], n)
        params = CompetitionParams(a=spec["a"], b=spec["b"])
        coex = coexistence_equilibrium(params)
        assert coex is not None
        problem = ControlProblem(
            grid=grid,
            params=params,
            init=constant_state(grid, 0.0, 1.0),
            target_y1=coex.w1,
            target_y2=coex.w2,
            T=args.t_end if args.t_end is not None else spec["T"],
            n_segments=spec["segments"],
            dt=args.dt if args.dt is not None else "auto",
        )
        result, runtime, model_tag = _run_optimize(
            problem, args.max_iters, "adjoint", "auto", args, "figure_coex"
        )
        summary = {
            "figure": "coex",
            "problem": problem.to_json_dict(),
            "terminal_misfit_sup": result.terminal_misfit_sup,
            "iterations": result.iterations,
            "stop_reason": result.stop_reason,
            "forward_model": model_tag,
            "target_misfit": 0.05,
            "target_met": bool(result.terminal_misfit_sup < 0.05),
            "runtime_s": runtime,
        }
        _write_json(_out(args, "figure_coex_summary.json"), summary)
        if not summary["target_met"]:
            print(
                f"figure coex: terminal misfit {format_sig(result.terminal_misfit_sup)} "
                f"did not reach the 0.05 target under {model_tag}",
                file=sys.stderr,
            )
        return 0

    # odes
    spec = _FIGURE_ODES
    params = CompetitionParams(a=spec["a"], b=spec["b"])
    table = phase_portrait(params, spec["density"])
    write_portrait_csv(_out(args, "figure_odes_portrait.csv"), table)
    eq = [
        {
            "point": [info.point.w1, info.point.w2],
            "label": info.label.value,
            "eigenvalues": list(info.eigenvalues),
        }
        for info in equilibria(params)
    ]
    _write_json(
        _out(args, "figure_odes_summary.json"),
        {
            "figure": "odes",
            "params": {"a": params.a, "b": params.b},
            "density": spec["density"],
            "equilibria": eq,
        },
    )
    print(f"figure odes: {len(table)} lattice points classified")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, *, grid_n=True, dt=True, scheme=False, t_end=False,
                threads=False) -> None:
    sp.add_argument("--out-dir", default=".", help="directory for output artifacts")
    if grid_n:
        sp.add_argument("--grid-n", type=int, default=None, help="override node count")
    if dt:
        sp.add_argument("--dt", type=float, default=None, help="override time step")
    if scheme:
        sp.add_argument("--scheme", choices=("explicit", "imex_cn"), default=None,
                        help="override time integrator")
    if t_end:
        sp.add_argument("--t-end", type=float, default=None, help="override horizon")
    if threads:
        sp.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lvcontrol",
        description="Boundary-controlled competition-diffusion toolkit: "
        "simulation, barriers, thresholds, fronts, and control optimization.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run a SimConfig JSON to a trajectory CSV")
    sp.add_argument("--config", required=True, help="SimConfig JSON document")
    _add_common(sp, scheme=True, t_end=True)
    sp.set_defaults(handler=_cmd_simulate)

    sp = sub.add_parser("steady", help="march a configuration to steady state")
    sp.add_argument("--config", required=True, help="steady-run JSON document")
    _add_common(sp, dt=False)
    sp.set_defaults(handler=_cmd_steady)

    sp = sub.add_parser("barrier", help="solve for the barrier steady state under (0,1) controls")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--L", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--t-max", type=float, default=4000.0)
    _add_common(sp, dt=False)
    sp.set_defaults(handler=_cmd_barrier)

    sp = sub.add_parser("threshold", help="bisect b*/a* or sweep the domain length")
    tsub = sp.add_subparsers(dest="which", required=True)
    tb = tsub.add_parser("b", help="critical competition strength b*(a, L)")
    tb.add_argument("--a", type=float, required=True)
    tb.add_argument("--L", type=float, required=True)
    tb.add_argument("--lo", type=float, required=True)
    tb.add_argument("--hi", type=float, required=True)
    tb.add_argument("--tol", type=float, default=0.05)
    _add_common(tb, dt=False)
    tb.set_defaults(handler=_cmd_threshold)
    ta = tsub.add_parser("a", help="critical a*(b, L) above which the barrier disappears")
    ta.add_argument("--b", type=float, required=True)
    ta.add_argument("--L", type=float, required=True)
    ta.add_argument("--lo", type=float, required=True)
    ta.add_argument("--hi", type=float, required=True)
    ta.add_argument("--tol", type=float, default=0.05)
    _add_common(ta, dt=False)
    ta.set_defaults(handler=_cmd_threshold)
    tL = tsub.add_parser("L", help="barrier existence across domain lengths")
    tL.add_argument("--a", type=float, required=True)
    tL.add_argument("--b", type=float, required=True)
    tL.add_argument("--L-values", required=True, help="comma-separated lengths, increasing")
    _add_common(tL, dt=False, threads=True)
    tL.set_defaults(handler=_cmd_threshold)

    sp = sub.add_parser("front", help="measure the bistable front speed")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--half-width", type=float, default=60.0)
    sp.add_argument("--dx", type=float, default=0.1)
    _add_common(sp, grid_n=False, t_end=True)
    sp.set_defaults(handler=_cmd_front)

    sp = sub.add_parser("ode", help="kinetic ODE tools")
    osub = sp.add_subparsers(dest="ode_command", required=True)
    op = osub.add_parser("portrait", help="basin-classified lattice over the unit box")
    op.add_argument("--a", type=float, required=True)
    op.add_argument("--b", type=float, required=True)
    op.add_argument("--density", type=int, default=50)
    _add_common(op, grid_n=False, dt=False)
    op.set_defaults(handler=_cmd_ode_portrait)

    sp = sub.add_parser("optimize", help="optimize boundary controls toward a target profile")
    sp.add_argument("--config", required=True, help="ControlProblem JSON document")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_optimize)

    sp = sub.add_parser("verify", help="structural checks on trajectory data")
    vsub = sp.add_subparsers(dest="which", required=True)
    vc = vsub.add_parser("comparison", help="ordering between a sub- and a super-trajectory")
    vc.add_argument("--sub", required=True, help="trajectory CSV expected below in y1")
    vc.add_argument("--super", dest="super_", required=True, help="trajectory CSV expected above in y1")
    vc.add_argument("--tol", type=float, default=1e-8)
    _add_common(vc, grid_n=False, dt=False)
    vc.set_defaults(handler=_cmd_verify)
    vs = vsub.add_parser("sum", help="scaled total mass is a logistic supersolution")
    vs.add_argument("--traj", required=True, help="trajectory CSV")
    vs.add_argument("--tol", type=float, default=0.05)
    _add_common(vs, grid_n=False, dt=False)
    vs.set_defaults(handler=_cmd_verify)
    ve = vsub.add_parser("extinction", help="late-time persistence of total mass")
    ve.add_argument("--traj", required=True, help="trajectory CSV")
    ve.add_argument("--delta", type=float, default=0.1)
    _add_common(ve, grid_n=False, dt=False)
    ve.set_defaults(handler=_cmd_verify)
    vn = vsub.add_parser("neumann", help="zero-flux convergence to (0,1) above the separatrix")
    vn.add_argument("--a", type=float, required=True)
    vn.add_argument("--b", type=float, required=True)
    vn.add_argument("--L", type=float, required=True)
    vn.add_argument("--y1", type=float, required=True, help="constant initial species 1")
    vn.add_argument("--y2", type=float, required=True, help="constant initial species 2")
    vn.add_argument("--tol", type=float, default=0.01)
    _add_common(vn, dt=False)
    vn.set_defaults(handler=_cmd_verify)

    sp = sub.add_parser("figure", help="run a named experiment preset")
    sp.add_argument("name", choices=("base", "b", "L", "coex", "odes"))
    sp.add_argument("--max-iters", type=int, default=200, help="iteration cap (coex only)")
    _add_common(sp, scheme=True, t_end=True)
    sp.set_defaults(handler=_cmd_figure)

    return ap


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except LvControlError as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
