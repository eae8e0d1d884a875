"""Readers for the simulator's CSV/JSON artifacts.

The ``lvcontrol`` command-line tool writes trajectories in long format::

    # config: {... resolved simulation config, one JSON object ...}
    t,x,y1,y2
    0,0,1,0
    ...

and kinetic phase portraits as ``w1_0,w2_0,class`` tables with a sibling
summary JSON holding the parameters and the equilibria.  The readers here
validate those schemas strictly and never modify the files; everything this
package knows about a run comes in through them.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "InputError",
    "Trajectory",
    "Equilibrium",
    "PortraitTable",
    "load_trajectory",
    "load_portrait",
    "find_portrait_summary",
]

CONFIG_PREFIX = "# config:"
TRAJECTORY_COLUMNS = ("t", "x", "y1", "y2")
PORTRAIT_COLUMNS = ("w1_0", "w2_0", "class")


class InputError(ValueError):
    """An input artifact is missing, malformed, or has the wrong schema."""


@dataclass(frozen=True)
class Trajectory:
    """A space-time field pair reshaped onto its (t, x) grid."""

    config: Dict[str, object]
    t: np.ndarray  # shape (nt,)
    x: np.ndarray  # shape (nx,)
    y1: np.ndarray  # shape (nt, nx)
    y2: np.ndarray  # shape (nt, nx)


@dataclass(frozen=True)
class Equilibrium:
    w1: float
    w2: float
    label: str


@dataclass(frozen=True)
class PortraitTable:
    """A basin-classified lattice plus the kinetic context it was drawn from."""

    a: float
    b: float
    w1: np.ndarray  # shape (n,)
    w2: np.ndarray  # shape (n,)
    classes: Tuple[str, ...]
    equilibria: Tuple[Equilibrium, ...]


def _read_config_header(path: Path) -> Dict[str, object]:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if not first.startswith(CONFIG_PREFIX):
        raise InputError(
            f"{path}: first line must be a '{CONFIG_PREFIX} {{...}}' header "
            "as written by the simulator"
        )
    try:
        config = json.loads(first[len(CONFIG_PREFIX) :])
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: config header is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise InputError(f"{path}: config header must be a JSON object")
    return config


def load_trajectory(path: object) -> Trajectory:
    """Read a long-format trajectory CSV and reshape it onto its grid.

    Raises :class:`InputError` if the config header is missing, the columns
    are not exactly ``t,x,y1,y2``, any value is non-numeric, or the rows do
    not form a complete cartesian (t, x) grid.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"{path}: no such file")
    config = _read_config_header(path)
    try:
        data = np.genfromtxt(path, delimiter=",", names=True, skip_header=1)
    except ValueError as exc:
        raise InputError(f"{path}: could not parse CSV body: {exc}") from exc
    if data.dtype.names is None or tuple(data.dtype.names) != TRAJECTORY_COLUMNS:
        found = () if data.dtype.names is None else tuple(data.dtype.names)
        raise InputError(
            f"{path}: expected columns {','.join(TRAJECTORY_COLUMNS)}, "
            f"found {','.join(found) or '(none)'}"
        )
    data = np.atleast_1d(data)
    if data.size == 0:
        raise InputError(f"{path}: trajectory table is empty")
    for name in TRAJECTORY_COLUMNS:
        if not np.isfinite(data[name]).all():
            raise InputError(f"{path}: column '{name}' has missing or non-numeric values")

    t_vals = np.unique(data["t"])
    x_vals = np.unique(data["x"])
    nt, nx = t_vals.size, x_vals.size
    if nt * nx != data.size:
        raise InputError(f"{path}: rows do not form a complete (t, x) grid")
    order = np.lexsort((data["x"], data["t"]))
    x_grid = data["x"][order].reshape(nt, nx)
    t_grid = data["t"][order].reshape(nt, nx)
    if not ((x_grid == x_vals).all() and (t_grid == t_vals[:, None]).all()):
        raise InputError(f"{path}: rows do not form a complete (t, x) grid")
    y1 = data["y1"][order].reshape(nt, nx)
    y2 = data["y2"][order].reshape(nt, nx)
    return Trajectory(config=config, t=t_vals, x=x_vals, y1=y1, y2=y2)


def find_portrait_summary(csv_path: object) -> Optional[Path]:
    """Locate the summary JSON the simulator writes next to a portrait CSV.

    Both upstream naming patterns are tried: ``portrait.csv`` pairs with
    ``portrait_summary.json`` and ``<name>_portrait.csv`` pairs with
    ``<name>_summary.json``.
    """
    csv_path = Path(csv_path)
    name = csv_path.name
    candidates = []
    if name.endswith("portrait.csv"):
        candidates.append(name[: -len("portrait.csv")] + "portrait_summary.json")
    if name.endswith("_portrait.csv"):
        candidates.append(name[: -len("_portrait.csv")] + "_summary.json")
    for candidate in candidates:
        sibling = csv_path.with_name(candidate)
        if sibling.is_file():
            return sibling
    return None


def _load_portrait_summary(path: Path) -> Tuple[float, float, Tuple[Equilibrium, ...]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: summary must be a JSON object")
    params = doc.get("params")
    if not isinstance(params, dict) or not {"a", "b"} <= set(params):
        raise InputError(f"{path}: summary must carry params.a and params.b")
    try:
        a = float(params["a"])
        b = float(params["b"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: params.a and params.b must be numbers") from exc
    equilibria = []
    for entry in doc.get("equilibria", []):
        if not isinstance(entry, dict):
            raise InputError(f"{path}: each equilibrium must be a JSON object")
        point = entry.get("point")
        label = entry.get("label")
        if (
            not isinstance(point, Sequence)
            or len(point) != 2
            or not isinstance(label, str)
        ):
            raise InputError(
                f"{path}: each equilibrium needs a two-number 'point' and a 'label'"
            )
        equilibria.append(Equilibrium(float(point[0]), float(point[1]), label))
    return a, b, tuple(equilibria)


def load_portrait(csv_path: object, summary_path: object = None) -> PortraitTable:
    """Read a basin lattice CSV together with its parameter/equilibria summary.

    When ``summary_path`` is omitted the summary JSON is discovered next to
    the CSV via :func:`find_portrait_summary`.  Raises :class:`InputError`
    for a wrong header, an empty table, non-numeric coordinates, or a
    missing/malformed summary.
    """
    csv_path = Path(csv_path)
    if not csv_path.is_file():
        raise InputError(f"{csv_path}: no such file")
    if summary_path is None:
        summary_path = find_portrait_summary(csv_path)
        if summary_path is None:
            raise InputError(
                f"{csv_path}: no summary JSON found alongside the portrait CSV; "
                "pass one explicitly with --summary"
            )
    summary_path = Path(summary_path)
    if not summary_path.is_file():
        raise InputError(f"{summary_path}: no such file")

    with open(csv_path, "r", newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows or tuple(cell.strip() for cell in rows[0]) != PORTRAIT_COLUMNS:
        found = ",".join(rows[0]) if rows else "(empty file)"
        raise InputError(
            f"{csv_path}: expected header {','.join(PORTRAIT_COLUMNS)}, found {found}"
        )
    body = rows[1:]
    if not body:
        raise InputError(f"{csv_path}: portrait table has no rows")
    w1 = np.empty(len(body))
    w2 = np.empty(len(body))
    classes = []
    for i, row in enumerate(body):
        if len(row) != 3:
            raise InputError(f"{csv_path}: row {i + 2} does not have 3 fields")
        try:
            w1[i] = float(row[0])
            w2[i] = float(row[1])
        except ValueError as exc:
            raise InputError(f"{csv_path}: row {i + 2} has non-numeric coordinates") from exc
        classes.append(row[2].strip())

    a, b, equilibria = _load_portrait_summary(summary_path)
    return PortraitTable(
        a=a, b=b, w1=w1, w2=w2, classes=tuple(classes), equilibria=equilibria
    )
