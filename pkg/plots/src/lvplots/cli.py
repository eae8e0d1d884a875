"""Command-line interface: render images from simulator artifacts.

Subcommands
    heatmap TRAJECTORY_CSV OUT_IMAGE    two-panel space-time heatmap (y1 | y2)
    portrait PORTRAIT_CSV OUT_IMAGE     basin lattice with equilibria

Inputs are the CSV/JSON files written by the ``lvcontrol`` CLI; this tool
never modifies them and writes exactly one image per invocation.  Exit codes:
0 on success, 2 for unreadable or schema-mismatched inputs.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")

from . import __version__
from .heatmap import DPI as HEATMAP_DPI
from .heatmap import render_heatmap
from .io import InputError, load_portrait, load_trajectory
from .portrait import DPI as PORTRAIT_DPI
from .portrait import render_portrait


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvplots",
        description="Render figures from competition-diffusion CSV/JSON artifacts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    hp = sub.add_parser("heatmap", help="two-panel space-time heatmap of a trajectory CSV")
    hp.add_argument("trajectory_csv", help="long-format CSV with a '# config:' header")
    hp.add_argument("out_image", help="output image path (extension picks the format)")
    hp.add_argument("--dpi", type=int, default=HEATMAP_DPI)
    hp.set_defaults(handler=_cmd_heatmap)

    pp = sub.add_parser("portrait", help="basin lattice from a portrait CSV + summary JSON")
    pp.add_argument("portrait_csv", help="CSV with header w1_0,w2_0,class")
    pp.add_argument("out_image", help="output image path (extension picks the format)")
    pp.add_argument(
        "--summary",
        default=None,
        help="summary JSON with params and equilibria "
        "(default: discovered next to the CSV)",
    )
    pp.add_argument("--dpi", type=int, default=PORTRAIT_DPI)
    pp.set_defaults(handler=_cmd_portrait)
    return parser


def _cmd_heatmap(args: argparse.Namespace) -> int:
    trajectory = load_trajectory(args.trajectory_csv)
    render_heatmap(trajectory, args.out_image, dpi=args.dpi)
    print(
        f"heatmap: {trajectory.t.size}x{trajectory.x.size} (t,x) grid -> {args.out_image}"
    )
    return 0


def _cmd_portrait(args: argparse.Namespace) -> int:
    table = load_portrait(args.portrait_csv, args.summary)
    render_portrait(table, args.out_image, dpi=args.dpi)
    counts = {}
    for cls in table.classes:
        counts[cls] = counts.get(cls, 0) + 1
    print(f"portrait: {counts} -> {args.out_image}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
