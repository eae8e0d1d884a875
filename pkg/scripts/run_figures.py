#!/usr/bin/env python3
"""Run the named experiment presets and collect their artifacts.

Thin wrapper over `lvcontrol figure`; each preset lands in its own
subdirectory of --out-dir together with a one-line outcome summary.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from lvcontrol.cli import run

PRESETS = ("base", "b", "L", "coex", "odes")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=[], metavar="NAME",
                    help=f"presets to run (default: all of {', '.join(PRESETS)})")
    ap.add_argument("--out-dir", default="figures", help="root output directory")
    ap.add_argument("--max-iters", type=int, default=200,
                    help="optimizer iteration cap for the coex preset")
    args = ap.parse_args()

    names = args.names or list(PRESETS)
    unknown = sorted(set(names) - set(PRESETS))
    if unknown:
        ap.error(f"unknown preset(s) {unknown}; choose from {PRESETS}")

    worst = 0
    for name in names:
        out = os.path.join(args.out_dir, name)
        argv = ["figure", name, "--out-dir", out]
        if name == "coex":
            argv += ["--max-iters", str(args.max_iters)]
        code = run(argv)
        worst = max(worst, code)
        summary_path = os.path.join(out, f"figure_{name}_summary.json")
        if code == 0 and os.path.exists(summary_path):
            with open(summary_path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            extra = {k: doc[k] for k in
                     ("steady", "terminal_misfit_sup", "target_met", "density")
                     if k in doc}
            runtime = doc.get("runtime_s")
            tag = f" runtime={runtime:.1f}s" if runtime is not None else ""
            print(f"[{name}] ok{tag} {extra}")
        else:
            print(f"[{name}] exit code {code}", file=sys.stderr)
    return worst


if __name__ == "__main__":
    sys.exit(main())
