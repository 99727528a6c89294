"""`plotkit actions --csv FILE [--csv FILE2 ...] --out FILE [--log|--linear]
[--modes LIST] [--title T]`"""
from __future__ import annotations

import argparse
import sys

from .core import PlotSpec, SchemaError, plot_actions


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plotkit")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("actions")
    sp.add_argument("--csv", action="append", required=True,
                    help="input CSV (repeat for side-by-side panels)")
    sp.add_argument("--out", required=True)
    scale = sp.add_mutually_exclusive_group()
    scale.add_argument("--log", dest="yscale", action="store_const",
                       const="log", default="log")
    scale.add_argument("--linear", dest="yscale", action="store_const",
                       const="linear")
    sp.add_argument("--modes", default=None,
                    help="comma-separated mode list, e.g. 0,1,-1,2")
    sp.add_argument("--title", default=None)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    modes = None
    if args.modes is not None:
        modes = [int(x) for x in args.modes.split(",") if x.strip()]
    try:
        spec = PlotSpec(csv_paths=args.csv, out=args.out,
                        yscale=args.yscale, modes=modes, title=args.title)
        out = plot_actions(spec)
    except (SchemaError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 65
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
