#!/usr/bin/env python3
"""Dump valuation polygons of the branching-radius witnesses as CSV.

Emits, for each example, the polygon of the morphism f(t) and of the root
series f_p(s) = (1+s)^{1/p}, whose tail slope certifies the radius |p|^{p/(p-1)}.
Output goes to stdout (or per-series files with --dir).
"""

import argparse
import pathlib
import sys

from padicdisc.cli import _polygon_csv, emit_polygon, example_spec

TARGETS = (
    ("p2-trivial", "f"),
    ("p2-trivial", "fp"),
    ("p3-trivial", "f"),
    ("p3-trivial", "fp"),
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", help="write one CSV per series into this directory")
    args = parser.parse_args()
    for example, selector in TARGETS:
        data = emit_polygon(example_spec(example), selector)
        csv = _polygon_csv(data)
        header = "# %s / %s  tail q=%s stable=%s\n" % (
            example, selector, data["tail_estimate"]["q"], data["tail_estimate"]["stable"])
        if args.dir:
            path = pathlib.Path(args.dir)
            path.mkdir(parents=True, exist_ok=True)
            (path / ("%s_%s.csv" % (example, selector))).write_text(header + csv)
        else:
            sys.stdout.write(header + csv + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
