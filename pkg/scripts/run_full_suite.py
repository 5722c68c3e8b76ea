#!/usr/bin/env python3
"""Run the shipped suite covering every registered identity.

The suite includes one deliberately wrong case (NEG_AG, marked
expect: fail) so a clean exit also certifies that the harness still
detects mismatches.
"""

import argparse
import pathlib
import sys

from qident.cli import main as cli_main

SUITE = pathlib.Path(__file__).resolve().parent.parent / "suites" / "full-paper.suite"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    args = ap.parse_args()
    return cli_main(["suite", str(SUITE), "--jobs", str(args.jobs), "--format", args.format])


if __name__ == "__main__":
    sys.exit(main())
