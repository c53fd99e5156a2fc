#!/usr/bin/env python3
"""Run the search-service guarantee suites and the topology shape sweep at a
heavier scale than the CLI default. Writes out/check.json."""
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from thln.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    raise SystemExit(main([
        "check",
        "--trials", "100",
        "--seed", "0",
        "-o", str(OUT / "check.json"),
    ]))
