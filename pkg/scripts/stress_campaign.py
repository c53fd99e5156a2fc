#!/usr/bin/env python3
"""Headline stress campaign: 200 seeded trials at dimension 8 with the full
fault budget of 6, endpoints resampled to meet the neighbor condition.

Writes out/stress_n8.json (deterministic) and out/stress_n8.csv.
"""
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from thln.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    raise SystemExit(main([
        "stress",
        "--n", "8",
        "--faults", "6",
        "--trials", "200",
        "--seed", "1",
        "-o", str(OUT / "stress_n8.json"),
        "--csv", str(OUT / "stress_n8.csv"),
    ]))
