#!/usr/bin/env python3
"""Regenerate the test fixtures and rerun the headline computations."""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"
CONSTRUCT = {
    "five_cycle": ["five-cycle"],
    "triangle": ["triangle"],
    "figure1": ["figure1"],
    "power3": ["power", "--n", "3"],
    "power4": ["power", "--n", "4"],
}


def run(*cmd) -> int:
    print("$", " ".join(cmd), flush=True)
    return subprocess.run(cmd).returncode


def main() -> int:
    cli = [sys.executable, "-m", "setpairs.cli"]
    status = 0
    for name, argv in CONSTRUCT.items():
        status |= run(*cli, "construct", *argv, "-o", str(FIXTURES / f"{name}.json"))
    for name in CONSTRUCT:
        status |= run(*cli, "verify", str(FIXTURES / f"{name}.json"))
    status |= run(*cli, "lemmas", "--max", "100")
    status |= run(*cli, "search", "--a", "2", "--b", "2")
    status |= run(sys.executable, str(ROOT / "scripts" / "search_table.py"))
    status |= run(sys.executable, str(ROOT / "scripts" / "theorem_sweep.py"))
    return status


if __name__ == "__main__":
    sys.exit(main())
