"""Regenerate the exact-oracle golden files used by the test suite.

    python tools/make_golden.py [directory]
"""
import sys
from pathlib import Path

from sardquad.oracle import write_golden_grid

if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "tests" / "golden"
    n = write_golden_grid(target, ms=range(1, 6), n_max=50)
    print(f"wrote {n} golden files to {target}")
