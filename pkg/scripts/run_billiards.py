"""Run the billiard suites: circle eigenvalue convergence, stadium mode
statistics, and the classical ergodic-orbit diagnostics.

Usage: python3 scripts/run_billiards.py [out_dir] [grid_spacing]
"""

import sys

from semiclass_lab.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "results/billiards"
args = ["--experiment", "billiard-circle,billiard-stadium,ergodic-orbit",
        "--out", out]
if len(sys.argv) > 2:
    args += ["--h", sys.argv[2]]
sys.exit(main(args))
