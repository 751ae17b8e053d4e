"""Run the Kolmogorov-Sinai entropy sweep: estimator table over (T, eps),
oracle clouds at full size, and the scar-weight bound checks.

Usage: python3 scripts/run_entropy_sweep.py [out_dir]
"""

import sys

from semiclass_lab.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "results/entropy"
sys.exit(main(["--experiment", "entropy-sweep", "--out", out]))
