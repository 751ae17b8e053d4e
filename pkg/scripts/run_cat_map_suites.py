"""Run the quantized cat map suites: Egorov defects, quantum-ergodicity
variance, and the scarred-state construction.

Usage: python3 scripts/run_cat_map_suites.py [out_dir]
"""

import sys

from semiclass_lab.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "results/catmap"
sys.exit(main(["--experiment", "egorov,qe-catmap,scar-construction",
               "--out", out]))
