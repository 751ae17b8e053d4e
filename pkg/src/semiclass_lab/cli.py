"""Command-line experiment orchestrator.

Usage:
    semiclass-lab --experiment egorov --out results/egorov
    semiclass-lab --experiment egorov,qe-catmap --parallel --out results
    semiclass-lab --config run.cfg --seed 3

The SEMICLASS_LAB_THREADS environment variable caps BLAS thread counts
(it is applied on package import, before numpy loads).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .config import EXPERIMENTS, ExperimentConfig, parse_config
from .errors import SemiclassError
from .experiments import run_experiment


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semiclass-lab",
        description="Numerical experiments on quantum chaos model systems",
    )
    p.add_argument("--experiment",
                   help="suite name, or a comma-separated list; one of "
                        + ", ".join(EXPERIMENTS))
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--out", help="output directory (default: current)")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--parallel", action="store_true",
                   help="run multiple suites as parallel processes")
    p.add_argument("--dump-state", action="store_true",
                   help="also write binary state/operator containers")
    p.add_argument("--N", type=int, help="Hilbert space dimension")
    p.add_argument("--h", type=float, help="billiard grid spacing")
    return p


def _configs_from_args(args) -> list:
    overrides = {"out_dir": args.out, "seed": args.seed, "N": args.N,
                 "h": args.h}
    if args.dump_state:
        overrides["dump_state"] = True
    base = parse_config(args.config, overrides)
    names = args.experiment.split(",") if args.experiment else \
        ([base.experiment] if base.experiment else [])
    if not names:
        raise SemiclassError("no experiment given (use --experiment or a config file)")
    configs = []
    for name in names:
        cfg = replace(base, experiment=name.strip())
        if len(names) > 1:
            cfg = replace(cfg, out_dir=str(Path(cfg.out_dir) / cfg.experiment))
        configs.append(cfg.validated())
    return configs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configs = _configs_from_args(args)
    except SemiclassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.parallel and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=len(configs)) as pool:
            reports = list(pool.map(run_experiment, configs))
    else:
        reports = [run_experiment(cfg) for cfg in configs]
    all_ok = True
    for report in reports:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"[{report.experiment}] {status} {check.name} = {check.value:.6g}"
                  + (f" ({check.detail})" if check.detail else ""))
        all_ok &= report.passed
        print(f"[{report.experiment}] "
              + ("all checks passed" if report.passed else "CHECKS FAILED")
              + f" in {report.wall_time:.1f}s")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
