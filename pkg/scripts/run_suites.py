"""Run every verification suite and write reports under ``results/``."""

import sys

from chmetric.cli import main

SUITES = [
    ["invariants", "--config", "configs/invariants.cfg"],
    ["residual", "--config", "configs/residual.cfg"],
    ["lipschitz", "--config", "configs/lipschitz.cfg"],
]

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results"
    codes = [main(argv + ["--out", out]) for argv in SUITES]
    sys.exit(max(codes))
