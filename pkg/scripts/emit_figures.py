"""Write the CSV data of every figure panel under ``figures/`` (or argv[1])."""

import sys

from chmetric.experiments import FIGURE_IDS, FigureConfig, emit_figures

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "figures"
    for fid in FIGURE_IDS:
        for path in emit_figures(fid, out, FigureConfig()):
            print(path)
