"""Distance-over-time CSV for two peakon pairs: E1 t01 E2 t02 [tmax samples N]."""

import sys

import numpy as np

from chmetric.metric import PeakonParams, distance_series, growth_rate, series_csv

if __name__ == "__main__":
    if len(sys.argv) < 5:
        sys.exit(__doc__)
    E1, t1, E2, t2 = map(float, sys.argv[1:5])
    tmax = float(sys.argv[5]) if len(sys.argv) > 5 else 4.0
    samples = int(sys.argv[6]) if len(sys.argv) > 6 else 33
    n = int(sys.argv[7]) if len(sys.argv) > 7 else 4096
    series = distance_series(PeakonParams(E1, t1), PeakonParams(E2, t2),
                             np.linspace(0.0, tmax, samples), n)
    sys.stdout.write(series_csv(series))
    print(f"# fitted K = {growth_rate(series):.12g}", file=sys.stderr)
