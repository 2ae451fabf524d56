"""Banzhaf shares of selected members over the full quota range (plot-ready long CSV).

Also prints the checks the published figures support: France and the United
Kingdom coincide everywhere, and the endpoints are uniform.
"""

import argparse
import csv
from fractions import Fraction
from pathlib import Path

from wvgpower.dataset import bundled
from wvgpower.indices import BIG_FIVE, quota_sweep, render_percent, render_share


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--step", type=Fraction, default=Fraction(1, 1000))
    ap.add_argument("--players", type=int, nargs="*", default=list(BIG_FIVE))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for year in (2015, 2016):
        ds = bundled(year)
        pts = quota_sweep(ds.weights, args.step)
        path = args.out_dir / f"sweep_{year}.csv"
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(("quota_pct", "player_index", "name", "bz_share"))
            for p in pts:
                for i in args.players:
                    w.writerow((render_percent(p.fraction, 1), i, ds.names[i - 1], render_share(p.shares[i - 1], 8)))
        same = all(p.shares[57] == p.shares[178] for p in pts)
        uniform = pts[0].shares == pts[-1].shares == tuple(Fraction(1, ds.n) for _ in range(ds.n))
        peak = max(pts, key=lambda p: p.shares[179])
        print(
            f"{year}: {len(pts)} points -> {path}; France == UK everywhere: {same}; uniform endpoints: {uniform}; "
            f"US peak {render_percent(peak.shares[179], 3)}% at quota {render_percent(peak.fraction, 1)}%"
        )


if __name__ == "__main__":
    main()
