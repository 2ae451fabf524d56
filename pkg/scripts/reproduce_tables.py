"""Recompute the IMF power tables and compare them with the transcribed published values.

Writes exact Banzhaf counts, the voting-power percentage table and the
differences table to --out-dir, then prints per-table agreement.
The SSI columns dominate the runtime (several minutes at 50%).
"""

import argparse
import csv
import time
from fractions import Fraction
from pathlib import Path

from wvgpower.dataset import bundled
from wvgpower.indices import banzhaf, difference_report, players_without_big_five, render_percent, shapley_shubik

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "data"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--tie-rule", choices=["include_equal", "strict"], default="include_equal")
    ap.add_argument("--parallel-primes", action="store_true")
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    dists = {}
    for year in (2015, 2016):
        for q in ("85%", "50%"):
            game = bundled(year).game(q, args.tie_rule)
            t = time.perf_counter()
            bz = banzhaf(game, parallel_primes=args.parallel_primes)
            t_bz = time.perf_counter() - t
            ssi = shapley_shubik(game, parallel_primes=args.parallel_primes)
            t_ssi = time.perf_counter() - t - t_bz
            dists[(year, q)] = bz.merged(ssi)
            print(f"{year} {q}: quota {game.quota}, Banzhaf {t_bz:.1f}s, SSI {t_ssi:.1f}s")

    names = bundled(2016).names
    with open(args.out_dir / "exact_banzhaf_85.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("index", "name", "raw_2015", "raw_2016"))
        for i in range(188):
            w.writerow((i + 1, names[i], dists[(2015, "85%")].banzhaf_raw[i], dists[(2016, "85%")].banzhaf_raw[i]))

    cols = [(idx, y, q) for q in ("85", "50") for idx in ("bz", "ssi") for y in (2015, 2016)]
    with open(args.out_dir / "voting_power.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("index", *[f"{idx}_{q}_{y}" for idx, y, q in cols]))
        for i in range(188):
            row = []
            for idx, y, q in cols:
                d = dists[(y, f"{q}%")]
                row.append(render_percent((d.banzhaf_share if idx == "bz" else d.ssi_share)[i], 3))
            w.writerow((i + 1, *row))

    reports = [
        difference_report(dists, None, "N"),
        difference_report(dists, players_without_big_five(188), "N_without_big_five"),
    ]
    with open(args.out_dir / "differences.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("player_set", *reports[0].cells))
        for r in reports:
            w.writerow((r.player_set, *[r.percent(k) for k in r.cells]))

    for name in ("exact_banzhaf_85.csv", "voting_power.csv", "differences.csv"):
        with open(GOLDEN / name) as f:
            gold = list(csv.DictReader(f))
        with open(args.out_dir / name) as f:
            ours = list(csv.DictReader(f))
        cells = bad = 0
        for g, o in zip(gold, ours):
            for key, val in g.items():
                if key in ("index", "player_set"):
                    continue
                cells += 1
                tol = Fraction(0) if name.startswith("exact") else Fraction(1, 1000 if name == "voting_power.csv" else 100)
                bad += abs(Fraction(o[key]) - Fraction(val)) > tol
        print(f"{name}: {cells - bad}/{cells} cells agree")


if __name__ == "__main__":
    main()
