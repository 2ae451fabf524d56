"""Forward vs backward counting on IMF 2016 at 85%, and the cost of each index.

The two counting directions do n*q and n*(C-q+1) additions per prime, so
the expected ratio is about 0.85/0.15.
"""

import time

from wvgpower.counting import backward_counts, forward_counts
from wvgpower.dataset import bundled
from wvgpower.game import normalize
from wvgpower.indices import banzhaf, shapley_shubik


def clock(fn, *a):
    t = time.perf_counter()
    out = fn(*a)
    return out, time.perf_counter() - t


def main() -> None:
    for year in (2015, 2016):
        game = bundled(year).game("85%")
        norm = normalize(game)
        _, t_f = clock(forward_counts, norm)
        _, t_b = clock(backward_counts, norm)
        _, t_bz = clock(banzhaf, game)
        print(f"{year} 85%: forward {t_f:.2f}s, backward {t_b:.2f}s (ratio {t_f / t_b:.2f}), Banzhaf all players {t_bz:.2f}s")
    d, t_ssi = clock(shapley_shubik, bundled(2015).game("85%"))
    print(f"2015 85%: SSI all players {t_ssi:.1f}s {d.meta['seconds']}")


if __name__ == "__main__":
    main()
