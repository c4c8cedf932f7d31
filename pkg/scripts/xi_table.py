"""Table of clique covering numbers of Kneser graphs against the counting bound.

Usage: python3 scripts/xi_table.py [max_n]
"""

import sys
import time

from multilateral.kneser import EXACT_MAX_N, exact_search, greedy_cover, lower_bound


def main(max_n: int = EXACT_MAX_N) -> None:
    print(f"{'n':>3} {'k':>3} {'xi':>5} {'bound':>6} {'greedy':>7} {'seconds':>8}")
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            start = time.perf_counter()
            res = exact_search(n, k)
            took = time.perf_counter() - start
            greedy = greedy_cover(n, k).size
            print(f"{n:>3} {k:>3} {res.cover.size:>5} {lower_bound(n, k):>6} {greedy:>7} {took:>8.3f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else EXACT_MAX_N)
