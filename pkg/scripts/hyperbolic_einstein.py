"""Einstein metrics on R ⋉ R^n across seeds: constant, residual and wall time.

Usage: python scripts/hyperbolic_einstein.py [--max-n N] [--seeds K]
"""

import argparse
import time

from iwasawa import catalog
from iwasawa.einstein import einstein_solve


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--seeds", type=int, default=3)
    args = p.parse_args()
    print(f"{'n':>2} {'seed':>4} {'constant':>22} {'residual':>10} {'iters':>6} {'secs':>6}")
    for n in range(1, args.max_n + 1):
        S = catalog.hyperbolic_iwasawa(n)
        for seed in range(args.seeds):
            t0 = time.perf_counter()
            res = einstein_solve(S, seed=seed)
            dt = time.perf_counter() - t0
            print(f"{n:>2} {seed:>4} {res.einstein_constant:>22.15f} {res.residual:>10.2e} {res.iterations:>6} {dt:>6.2f}")


if __name__ == "__main__":
    main()
