"""Table of series orders and criteria over the metabelian parameter grid.

    python scripts/metabelian_grid.py --max-order 100000
"""

import argparse
import time
from dataclasses import dataclass

from pfiltration import criteria, zoo
from pfiltration.core import min_generators, p_valuation
from pfiltration.series import frattini2, lower_p_central


@dataclass
class GridConfig:
    primes: str = "2,3,5"
    max_d: int = 2
    max_m: int = 3
    max_order: int = 1 << 21


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    for name, default in vars(GridConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = GridConfig(**vars(ap.parse_args()))
    primes = tuple(int(x) for x in cfg.primes.split(","))
    print(f"{'p':>2} {'k':>2} {'d':>2} {'m':>2} {'log|G|':>6} {'d(G)':>4} "
          f"{'log|Phi2|':>9} {'log P_n':<18} {'rel':>5} {'powerful':>8} {'Phi2=P3':>7} {'s':>6}")
    for p, k, d, m in zoo.metabelian_grid(primes, cfg.max_d, cfg.max_m, cfg.max_order):
        t0 = time.perf_counter()
        spec = zoo.GroupSpec.make("metabelian", p=p, k=k, d=d, m=m)
        G = zoo.build(spec)
        log = lambda n: p_valuation(n, p)
        pcs = ",".join(str(log(n)) for n in lower_p_central(G).orders)
        row = (criteria.verify_presentation_relations(G, spec), criteria.is_powerful(G),
               criteria.thmA_equality(G))
        print(f"{p:>2} {k:>2} {d:>2} {m:>2} {G.log_order:>6} {min_generators(G):>4} "
              f"{log(frattini2(G).order):>9} {pcs:<18} {row[0]!s:>5} {row[1]!s:>8} {row[2]!s:>7} "
              f"{time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
