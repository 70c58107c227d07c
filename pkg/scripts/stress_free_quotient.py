"""Build F_d/Phi_2 for a larger (p, d) and time the centrality verdict.

    python scripts/stress_free_quotient.py --p 3 --d 2
    python scripts/stress_free_quotient.py --p 2 --d 3 --cap 2097152
"""

import argparse
import time
from dataclasses import dataclass

from pfiltration import criteria, freequot
from pfiltration.series import frattini2


@dataclass
class StressConfig:
    p: int = 3
    d: int = 2
    cap: int = 1 << 21
    budget_s: float = 300.0


def run(cfg: StressConfig):
    t0 = time.perf_counter()
    E = freequot.build_free_mod_phi2(cfg.p, cfg.d, cap=cfg.cap, verify=False)
    built = time.perf_counter() - t0
    trivial = frattini2(E).is_trivial()
    verdict = criteria.centrality_criterion(E)
    total = time.perf_counter() - t0
    print(f"F_{cfg.d}/Phi_2 at p={cfg.p}: order {cfg.p}^{E.log_order}, built in {built:.1f} s")
    print(f"Phi_2 trivial: {trivial}")
    print(f"centrality criterion: {verdict}  ({total:.1f} s total, budget {cfg.budget_s:.0f} s)")
    return not verdict and trivial and total < cfg.budget_s


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    for name, default in vars(StressConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = StressConfig(**vars(ap.parse_args()))
    raise SystemExit(0 if run(cfg) else 1)


if __name__ == "__main__":
    main()
