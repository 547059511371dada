"""log Omega and active edge count as the KNN candidate set grows.

    python3 scripts/sweep_k.py --n 90 --seed 0 --out results/sweep_k
"""

import argparse
from dataclasses import dataclass

from lapminor.experiments import RunConfig, sweep_k


@dataclass
class Config:
    n: int = 90
    clusters: int = 3
    dim: int = 5
    seed: int = 0
    k_values: tuple = (5, 10, 20, 40, 89)
    out: str | None = None


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--n", type=int, default=90)
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-values", default="5,10,20,40,89")
    p.add_argument("--out", help="directory for sweep_k.csv and sweep_k.json")
    a = p.parse_args()
    cfg = Config(a.n, a.clusters, a.dim, a.seed, tuple(int(k) for k in a.k_values.split(",")), a.out)
    k_values = [k for k in cfg.k_values if k < cfg.n]
    rows = sweep_k(RunConfig(demo=(cfg.n, cfg.clusters, cfg.dim, cfg.seed), out=cfg.out), k_values)
    print(f"{'K':>4} {'m_input':>8} {'m_active':>8} {'log_omega':>11} {'epochs':>6} {'status':>12}")
    for r in rows:
        lo = "" if r["log_omega"] is None else f"{r['log_omega']:.5f}"
        print(f"{r['K']:>4} {r['m_input'] or '':>8} {r['m_active'] or '':>8} {lo:>11} {r['epochs'] or '':>6} {r['status']:>12}")


if __name__ == "__main__":
    main()
