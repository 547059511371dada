"""Wall time of one solver epoch on complete candidate graphs of growing size.

Fits the exponent b in time ~ n^b by least squares on log-log axes.

    python3 scripts/epoch_scaling.py --sizes 100,200,400,800
"""

import argparse
from dataclasses import dataclass

import numpy as np

from lapminor.costs import CostConfig, cost_table
from lapminor.solver import SolverConfig, solve
from lapminor.synthetic import make_clusters
from lapminor.topology import complete_edge_set


@dataclass
class Config:
    sizes: tuple = (100, 200, 400)
    epochs: int = 3
    seed: int = 0


def epoch_ms(n, cfg):
    X, _ = make_clusters(n, 3, 5, cfg.seed)
    es = complete_edge_set(cost_table(X, CostConfig("gaussian")))
    _, trace = solve(es, SolverConfig(max_epochs=cfg.epochs))
    return es.m, min(ep["wall_ms"] for ep in trace.epochs)


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--sizes", default="100,200,400")
    p.add_argument("--epochs", type=int, default=3)
    a = p.parse_args()
    cfg = Config(tuple(int(v) for v in a.sizes.split(",")), a.epochs)
    times = []
    for n in cfg.sizes:
        m, ms = epoch_ms(n, cfg)
        times.append(ms)
        print(f"n={n:>5} m={m:>7} best epoch {ms:9.1f} ms")
    slope = np.polyfit(np.log(cfg.sizes), np.log(times), 1)[0]
    print(f"fitted exponent: {slope:.2f}")


if __name__ == "__main__":
    main()
