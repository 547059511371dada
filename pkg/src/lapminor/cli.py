"""Command line entry point.

    lapminor run        data.csv --cost gaussian --topology knn --k 10 --out results/
    lapminor sweep-k    --demo 90 3 5 0 --k-values 5,10,20,40,89 --out sweep/
    lapminor sweep-rules --demo 90 3 5 0 --topology knn --k 10 --seeds 0,1,2 --out rules/

Exit codes: 0 converged, 2 disconnected topology, 3 max epochs reached, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .costs import CostConfig, CostOverflowError
from .experiments import InputError, RunConfig, run, sweep_k, sweep_rules
from .graph import DisconnectedGraphError
from .solver import SolverConfig
from .topology import TopologySpec

EXIT_OK, EXIT_DISCONNECTED, EXIT_MAX_EPOCHS, EXIT_INPUT = 0, 2, 3, 4


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _common(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input")
    src.add_argument("input", nargs="?", help="CSV with one row per node (columns = signals)")
    src.add_argument("--header", action="store_true", help="skip the first CSV row")
    src.add_argument("--transpose", action="store_true", help="CSV rows are signals, columns are nodes")
    src.add_argument("--demo", nargs=4, type=int, metavar=("N", "K_CLUSTERS", "DIM", "SEED"),
                     help="use synthetic clustered Gaussian data instead of a CSV")
    c = p.add_argument_group("edge costs")
    c.add_argument("--cost", choices=("gmrf", "lp", "gaussian"), default="gaussian")
    c.add_argument("--alpha", type=float, help="gmrf offset (required for --cost gmrf)")
    c.add_argument("--p", type=float, default=2.0, help="exponent for --cost lp")
    c.add_argument("--sigma", type=float, help="gaussian bandwidth (default: median pairwise distance)")
    t = p.add_argument_group("topology")
    t.add_argument("--topology", choices=("complete", "knn", "file"), default="complete")
    t.add_argument("--k", type=int, help="neighbours per node for --topology knn")
    t.add_argument("--edges", help="edge list 'i j [h]' for --topology file")
    s = p.add_argument_group("solver")
    s.add_argument("--rule", choices=("cyclic", "random", "pgs"), default="cyclic")
    s.add_argument("--tol", type=float, default=1e-10, help="per-epoch objective decrease threshold")
    s.add_argument("--max-epochs", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory")


def _config(args) -> RunConfig:
    cost = CostConfig({"lp": "lp_variation", "gaussian": "gaussian_kernel"}.get(args.cost, args.cost),
                      alpha=args.alpha, p=args.p, sigma=args.sigma)
    topo = TopologySpec(args.topology, K=args.k, path=args.edges)
    solver = SolverConfig(rule=args.rule, tol=args.tol, max_epochs=args.max_epochs)
    return RunConfig(input=args.input, header=args.header, transpose=args.transpose,
                     demo=tuple(args.demo) if args.demo else None, cost=cost,
                     topology=topo, solver=solver, out=args.out, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lapminor", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="learn one graph")
    _common(p_run)
    p_k = sub.add_parser("sweep-k", help="KNN topologies over a list of K on one cost table")
    _common(p_k)
    p_k.add_argument("--k-values", type=_int_list, default=[5, 10, 20, 40])
    p_k.add_argument("--workers", type=int, default=1)
    p_r = sub.add_parser("sweep-rules", help="compare edge selection rules on one instance")
    _common(p_r)
    p_r.add_argument("--rules", type=lambda s: s.split(","), default=["cyclic", "random", "pgs"])
    p_r.add_argument("--seeds", type=_int_list, default=[0], help="seeds for the random rule")
    p_r.add_argument("--k-values", type=_int_list, help="run each rule on KNN graphs for these K")
    p_r.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "run":
            result = run(config)
            print(json.dumps(result["metrics"], indent=2, sort_keys=True))
            return EXIT_OK if result["metrics"]["status"] == "converged" else EXIT_MAX_EPOCHS
        if args.command == "sweep-k":
            rows = sweep_k(config, args.k_values, workers=args.workers)
        else:
            rows = sweep_rules(config, args.rules, args.seeds, args.k_values, workers=args.workers)
        for row in rows:
            print(json.dumps(row, sort_keys=True))
        return EXIT_OK
    except DisconnectedGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except (InputError, CostOverflowError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
