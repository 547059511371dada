"""End-to-end runs: data -> costs -> topology -> solve -> files, plus K and rule sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .costs import CostConfig, cost_table, median_sigma
from .graph import DisconnectedGraphError, EdgeSet, atomic_write, write_edge_tsv
from .resistance import edge_resistances
from .solver import SelectionRule, SolverConfig, solve, summarize
from .synthetic import make_clusters
from .topology import (
    TopologySpec,
    complete_edge_set,
    edge_set_from_file,
    knn_edge_set,
    knn_edge_set_streaming,
)

STREAMING_MIN_N = 2000


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    input: Optional[str] = None
    header: bool = False
    transpose: bool = False
    demo: Optional[tuple[int, int, int, int]] = None  # (n, k_clusters, dim, seed)
    cost: CostConfig = field(default_factory=CostConfig)
    topology: TopologySpec = field(default_factory=TopologySpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    out: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        self.solver.rule = SelectionRule(self.solver.rule.kind, self.seed)


def load_data(config: RunConfig) -> Optional[np.ndarray]:
    if config.demo is not None:
        n, k, dim, seed = (int(v) for v in config.demo)
        return make_clusters(n, k, dim, seed)[0]
    if config.input is None:
        return None
    try:
        with open(config.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {config.input}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if config.header:
        rows = rows[1:]
    rows = [r for r in rows if r]
    try:
        X = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise InputError(f"{config.input}: malformed CSV ({exc})") from exc
    if X.ndim != 2 or len({len(r) for r in rows}) != 1:
        raise InputError(f"{config.input}: rows have different lengths")
    return X.T.copy() if config.transpose else X


def resolve_cost(X, cfg: CostConfig) -> CostConfig:
    """Fill in the median-distance sigma for the Gaussian family."""
    if cfg.family == "gaussian_kernel" and cfg.sigma is None and X is not None:
        return replace(cfg, sigma=median_sigma(X))
    return cfg


def build_edge_set(X, cost: CostConfig, topo: TopologySpec, H=None) -> EdgeSet:
    if topo.kind == "file":
        return edge_set_from_file(topo.path, X, cost)
    if X is None:
        raise InputError("no data: pass an input CSV or --demo")
    if topo.kind == "complete":
        return complete_edge_set(cost_table(X, cost) if H is None else H)
    if H is None and X.shape[0] >= STREAMING_MIN_N:
        return knn_edge_set_streaming(X, cost, topo.K)
    return knn_edge_set(cost_table(X, cost) if H is None else H, topo.K)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def solve_and_report(edge_set: EdgeSet, solver: SolverConfig) -> dict:
    """Solve and return metrics, trace and the final state (no files written)."""
    t0 = time.perf_counter()
    state, trace = solve(edge_set, solver)
    wall_ms = (time.perf_counter() - t0) * 1e3
    r = edge_resistances(state)
    summary = summarize(state, trace, r)
    metrics = {
        k: summary[k]
        for k in ("n", "m_input", "m_active", "log_omega", "sum_hw", "kkt", "epochs", "status")
    }
    final = {
        "m_active": summary["m_active"],
        "logdet": summary["logdet"],
        "sum_hw": summary["sum_hw"],
    }
    trace_json = trace.to_json(final)
    trace_json["wall_ms"] = wall_ms
    return {"metrics": metrics, "trace": trace_json, "state": state, "r": r, "wall_ms": wall_ms}


def run(config: RunConfig) -> dict:
    """Full pipeline. Writes edges.tsv, metrics.json and trace.json when ``config.out`` is set.

    metrics.json holds only deterministic quantities; wall-clock times live in trace.json.
    """
    X = load_data(config)
    cost = resolve_cost(X, config.cost)
    edge_set = build_edge_set(X, cost, config.topology)
    result = solve_and_report(edge_set, config.solver)
    if config.out:
        os.makedirs(config.out, exist_ok=True)
        write_edge_tsv(os.path.join(config.out, "edges.tsv"), edge_set, result["state"].w, result["r"])
        atomic_write(os.path.join(config.out, "metrics.json"), _json(result["metrics"]))
        atomic_write(os.path.join(config.out, "trace.json"), _json(result["trace"]))
    return result


def _sweep_k_row(args) -> dict:
    H, K, solver = args
    row = {"K": K, "m_input": None, "m_active": None, "log_omega": None,
           "epochs": None, "wall_ms": None, "status": None}
    try:
        es = knn_edge_set(H, K)
        row["m_input"] = es.m
        res = solve_and_report(es, solver)
    except DisconnectedGraphError as exc:
        row["status"] = "disconnected"
        row["components"] = len(exc.components)
        return row
    m = res["metrics"]
    row.update(m_active=m["m_active"], log_omega=m["log_omega"], epochs=m["epochs"],
               wall_ms=res["wall_ms"], status=m["status"])
    return row


def _map(fn, items, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep_k(config: RunConfig, k_values: Sequence[int], workers: int = 1) -> list[dict]:
    """One KNN run per K, all on the same cost table."""
    X = load_data(config)
    if X is None:
        raise InputError("sweep-k needs data: pass an input CSV or --demo")
    cost = resolve_cost(X, config.cost)
    H = cost_table(X, cost)
    rows = _map(_sweep_k_row, [(H, int(K), config.solver) for K in k_values], workers)
    if config.out:
        _write_table(config.out, "sweep_k", rows)
    return rows


def _sweep_rule_row(args) -> dict:
    es, K, rule, seed, solver = args
    cfg = replace(solver, rule=SelectionRule(rule, seed), callback=None)
    res = solve_and_report(es, cfg)
    m = res["metrics"]
    return {
        "K": K, "rule": rule, "seed": seed, "m_input": es.m, "epochs": m["epochs"],
        "wall_ms": res["wall_ms"], "F": res["trace"]["epochs"][-1]["F"], "status": m["status"],
    }


def sweep_rules(
    config: RunConfig,
    rules: Sequence[str] = ("cyclic", "random", "pgs"),
    seeds: Sequence[int] = (0,),
    k_values: Sequence[int] | None = None,
    workers: int = 1,
) -> list[dict]:
    """Solve one instance (per K) under each rule; random runs repeat over ``seeds``."""
    X = load_data(config)
    cost = resolve_cost(X, config.cost)
    topos = [config.topology] if k_values is None else [TopologySpec("knn", int(K)) for K in k_values]
    H = cost_table(X, cost) if X is not None and config.topology.kind != "file" else None
    jobs = []
    for topo in topos:
        es = build_edge_set(X, cost, topo, H)
        for rule in rules:
            for seed in (seeds if rule == "random" else seeds[:1]):
                jobs.append((es, topo.K, rule, int(seed), config.solver))
    rows = _map(_sweep_rule_row, jobs, workers)
    if config.out:
        _write_table(config.out, "sweep_rules", rows)
    return rows


def _write_table(out: str, stem: str, rows: list[dict]) -> None:
    os.makedirs(out, exist_ok=True)
    cols = list(dict.fromkeys(k for r in rows for k in r))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r[k]) for k in cols})
    atomic_write(os.path.join(out, f"{stem}.csv"), buf.getvalue())
    clean = [{k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.items()} for r in rows]
    atomic_write(os.path.join(out, f"{stem}.json"), _json(clean))
