"""Experiment harness behind the ``hypersir`` console command.

Configuration is a single JSON document; every command-line flag maps
onto a config key of the same name and overrides the file value
(generator flags write into the nested ``generator`` block).  Outputs
are CSV with a schema comment line plus a header row, or JSON, and each
invocation drops a ``provenance.json`` next to its outputs.  When the
``HYPERSIR_OUTPUT_ROOT`` environment variable is set, relative output
directories are created under it.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .data_io import dataset_stats, load_benson, load_hyperedge_list, save_hyperedge_list, write_stats_table
from .generators import GenSpec, generate
from .hypergraph import (
    DEFAULT_TRIPLE_EDGE_CAP,
    AdjacencyView,
    Hypergraph,
    TwoSimplexSet,
    build_adjacency,
    enumerate_two_simplices,
    giant_component,
    simplex_densities,
)
from .influence import (
    BASELINE_METHODS,
    SeedSet,
    baseline_select,
    cia_select,
    collective_influence,
    top_overlap_probability,
)
from .message_passing import build_wnb, critical_beta1, leading_eigen
from .sir import EpidemicParams, rescale_params, run_sir

__all__ = [
    "ExperimentConfig",
    "KNOWN_METHODS",
    "fit_loglog_slope",
    "load_config",
    "main",
]

KNOWN_METHODS = ("cia",) + BASELINE_METHODS

OUTPUT_ROOT_ENV = "HYPERSIR_OUTPUT_ROOT"

RESULT_COLUMNS = (
    "cell", "method", "lambda1", "lambda2", "beta1", "beta2", "gamma",
    "k", "runs", "sigma_mean", "sigma_std", "fraction_of_gcc",
    "non_absorbed", "error",
)


@dataclass
class ExperimentConfig:
    """One JSON document driving every subcommand; unused keys are inert."""

    generator: dict | None = None
    dataset: str | None = None
    nverts: str | None = None
    simplices: str | None = None
    lambda1: list[float] | None = None
    lambda2: list[float] | None = None
    beta1: list[float] | None = None
    beta2: list[float] | None = None
    gamma: int = 1
    k_absolute: list[int] | None = None
    k_percent: list[float] | None = None
    methods: list[str] = field(default_factory=lambda: ["cia", "random"])
    runs: int = 100
    rng_seed: int = 0
    output_dir: str = "."
    name: str | None = None
    use_gcc: bool = True
    size_cap: int = DEFAULT_TRIPLE_EDGE_CAP
    workers: int = 1
    sizes: list[int] = field(default_factory=lambda: [1000, 2000, 4000, 8000])
    mean_degree: float = 3.5
    bench_repeats: int = 3
    n_grid: list[float] = field(default_factory=lambda: [float(v) for v in range(1, 21)])
    dump_operator: bool = False

    def validate(self) -> None:
        for grid in ("lambda1", "lambda2", "beta1", "beta2", "sizes", "n_grid"):
            vals = getattr(self, grid)
            if vals is not None and len(vals) == 0:
                raise ValueError(f"{grid} grid must be non-empty")
        if self.lambda1 is not None and self.beta1 is not None:
            raise ValueError("give lambda1 or beta1, not both")
        if self.lambda2 is not None and self.beta2 is not None:
            raise ValueError("give lambda2 or beta2, not both")
        unknown = sorted(set(self.methods) - set(KNOWN_METHODS))
        if unknown:
            raise ValueError(f"unknown methods {unknown}; known: {list(KNOWN_METHODS)}")
        if not self.methods:
            raise ValueError("methods list must be non-empty")
        if self.k_absolute is not None and self.k_percent is not None:
            raise ValueError("give k_absolute or k_percent, not both")
        if self.k_absolute is not None:
            if not self.k_absolute or any(k < 0 for k in self.k_absolute):
                raise ValueError("k_absolute must be non-empty, nonnegative")
        if self.k_percent is not None:
            if not self.k_percent or any(not 0 < p <= 100 for p in self.k_percent):
                raise ValueError("k_percent values must lie in (0, 100]")
        for nn in self.n_grid:
            if not 0 < nn <= 100:
                raise ValueError("n_grid values must lie in (0, 100]")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.bench_repeats < 1:
            raise ValueError("bench_repeats must be >= 1")


CONFIG_KEYS = frozenset(f.name for f in dataclasses.fields(ExperimentConfig))

# CLI flag dest -> key inside the generator block
GEN_FLAG_KEYS = {
    "family": "family",
    "num_nodes": "num_nodes",
    "num_hyperedges": "num_hyperedges",
    "exponent": "exponent",
    "membership_p": "membership_p",
    "uniform_size": "uniform_size",
    "degree_range": "degree_range",
    "size_range": "size_range",
    "gen_seed": "rng_seed",
}


def load_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config file and apply explicit overrides on top."""
    data: dict = {}
    if path is not None:
        with open(path) as fh:
            data = json.load(fh)
        bad = sorted(set(data) - CONFIG_KEYS)
        if bad:
            raise ValueError(f"unknown config keys {bad}")
    if overrides:
        gen = dict(data.get("generator") or {})
        for flag, key in GEN_FLAG_KEYS.items():
            if overrides.get(flag) is not None:
                gen[key] = overrides[flag]
        if gen:
            data["generator"] = gen
        for key in CONFIG_KEYS - {"generator"}:
            if overrides.get(key) is not None:
                data[key] = overrides[key]
    cfg = ExperimentConfig(**data)
    cfg.validate()
    return cfg


def _genspec(block: dict) -> GenSpec:
    block = dict(block)
    for key in ("degree_range", "size_range"):
        if block.get(key) is not None:
            block[key] = tuple(block[key])
    return GenSpec(**block)


def _load_raw(cfg: ExperimentConfig) -> Hypergraph:
    given = [cfg.generator is not None, cfg.dataset is not None,
             cfg.nverts is not None or cfg.simplices is not None]
    if sum(given) != 1:
        raise ValueError("give exactly one input: generator, dataset, or nverts+simplices")
    if cfg.generator is not None:
        return generate(_genspec(cfg.generator))
    if cfg.dataset is not None:
        return load_hyperedge_list(cfg.dataset)
    if cfg.nverts is None or cfg.simplices is None:
        raise ValueError("the paired format needs both nverts and simplices paths")
    return load_benson(cfg.nverts, cfg.simplices)


@dataclass
class PreparedInput:
    full: Hypergraph
    work: Hypergraph
    view: AdjacencyView
    simplices: TwoSimplexSet
    k1: float
    k2: float


def prepare_input(cfg: ExperimentConfig) -> PreparedInput:
    h = _load_raw(cfg)
    work = giant_component(h)[0] if cfg.use_gcc else h
    view = build_adjacency(work)
    simplices = enumerate_two_simplices(work, size_cap=cfg.size_cap)
    k1, k2 = simplex_densities(work, view=view, simplices=simplices)
    return PreparedInput(h, work, view, simplices, k1, k2)


def resolve_seed_counts(cfg: ExperimentConfig, gcc_size: int) -> list[int]:
    """Seed schedule as absolute counts; percent rounds half-up, floor 1."""
    if cfg.k_absolute is not None:
        return [int(k) for k in cfg.k_absolute]
    percents = cfg.k_percent if cfg.k_percent is not None else [3.0]
    return [max(1, int(math.floor(p / 100.0 * gcc_size + 0.5))) for p in percents]


def _outdir(cfg: ExperimentConfig) -> Path:
    path = Path(cfg.output_dir)
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not path.is_absolute():
        path = Path(root) / path
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_provenance(outdir: Path, command: str, cfg: ExperimentConfig,
                      outputs: list[str], extra: dict | None = None) -> None:
    doc = {
        "command": command,
        "package_version": __version__,
        "config": dataclasses.asdict(cfg),
        "outputs": outputs,
    }
    if extra:
        doc.update(extra)
    with open(outdir / "provenance.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, tag: str, columns: tuple[str, ...], rows) -> None:
    def cell(v):
        if isinstance(v, float):
            return f"{v:.10g}"
        return "" if v is None else str(v)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# schema={tag}.v1\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(cell(row[c]) for c in columns) + "\n")


def select_seeds(view: AdjacencyView, method: str, k: int, rng_seed: int) -> SeedSet:
    """Pick k seeds; the adaptive method scores at unit rates since its
    ranking does not depend on them."""
    if method == "cia":
        return cia_select(view, collective_influence(view, 1.0, 1.0), k)
    return baseline_select(view, k, method, rng_seed=rng_seed)


def _cell_rates(mode1, v1, mode2, v2, k1, k2, gamma):
    if mode1 == "lambda1":
        b1 = rescale_params(v1, 0.0, k1, 1.0, gamma)[0]
    else:
        b1 = float(v1)
    if mode2 == "lambda2":
        b2 = rescale_params(0.0, v2, 1.0, k2, gamma)[1]
    else:
        b2 = float(v2)
    return b1, b2


def cmd_generate(cfg: ExperimentConfig) -> int:
    if cfg.generator is None:
        raise ValueError("generate needs a generator block")
    spec = _genspec(cfg.generator)
    h = generate(spec)
    outdir = _outdir(cfg)
    name = cfg.name or f"{spec.family}_n{spec.num_nodes}_m{spec.num_hyperedges}_s{spec.rng_seed}"
    path = outdir / f"{name}.txt"
    save_hyperedge_list(h, path)
    if h.num_hyperedges == 0:
        print("warning: generated hypergraph has no hyperedges", file=sys.stderr)
    _write_provenance(outdir, "generate", cfg, [path.name],
                      extra={"generator_spec": dataclasses.asdict(spec),
                             "num_nodes": h.num_nodes,
                             "num_hyperedges": h.num_hyperedges})
    print(f"wrote {path} ({h.num_nodes} nodes, {h.num_hyperedges} hyperedges)")
    return 0


def _experiment_cells(cfg: ExperimentConfig, inp: PreparedInput):
    if cfg.beta1 is not None:
        grid1 = [("beta1", float(v)) for v in cfg.beta1]
    elif cfg.lambda1 is not None:
        grid1 = [("lambda1", float(v)) for v in cfg.lambda1]
    else:
        raise ValueError("experiment needs a lambda1 or beta1 grid")
    if cfg.beta2 is not None:
        grid2 = [("beta2", float(v)) for v in cfg.beta2]
    elif cfg.lambda2 is not None:
        grid2 = [("lambda2", float(v)) for v in cfg.lambda2]
    else:
        grid2 = [("beta2", 0.0)]
    ks = resolve_seed_counts(cfg, inp.work.num_nodes)
    return list(itertools.product(grid1, grid2, ks))


def _run_cell(cfg: ExperimentConfig, inp: PreparedInput, cell_idx: int, cell):
    """All methods of one parameter cell; any failure aborts the cell."""
    (mode1, v1), (mode2, v2), k = cell
    ss = np.random.SeedSequence([cfg.rng_seed, cell_idx])
    sim_seed, sel_seed = (int(x) for x in ss.generate_state(2))
    shared = {
        "cell": cell_idx,
        "lambda1": v1 if mode1 == "lambda1" else None,
        "lambda2": v2 if mode2 == "lambda2" else None,
        "gamma": cfg.gamma,
        "k": k,
        "runs": cfg.runs,
    }
    rows, details = [], []
    method = "-"
    try:
        b1, b2 = _cell_rates(mode1, v1, mode2, v2, inp.k1, inp.k2, cfg.gamma)
        for method in cfg.methods:
            seeds = select_seeds(inp.view, method, k, sel_seed)
            stats = run_sir(
                inp.view, inp.simplices, list(seeds.nodes),
                EpidemicParams(beta1=b1, beta2=b2, gamma=cfg.gamma, rng_seed=sim_seed),
                runs=cfg.runs,
            )
            rows.append(dict(
                shared, method=method, beta1=b1, beta2=b2,
                sigma_mean=stats.sigma_mean,
                sigma_std=float(stats.sigma_samples.std()),
                fraction_of_gcc=stats.fraction_of_gcc,
                non_absorbed=stats.non_absorbed, error="",
            ))
            details.append((method, stats))
    except Exception as err:  # noqa: BLE001 - cell isolation is the contract
        rows.append(dict(
            shared, method=method, beta1=None, beta2=None, sigma_mean=None,
            sigma_std=None, fraction_of_gcc=None, non_absorbed=None,
            error=f"{type(err).__name__}: {err}",
        ))
        details = []
    return rows, details


def cmd_experiment(cfg: ExperimentConfig) -> int:
    inp = prepare_input(cfg)
    cells = _experiment_cells(cfg, inp)
    outdir = _outdir(cfg)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(
                lambda item: _run_cell(cfg, inp, item[0], item[1]),
                enumerate(cells)))
    else:
        results = [_run_cell(cfg, inp, i, c) for i, c in enumerate(cells)]

    rows = [row for cell_rows, _ in results for row in cell_rows]
    detail_dir = outdir / "details"
    detail_dir.mkdir(exist_ok=True)
    outputs = ["results.csv"]
    for cell_idx, (_, details) in enumerate(results):
        for method, stats in details:
            dpath = detail_dir / f"cell{cell_idx:03d}_{method}.csv"
            _write_csv(dpath, "run_detail", ("run", "sigma", "absorbed"), (
                {"run": r, "sigma": int(stats.sigma_samples[r]),
                 "absorbed": int(stats.absorbed[r])}
                for r in range(stats.runs)))
            outputs.append(f"details/{dpath.name}")
    _write_csv(outdir / "results.csv", "experiment_results", RESULT_COLUMNS, rows)
    errors = [r for r in rows if r["error"]]
    _write_provenance(outdir, "experiment", cfg, outputs,
                      extra={"cells": len(cells), "failed_cells": len(errors),
                             "gcc_size": inp.work.num_nodes,
                             "k1_mean": inp.k1, "k2_mean": inp.k2})
    print(f"wrote {outdir / 'results.csv'}: {len(cells)} cells, "
          f"{len(rows)} rows, {len(errors)} failed")
    return 1 if errors else 0


def fit_loglog_slope(sizes, seconds) -> tuple[float, float]:
    """Least-squares slope and intercept of log(seconds) vs log(size)."""
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.asarray(seconds, dtype=float))
    if len(xs) < 2:
        raise ValueError("need at least two sizes to fit a slope")
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def _bench_instance(cfg: ExperimentConfig, n: int) -> PreparedInput:
    m = n
    p = math.sqrt(cfg.mean_degree / (m * (n - 1)))
    seed = int(np.random.SeedSequence([cfg.rng_seed, n]).generate_state(1)[0])
    sub = dataclasses.replace(
        cfg,
        generator={"family": "erdos_renyi", "num_nodes": n,
                   "num_hyperedges": m, "membership_p": p, "rng_seed": seed},
        dataset=None, nverts=None, simplices=None,
    )
    return prepare_input(sub)


def cmd_bench(cfg: ExperimentConfig) -> int:
    rows = []
    times: dict[str, list[float]] = {m: [] for m in cfg.methods}
    for n in cfg.sizes:
        inp = _bench_instance(cfg, n)
        k = resolve_seed_counts(cfg, inp.work.num_nodes)[0]
        sel_seed = int(np.random.SeedSequence([cfg.rng_seed, n, 1]).generate_state(1)[0])
        for method in cfg.methods:
            select_seeds(inp.view, method, k, sel_seed)  # warmup
            best = math.inf
            for _ in range(cfg.bench_repeats):
                t0 = time.perf_counter()
                select_seeds(inp.view, method, k, sel_seed)
                best = min(best, time.perf_counter() - t0)
            rows.append({"method": method, "n": n, "k": k, "seconds": best})
            times[method].append(best)
    fit_rows = []
    for method in cfg.methods:
        slope, intercept = fit_loglog_slope(cfg.sizes, times[method])
        fit_rows.append({"method": method, "slope": slope, "intercept": intercept})
    outdir = _outdir(cfg)
    _write_csv(outdir / "bench.csv", "bench_times",
               ("method", "n", "k", "seconds"), rows)
    _write_csv(outdir / "bench_fit.csv", "bench_fit",
               ("method", "slope", "intercept"), fit_rows)
    _write_provenance(outdir, "bench", cfg, ["bench.csv", "bench_fit.csv"],
                      extra={"fits": {r["method"]: r["slope"] for r in fit_rows}})
    for r in fit_rows:
        print(f"{r['method']}: slope {r['slope']:.3f}")
    return 0


def cmd_spectrum(cfg: ExperimentConfig) -> int:
    inp = prepare_input(cfg)
    b1 = float(cfg.beta1[0]) if cfg.beta1 else 1.0
    op = build_wnb(inp.view, b1, cfg.gamma)
    res = leading_eigen(op)
    bstar = critical_beta1(inp.view, gamma=cfg.gamma)
    outdir = _outdir(cfg)
    doc = {
        "lambda_c": res.lambda_c,
        "beta1": b1,
        "gamma": cfg.gamma,
        "beta1_star": bstar if math.isfinite(bstar) else "inf",
        "iterations": res.iterations,
        "converged": res.converged,
        "residual": res.residual,
        "num_links": op.num_links,
        "num_nodes": inp.work.num_nodes,
    }
    with open(outdir / "spectrum.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    outputs = ["spectrum.json"]
    if cfg.dump_operator:
        op.dump_coo(outdir / "operator.txt")
        outputs.append("operator.txt")
    _write_provenance(outdir, "spectrum", cfg, outputs)
    print(f"lambda_c={res.lambda_c:.10g} beta1_star={doc['beta1_star']}")
    return 0


def cmd_fig3(cfg: ExperimentConfig) -> int:
    inp = prepare_input(cfg)
    b1 = float(cfg.beta1[0]) if cfg.beta1 else 1.0
    scores = collective_influence(inp.view, b1, cfg.gamma)
    rows = [{"n_percent": float(nn),
             "overlap_probability": top_overlap_probability(inp.view, scores, nn)}
            for nn in cfg.n_grid]
    outdir = _outdir(cfg)
    _write_csv(outdir / "fig3.csv", "overlap_sweep",
               ("n_percent", "overlap_probability"), rows)
    _write_provenance(outdir, "fig3", cfg, ["fig3.csv"],
                      extra={"gcc_size": inp.work.num_nodes})
    print(f"wrote {outdir / 'fig3.csv'} ({len(rows)} rows)")
    return 0


def cmd_stats(cfg: ExperimentConfig) -> int:
    h = _load_raw(cfg)
    if cfg.name:
        name = cfg.name
    elif cfg.dataset:
        name = Path(cfg.dataset).stem
    elif cfg.nverts:
        name = Path(cfg.nverts).stem
    else:
        name = "generated"
    retained = dataset_stats(h, size_cap=cfg.size_cap)
    deduped = dataset_stats(h, size_cap=cfg.size_cap, dedup=True)
    outdir = _outdir(cfg)
    write_stats_table({name: retained, f"{name}/dedup": deduped},
                      outdir / "stats.csv")
    with open(outdir / "stats.json", "w") as fh:
        json.dump({"name": name, "retained": retained.to_dict(),
                   "dedup": deduped.to_dict()}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_provenance(outdir, "stats", cfg, ["stats.csv", "stats.json"])
    print(f"{name}: n={retained.n} m={retained.m} gcc={retained.gcc_size} "
          f"mean_node_degree={retained.mean_node_degree:.4g}")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "experiment": cmd_experiment,
    "bench": cmd_bench,
    "spectrum": cmd_spectrum,
    "fig3": cmd_fig3,
    "stats": cmd_stats,
}


def _add_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its keys")
    p.add_argument("--dataset", help="hyperedge-list input path")
    p.add_argument("--nverts", help="size-sequence file of the paired format")
    p.add_argument("--simplices", help="flattened-member file of the paired format")
    p.add_argument("--lambda1", nargs="+", type=float)
    p.add_argument("--lambda2", nargs="+", type=float)
    p.add_argument("--beta1", nargs="+", type=float)
    p.add_argument("--beta2", nargs="+", type=float)
    p.add_argument("--gamma", type=int)
    p.add_argument("--k-absolute", nargs="+", type=int, dest="k_absolute")
    p.add_argument("--k-percent", nargs="+", type=float, dest="k_percent")
    p.add_argument("--methods", nargs="+")
    p.add_argument("--runs", type=int)
    p.add_argument("--rng-seed", type=int, dest="rng_seed")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--name")
    p.add_argument("--use-gcc", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--size-cap", type=int, dest="size_cap")
    p.add_argument("--workers", type=int)
    p.add_argument("--sizes", nargs="+", type=int)
    p.add_argument("--mean-degree", type=float, dest="mean_degree")
    p.add_argument("--bench-repeats", type=int, dest="bench_repeats")
    p.add_argument("--n-grid", nargs="+", type=float, dest="n_grid")
    p.add_argument("--dump-operator", action=argparse.BooleanOptionalAction,
                   default=None, dest="dump_operator")
    gen = p.add_argument_group("generator block overrides")
    gen.add_argument("--family", choices=("scale_free", "erdos_renyi", "d_uniform"))
    gen.add_argument("--num-nodes", type=int, dest="num_nodes")
    gen.add_argument("--num-hyperedges", type=int, dest="num_hyperedges")
    gen.add_argument("--exponent", type=float)
    gen.add_argument("--membership-p", type=float, dest="membership_p")
    gen.add_argument("--uniform-size", type=int, dest="uniform_size")
    gen.add_argument("--degree-range", nargs=2, type=int, dest="degree_range")
    gen.add_argument("--size-range", nargs=2, type=int, dest="size_range")
    gen.add_argument("--gen-seed", type=int, dest="gen_seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypersir",
        description="Contagion, thresholds, and seed selection on hypergraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, fn in COMMANDS.items():
        p = sub.add_parser(cmd)
        _add_flags(p)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "func", "config")}
    try:
        cfg = load_config(args.config, overrides)
        return args.func(cfg)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
