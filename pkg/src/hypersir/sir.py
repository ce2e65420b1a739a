"""Discrete-time SIR contagion with pairwise and triangle channels.

Synchronous Monte-Carlo process on a hypergraph's derived structures: a
susceptible node i escapes infection in one step with probability

    (1 - beta1)^(sum of A_ij over infected j)
      * (1 - beta2)^(sum of B_ikl over triangles with k, l both infected)

and otherwise becomes infectious.  Infectious nodes recover exactly
``gamma`` steps after infection.  Two interchangeable kernels back the
public API: a pure-Python one that is fastest on very small graphs and a
vectorized one for everything else; both realize the same process.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import AdjacencyView, TwoSimplexSet

S, I, R = 0, 1, 2


@dataclass
class EpidemicParams:
    """Channel infectivities, recovery period, step cap, and rng seed.

    gamma is the deterministic infectious period in steps; the rescaled
    recovery rate used elsewhere is mu = 1/gamma.  t_max of None means
    10 * num_nodes, applied when a run starts.
    """

    beta1: float
    beta2: float = 0.0
    gamma: int = 1
    t_max: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.beta1 <= 1.0:
            raise ValueError("beta1 must lie in [0, 1]")
        if not 0.0 <= self.beta2 <= 1.0:
            raise ValueError("beta2 must lie in [0, 1]")
        if self.gamma < 1 or int(self.gamma) != self.gamma:
            raise ValueError("gamma must be an integer >= 1")


@dataclass
class EpidemicState:
    """Per-node status (0=S, 1=I, 2=R), infection age for I nodes, clock."""

    status: np.ndarray
    age: np.ndarray
    t: int = 0

    @property
    def num_infected(self) -> int:
        return int(np.count_nonzero(self.status == I))

    @property
    def num_recovered(self) -> int:
        return int(np.count_nonzero(self.status == R))


def initial_state(num_nodes: int, seeds) -> EpidemicState:
    """All-susceptible state with the seed nodes infectious at age 0."""
    status = np.zeros(num_nodes, dtype=np.int8)
    age = np.zeros(num_nodes, dtype=np.int64)
    seeds = np.asarray(list(seeds), dtype=np.int64)
    if seeds.size:
        if seeds.min() < 0 or seeds.max() >= num_nodes:
            raise ValueError("seed id out of range")
        status[seeds] = I
    return EpidemicState(status=status, age=age, t=0)


@dataclass
class OutbreakStats:
    """Final-size samples over independent runs, plus absorption flags."""

    runs: int
    sigma_samples: np.ndarray
    absorbed: np.ndarray
    gcc_size: int

    @property
    def sigma_mean(self) -> float:
        return float(self.sigma_samples.mean()) if self.runs else 0.0

    @property
    def fraction_of_gcc(self) -> float:
        return self.sigma_mean / self.gcc_size if self.gcc_size else 0.0

    @property
    def non_absorbed(self) -> int:
        return int(self.runs - np.count_nonzero(self.absorbed))

    def summary(self) -> dict:
        return {
            "runs": self.runs,
            "sigma_mean": self.sigma_mean,
            "sigma_std": float(self.sigma_samples.std()) if self.runs else 0.0,
            "fraction_of_gcc": self.fraction_of_gcc,
            "gcc_size": self.gcc_size,
            "non_absorbed": self.non_absorbed,
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("# schema=run_id,sigma,absorbed_flag\n")
            writer = csv.writer(fh)
            writer.writerow(["run_id", "sigma", "absorbed_flag"])
            for r in range(self.runs):
                writer.writerow([r, int(self.sigma_samples[r]), int(self.absorbed[r])])

    def write_summary_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.summary(), fh, indent=2)
            fh.write("\n")


# ---------------------------------------------------------------------------
# kernels

def _step_numpy(status, age, view, simplices, beta1, beta2, gamma, rng):
    """One synchronous update in place; returns number of infectious left."""
    infected = status == I
    n = status.shape[0]
    if infected.any():
        inf_f = infected.astype(np.float64)
        pair_exp = view.weighted @ inf_f if beta1 > 0.0 else None
        tri_exp = None
        if beta2 > 0.0 and simplices is not None and simplices.num_triples:
            both = infected[simplices.other_a] & infected[simplices.other_b]
            if both.any():
                tri_exp = np.bincount(
                    simplices.centers[both],
                    weights=simplices.center_weight[both].astype(np.float64),
                    minlength=n,
                )
        escape = np.ones(n, dtype=np.float64)
        if pair_exp is not None:
            escape *= (1.0 - beta1) ** pair_exp
        if tri_exp is not None:
            escape *= (1.0 - beta2) ** tri_exp
        susceptible = status == S
        draws = rng.random(n)
        newly = susceptible & (draws < 1.0 - escape)
    else:
        newly = None

    if infected.any():
        recover = infected & (age >= gamma - 1)
        status[recover] = R
        keep = infected & ~recover
        age[keep] += 1
    if newly is not None and newly.any():
        status[newly] = I
        age[newly] = 0
    return int(np.count_nonzero(status == I))


def _adjacency_lists(view: AdjacencyView):
    """Per-node (neighbor, weight) lists from the weighted adjacency."""
    mat = view.weighted
    out = []
    for i in range(view.num_nodes):
        lo, hi = mat.indptr[i], mat.indptr[i + 1]
        out.append(list(zip(mat.indices[lo:hi].tolist(), mat.data[lo:hi].tolist())))
    return out


def _triangle_lists(simplices: TwoSimplexSet | None, num_nodes: int):
    """Per-center (other_a, other_b, weight) lists."""
    out = [[] for _ in range(num_nodes)]
    if simplices is None:
        return out
    for c, a, b, w in zip(
        simplices.centers.tolist(),
        simplices.other_a.tolist(),
        simplices.other_b.tolist(),
        simplices.center_weight.tolist(),
    ):
        out[c].append((a, b, w))
    return out


def _run_once_python(nbrs, tris, seeds, beta1, beta2, gamma, t_max, rng):
    """One full run with Python-native state; fastest for tiny graphs."""
    n = len(nbrs)
    status = [S] * n
    age = [0] * n
    active = []
    for s in seeds:
        if status[s] != I:
            status[s] = I
            active.append(s)
    q1 = 1.0 - beta1
    q2 = 1.0 - beta2
    t = 0
    while active and t < t_max:
        newly = []
        for i in range(n):
            if status[i] != S:
                continue
            wsum = 0
            for j, w in nbrs[i]:
                if status[j] == I:
                    wsum += w
            tsum = 0
            if beta2 > 0.0:
                for a, b, w in tris[i]:
                    if status[a] == I and status[b] == I:
                        tsum += w
            if wsum == 0 and tsum == 0:
                continue
            if rng.random() < 1.0 - q1**wsum * q2**tsum:
                newly.append(i)
        surviving = []
        for i in active:
            if age[i] >= gamma - 1:
                status[i] = R
            else:
                age[i] += 1
                surviving.append(i)
        for i in newly:
            status[i] = I
            age[i] = 0
        active = surviving + newly
        t += 1
    sigma = sum(1 for v in status if v == R)
    return sigma, not active


# ---------------------------------------------------------------------------
# public API

def step(state: EpidemicState, view: AdjacencyView,
         simplices: TwoSimplexSet | None, params: EpidemicParams,
         rng: np.random.Generator) -> EpidemicState:
    """Advance one synchronous step; returns a new state at t + 1."""
    status = state.status.copy()
    age = state.age.copy()
    _step_numpy(status, age, view, simplices,
                params.beta1, params.beta2, params.gamma, rng)
    return EpidemicState(status=status, age=age, t=state.t + 1)


def run_sir(view: AdjacencyView, simplices: TwoSimplexSet | None, seeds,
            params: EpidemicParams, runs: int = 100, impl: str = "auto",
            gcc_size: int | None = None) -> OutbreakStats:
    """Independent Monte-Carlo runs from a fixed seed set.

    Each run r draws from its own stream, spawned from params.rng_seed
    with spawn key (r,), so results are reproducible and independent of
    execution order.  impl is "auto", "python", or "numpy"; the kernels
    realize the same process, differing only in rng consumption order.
    Runs still infectious at t_max are flagged non-absorbed.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if impl not in ("auto", "python", "numpy"):
        raise ValueError(f"unknown impl: {impl!r}")
    n = view.num_nodes
    seeds = [int(s) for s in seeds]
    if seeds and (min(seeds) < 0 or max(seeds) >= n):
        raise ValueError("seed id out of range")
    t_max = params.t_max if params.t_max is not None else 10 * n
    if impl == "auto":
        impl = "python" if n <= 64 else "numpy"

    children = np.random.SeedSequence(params.rng_seed).spawn(runs)
    sigma = np.zeros(runs, dtype=np.int64)
    absorbed = np.zeros(runs, dtype=bool)

    if impl == "python":
        nbrs = _adjacency_lists(view)
        tris = _triangle_lists(simplices, n)
        for r in range(runs):
            rng = np.random.Generator(np.random.PCG64(children[r]))
            sigma[r], absorbed[r] = _run_once_python(
                nbrs, tris, seeds, params.beta1, params.beta2,
                params.gamma, t_max, rng)
    else:
        for r in range(runs):
            rng = np.random.Generator(np.random.PCG64(children[r]))
            status = np.zeros(n, dtype=np.int8)
            age = np.zeros(n, dtype=np.int64)
            if seeds:
                status[seeds] = I
            left = len(set(seeds))
            t = 0
            while left and t < t_max:
                left = _step_numpy(status, age, view, simplices,
                                   params.beta1, params.beta2,
                                   params.gamma, rng)
                t += 1
            sigma[r] = int(np.count_nonzero(status == R))
            absorbed[r] = left == 0

    return OutbreakStats(runs=runs, sigma_samples=sigma, absorbed=absorbed,
                         gcc_size=gcc_size if gcc_size is not None else n)


def rescale_params(lambda1: float, lambda2: float, k1: float, k2: float,
                   gamma: int = 1) -> tuple[float, float]:
    """Convert rescaled infectivities to per-contact probabilities.

    beta1 = lambda1 * mu / k1 and beta2 = lambda2 * mu / k2 with
    mu = 1/gamma, where k1 is the mean weighted degree and k2 the mean
    per-node triangle weight.  Values above 1 are clamped with a warning.
    """
    mu = 1.0 / gamma
    if lambda1 > 0.0 and k1 <= 0.0:
        raise ValueError("k1 must be positive when lambda1 > 0")
    if lambda2 > 0.0 and k2 <= 0.0:
        raise ValueError("no triangles to carry lambda2 > 0")
    beta1 = lambda1 * mu / k1 if lambda1 > 0.0 else 0.0
    beta2 = lambda2 * mu / k2 if lambda2 > 0.0 else 0.0
    if beta1 > 1.0:
        warnings.warn(f"beta1 = {beta1:.4g} clamped to 1")
        beta1 = 1.0
    if beta2 > 1.0:
        warnings.warn(f"beta2 = {beta2:.4g} clamped to 1")
        beta2 = 1.0
    return beta1, beta2


def classify_bistable(stats: OutbreakStats,
                      threshold_fraction: float = 0.05) -> tuple[float, float]:
    """Fraction of runs ending below vs at-or-above the outbreak threshold.

    A run is absorbing when its final size is under threshold_fraction of
    the component size; the two returned fractions sum to 1.
    """
    if stats.runs < 1:
        raise ValueError("need at least one run")
    cut = threshold_fraction * stats.gcc_size
    absorbing = int(np.count_nonzero(stats.sigma_samples < cut))
    return absorbing / stats.runs, (stats.runs - absorbing) / stats.runs
