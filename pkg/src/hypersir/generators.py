"""Synthetic hypergraph ensembles: scale-free, Erdos-Renyi, d-uniform.

All generators are deterministic given their spec and seed (single PCG64
stream per call).  The scale-free family samples hyperdegree and
hyperedge-size sequences from truncated discrete power laws and matches
node-edge memberships Chung-Lu style; the ER family fills the bipartite
node-edge membership matrix with iid coin flips; the d-uniform family
draws distinct uniformly random d-subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph

SCALE_FREE = "scale_free"
ERDOS_RENYI = "erdos_renyi"
D_UNIFORM = "d_uniform"


@dataclass
class GenSpec:
    """Parameters for one synthetic hypergraph draw.

    family selects the model; unused fields are ignored.  For the
    scale-free family, degree_range / size_range bound the power-law
    supports; a None upper bound means the structural cutoff
    ceil(sqrt(N*M)), which keeps Chung-Lu membership probabilities <= 1.
    """

    family: str
    num_nodes: int
    num_hyperedges: int = 0
    exponent: float = 2.0          # scale-free: p(d) ~ d^-exponent
    membership_p: float = 0.0      # ER: P(node in hyperedge)
    uniform_size: int = 3          # d-uniform hyperedge size
    degree_range: tuple[int, int | None] = (1, None)
    size_range: tuple[int, int | None] = (1, None)
    rng_seed: int = 0

    def __post_init__(self):
        if self.family not in (SCALE_FREE, ERDOS_RENYI, D_UNIFORM):
            raise ValueError(f"unknown family: {self.family!r}")
        if self.num_nodes < 1:
            raise ValueError("num_nodes must be >= 1")
        if self.family == SCALE_FREE and self.exponent <= 1.0:
            raise ValueError("power-law exponent must be > 1")
        if self.family == ERDOS_RENYI and not 0.0 <= self.membership_p <= 1.0:
            raise ValueError("membership_p must lie in [0, 1]")
        if self.family == D_UNIFORM and not 2 <= self.uniform_size <= self.num_nodes:
            raise ValueError("uniform_size must lie in [2, num_nodes]")


def generate(spec: GenSpec) -> Hypergraph:
    """Dispatch to the family-specific generator."""
    if spec.family == SCALE_FREE:
        return gen_sf_chunglu(spec)
    if spec.family == ERDOS_RENYI:
        return gen_er_bipartite(spec)
    return gen_d_uniform(spec)


def _power_law_sample(rng: np.random.Generator, exponent: float,
                      low: int, high: int, size: int) -> np.ndarray:
    """Sample iid from p(d) ~ d^-exponent on integers [low, high]."""
    support = np.arange(low, high + 1, dtype=np.float64)
    pmf = support ** (-exponent)
    pmf /= pmf.sum()
    return rng.choice(np.arange(low, high + 1), size=size, p=pmf)


def _structural_cutoff(n: int, m: int) -> int:
    return max(1, math.ceil(math.sqrt(n * m)))


def gen_sf_chunglu(spec: GenSpec) -> Hypergraph:
    """Scale-free hypergraph via bipartite Chung-Lu stub matching.

    Hyperdegree targets w_i and hyperedge-size targets s_a are drawn from
    truncated power laws; node i then joins hyperedge a with probability
    min(1, w_i * s_a / sum(w)).  Memberships are sampled per hyperedge
    with the sorted-weight skipping trick, so the cost is proportional to
    realized memberships rather than N*M.  Hyperedges left with fewer
    than 2 members are dropped (they carry no interaction).
    """
    n, m = spec.num_nodes, spec.num_hyperedges
    if m < 1:
        raise ValueError("scale-free family needs num_hyperedges >= 1")
    rng = np.random.default_rng(spec.rng_seed)
    cutoff = _structural_cutoff(n, m)
    d_lo, d_hi = spec.degree_range
    s_lo, s_hi = spec.size_range
    d_hi = cutoff if d_hi is None else d_hi
    s_hi = cutoff if s_hi is None else s_hi
    if not (1 <= d_lo <= d_hi) or not (1 <= s_lo <= s_hi):
        raise ValueError("degenerate power-law support")

    degree_target = _power_law_sample(rng, spec.exponent, d_lo, d_hi, n).astype(np.float64)
    size_target = _power_law_sample(rng, spec.exponent, s_lo, s_hi, m).astype(np.float64)
    total_weight = degree_target.sum()
    if size_target.sum() > n * m:
        raise ValueError(
            f"infeasible spec: total target size {size_target.sum():.0f} "
            f"exceeds {n} x {m} membership slots"
        )

    # Nodes sorted by decreasing weight; membership probabilities along the
    # sorted order are non-increasing, enabling geometric skips.
    order = np.argsort(-degree_target, kind="stable")
    w_sorted = degree_target[order]

    edges = []
    for s in size_target:
        members = []
        i = 0
        p = min(1.0, w_sorted[0] * s / total_weight)
        while i < n and p > 0.0:
            if p < 1.0:
                r = rng.random()
                i += int(math.log(r) / math.log(1.0 - p))
            if i >= n:
                break
            q = min(1.0, w_sorted[i] * s / total_weight)
            if rng.random() < q / p:
                members.append(int(order[i]))
            p = q
            i += 1
        if len(members) >= 2:
            edges.append(sorted(members))
    return Hypergraph(n, edges)


def gen_er_bipartite(spec: GenSpec) -> Hypergraph:
    """ER hypergraph: each (node, hyperedge) membership is iid Bernoulli(p).

    Sampled per hyperedge as Binomial(N, p) member count plus a uniform
    distinct-node draw, which is distribution-identical to the Bernoulli
    field.  Empty hyperedges are dropped.
    """
    n, m = spec.num_nodes, spec.num_hyperedges
    if m < 1:
        raise ValueError("ER family needs num_hyperedges >= 1")
    rng = np.random.default_rng(spec.rng_seed)
    p = spec.membership_p
    counts = rng.binomial(n, p, size=m)
    edges = []
    for c in counts:
        if c == 0:
            continue
        members = rng.choice(n, size=int(c), replace=False)
        edges.append(sorted(int(v) for v in members))
    return Hypergraph(n, edges)


def gen_d_uniform(spec: GenSpec) -> Hypergraph:
    """M distinct uniformly random d-subsets of the node set."""
    n, m, d = spec.num_nodes, spec.num_hyperedges, spec.uniform_size
    if m < 1:
        raise ValueError("d-uniform family needs num_hyperedges >= 1")
    if m > math.comb(n, d):
        raise ValueError(f"cannot draw {m} distinct size-{d} subsets of {n} nodes")
    rng = np.random.default_rng(spec.rng_seed)
    seen: set[tuple[int, ...]] = set()
    edges = []
    while len(edges) < m:
        cand = tuple(sorted(int(v) for v in rng.choice(n, size=d, replace=False)))
        if cand in seen:
            continue
        seen.add(cand)
        edges.append(cand)
    return Hypergraph(n, edges)
