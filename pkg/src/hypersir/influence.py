"""Influence scoring and seed-set selection.

The score of a node is the weighted mass of non-backtracking
continuations through its immediate neighborhood: for each neighbor j,
the weighted link into j, times the weighted links from the node into
j's neighborhood, times j's remaining binary degree.  It approximates
how much the node inflates the leading eigenvalue of the link operator,
so removing high scorers deflates the epidemic threshold fastest.
Selection strategies consume the scores (or plain degree variants) and
spread seeds apart to avoid overlapping infection zones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypergraph import AdjacencyView

__all__ = [
    "CiScores",
    "SeedSet",
    "collective_influence",
    "ranked_nodes",
    "cia_select",
    "baseline_select",
    "top_overlap_probability",
    "BASELINE_METHODS",
]

BASELINE_METHODS = ("degree", "hyperdegree", "ci_naive", "hadp", "hsdp", "random")


@dataclass
class CiScores:
    """Per-node collective-influence scores with the scale they were built at."""

    scores: np.ndarray
    beta1: float
    gamma: float
    radius: int = 1

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.scores.ndim != 1:
            raise ValueError("scores must be one-dimensional")
        if self.scores.size and self.scores.min() < 0:
            raise ValueError("scores must be nonnegative")

    def __len__(self) -> int:
        return len(self.scores)

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("# schema=node_id,score\n")
            for i, s in enumerate(self.scores):
                fh.write(f"{i},{s:.17g}\n")


@dataclass
class SeedSet:
    """Ordered seed selection with the strategy that produced it."""

    nodes: tuple[int, ...]
    method: str

    def __post_init__(self):
        self.nodes = tuple(int(v) for v in self.nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("seed set contains duplicates")

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("# schema=rank,node_id\n")
            for r, v in enumerate(self.nodes):
                fh.write(f"{r},{v}\n")


def collective_influence(view: AdjacencyView, beta1: float, gamma: float) -> CiScores:
    """Neighborhood influence score per node.

    score(i) = (beta1*gamma)^2 * sum over neighbors j of
    A_ij * (sum over k in N(j) of A_ik) * (d_N(j) - 1).
    The accumulation is exact integer arithmetic; the infection-rate
    prefactor multiplies once at the end, so rankings are independent of
    beta1 and gamma.
    """
    if beta1 < 0:
        raise ValueError("beta1 must be nonnegative")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    weighted = view.weighted
    # z[i, j] = weighted links from i into the neighborhood of j;
    # restricting to the pattern of A keeps only actual neighbors j.
    z = weighted @ view.binary
    per_pair = weighted.multiply(z)
    base = per_pair @ (view.node_degree - 1)
    scale = (beta1 * gamma) ** 2
    return CiScores(scores=scale * base.astype(np.float64), beta1=beta1, gamma=gamma)


def _order(view: AdjacencyView, primary: np.ndarray) -> np.ndarray:
    """Total selection order: primary desc, weighted degree desc, id asc."""
    n = view.num_nodes
    return np.lexsort((np.arange(n), -view.weighted_degree, -np.asarray(primary)))


def ranked_nodes(view: AdjacencyView, scores: CiScores | np.ndarray) -> np.ndarray:
    """Node ids sorted by score under the documented tie-breaking order."""
    arr = scores.scores if isinstance(scores, CiScores) else np.asarray(scores)
    if len(arr) != view.num_nodes:
        raise ValueError("score vector length does not match the view")
    return _order(view, arr)


def _check_k(view: AdjacencyView, k: int) -> None:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > view.num_nodes:
        raise ValueError(f"k={k} exceeds the {view.num_nodes} available nodes")


def cia_select(view: AdjacencyView, scores: CiScores, k: int) -> SeedSet:
    """Adaptive top-score selection that skips neighbors of chosen seeds.

    Walks the ranked candidate list once: the current best is taken
    unless it neighbors an already-chosen seed, in which case it is set
    aside.  If the walk ends short of k seeds, the set-aside candidates
    are admitted in their original rank order.
    """
    _check_k(view, k)
    order = ranked_nodes(view, scores)
    binary = view.binary
    blocked = np.zeros(view.num_nodes, dtype=bool)
    chosen: list[int] = []
    skipped: list[int] = []
    for v in order:
        if len(chosen) == k:
            break
        v = int(v)
        if blocked[v]:
            skipped.append(v)
            continue
        chosen.append(v)
        blocked[binary.indices[binary.indptr[v]: binary.indptr[v + 1]]] = True
    for v in skipped:
        if len(chosen) == k:
            break
        chosen.append(v)
    return SeedSet(nodes=tuple(chosen), method="cia")


def _adaptive_select(view: AdjacencyView, k: int, method: str) -> list[int]:
    """Greedy argmax on a degree vector that shrinks around each pick."""
    binary = view.binary
    d = view.node_degree.astype(np.int64).copy()
    available = np.ones(view.num_nodes, dtype=bool)
    chosen: list[int] = []
    for _ in range(k):
        order = _order(view, d)
        pick = next(int(v) for v in order if available[v])
        chosen.append(pick)
        available[pick] = False
        nbrs = binary.indices[binary.indptr[pick]: binary.indptr[pick + 1]]
        if method == "hsdp":
            d[nbrs] -= 1
        else:  # hadp: shared neighborhood plus the seed itself, floored at 0
            row = np.zeros(view.num_nodes, dtype=np.int64)
            row[nbrs] = 1
            shared = binary[nbrs] @ row
            d[nbrs] = np.maximum(0, d[nbrs] - (shared + 1))
    return chosen


def baseline_select(view: AdjacencyView, k: int, method: str, rng_seed: int = 0) -> SeedSet:
    """Reference selection strategies.

    degree / hyperdegree: static top-k by binary degree / hyperedge
    membership count.  ci_naive: top-k by (d_H(i)-1) * sum of
    (d_H(j)-1) over neighbors j.  hadp / hsdp: greedy argmax on a
    degree vector penalized around each pick (shared-neighborhood
    penalty, or a flat -1).  random: uniform without replacement,
    deterministic for a given rng_seed.
    """
    if method not in BASELINE_METHODS:
        raise ValueError(f"unknown selection method: {method!r}")
    _check_k(view, k)
    if method == "degree":
        nodes = _order(view, view.node_degree)[:k]
    elif method == "hyperdegree":
        nodes = _order(view, view.hyperdegree)[:k]
    elif method == "ci_naive":
        excess = view.hyperdegree - 1
        score = excess * (view.binary @ excess)
        nodes = _order(view, score)[:k]
    elif method in ("hadp", "hsdp"):
        nodes = _adaptive_select(view, k, method)
    else:
        rng = np.random.default_rng(rng_seed)
        nodes = rng.choice(view.num_nodes, size=k, replace=False)
    return SeedSet(nodes=tuple(int(v) for v in nodes), method=method)


def top_overlap_probability(
    view: AdjacencyView, scores: CiScores | np.ndarray, n_percent: float
) -> float:
    """Chance that a random neighbor of a random top-n% node is also top-n%.

    The top set is the first max(1, round(n% of N)) nodes of the ranked
    order.  Top nodes without neighbors contribute zero overlap.
    """
    if not 0 < n_percent <= 100:
        raise ValueError("n_percent must lie in (0, 100]")
    order = ranked_nodes(view, scores)
    m = max(1, int(round(n_percent / 100.0 * view.num_nodes)))
    top = order[:m]
    in_top = np.zeros(view.num_nodes, dtype=bool)
    in_top[top] = True
    binary = view.binary
    total = 0.0
    for v in top:
        nbrs = binary.indices[binary.indptr[v]: binary.indptr[v + 1]]
        if len(nbrs):
            total += in_top[nbrs].mean()
    return total / m
