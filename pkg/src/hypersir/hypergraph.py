"""Hypergraph structure, incidence algebra, and derived sparse views.

A hypergraph is a set of N nodes plus an ordered multiset of hyperedges
(node subsets).  Everything downstream -- contagion kernels, message
passing, influence scores -- works off cached derived structure built
here: the weighted adjacency matrix (shared-hyperedge counts), its binary
skeleton, the triangle (2-simplex) tensor, and the directed-link index.

Duplicate hyperedges are allowed and meaningful: they raise the entries
of the weighted adjacency and of the triangle tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

DEFAULT_TRIPLE_EDGE_CAP = 25


@dataclass
class Hypergraph:
    """Immutable node set plus hyperedge multiset.

    Node ids are dense integers in [0, num_nodes).  Hyperedges are stored
    as sorted tuples; the multiset order is preserved as given.
    """

    num_nodes: int
    hyperedges: tuple[tuple[int, ...], ...]

    def __init__(self, num_nodes: int, hyperedges: Iterable[Sequence[int]] = ()):
        if num_nodes < 0:
            raise ValueError("num_nodes must be nonnegative")
        self.num_nodes = int(num_nodes)
        normalized = []
        for pos, edge in enumerate(hyperedges):
            members = tuple(sorted(int(v) for v in edge))
            if not members:
                raise ValueError(f"hyperedge {pos} is empty")
            if members[0] < 0 or members[-1] >= self.num_nodes:
                raise ValueError(f"hyperedge {pos} has node id outside [0, {self.num_nodes})")
            if len(set(members)) != len(members):
                raise ValueError(f"hyperedge {pos} contains a duplicate node id")
            normalized.append(members)
        self.hyperedges = tuple(normalized)

    @property
    def num_hyperedges(self) -> int:
        return len(self.hyperedges)

    def incidence(self) -> sp.csr_matrix:
        """N x M incidence matrix (1 where node belongs to hyperedge)."""
        rows, cols = [], []
        for alpha, edge in enumerate(self.hyperedges):
            rows.extend(edge)
            cols.extend([alpha] * len(edge))
        data = np.ones(len(rows), dtype=np.int64)
        return sp.csr_matrix(
            (data, (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=(self.num_nodes, self.num_hyperedges),
        )


@dataclass
class AdjacencyView:
    """Cached adjacency structure of a hypergraph.

    weighted[i, j] counts hyperedges shared by i and j (zero diagonal);
    binary is its 0/1 skeleton.  Degree vectors: node_degree counts
    binary neighbors, hyperdegree counts incident hyperedges,
    weighted_degree sums shared-hyperedge counts over neighbors.
    """

    num_nodes: int
    weighted: sp.csr_matrix
    binary: sp.csr_matrix
    node_degree: np.ndarray
    hyperdegree: np.ndarray
    edge_sizes: np.ndarray
    weighted_degree: np.ndarray


def build_adjacency(h: Hypergraph) -> AdjacencyView:
    """Build the weighted/binary adjacency view of ``h``.

    The weighted matrix equals inc @ inc.T with the diagonal (the
    hyperdegrees) removed, i.e. entry (i, j) is the number of hyperedges
    containing both i and j.
    """
    inc = h.incidence()
    gram = (inc @ inc.T).tocsr()
    gram.setdiag(0)
    gram.eliminate_zeros()
    gram.sort_indices()
    weighted = gram.astype(np.int64)
    binary = sp.csr_matrix(
        (np.ones_like(weighted.data), weighted.indices, weighted.indptr),
        shape=weighted.shape,
    )
    node_degree = np.asarray(binary.sum(axis=1)).ravel().astype(np.int64)
    hyperdegree = np.asarray(inc.sum(axis=1)).ravel().astype(np.int64)
    edge_sizes = np.asarray(inc.sum(axis=0)).ravel().astype(np.int64)
    weighted_degree = np.asarray(weighted.sum(axis=1)).ravel().astype(np.int64)
    return AdjacencyView(
        num_nodes=h.num_nodes,
        weighted=weighted,
        binary=binary,
        node_degree=node_degree,
        hyperdegree=hyperdegree,
        edge_sizes=edge_sizes,
        weighted_degree=weighted_degree,
    )


@dataclass
class TwoSimplexSet:
    """All 2-simplices (node triples) of a hypergraph with multiplicities.

    A triple (i, k, l), i < k < l, is present iff at least one hyperedge
    contains all three nodes; its weight counts such hyperedges.  The
    ``centers/other_a/other_b/weight`` arrays hold the same triples
    expanded once per member node, grouped by center node, for fast
    per-node accumulation.
    """

    triples: np.ndarray          # (T, 3) int64, rows sorted
    weights: np.ndarray          # (T,) int64
    centers: np.ndarray          # (3T,) expanded center node per row
    other_a: np.ndarray          # (3T,) first remaining member
    other_b: np.ndarray          # (3T,) second remaining member
    center_weight: np.ndarray    # (3T,) triple weight per expanded row
    center_ptr: np.ndarray       # (N+1,) CSR pointer into expanded rows by center
    node_triple_weight: np.ndarray  # (N,) sum of weights of triples containing the node
    skipped_hyperedges: int
    size_cap: int

    @property
    def num_triples(self) -> int:
        return len(self.weights)


def enumerate_two_simplices(
    h: Hypergraph,
    size_cap: int = DEFAULT_TRIPLE_EDGE_CAP,
    mode: str = "containment",
) -> TwoSimplexSet:
    """Enumerate weighted 2-simplices of ``h``.

    mode="containment" (default): every 3-subset of every hyperedge is a
    triple.  mode="size3only": only hyperedges of exactly size 3 count.
    Hyperedges larger than ``size_cap`` are skipped (C(s,3) blow-up) and
    tallied in ``skipped_hyperedges``; they still contribute pairwise
    adjacency elsewhere.
    """
    if mode not in ("containment", "size3only"):
        raise ValueError(f"unknown two-simplex mode: {mode!r}")
    counts: dict[tuple[int, int, int], int] = {}
    skipped = 0
    for edge in h.hyperedges:
        if len(edge) < 3:
            continue
        if mode == "size3only" and len(edge) != 3:
            continue
        if len(edge) > size_cap:
            skipped += 1
            continue
        for tri in combinations(edge, 3):
            counts[tri] = counts.get(tri, 0) + 1

    n = h.num_nodes
    if counts:
        triples = np.array(sorted(counts), dtype=np.int64)
        weights = np.array([counts[tuple(t)] for t in triples], dtype=np.int64)
    else:
        triples = np.empty((0, 3), dtype=np.int64)
        weights = np.empty(0, dtype=np.int64)

    # Expand each triple once per member, grouped by center node.
    centers = np.concatenate([triples[:, 0], triples[:, 1], triples[:, 2]])
    other_a = np.concatenate([triples[:, 1], triples[:, 0], triples[:, 0]])
    other_b = np.concatenate([triples[:, 2], triples[:, 2], triples[:, 1]])
    center_weight = np.concatenate([weights, weights, weights])
    order = np.argsort(centers, kind="stable")
    centers = centers[order]
    other_a = other_a[order]
    other_b = other_b[order]
    center_weight = center_weight[order]
    center_ptr = np.searchsorted(centers, np.arange(n + 1))

    node_triple_weight = np.zeros(n, dtype=np.int64)
    np.add.at(node_triple_weight, centers, center_weight)

    return TwoSimplexSet(
        triples=triples,
        weights=weights,
        centers=centers,
        other_a=other_a,
        other_b=other_b,
        center_weight=center_weight,
        center_ptr=center_ptr,
        node_triple_weight=node_triple_weight,
        skipped_hyperedges=skipped,
        size_cap=size_cap,
    )


@dataclass
class LinkIndex:
    """Enumeration of the directed binary links (i -> j), Atilde_ij = 1.

    Links are sorted by (src, dst), so ids of links out of a node are
    contiguous.  ``reverse[e]`` is the id of the opposite link, and
    ``weight[e]`` the shared-hyperedge count of the underlying pair.
    """

    num_nodes: int
    src: np.ndarray        # (2M_L,) source node per link
    dst: np.ndarray        # (2M_L,) destination node per link
    weight: np.ndarray     # (2M_L,) weighted-adjacency value of the pair
    reverse: np.ndarray    # (2M_L,) id of link (j -> i) for link (i -> j)
    out_ptr: np.ndarray    # (N+1,) CSR pointer: out-links of node i
    in_ptr: np.ndarray     # (N+1,) CSR pointer into in_ids
    in_ids: np.ndarray     # link ids grouped by destination, sorted by (dst, src)
    lookup: dict[tuple[int, int], int] = field(repr=False)

    @property
    def num_links(self) -> int:
        return len(self.src)

    def link_id(self, i: int, j: int) -> int:
        return self.lookup[(i, j)]

    def out_links(self, i: int) -> np.ndarray:
        return np.arange(self.out_ptr[i], self.out_ptr[i + 1])

    def in_links(self, i: int) -> np.ndarray:
        return self.in_ids[self.in_ptr[i]: self.in_ptr[i + 1]]


def build_link_index(view: AdjacencyView) -> LinkIndex:
    """Enumerate directed links from the binary adjacency of ``view``."""
    binary = view.binary
    n = view.num_nodes
    dst = binary.indices.astype(np.int64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(binary.indptr))
    weight = view.weighted.data.astype(np.int64)  # same sparsity pattern as binary
    lookup = {(int(i), int(j)): e for e, (i, j) in enumerate(zip(src, dst))}
    reverse = np.array([lookup[(int(j), int(i))] for i, j in zip(src, dst)], dtype=np.int64)
    out_ptr = binary.indptr.astype(np.int64)
    in_order = np.lexsort((src, dst))
    in_ids = in_order.astype(np.int64)
    in_ptr = np.searchsorted(dst[in_order], np.arange(n + 1)).astype(np.int64)
    return LinkIndex(
        num_nodes=n,
        src=src,
        dst=dst,
        weight=weight,
        reverse=reverse,
        out_ptr=out_ptr,
        in_ptr=in_ptr,
        in_ids=in_ids,
        lookup=lookup,
    )


def giant_component(h: Hypergraph) -> tuple[Hypergraph, np.ndarray]:
    """Extract the largest connected component under binary adjacency.

    Returns the component as a hypergraph with nodes relabeled
    contiguously (ascending old id), plus the old-to-new id map
    (-1 for dropped nodes).  Hyperedges are restricted to surviving
    nodes; ones that become empty are dropped.
    """
    if h.num_nodes == 0:
        return Hypergraph(0, ()), np.empty(0, dtype=np.int64)
    view = build_adjacency(h)
    n_comp, labels = connected_components(view.binary, directed=False)
    sizes = np.bincount(labels, minlength=n_comp)
    best = int(np.argmax(sizes))
    keep = labels == best
    remap = np.full(h.num_nodes, -1, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()), dtype=np.int64)
    new_edges = []
    for edge in h.hyperedges:
        members = [int(remap[v]) for v in edge if keep[v]]
        if members:
            new_edges.append(members)
    return Hypergraph(int(keep.sum()), new_edges), remap


def simplex_densities(
    h: Hypergraph,
    view: AdjacencyView | None = None,
    simplices: TwoSimplexSet | None = None,
    size_cap: int = DEFAULT_TRIPLE_EDGE_CAP,
) -> tuple[float, float]:
    """Mean weighted 1-simplex and 2-simplex counts per node.

    The 1-simplex density is the mean weighted degree (sum of shared-
    hyperedge counts over neighbors); the 2-simplex density is the mean
    total weight of triangles containing a node.
    """
    if h.num_nodes == 0:
        return 0.0, 0.0
    if view is None:
        view = build_adjacency(h)
    if simplices is None:
        simplices = enumerate_two_simplices(h, size_cap=size_cap)
    k1 = float(view.weighted_degree.mean())
    k2 = float(simplices.node_triple_weight.mean())
    return k1, k2
