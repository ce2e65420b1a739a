"""Independent reference implementations backing the test suite.

Everything here recomputes target quantities from first principles by
direct scans over the raw hyperedge list, without touching the package's
derived structures, so agreement between package and oracle is a real
check rather than a tautology.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb, sqrt

import numpy as np


def pairwise_adjacency(num_nodes, hyperedges):
    """Dense shared-hyperedge counts by looping over node pairs per edge."""
    a = np.zeros((num_nodes, num_nodes), dtype=np.int64)
    for e in hyperedges:
        for i, j in combinations(sorted(e), 2):
            a[i, j] += 1
            a[j, i] += 1
    return a


def triple_weights(hyperedges, size_cap=25):
    """Map sorted triple -> number of hyperedges containing it."""
    w = defaultdict(int)
    skipped = 0
    for e in hyperedges:
        if len(e) > size_cap:
            skipped += 1
            continue
        for t in combinations(sorted(e), 3):
            w[t] += 1
    return dict(w), skipped


def brute_triples_by_scan(num_nodes, hyperedges, size_cap=25):
    """Triple weights via the cubic all-triples scan (N <= 30)."""
    w = {}
    kept = [set(e) for e in hyperedges if len(e) <= size_cap]
    for t in combinations(range(num_nodes), 3):
        c = sum(1 for e in kept if set(t) <= e)
        if c:
            w[t] = c
    return w


def exact_sigma_distribution(num_nodes, hyperedges, seeds, beta1, beta2,
                             gamma=1, size_cap=25):
    """Exhaustive enumeration of every stochastic trajectory.

    Returns {final_size: probability}.  Infection pressures are computed
    per susceptible node by scanning hyperedges: an edge containing the
    node and m infected members contributes m to the pairwise exponent
    and C(m, 2) to the triangle exponent (edges above size_cap skip the
    triangle channel).  Branches over every infect/skip outcome subset,
    so keep num_nodes tiny.
    """
    start_status = [0] * num_nodes
    for s in seeds:
        start_status[s] = 1
    dist = {(tuple(start_status), (0,) * num_nodes): 1.0}
    out = defaultdict(float)
    edge_sets = [frozenset(e) for e in hyperedges]
    while dist:
        nxt = defaultdict(float)
        for (status, age), pr in dist.items():
            if 1 not in status:
                out[status.count(2)] += pr
                continue
            sus = [i for i in range(num_nodes) if status[i] == 0]
            certain = []
            coin = []
            for i in sus:
                wsum = 0
                tsum = 0
                for e in edge_sets:
                    if i not in e:
                        continue
                    m = sum(1 for j in e if status[j] == 1)
                    wsum += m
                    if len(e) <= size_cap:
                        tsum += comb(m, 2)
                p = 1.0 - (1.0 - beta1) ** wsum * (1.0 - beta2) ** tsum
                if p >= 1.0:
                    certain.append(i)
                elif p > 0.0:
                    coin.append((i, p))
            for bits in product((0, 1), repeat=len(coin)):
                bp = pr
                newly = list(certain)
                for (i, p), b in zip(coin, bits):
                    if b:
                        bp *= p
                        newly.append(i)
                    else:
                        bp *= 1.0 - p
                if bp == 0.0:
                    continue
                ns = list(status)
                na = list(age)
                for i in range(num_nodes):
                    if status[i] == 1:
                        if age[i] >= gamma - 1:
                            ns[i] = 2
                            na[i] = 0
                        else:
                            na[i] = age[i] + 1
                for i in newly:
                    ns[i] = 1
                    na[i] = 0
                nxt[(tuple(ns), tuple(na))] += bp
        dist = nxt
    return dict(out)


def exact_final_marginals(num_nodes, hyperedges, seeds, beta1, beta2,
                          gamma=1, size_cap=25):
    """Per-node probability of ending recovered, by full enumeration.

    Same trajectory tree as exact_sigma_distribution, but the terminal
    accumulator is a vector: out[i] = P(node i was ever infected).
    """
    start_status = [0] * num_nodes
    for s in seeds:
        start_status[s] = 1
    dist = {(tuple(start_status), (0,) * num_nodes): 1.0}
    out = np.zeros(num_nodes)
    edge_sets = [frozenset(e) for e in hyperedges]
    while dist:
        nxt = defaultdict(float)
        for (status, age), pr in dist.items():
            if 1 not in status:
                for i in range(num_nodes):
                    if status[i] == 2:
                        out[i] += pr
                continue
            sus = [i for i in range(num_nodes) if status[i] == 0]
            certain = []
            coin = []
            for i in sus:
                wsum = 0
                tsum = 0
                for e in edge_sets:
                    if i not in e:
                        continue
                    m = sum(1 for j in e if status[j] == 1)
                    wsum += m
                    if len(e) <= size_cap:
                        tsum += comb(m, 2)
                p = 1.0 - (1.0 - beta1) ** wsum * (1.0 - beta2) ** tsum
                if p >= 1.0:
                    certain.append(i)
                elif p > 0.0:
                    coin.append((i, p))
            for bits in product((0, 1), repeat=len(coin)):
                bp = pr
                newly = list(certain)
                for (i, p), b in zip(coin, bits):
                    if b:
                        bp *= p
                        newly.append(i)
                    else:
                        bp *= 1.0 - p
                if bp == 0.0:
                    continue
                ns = list(status)
                na = list(age)
                for i in range(num_nodes):
                    if status[i] == 1:
                        if age[i] >= gamma - 1:
                            ns[i] = 2
                            na[i] = 0
                        else:
                            na[i] = age[i] + 1
                for i in newly:
                    ns[i] = 1
                    na[i] = 0
                nxt[(tuple(ns), tuple(na))] += bp
        dist = nxt
    return out


def multinomial_violations(samples, probs, z=3.0):
    """Compare sampled counts to exact bin probabilities.

    Returns a list of human-readable violations: any sample value with
    zero probability, or any bin whose count deviates from expectation
    by more than z binomial standard deviations (plus 1 for continuity).
    """
    n = len(samples)
    counts = Counter(int(s) for s in samples)
    bad = []
    for s in counts:
        if s not in probs or probs[s] <= 0.0:
            bad.append(f"impossible outcome sigma={s} observed {counts[s]} times")
    for s, p in probs.items():
        obs = counts.get(s, 0)
        tol = z * sqrt(n * p * (1.0 - p)) + 1.0
        if abs(obs - n * p) > tol:
            bad.append(
                f"sigma={s}: observed {obs}, expected {n * p:.1f} +- {tol:.1f}"
            )
    return bad


def brute_collective_influence(num_nodes, hyperedges, beta1, gamma):
    """Triple-loop influence scores straight off the dense adjacency.

    Integer accumulation with a single final float multiply, mirroring
    the order of operations the package promises, so equality can be
    asserted bitwise.
    """
    a = pairwise_adjacency(num_nodes, hyperedges)
    deg = (a > 0).sum(axis=1)
    scores = np.zeros(num_nodes)
    for i in range(num_nodes):
        total = 0
        for j in range(num_nodes):
            if a[i, j] == 0:
                continue
            z = 0
            for k in range(num_nodes):
                if a[j, k] > 0:
                    z += a[i, k]
            total += int(a[i, j]) * z * (int(deg[j]) - 1)
        scores[i] = (beta1 * gamma) ** 2 * total
    return scores


def enumerate_small_hypergraphs(num_nodes=4, max_edges=3):
    """Isomorphism classes of hypergraphs on num_nodes labeled nodes.

    Edge multisets of 1..max_edges hyperedges with sizes in
    [2, num_nodes], deduplicated under node relabeling; each class is
    returned as its lexicographically smallest representative.  Size-1
    hyperedges are omitted: they touch neither adjacency channel, so
    every dynamics trajectory is identical with or without them.
    """
    universe = list(range(num_nodes))
    pool = []
    for size in range(2, num_nodes + 1):
        pool.extend(combinations(universe, size))
    perms = list(permutations(universe))
    seen = set()
    reps = []
    for m in range(1, max_edges + 1):
        for combo in combinations_with_replacement(range(len(pool)), m):
            edges = [pool[k] for k in combo]
            canon = min(
                tuple(sorted(tuple(sorted(p[v] for v in e)) for e in edges))
                for p in perms
            )
            if canon in seen:
                continue
            seen.add(canon)
            reps.append([list(e) for e in canon])
    return reps
