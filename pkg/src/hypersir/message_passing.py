"""Cavity (message-passing) dynamics and spectral threshold analysis.

Messages live on directed links of the binary adjacency: the value for
link (i -> j) is the state distribution of node i computed with node j
virtually removed, which suppresses backtracking infection and makes
the scheme exact on pairwise trees.  Linearizing the infected block of
the update around the all-susceptible point yields a weighted
non-backtracking operator; its spectral radius decides whether a
vanishing infection seed grows or dies, and downstream influence
scoring reuses the same operator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .hypergraph import (
    AdjacencyView,
    LinkIndex,
    TwoSimplexSet,
    build_link_index,
)
from .sir import EpidemicParams

__all__ = [
    "MessageState",
    "WnbOperator",
    "SpectralResult",
    "initial_messages",
    "mp_step",
    "mp_solve",
    "node_marginals",
    "build_wnb",
    "leading_eigen",
    "critical_beta1",
]


def _segment_prod(values: np.ndarray, ptr: np.ndarray) -> np.ndarray:
    """Per-segment product for CSR-style pointers; empty segments give 1."""
    out = np.ones(len(ptr) - 1, dtype=np.float64)
    nonempty = ptr[:-1] < ptr[1:]
    if values.size and nonempty.any():
        out[nonempty] = np.multiply.reduceat(values, ptr[:-1][nonempty])
    return out


def _segment_sum(values: np.ndarray, ptr: np.ndarray) -> np.ndarray:
    """Per-segment sum for CSR-style pointers; empty segments give 0."""
    out = np.zeros(len(ptr) - 1, dtype=values.dtype)
    nonempty = ptr[:-1] < ptr[1:]
    if values.size and nonempty.any():
        out[nonempty] = np.add.reduceat(values, ptr[:-1][nonempty])
    return out


@dataclass
class _CavityPlumb:
    """Precomputed index arrays tying triangles to the link index.

    ``tlink_a/tlink_b`` give, per expanded triple row (center i, others
    m and l), the ids of links (m -> i) and (l -> i) whose infection
    messages feed the triangle factor.  ``exc_ptr/exc_tid`` list, per
    equation link (i -> j), the expanded rows centered at i that involve
    j and must drop out of that link's cavity product.
    """

    tlink_a: np.ndarray
    tlink_b: np.ndarray
    exc_ptr: np.ndarray
    exc_tid: np.ndarray
    center_ptr: np.ndarray
    center_weight: np.ndarray


def _build_plumb(links: LinkIndex, simplices: TwoSimplexSet | None) -> _CavityPlumb:
    n = links.num_nodes
    num_links = links.num_links
    if simplices is None or len(simplices.centers) == 0:
        empty = np.empty(0, dtype=np.int64)
        return _CavityPlumb(
            tlink_a=empty,
            tlink_b=empty,
            exc_ptr=np.zeros(num_links + 1, dtype=np.int64),
            exc_tid=empty,
            center_ptr=np.zeros(n + 1, dtype=np.int64),
            center_weight=empty,
        )
    # Link ids are sorted by (src, dst), so (a -> c) resolves by search
    # over the combined key without per-row dict lookups.
    key = links.src * np.int64(n) + links.dst
    want_a = simplices.other_a * np.int64(n) + simplices.centers
    want_b = simplices.other_b * np.int64(n) + simplices.centers
    tlink_a = np.searchsorted(key, want_a)
    tlink_b = np.searchsorted(key, want_b)
    if not (np.array_equal(key[tlink_a], want_a) and np.array_equal(key[tlink_b], want_b)):
        raise ValueError("two-simplex set references pairs absent from the link index")
    rows = np.arange(len(simplices.centers), dtype=np.int64)
    # Triple (i, m, l) leaves the cavity products of links (i -> m) and
    # (i -> l); those are the reverses of the message-feeding links.
    exc_links = np.concatenate([links.reverse[tlink_a], links.reverse[tlink_b]])
    exc_rows = np.concatenate([rows, rows])
    order = np.argsort(exc_links, kind="stable")
    exc_tid = exc_rows[order]
    exc_ptr = np.searchsorted(exc_links[order], np.arange(num_links + 1)).astype(np.int64)
    return _CavityPlumb(
        tlink_a=tlink_a,
        tlink_b=tlink_b,
        exc_ptr=exc_ptr,
        exc_tid=exc_tid,
        center_ptr=simplices.center_ptr,
        center_weight=simplices.center_weight,
    )


@dataclass
class MessageState:
    """Per-link cavity state plus node marginals, advanced in lockstep.

    ``s_msg/i_msg/r_msg[e]`` for link e = (i -> j) hold the state
    distribution of i with j removed.  Node marginals integrate the full
    (non-cavity) escape product alongside the messages, so the final
    recovered marginal is available without a separate history pass.
    Solver metadata is filled in by :func:`mp_solve`.
    """

    links: LinkIndex
    s_msg: np.ndarray
    i_msg: np.ndarray
    r_msg: np.ndarray
    node_s: np.ndarray
    node_i: np.ndarray
    node_r: np.ndarray
    step: int = 0
    converged: bool | None = None
    iterations: int | None = None
    residual: float | None = None
    trace: list[float] | None = field(default=None, repr=False)
    _plumb: _CavityPlumb | None = field(default=None, repr=False, compare=False)

    @property
    def num_links(self) -> int:
        return len(self.s_msg)

    @property
    def num_nodes(self) -> int:
        return len(self.node_s)

    def validate(self, tol: float = 1e-9) -> None:
        for name, lo in (("s_msg", self.s_msg), ("i_msg", self.i_msg),
                         ("r_msg", self.r_msg), ("node_s", self.node_s),
                         ("node_i", self.node_i), ("node_r", self.node_r)):
            if lo.size and (lo.min() < -tol or lo.max() > 1.0 + tol):
                raise ValueError(f"{name} leaves [0, 1]")
        link_sum = self.s_msg + self.i_msg + self.r_msg
        node_sum = self.node_s + self.node_i + self.node_r
        if link_sum.size and np.abs(link_sum - 1.0).max() > tol:
            raise ValueError("link state sums deviate from 1")
        if node_sum.size and np.abs(node_sum - 1.0).max() > tol:
            raise ValueError("node state sums deviate from 1")

    def solver_summary(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
            "steps": self.step,
            "trace": list(self.trace) if self.trace is not None else None,
        }


def initial_messages(
    view: AdjacencyView,
    simplices: TwoSimplexSet | None,
    seeds,
    links: LinkIndex | None = None,
) -> MessageState:
    """Seeded start state: out-messages and marginals of seeds are infected."""
    if links is None:
        links = build_link_index(view)
    n = links.num_nodes
    num_links = links.num_links
    i_msg = np.zeros(num_links)
    node_i = np.zeros(n)
    for s in seeds:
        s = int(s)
        if not 0 <= s < n:
            raise ValueError(f"seed {s} out of range")
        i_msg[links.out_links(s)] = 1.0
        node_i[s] = 1.0
    state = MessageState(
        links=links,
        s_msg=1.0 - i_msg,
        i_msg=i_msg,
        r_msg=np.zeros(num_links),
        node_s=1.0 - node_i,
        node_i=node_i,
        node_r=np.zeros(n),
        _plumb=_build_plumb(links, simplices),
    )
    return state


def _escape_products(msgs: MessageState, params: EpidemicParams):
    """Cavity and full per-step no-infection probabilities.

    Returns (esc_cav, esc_full): esc_cav[e] is the probability that the
    source of link e escapes infection this step with the link's target
    removed; esc_full[i] is the same without any removal.  Exclusions
    are exact divisions with explicit zero bookkeeping, so factors equal
    to 0 (certain transmission) never poison the quotient.
    """
    links = msgs.links
    plumb = msgs._plumb
    if plumb is None:
        raise ValueError("message state lacks cavity plumbing; build it via initial_messages")
    src = links.src

    f = (1.0 - params.beta1 * msgs.i_msg) ** links.weight
    zf = f == 0.0
    f_in = np.where(zf, 1.0, f)[links.in_ids]
    z_in = zf[links.in_ids].astype(np.int64)
    prod_in = _segment_prod(f_in, links.in_ptr)
    zeros_in = _segment_sum(z_in, links.in_ptr)

    rev = links.reverse
    z_rev = zf[rev]
    cav_zeros = zeros_in[src] - z_rev
    pair_cav = np.where(
        cav_zeros > 0, 0.0, prod_in[src] / np.where(z_rev, 1.0, f[rev])
    )
    pair_full = np.where(zeros_in > 0, 0.0, prod_in)

    if params.beta2 > 0.0 and len(plumb.center_weight):
        g = (1.0 - params.beta2 * msgs.i_msg[plumb.tlink_a] * msgs.i_msg[plumb.tlink_b]) \
            ** plumb.center_weight
        zg = g == 0.0
        gnz = np.where(zg, 1.0, g)
        zgi = zg.astype(np.int64)
        cent_prod = _segment_prod(gnz, plumb.center_ptr)
        cent_zeros = _segment_sum(zgi, plumb.center_ptr)
        excl_prod = _segment_prod(gnz[plumb.exc_tid], plumb.exc_ptr)
        excl_zeros = _segment_sum(zgi[plumb.exc_tid], plumb.exc_ptr)
        tri_zeros = cent_zeros[src] - excl_zeros
        tri_cav = np.where(tri_zeros > 0, 0.0, cent_prod[src] / excl_prod)
        tri_full = np.where(cent_zeros > 0, 0.0, cent_prod)
        return pair_cav * tri_cav, pair_full * tri_full
    return pair_cav, pair_full


def mp_step(msgs: MessageState, params: EpidemicParams) -> MessageState:
    """One synchronous cavity update.

    Susceptible mass is multiplied by the cavity escape product, the
    freshly infected share joins the infected pool, and a 1/gamma share
    of the infected pool retires each step.
    """
    esc_cav, esc_full = _escape_products(msgs, params)
    keep = 1.0 - 1.0 / params.gamma
    new_s = msgs.s_msg * esc_cav
    new_i = msgs.s_msg * (1.0 - esc_cav) + msgs.i_msg * keep
    new_r = msgs.r_msg + msgs.i_msg / params.gamma
    node_s = msgs.node_s * esc_full
    node_i = msgs.node_s * (1.0 - esc_full) + msgs.node_i * keep
    node_r = msgs.node_r + msgs.node_i / params.gamma
    return replace(
        msgs,
        s_msg=new_s,
        i_msg=new_i,
        r_msg=new_r,
        node_s=node_s,
        node_i=node_i,
        node_r=node_r,
        step=msgs.step + 1,
    )


def mp_solve(
    view: AdjacencyView,
    simplices: TwoSimplexSet | None,
    params: EpidemicParams,
    seeds,
    tol: float = 1e-10,
    max_iters: int = 10_000,
    links: LinkIndex | None = None,
) -> MessageState:
    """Iterate :func:`mp_step` from the seeded start to a fixed point.

    Stops when the largest per-entry change falls below ``tol`` or after
    ``max_iters`` steps, whichever comes first; the returned state
    carries the convergence flag, iteration count, per-step change
    trace, and the stationarity residual at the final point (largest
    violation of the steady-state balance for the S and I messages).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    state = initial_messages(view, simplices, seeds, links=links)
    trace: list[float] = []
    delta = 0.0
    iterations = 0
    for iterations in range(1, max_iters + 1):
        nxt = mp_step(state, params)
        delta = 0.0
        for a, b in (
            (state.s_msg, nxt.s_msg), (state.i_msg, nxt.i_msg),
            (state.r_msg, nxt.r_msg), (state.node_s, nxt.node_s),
            (state.node_i, nxt.node_i), (state.node_r, nxt.node_r),
        ):
            if a.size:
                delta = max(delta, float(np.abs(a - b).max()))
        trace.append(delta)
        state = nxt
        if delta < tol:
            break
    esc_cav, _ = _escape_products(state, params)
    gain = state.s_msg * (1.0 - esc_cav)
    r_s = float(np.max(np.abs(gain), initial=0.0))
    r_i = float(np.max(np.abs(state.i_msg - params.gamma * gain), initial=0.0))
    state.converged = delta < tol
    state.iterations = iterations
    state.residual = max(r_s, r_i)
    state.trace = trace
    return state


def node_marginals(msgs: MessageState) -> np.ndarray:
    """Stacked (N, 3) array of per-node (S, I, R) probabilities."""
    return np.stack([msgs.node_s, msgs.node_i, msgs.node_r], axis=1)


@dataclass
class WnbOperator:
    """Linearization of the infected-message update at zero infection.

    ``skeleton`` holds the infection-rate-free pattern: entry at
    (row = link i -> j, col = link k -> i, k != j) equals the weighted
    adjacency count A_ik.  The operator itself is ``beta1 * gamma``
    times the skeleton; triangle terms are quadratic in the infection
    messages and vanish at this point, so no triangle parameter appears.
    """

    skeleton: sp.csr_matrix
    beta1: float
    gamma: float
    links: LinkIndex = field(repr=False)
    _matrix: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    @property
    def num_links(self) -> int:
        return self.skeleton.shape[0]

    @property
    def matrix(self) -> sp.csr_matrix:
        if self._matrix is None:
            self._matrix = (self.beta1 * self.gamma) * self.skeleton
        return self._matrix

    def dump_coo(self, path) -> None:
        """Write the scaled operator as 'row col value' text lines."""
        coo = self.matrix.tocoo()
        with open(path, "w") as fh:
            fh.write(f"# shape {coo.shape[0]} {coo.shape[1]} nnz {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {v:.17g}\n")


def build_wnb(
    view: AdjacencyView,
    beta1: float,
    gamma: float,
    links: LinkIndex | None = None,
) -> WnbOperator:
    """Assemble the non-backtracking operator over directed links."""
    if beta1 < 0:
        raise ValueError("beta1 must be nonnegative")
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    if links is None:
        links = build_link_index(view)
    num_links = links.num_links
    out_deg = np.diff(links.out_ptr)
    in_deg = np.diff(links.in_ptr)
    rows = np.repeat(np.arange(num_links, dtype=np.int64), in_deg[links.src])
    col_parts = []
    for i in range(links.num_nodes):
        if out_deg[i] == 0:
            continue
        seg = links.in_ids[links.in_ptr[i]: links.in_ptr[i + 1]]
        col_parts.append(np.tile(seg, out_deg[i]))
    cols = np.concatenate(col_parts) if col_parts else np.empty(0, dtype=np.int64)
    keep = cols != links.reverse[rows]
    rows, cols = rows[keep], cols[keep]
    skeleton = sp.coo_matrix(
        (links.weight[cols].astype(np.float64), (rows, cols)),
        shape=(num_links, num_links),
    ).tocsr()
    skeleton.sort_indices()
    return WnbOperator(skeleton=skeleton, beta1=beta1, gamma=gamma, links=links)


@dataclass
class SpectralResult:
    """Leading-eigenpair estimate of a link operator."""

    lambda_c: float
    eigvec: np.ndarray
    iterations: int
    residual: float
    converged: bool

    def to_dict(self, include_eigvec: bool = False) -> dict:
        out = {
            "lambda_c": self.lambda_c,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "num_links": int(len(self.eigvec)),
        }
        if include_eigvec:
            out["eigvec"] = [float(x) for x in self.eigvec]
        return out

    def write_json(self, path, include_eigvec: bool = False) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(include_eigvec=include_eigvec), fh, indent=2)
            fh.write("\n")


def leading_eigen(
    op: WnbOperator,
    tol: float = 1e-10,
    max_iters: int = 100_000,
    seed: int | None = None,
) -> SpectralResult:
    """Power iteration for the spectral radius of the link operator.

    The iteration runs on the diagonally shifted operator so that the
    rotating spectra of cycle-like graphs still mix toward the leading
    eigenvector; the reported eigenvalue removes the shift.  Operators
    without any directed cycle are nilpotent and short-circuit to an
    exact zero radius with an exact kernel vector.
    """
    mat = op.matrix
    num_links = mat.shape[0]
    if num_links == 0:
        return SpectralResult(0.0, np.zeros(0), 0, 0.0, True)
    if mat.nnz == 0:
        return SpectralResult(0.0, np.full(num_links, 1.0 / num_links), 0, 0.0, True)

    n_strong, _ = connected_components(mat, directed=True, connection="strong")
    if n_strong == num_links:
        # No directed cycle: nilpotent operator.  Links pointing into a
        # degree-1 node are never read by any row, so their indicator
        # spans an exact kernel direction.
        in_deg = np.diff(op.links.in_ptr)
        v = (in_deg[op.links.dst] == 1).astype(np.float64)
        if v.sum() == 0.0:
            v = np.full(num_links, 1.0)
        v /= v.sum()
        resid = float(np.abs(mat @ v).sum())
        return SpectralResult(0.0, v, 0, resid, True)

    if seed is None:
        v = np.full(num_links, 1.0 / num_links)
    else:
        rng = np.random.default_rng(seed)
        v = rng.uniform(0.5, 1.5, size=num_links)
        v /= v.sum()
    shift = 0.5 * float(np.max(mat.sum(axis=1)))
    lam_prev = math.inf
    lam = 0.0
    resid = math.inf
    for it in range(1, max_iters + 1):
        w = mat @ v + shift * v
        nrm = float(w.sum())
        v = w / nrm
        lam = nrm - shift
        if abs(lam - lam_prev) < tol * max(1.0, abs(lam)):
            r = mat @ v
            resid = float(np.abs(r - lam * v).sum())
            if resid <= tol * max(1.0, abs(lam)):
                return SpectralResult(lam, v, it, resid, True)
        lam_prev = lam
    if not math.isfinite(resid):
        r = mat @ v
        resid = float(np.abs(r - lam * v).sum())
    return SpectralResult(lam, v, max_iters, resid, False)


def critical_beta1(
    view: AdjacencyView,
    gamma: float = 1,
    tol: float = 1e-10,
    links: LinkIndex | None = None,
) -> float:
    """Pairwise infectivity where the zero-infection point loses stability.

    The operator scales linearly in beta1 * gamma, so the threshold is
    the reciprocal of gamma times the skeleton's spectral radius.
    Graphs without a non-backtracking cycle have radius 0 and no finite
    threshold; the result is then infinite.
    """
    op = build_wnb(view, beta1=1.0, gamma=1.0, links=links)
    rho = leading_eigen(op, tol=tol).lambda_c
    if rho <= 0.0:
        return math.inf
    return 1.0 / (gamma * rho)
