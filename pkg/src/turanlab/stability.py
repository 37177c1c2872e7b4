"""Partition extractors, the clique-removal pipeline, and the bipartite-distance analyzer.

The cancellative extractor follows the constructive proof chain: a shadow
pair T with maximal normalized co-link mass, a pair (u, v) in N(T)^2 with
the largest pair link, a max-degree-sum edge {x, y} in that link, and
finally V2 = N_L(x), V3 = N_L(y), V1 = the rest.  Every structural fact
the chain relies on (link avoids N(T), V2 and V3 disjoint and independent)
is asserted on the way out, so a bad input cannot produce a quietly wrong
report.  All selections break ties deterministically, making witness
chains reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .checkers import is_cancellative, is_k_free, _link_sets
from .constructions import turan_count
from .hypergraph import (
    Hypergraph,
    adjacency_masks,
    auxiliary_graph,
    contains_clique,
    count_cliques,
    iter_bits,
    mask_of,
    vertices_of,
)
from .partitions import Partition, bad_edges
from .search import max_ell_cut, vertex_move_optimal

EXACT_CUT_LIMIT = 20


@dataclass
class StabilityReport:
    """Measured edge deficit vs bad-edge fraction for an extracted partition."""

    n: int
    r: int
    edges: int
    target: int  # the extremal edge (or clique) count the deficit is measured against
    epsilon: float
    delta: float
    bad_edge_count: int
    partition: Partition
    witness_chain: Optional[dict] = None
    degenerate: bool = False

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "edges": self.edges,
            "target": self.target,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "bad_edges": self.bad_edge_count,
            "blocks": [list(b) for b in self.partition.blocks],
            "witness_chain": self.witness_chain,
            "degenerate": self.degenerate,
        }


@dataclass
class BipartiteDistanceReport:
    """Two-block cut structure of a triangle-free graph with certified bounds."""

    n: int
    edges: int
    epsilon: float
    delta: float
    partition: Partition
    bad_edge_list: list[tuple[int, ...]]
    missing_pairs: list[tuple[int, int]]
    missing_count: int
    b1_internal: int
    b2_internal: int
    max_internal_degree: int  # Delta on the heavy side
    case: int
    matching: list[tuple[int, int]]
    verified: dict[str, bool]
    notes: dict[str, str] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edges,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "blocks": [list(b) for b in self.partition.blocks],
            "bad_edges": len(self.bad_edge_list),
            "missing_pairs": self.missing_count,
            "b1_internal": self.b1_internal,
            "b2_internal": self.b2_internal,
            "max_internal_degree": self.max_internal_degree,
            "case": self.case,
            "matching_size": len(self.matching),
            "verified": self.verified,
            "notes": self.notes,
        }


def _cut_mode(n: int) -> str:
    return "exact" if n <= EXACT_CUT_LIMIT else "local"


def extract_partition_kfree(h: Hypergraph, ell: int, seed: int = 0) -> StabilityReport:
    """Partition a pair-cover-free r-graph via the best ell-cut of its auxiliary graph."""
    if not is_k_free(h, ell):
        raise ValueError("input is not free of the pair-cover family for this ell")
    g = auxiliary_graph(h)
    part, _ = max_ell_cut(g, ell, mode=_cut_mode(h.n), seed=seed)
    bad = bad_edges(h, part)
    target = turan_count(h.n, h.r, ell)
    eps = 1.0 - h.size / target if target else 0.0
    return StabilityReport(
        n=h.n,
        r=h.r,
        edges=h.size,
        target=target,
        epsilon=eps,
        delta=len(bad) / h.n**h.r,
        bad_edge_count=len(bad),
        partition=part,
    )


def _colink_matrix(h: Hypergraph) -> tuple[list[int], np.ndarray]:
    """Shadow masks plus the n x n matrix M[u][v] = #{T : u, v in N(T)}.

    The diagonal equals the vertex degree, which is exactly |L(u)|, so the
    matrix doubles as the pair-link size table with the L(u, u) = L(u)
    convention baked in.
    """
    nbr: dict[int, int] = {}
    for e in h.edges:
        for b in iter_bits(e):
            t = e ^ (1 << b)
            nbr[t] = nbr.get(t, 0) | (1 << b)
    ts = sorted(nbr)
    x = np.zeros((len(ts), h.n), dtype=np.int64)
    for i, t in enumerate(ts):
        for b in iter_bits(nbr[t]):
            x[i, b] = 1
    return ts, x


def extract_partition_cancellative(h: Hypergraph) -> StabilityReport:
    """Recover a near-tripartition of a cancellative 3-graph with a witness chain."""
    if h.r != 3:
        raise ValueError("the cancellative extractor expects r = 3")
    if not is_cancellative(h):
        raise ValueError("input is not cancellative")
    if h.size == 0:
        raise ValueError("empty shadow: the extractor needs at least one edge")
    n = h.n
    ts, x = _colink_matrix(h)
    colink = x.T @ x  # symmetric, diagonal = vertex degrees = |L(u)|
    mass = ((x @ colink) * x).sum(axis=1)  # sum of |L(u,v)| over N(T)^2, per T
    degs = x.sum(axis=1)

    # (i) T maximizing  4 * mass / (d^2 (n-d)^2), ties by larger d then lex T;
    # the shadow list is in lexicographic vertex order, so earlier wins final ties
    order = sorted(range(len(ts)), key=lambda i: vertices_of(ts[i]))
    best_i = None
    best_num = best_den = best_d = 0
    for i in order:
        d = int(degs[i])
        num, den = 4 * int(mass[i]), d * d * (n - d) * (n - d)
        if best_i is None or num * best_den > best_num * den or (
            num * best_den == best_num * den and d > best_d
        ):
            best_i, best_num, best_den, best_d = i, num, den, d
    t_mask = ts[best_i]
    nbrs = [b + 1 for b in range(n) if x[best_i, b]]
    d_t = len(nbrs)
    score = Fraction(best_num, best_den) if best_den else Fraction(0)

    # (ii) ordered pair (u, v) in N(T)^2 with the largest pair link, lex ties
    best_pair = None
    best_size = -1
    for u in nbrs:
        for v in nbrs:
            size = int(colink[u - 1, v - 1])
            if size > best_size:
                best_size = size
                best_pair = (u, v)
    u, v = best_pair

    # (iii) the pair link as a graph, then its max-degree-sum edge {x, y}
    links = _link_sets(h)
    link_graph = sorted(links[u - 1] if u == v else links[u - 1] & links[v - 1])
    assert len(link_graph) == best_size, "pair-link recount must match the co-link table"
    nmask = mask_of(nbrs)
    support = 0
    for a in link_graph:
        support |= a
    assert support & nmask == 0, "pair link must avoid N(T) in a cancellative graph"

    degenerate = not link_graph
    if degenerate:
        v2: list[int] = []
        v3: list[int] = []
        xy = None
    else:
        ldeg: dict[int, int] = {}
        for a in link_graph:
            for b in iter_bits(a):
                ldeg[b] = ldeg.get(b, 0) + 1
        best_edge = None
        best_sum = -1
        for a in link_graph:
            i, j = sorted(b + 1 for b in iter_bits(a))
            s = ldeg[i - 1] + ldeg[j - 1]
            if s > best_sum or (s == best_sum and (i, j) < best_edge):
                best_sum = s
                best_edge = (i, j)
        xe, ye = best_edge
        xb, yb = 1 << (xe - 1), 1 << (ye - 1)
        v2 = sorted(b + 1 for a in link_graph if a & xb for b in iter_bits(a ^ xb))
        v3 = sorted(b + 1 for a in link_graph if a & yb for b in iter_bits(a ^ yb))
        xy = (xe, ye)

    v2_mask, v3_mask = mask_of(v2), mask_of(v3)
    assert v2_mask & v3_mask == 0, "V2 and V3 must be disjoint (link graph is triangle-free)"
    for blk in (v2_mask, v3_mask):
        for e in h.edges:
            assert (e & blk).bit_count() < 2, "V2 and V3 must be independent in H"
    v1 = [w for w in range(1, n + 1) if not ((1 << (w - 1)) & (v2_mask | v3_mask))]
    part = _partition_allowing_empty(n, v1, v2, v3)

    bad = bad_edges(h, part)
    target = turan_count(n, 3, 3)
    chain = {
        "T": vertices_of(t_mask),
        "T_degree": d_t,
        "T_neighborhood": nbrs,
        "score": float(score),
        "pair": [u, v],
        "pair_link_size": best_size,
        "edge": list(xy) if xy else None,
    }
    return StabilityReport(
        n=n,
        r=3,
        edges=h.size,
        target=target,
        epsilon=1.0 - h.size / target,
        delta=len(bad) / n**3,
        bad_edge_count=len(bad),
        partition=part,
        witness_chain=chain,
        degenerate=degenerate,
    )


def _partition_allowing_empty(n: int, v1: list[int], v2: list[int], v3: list[int]) -> Partition:
    """Three blocks; degenerate chains may leave V2/V3 empty, which Partition
    only allows when n < 3, so pad empties from V1's tail instead."""
    blocks = [list(v1), list(v2), list(v3)]
    if n >= 3:
        for k in (1, 2):
            if not blocks[k] and len(blocks[0]) >= 2:
                blocks[k].append(blocks[0].pop())
    return Partition(n, tuple(tuple(sorted(b)) for b in blocks))


def lemma25_pair(g: Hypergraph) -> tuple[int, int, frozenset[int], frozenset[int]]:
    """Max-degree-sum edge of a triangle-free graph, with disjoint neighborhoods.

    Postconditions asserted: the two neighborhoods are disjoint and
    n (d(x) + d(y)) >= 4 |E| (the averaging bound).
    """
    if g.r != 2:
        raise ValueError("lemma25_pair expects a graph (r = 2)")
    if contains_clique(g, 3):
        raise ValueError("input graph must be triangle-free")
    if not g.edges:
        raise ValueError("input graph has no edges")
    adj = adjacency_masks(g)
    best = None
    best_sum = -1
    for e in g.edges:
        i, j = sorted(b + 1 for b in iter_bits(e))
        s = adj[i - 1].bit_count() + adj[j - 1].bit_count()
        if s > best_sum or (s == best_sum and (i, j) < best):
            best_sum = s
            best = (i, j)
    xe, ye = best
    nx = frozenset(b + 1 for b in iter_bits(adj[xe - 1]))
    ny = frozenset(b + 1 for b in iter_bits(adj[ye - 1]))
    assert not (nx & ny), "neighborhoods of an edge are disjoint in a triangle-free graph"
    assert g.n * best_sum >= 4 * g.size, "averaging bound must hold for the chosen edge"
    return xe, ye, nx, ny


def greedy_clique_removal(g: Hypergraph, ell: int) -> tuple[Hypergraph, list[tuple[int, int]]]:
    """Delete max-multiplicity edges until no (ell+1)-clique remains."""
    if g.r != 2:
        raise ValueError("greedy_clique_removal expects a graph (r = 2)")
    edges = set(g.edges)
    removed: list[tuple[int, int]] = []
    while True:
        cur = Hypergraph(g.n, 2, tuple(sorted(edges))) if edges else Hypergraph(g.n, 2, ())
        cliques = _cliques_of_size(cur, ell + 1)
        if not cliques:
            return cur, removed
        load: dict[tuple[int, int], int] = {}
        for cl in cliques:
            vs = sorted(cl)
            for a in range(len(vs)):
                for b in range(a + 1, len(vs)):
                    load[(vs[a], vs[b])] = load.get((vs[a], vs[b]), 0) + 1
        victim = min(load, key=lambda p: (-load[p], p))
        edges.discard(mask_of(victim))
        removed.append(victim)


def _cliques_of_size(g: Hypergraph, q: int) -> list[tuple[int, ...]]:
    adj = adjacency_masks(g)
    out: list[tuple[int, ...]] = []

    def grow(chosen: list[int], cand: int, need: int) -> None:
        if need == 0:
            out.append(tuple(v + 1 for v in chosen))
            return
        if cand.bit_count() < need:
            return
        for b in iter_bits(cand):
            chosen.append(b)
            grow(chosen, cand & adj[b] & ~((1 << (b + 1)) - 1), need - 1)
            chosen.pop()

    for v in range(g.n):
        grow([v], adj[v] & ~((1 << (v + 1)) - 1), q - 1)
    return out


def extract_partition_generalized(
    g: Hypergraph, ell: int, r: int, seed: int = 0
) -> StabilityReport:
    """Clique-removal pipeline: make G K_{ell+1}-free greedily, cut, recount on G.

    The deficit is measured on r-clique counts of the cleaned graph against
    the balanced complete ell-partite count; bad edges are counted on the
    original graph, in line with the pipeline's conclusion being about G.
    """
    if g.r != 2:
        raise ValueError("extract_partition_generalized expects a graph (r = 2)")
    if not (ell >= r >= 3):
        raise ValueError(f"need ell >= r >= 3, got ell = {ell}, r = {r}")
    cleaned, removed = greedy_clique_removal(g, ell)
    kr = count_cliques(cleaned, r)
    target = turan_count(g.n, r, ell)
    part, _ = max_ell_cut(cleaned, ell, mode=_cut_mode(g.n), seed=seed)
    bad = bad_edges(g, part)
    return StabilityReport(
        n=g.n,
        r=2,
        edges=g.size,
        target=target,
        epsilon=1.0 - kr / target if target else 0.0,
        delta=len(bad) / g.n**2,
        bad_edge_count=len(bad),
        partition=part,
        witness_chain={"removed_edges": [list(p) for p in removed], "clique_count": kr},
    )


def bipartite_distance_analysis(g: Hypergraph, seed: int = 0) -> BipartiteDistanceReport:
    """Two-block distance structure of a triangle-free graph.

    Verifies, per run: (a) the cut is vertex-move-optimal, (b) the missing
    cross pairs dominate the square of the heavy side's max internal degree,
    (c) the greedy-matching bound on missing pairs, and (d) the counting cap
    |M| <= (epsilon + delta) n^2.  The case label records which side of the
    internal-degree dichotomy the instance falls on.
    """
    if g.r != 2:
        raise ValueError("bipartite_distance_analysis expects a graph (r = 2)")
    if contains_clique(g, 3):
        raise ValueError("input graph must be triangle-free")
    n = g.n
    part, _ = max_ell_cut(g, 2, mode=_cut_mode(n), seed=seed)

    adj = adjacency_masks(g)
    masks = part.block_masks()
    internal = [0, 0]
    for e in g.edges:
        for k in (0, 1):
            if e & masks[k] == e:
                internal[k] += 1
    if internal[1] > internal[0]:
        part = Partition(n, (part.blocks[1], part.blocks[0]))
        masks = part.block_masks()
        internal = [internal[1], internal[0]]

    assert vertex_move_optimal(g, part), "maxant cut must be vertex-move-optimal"

    v1, v2 = part.blocks
    m1, m2 = masks
    bad = bad_edges(g, part)
    b_count = len(bad)
    cross = g.size - b_count
    missing_list = [
        (u, w) for u in v1 for w in v2 if not adj[u - 1] & (1 << (w - 1))
    ]
    missing = len(missing_list)
    assert missing == len(v1) * len(v2) - cross
    eps = 0.25 - g.size / (n * n)
    delta = b_count / (n * n)

    d1 = {w: (adj[w - 1] & m1).bit_count() for w in v1}
    d2 = {w: (adj[w - 1] & m2).bit_count() for w in v1}
    big = max(d1.values(), default=0)
    vstar = min((w for w in v1 if d1[w] == big), default=None)

    verified: dict[str, bool] = {}
    verified["a_per_vertex_move_optimal"] = vertex_move_optimal(g, part)

    if vstar is not None and big > 0:
        n1 = adj[vstar - 1] & m1
        n2 = adj[vstar - 1] & m2
        no_edge_between = all(
            not (adj[b] & n2) for b in iter_bits(n1)
        )
        verified["b_neighborhood_product_missing"] = no_edge_between
        verified["b_missing_ge_delta_sq"] = missing >= d1[vstar] * d2[vstar] >= big * big
    else:
        verified["b_neighborhood_product_missing"] = True
        verified["b_missing_ge_delta_sq"] = missing >= 0

    # greedy matching inside the heavy side's bad edges, lexicographic order
    b1_edges = sorted(vertices_of(e) for e in bad if e & m1 == e)
    used = 0
    matching: list[tuple[int, int]] = []
    for a, b in b1_edges:
        am, bm = 1 << (a - 1), 1 << (b - 1)
        if used & (am | bm):
            continue
        matching.append((a, b))
        used |= am | bm
    bound_sum = 0
    pair_ok = True
    for a, b in matching:
        da = (adj[a - 1] & m2).bit_count()
        db = (adj[b - 1] & m2).bit_count()
        if da + db > len(v2):
            pair_ok = False
        bound_sum += 2 * len(v2) - da - db
    verified["c_matched_degrees_fit"] = pair_ok
    verified["c_missing_ge_matching_bound"] = missing >= bound_sum >= len(matching) * len(v2)
    verified["d_missing_le_eps_plus_delta"] = 4 * missing <= n * n - 4 * g.size + 4 * b_count

    case = 1 if big**3 >= b_count * n else 2
    return BipartiteDistanceReport(
        n=n,
        edges=g.size,
        epsilon=eps,
        delta=delta,
        partition=part,
        bad_edge_list=[vertices_of(e) for e in bad],
        missing_pairs=missing_list,
        missing_count=missing,
        b1_internal=internal[0],
        b2_internal=internal[1],
        max_internal_degree=big,
        case=case,
        matching=matching,
        verified=verified,
        notes={
            "case1_bound": "implemented as |M| >= Delta^2 via the neighborhood product; "
            "the (Delta*n)^2 reading is dimensionally inconsistent with that argument"
        },
    )


# ---------------------------------------------------------------------------
# epsilon-delta scan


@dataclass(frozen=True)
class ScanRow:
    n: int
    seed: int
    epsilon: float
    delta: float
    bad_edges: int
    case: str


def epsilon_delta_scan(
    kind: str,
    ns: list[int],
    params: list[float],
    seeds: list[int],
    ell: int = 3,
    noise: int = 0,
    threads: int = 1,
) -> list[ScanRow]:
    """Measured (epsilon, delta) table; rows are deterministic under seeds.

    kind 'cancellative' and 'kfree' perturb the balanced transversal
    3-graph by the given delete fractions; 'triangle-free' drives the
    bipartite-distance analyzer over generator outputs at the given
    epsilon targets.
    """
    from concurrent.futures import ThreadPoolExecutor

    from .constructions import perturb, random_triangle_free_near_bipartite, turan_hypergraph

    if kind not in ("cancellative", "kfree", "triangle-free"):
        raise ValueError(f"unknown scan kind {kind!r}")

    jobs = [(p, n, s) for p in params for n in ns for s in seeds]

    def run(job: tuple[float, int, int]) -> ScanRow:
        p, n, s = job
        if kind == "triangle-free":
            g = random_triangle_free_near_bipartite(n, p, noise, s)
            rep = bipartite_distance_analysis(g, seed=s)
            return ScanRow(n, s, rep.epsilon, rep.delta, len(rep.bad_edge_list), str(rep.case))
        base = turan_hypergraph(n, 3, 3)
        h = perturb(base, p, 0, s)
        if kind == "cancellative":
            rep2 = extract_partition_cancellative(h)
        else:
            rep2 = extract_partition_kfree(h, ell, seed=s)
        return ScanRow(n, s, rep2.epsilon, rep2.delta, rep2.bad_edge_count, "")

    if threads <= 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, jobs))
