"""Named extremal constructions and seeded instance generators.

The balanced transversal hypergraph and its edge count are the reference
objects everything else is measured against; the generators produce the
near-extremal and adversarial inputs the stability extractors and the
certificate property runs consume.  Every randomized generator takes an
explicit seed and is a deterministic function of (parameters, seed).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .canonical import canonical_code
from .hypergraph import Hypergraph, all_r_subsets, iter_bits, mask_of


@dataclass(frozen=True)
class BalancedPartition:
    """Ordered blocks of consecutive labels, sizes differing by at most one."""

    blocks: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ForbiddenFamily:
    """A named finite family of same-uniformity forbidden subgraphs."""

    name: str
    members: tuple[Hypergraph, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("forbidden family must be nonempty")
        if len({f.r for f in self.members}) != 1:
            raise ValueError("forbidden family members must share a uniformity")


def balanced_partition(n: int, ell: int) -> BalancedPartition:
    """Split [n] into ell blocks of consecutive labels, larger blocks first."""
    if ell < 1:
        raise ValueError(f"need at least one block, got ell = {ell}")
    small, extra = divmod(n, ell)
    blocks = []
    start = 1
    for i in range(ell):
        size = small + (1 if i < extra else 0)
        blocks.append(tuple(range(start, start + size)))
        start += size
    return BalancedPartition(tuple(blocks))


def turan_count(n: int, r: int, ell: int) -> int:
    """Edge count of the balanced transversal r-graph: e_r of the block sizes."""
    if r < 2 or ell < r:
        raise ValueError(f"need ell >= r >= 2, got r = {r}, ell = {ell}")
    if n < 0:
        raise ValueError("n must be >= 0")
    sizes = [len(b) for b in balanced_partition(n, ell).blocks]
    # elementary symmetric polynomial e_r(sizes) via the product expansion
    coeffs = [1] + [0] * r
    for s in sizes:
        for k in range(min(r, len(coeffs) - 1), 0, -1):
            coeffs[k] += coeffs[k - 1] * s
    return coeffs[r]


def turan_hypergraph(n: int, r: int, ell: int) -> Hypergraph:
    """All r-sets meeting each block of the canonical balanced partition at most once."""
    if r < 2 or ell < r:
        raise ValueError(f"need ell >= r >= 2, got r = {r}, ell = {ell}")
    if n < 1:
        raise ValueError("n must be >= 1")
    blocks = balanced_partition(n, ell).blocks
    edges = []
    for chosen in itertools.combinations(range(ell), r):
        pools = [blocks[i] for i in chosen]
        if any(not p for p in pools):
            continue
        for combo in itertools.product(*pools):
            edges.append(mask_of(combo))
    h = Hypergraph(n, r, tuple(edges))
    assert h.size == turan_count(n, r, ell)
    return h


def k_family(r: int, ell: int, max_vertices: int | None = None) -> ForbiddenFamily:
    """Minimal r-graphs covering every pair of some (ell+1)-set, up to isomorphism.

    Any member of the pair-cover family with at most C(ell+1, 2) edges
    contains one of these minimal covers as a subgraph, so subgraph tests
    against this list decide freeness; that is all the cross-validation
    of the auxiliary-graph shortcut needs.  Guarded to small (r, ell)
    because members are found by exhaustive cover search.  Members come
    out in canonical code order.  ell < r is allowed here (a single
    r-edge can cover a small set's pairs on its own).

    max_vertices truncates the family to members on at most that many
    vertices, which is sound for freeness tests on hosts of that size and
    keeps the bigger (r, ell) enumerations tractable.
    """
    if r < 2 or ell < 2:
        raise ValueError(f"need r >= 2 and ell >= 2, got r = {r}, ell = {ell}")
    if ell > 4 or r > 4:
        raise ValueError("k_family enumeration is guarded to ell <= 4, r <= 4")
    s = ell + 1
    pairs = list(itertools.combinations(range(1, s + 1), 2))
    pair_masks = [mask_of(p) for p in pairs]
    all_covered = (1 << len(pairs)) - 1
    fresh_cap = (r - 2) * len(pairs)
    if max_vertices is not None:
        fresh_cap = min(fresh_cap, max(0, max_vertices - s))

    found: dict[tuple, Hypergraph] = {}
    seen_states: set[tuple] = set()

    def rec(edges: list[int], covered: int, fresh_used: int) -> None:
        if covered == all_covered:
            g = _embed_on_own_support(tuple(sorted(edges)), r)
            found.setdefault((g.n, canonical_code(g.n, g.edges)), g)
            return
        if len(edges) >= len(pairs):
            return
        state = (frozenset(edges), covered)
        if state in seen_states:
            return
        seen_states.add(state)
        idx = next(i for i in range(len(pairs)) if not covered & (1 << i))
        pair = pairs[idx]
        # extras come from the (ell+1)-set or fresh labels introduced in order
        others = [v for v in range(1, s + 1) if v not in pair]
        allowed_fresh = min(fresh_used + (r - 2), fresh_cap)
        pool = others + list(range(s + 1, s + 1 + allowed_fresh))
        for extra in itertools.combinations(pool, r - 2):
            new = sorted(v for v in extra if v > s + fresh_used)
            if new != list(range(s + 1 + fresh_used, s + 1 + fresh_used + len(new))):
                continue  # fresh labels must appear consecutively
            e = mask_of(pair + extra)
            if e in edges:
                continue
            gained = covered
            for i, pm in enumerate(pair_masks):
                if not gained & (1 << i) and pm & e == pm:
                    gained |= 1 << i
            edges.append(e)
            rec(edges, gained, fresh_used + len(new))
            edges.pop()

    rec([], 0, 0)

    from .hypergraph import is_subgraph

    minimal: list[tuple[tuple, Hypergraph]] = []
    for key in sorted(found, key=lambda k: (len(found[k].edges), k)):
        g = found[key]
        if any(is_subgraph(kept, g) for _, kept in minimal):
            continue
        minimal.append((key, g))
    members = tuple(g for _, g in sorted(minimal))
    return ForbiddenFamily(f"pair-cover(r={r},ell={ell})", members)


def _embed_on_own_support(edges: tuple[int, ...], r: int) -> Hypergraph:
    """Relabel an edge-mask tuple onto 1..|support| and wrap as a Hypergraph."""
    used = 0
    for e in edges:
        used |= e
    relabel = {}
    for new, old in enumerate(iter_bits(used)):
        relabel[old] = new
    out = []
    for e in edges:
        m = 0
        for b in iter_bits(e):
            m |= 1 << relabel[b]
        out.append(m)
    return Hypergraph(used.bit_count(), r, tuple(sorted(out)))


def perturb(
    h: Hypergraph,
    delete_fraction: float,
    add_count: int,
    seed: int,
    keep_cancellative: bool = False,
) -> Hypergraph:
    """Delete a fraction of edges, then add absent r-sets, deterministically.

    floor(delete_fraction * |H|) uniformly chosen edges go first; add_count
    uniformly chosen absent r-sets follow.  With keep_cancellative, an
    addition that would break cancellativity is rejected (and retried with
    fresh draws until the pool is exhausted).
    """
    if not 0.0 <= delete_fraction <= 1.0:
        raise ValueError(f"delete_fraction must be in [0, 1], got {delete_fraction}")
    if add_count < 0:
        raise ValueError("add_count must be >= 0")
    rng = random.Random(seed)
    edges = list(h.edges)
    kill = int(delete_fraction * len(edges))
    doomed = set(rng.sample(range(len(edges)), kill)) if kill else set()
    kept = [e for i, e in enumerate(edges) if i not in doomed]
    if add_count:
        present = set(kept)
        absent = [e for e in all_r_subsets(h.n, h.r) if e not in present]
        rng.shuffle(absent)
        added = 0
        for e in absent:
            if added == add_count:
                break
            if keep_cancellative and h.r == 3:
                from .checkers import is_cancellative

                trial = Hypergraph(h.n, h.r, tuple(kept + [e]))
                if not is_cancellative(trial):
                    continue
            kept.append(e)
            added += 1
    return Hypergraph(h.n, h.r, tuple(kept))


def random_maximal_cancellative(n: int, seed: int) -> Hypergraph:
    """Greedy cancellative 3-graph over a seeded random 3-set order; maximal."""
    from .checkers import _CancellativeState

    rng = random.Random(seed)
    triples = all_r_subsets(n, 3)
    rng.shuffle(triples)
    state = _CancellativeState(n)
    kept = []
    for e in triples:
        if state.addable(e):
            state.add(e)
            kept.append(e)
    return Hypergraph(n, 3, tuple(kept))


def random_triangle_free_near_bipartite(n: int, epsilon: float, noise: int, seed: int) -> Hypergraph:
    """Seeded triangle-free graph with about (1/4 - epsilon) n^2 edges.

    Starts from the complete balanced bipartite graph; `noise` attempts to
    plant a same-side edge, paying for it by deleting the cross edges that
    would close a triangle; finally trims random cross edges down to the
    target count.  noise = 0 keeps the graph bipartite, and epsilon = 0
    with even n returns the complete balanced bipartite graph itself.
    """
    target = round((0.25 - epsilon) * n * n)
    left = list(range(1, (n + 1) // 2 + 1))
    right = list(range(len(left) + 1, n + 1))
    if target > len(left) * len(right):
        raise ValueError(
            f"target edge count {target} exceeds the bipartite maximum {len(left) * len(right)}"
        )
    if target < 0:
        raise ValueError("epsilon is too large: negative target edge count")
    rng = random.Random(seed)
    adj = [0] * (n + 1)

    def has_edge(u: int, v: int) -> bool:
        return bool(adj[u] & (1 << (v - 1)))

    def add_edge(u: int, v: int) -> None:
        adj[u] |= 1 << (v - 1)
        adj[v] |= 1 << (u - 1)

    def del_edge(u: int, v: int) -> None:
        adj[u] &= ~(1 << (v - 1))
        adj[v] &= ~(1 << (u - 1))

    edge_count = 0
    for u in left:
        for v in right:
            add_edge(u, v)
            edge_count += 1

    sides = [left, right]
    for _ in range(noise):
        side = sides[rng.randrange(2)]
        if len(side) < 2:
            continue
        u, v = rng.sample(side, 2)
        if has_edge(u, v):
            continue
        common = adj[u] & adj[v]
        cost = common.bit_count()
        if edge_count - cost + 1 < target:
            continue  # cannot pay for this internal edge and still hit the target
        for b in iter_bits(common):
            w = b + 1
            if rng.randrange(2):
                del_edge(u, w)
            else:
                del_edge(v, w)
            edge_count -= 1
        add_edge(u, v)
        edge_count += 1

    cross = [(u, v) for u in left for v in right if has_edge(u, v)]
    rng.shuffle(cross)
    while edge_count > target and cross:
        u, v = cross.pop()
        if has_edge(u, v):
            del_edge(u, v)
            edge_count -= 1

    edges = []
    for v in range(1, n + 1):
        for b in iter_bits(adj[v]):
            u = b + 1
            if u > v:
                edges.append(mask_of((v, u)))
    g = Hypergraph(n, 2, tuple(edges))
    from .hypergraph import contains_clique

    assert not contains_clique(g, 3), "generator must stay triangle-free"
    return g
