"""Exhaustive extremal-number search and exact/local multiway cuts.

The extremal search walks the lattice of predicate-satisfying edge sets
one isomorphism class at a time: every visited state is canonicalized and
memoized, children are all single-edge extensions that keep the predicate,
and a branch dies when current-size + addable-candidates cannot reach the
best value found so far (addable-count is a valid bound because a
hereditary predicate's violations are permanent under further additions).
Ties at the optimum survive the strict prune, so the extremal class count
comes out exact.  With a finite symmetry_depth the search switches below
that depth to plain labeled subset branch-and-bound, which is cheaper per
node but prunes far less; the default full-depth rejection is what makes
the graph cases at n = 10 tractable.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .canonical import _twin_classes, canonical_code
from .checkers import _CancellativeState
from .hypergraph import Hypergraph, adjacency_masks, all_r_subsets, iter_bits
from .partitions import Partition

DEFAULT_GUARDS = {2: 10, 3: 8}


# ---------------------------------------------------------------------------
# Hereditary predicates with incremental add/remove/addable


class KFreeState:
    """Auxiliary graph stays K_{ell+1}-free; pair coverage counts track removal."""

    def __init__(self, n: int, r: int, ell: int) -> None:
        if ell < r:
            raise ValueError(f"need ell >= r, got ell = {ell}, r = {r}")
        self.n = n
        self.r = r
        self.ell = ell
        self.adj = [0] * n
        self.pair_cov: dict[tuple[int, int], int] = {}

    def _pairs(self, e: int) -> list[tuple[int, int]]:
        return list(itertools.combinations(list(iter_bits(e)), 2))

    def _has_clique(self, adj: list[int], cand: int, need: int) -> bool:
        if need == 0:
            return True
        if cand.bit_count() < need:
            return False
        for b in iter_bits(cand):
            if self._has_clique(adj, cand & adj[b] & ~((1 << (b + 1)) - 1), need - 1):
                return True
        return False

    def addable(self, e: int) -> bool:
        if self.r == 2:
            lo = e & -e
            i, j = lo.bit_length() - 1, (e ^ lo).bit_length() - 1
            if self.pair_cov.get((i, j)):
                return True
            common = self.adj[i] & self.adj[j]
            if self.ell == 2:
                return common == 0
            return not self._has_clique(self.adj, common, self.ell - 1)
        pairs = self._pairs(e)
        new = [(i, j) for i, j in pairs if not self.pair_cov.get((i, j))]
        if not new:
            return True
        adj2 = list(self.adj)
        for i, j in pairs:
            adj2[i] |= 1 << j
            adj2[j] |= 1 << i
        for i, j in new:
            if self._has_clique(adj2, adj2[i] & adj2[j], self.ell - 1):
                return False
        return True

    def add(self, e: int) -> None:
        for i, j in self._pairs(e):
            c = self.pair_cov.get((i, j), 0)
            self.pair_cov[(i, j)] = c + 1
            if c == 0:
                self.adj[i] |= 1 << j
                self.adj[j] |= 1 << i

    def remove(self, e: int) -> None:
        for i, j in self._pairs(e):
            c = self.pair_cov[(i, j)] - 1
            self.pair_cov[(i, j)] = c
            if c == 0:
                self.adj[i] &= ~(1 << j)
                self.adj[j] &= ~(1 << i)


@dataclass(frozen=True)
class PredicateSpec:
    """A registered hereditary predicate the search can optimize over."""

    id: str
    make_state: Callable[[int, int, Optional[int]], object]
    needs_ell: bool = False
    uniformities: Optional[tuple[int, ...]] = None


def _make_cancellative(n: int, r: int, ell: Optional[int]) -> _CancellativeState:
    if r != 3:
        raise ValueError("the cancellative predicate expects r = 3")
    return _CancellativeState(n)


def _make_kfree(n: int, r: int, ell: Optional[int]) -> KFreeState:
    if ell is None:
        raise ValueError("k-free predicate requires ell")
    return KFreeState(n, r, ell)


def _make_triangle_free(n: int, r: int, ell: Optional[int]) -> KFreeState:
    if r != 2:
        raise ValueError("the triangle-free predicate expects r = 2")
    return KFreeState(n, 2, 2)


_PREDICATES: dict[str, PredicateSpec] = {
    "cancellative": PredicateSpec("cancellative", _make_cancellative, uniformities=(3,)),
    "k-free": PredicateSpec("k-free", _make_kfree, needs_ell=True),
    "triangle-free": PredicateSpec("triangle-free", _make_triangle_free, uniformities=(2,)),
}


def register_predicate(spec: PredicateSpec, hereditary: bool) -> None:
    """Register a custom predicate; non-hereditary predicates are refused.

    Heredity (closure under edge deletion) is what licenses the
    remaining-candidates upper bound, so it is a hard requirement.
    """
    if not hereditary:
        raise ValueError("only hereditary predicates are searchable; refusing registration")
    if spec.id in _PREDICATES:
        raise ValueError(f"predicate id {spec.id!r} already registered")
    _PREDICATES[spec.id] = spec


@dataclass
class SearchConfig:
    ordering: str = "colex"  # or "degree-greedy"
    symmetry_depth: Optional[int] = None  # None: canonical rejection at every depth
    thread_count: int = 1
    node_budget: int = 50_000_000
    witness_cap: int = 1000

    def __post_init__(self) -> None:
        if self.node_budget <= 0:
            raise ValueError("node budget must be positive")
        if self.ordering not in ("colex", "degree-greedy"):
            raise ValueError(f"unknown ordering {self.ordering!r}")


@dataclass
class ExtremalRecord:
    n: int
    r: int
    predicate: str
    ell: Optional[int]
    value: int
    extremal_classes: int
    witnesses: list[Hypergraph]
    nodes_explored: int
    runtime: float
    complete: bool
    cap_hit: bool = False

    def key(self) -> tuple:
        return (self.predicate, self.n, self.r, self.ell)


def extremal_number(
    n: int,
    r: int,
    predicate: str,
    config: Optional[SearchConfig] = None,
    ell: Optional[int] = None,
    allow_large: bool = False,
) -> ExtremalRecord:
    """Exact maximum edge count over all r-graphs on [n] satisfying the predicate.

    Budget exhaustion is reported via complete=False, never as a value.
    """
    cfg = config or SearchConfig()
    spec = _PREDICATES.get(predicate)
    if spec is None:
        raise ValueError(f"unknown predicate {predicate!r}")
    if spec.needs_ell and ell is None:
        raise ValueError(f"predicate {predicate!r} requires ell")
    if spec.uniformities and r not in spec.uniformities:
        raise ValueError(f"predicate {predicate!r} does not apply to r = {r}")
    guard = DEFAULT_GUARDS.get(r, 8)
    if n > guard and not allow_large:
        raise ValueError(
            f"n = {n} exceeds the feasibility guard {guard} for r = {r} (pass allow_large to override)"
        )

    t0 = time.perf_counter()
    state = spec.make_state(n, r, ell)
    candidates = all_r_subsets(n, r)
    cur: list[int] = []
    visited: set[tuple[int, ...]] = set()
    best = 0
    best_codes: set[tuple[int, ...]] = {()}
    nodes = 0
    exhausted = False
    cap_hit = False
    degree = [0] * n  # current vertex degrees, for degree-greedy ordering

    def order_addable(addable: list[int]) -> list[int]:
        if cfg.ordering == "colex":
            return addable
        return sorted(
            addable,
            key=lambda e: (-sum(degree[b] for b in iter_bits(e)), e),
        )

    def record_tie(code: Optional[tuple[int, ...]]) -> None:
        nonlocal cap_hit
        if code is None:
            code = canonical_code(n, cur)
        if len(best_codes) < cfg.witness_cap:
            best_codes.add(code)
        elif code not in best_codes:
            cap_hit = True

    def note_state(code: Optional[tuple[int, ...]]) -> None:
        nonlocal best, cap_hit
        m = len(cur)
        if m > best:
            best = m
            best_codes.clear()
            cap_hit = False
            record_tie(code)
        elif m == best:
            record_tie(code)

    def push(e: int) -> None:
        cur.append(e)
        state.add(e)
        for b in iter_bits(e):
            degree[b] += 1

    def pop(e: int) -> None:
        for b in iter_bits(e):
            degree[b] -= 1
        state.remove(e)
        cur.pop()

    def dfs(code: tuple[int, ...], addable: list[int]) -> None:
        nonlocal nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > cfg.node_budget:
            exhausted = True
            return
        if len(cur) + len(addable) < best:
            return
        note_state(code)
        depth_limit = cfg.symmetry_depth
        if depth_limit is not None and len(cur) >= depth_limit:
            dfs_labeled(order_addable(addable))
            return
        # one representative extension per twin-orbit of addable edges;
        # products of twin swaps fix the current graph, so orbit-mates
        # produce isomorphic children
        if len(addable) > 1:
            twin = _twin_classes(n, cur)
            reps: dict[tuple[int, ...], int] = {}
            for e in order_addable(addable):
                key = tuple(sorted(twin[b] for b in iter_bits(e)))
                reps.setdefault(key, e)
            branch = list(reps.values())
        else:
            branch = list(addable)
        m = len(cur)
        for e in branch:
            push(e)
            child_addable = [f for f in addable if f != e and state.addable(f)]
            if m + 1 + len(child_addable) >= best:
                child = canonical_code(n, cur)
                if child not in visited:
                    visited.add(child)
                    dfs(child, child_addable)
            pop(e)
            if exhausted:
                return

    def dfs_labeled(rem: list[int]) -> None:
        nonlocal nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > cfg.node_budget:
            exhausted = True
            return
        note_state(None)
        m = len(cur)
        for i, e in enumerate(rem):
            if m + (len(rem) - i) < best:
                break
            push(e)
            new_rem = [f for f in rem[i + 1 :] if state.addable(f)]
            if m + 1 + len(new_rem) >= best:
                dfs_labeled(new_rem)
            pop(e)
            if exhausted:
                return

    visited.add(())
    dfs((), [e for e in candidates if state.addable(e)])
    runtime = time.perf_counter() - t0
    witnesses = [Hypergraph(n, r, code) for code in sorted(best_codes)]
    return ExtremalRecord(
        n=n,
        r=r,
        predicate=predicate,
        ell=ell,
        value=best,
        extremal_classes=len(best_codes),
        witnesses=witnesses,
        nodes_explored=nodes,
        runtime=runtime,
        complete=not exhausted,
        cap_hit=cap_hit,
    )


def uniqueness_check(record: ExtremalRecord, target: Hypergraph) -> bool:
    """True iff the search found exactly one extremal class, isomorphic to target."""
    if not record.complete:
        raise ValueError("uniqueness_check requires a complete search record")
    if record.extremal_classes != 1 or record.cap_hit:
        return False
    witness = record.witnesses[0]
    if witness.n != target.n or witness.r != target.r:
        return False
    return canonical_code(target.n, target.edges) == witness.edges


# ---------------------------------------------------------------------------
# Multiway cuts


EXACT_CUT_CEILING = 20
LOCAL_RESTARTS = 32


def _cut_value(adj: list[int], assign: list[int], nedges: int) -> int:
    internal = 0
    for v in range(len(assign)):
        av = adj[v]
        for b in iter_bits(av & ~((1 << (v + 1)) - 1)):
            if assign[b] == assign[v]:
                internal += 1
    return nedges - internal


def _descend(adj: list[int], assign: list[int], ell: int) -> None:
    """Strict single-vertex-move hill climbing; never empties a block."""
    n = len(assign)
    sizes = [0] * ell
    for b in assign:
        sizes[b] += 1
    improved = True
    while improved:
        improved = False
        for v in range(n):
            counts = [0] * ell
            for b in iter_bits(adj[v]):
                counts[assign[b]] += 1
            cur = counts[assign[v]]
            tgt = min(range(ell), key=lambda k: (counts[k], k))
            if counts[tgt] < cur:
                sizes[assign[v]] -= 1
                assign[v] = tgt
                sizes[tgt] += 1
                improved = True


def _fill_empty_blocks(adj: list[int], assign: list[int], ell: int) -> None:
    """Move highest-internal-degree vertices into empty blocks (never lowers the cut)."""
    n = len(assign)
    while True:
        sizes = [0] * ell
        for b in assign:
            sizes[b] += 1
        try:
            empty = next(k for k in range(ell) if sizes[k] == 0 and n >= ell)
        except StopIteration:
            return
        best_v, best_gain = None, -1
        for v in range(n):
            if sizes[assign[v]] < 2:
                continue
            gain = sum(1 for b in iter_bits(adj[v]) if assign[b] == assign[v])
            if gain > best_gain:
                best_v, best_gain = v, gain
        if best_v is None:
            return
        assign[best_v] = empty


def _greedy_assign(adj: list[int], n: int, ell: int) -> list[int]:
    assign = [0] * n
    for v in range(n):
        counts = [0] * ell
        for b in iter_bits(adj[v] & ((1 << v) - 1)):
            counts[assign[b]] += 1
        assign[v] = min(range(ell), key=lambda k: (counts[k], k))
    return assign


def _local_cut(adj: list[int], n: int, ell: int, nedges: int, seed: int) -> tuple[list[int], int]:
    rng = random.Random(seed)
    best_assign: Optional[list[int]] = None
    best_cut = -1
    for restart in range(LOCAL_RESTARTS):
        if restart == 0:
            assign = _greedy_assign(adj, n, ell)
        else:
            assign = [rng.randrange(ell) for _ in range(n)]
        _descend(adj, assign, ell)
        _fill_empty_blocks(adj, assign, ell)
        _descend(adj, assign, ell)
        cut = _cut_value(adj, assign, nedges)
        if cut > best_cut:
            best_cut = cut
            best_assign = assign
    assert best_assign is not None
    return best_assign, best_cut


def _exact_cut(adj: list[int], n: int, ell: int, nedges: int, seed: int) -> tuple[list[int], int]:
    """Branch and bound over block assignments with canonical block introduction."""
    seed_assign, seed_cut = _local_cut(adj, n, ell, nedges, seed)

    # static max-adjacency order so constraints bite early
    order: list[int] = []
    placed = 0
    degs = [adj[v].bit_count() for v in range(n)]
    while len(order) < n:
        best_v, best_k = -1, (-1, -1)
        for v in range(n):
            if placed & (1 << v):
                continue
            k = ((adj[v] & placed).bit_count(), degs[v])
            if k > best_k:
                best_v, best_k = v, k
        order.append(best_v)
        placed |= 1 << best_v
    suffix_pairs = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        later = 0
        for j in range(i + 1, n):
            later |= 1 << order[j]
        suffix_pairs[i] = suffix_pairs[i + 1] + (adj[order[i]] & later).bit_count()

    assign = [-1] * n
    cnt = [[0] * ell for _ in range(n)]  # assigned neighbors of v per block
    d_assigned = [0] * n
    best_cut = seed_cut
    best_assign = list(seed_assign)

    def bound(idx: int) -> int:
        opt = suffix_pairs[idx]
        for j in range(idx, n):
            v = order[j]
            opt += d_assigned[v] - min(cnt[v])
        return opt

    def rec(idx: int, cross: int, used: int) -> None:
        nonlocal best_cut, best_assign
        if idx == n:
            if cross > best_cut:
                best_cut = cross
                best_assign = list(assign)
            return
        if cross + bound(idx) <= best_cut:
            return
        v = order[idx]
        for b in range(min(used + 1, ell)):
            assign[v] = b
            gained = d_assigned[v] - cnt[v][b]
            for w in iter_bits(adj[v]):
                if assign[w] == -1:
                    cnt[w][b] += 1
                    d_assigned[w] += 1
            rec(idx + 1, cross + gained, max(used, b + 1))
            for w in iter_bits(adj[v]):
                if assign[w] == -1:
                    cnt[w][b] -= 1
                    d_assigned[w] -= 1
            assign[v] = -1

    rec(0, 0, 0)
    final = list(best_assign)
    _fill_empty_blocks(adj, final, ell)
    _descend(adj, final, ell)
    _fill_empty_blocks(adj, final, ell)
    cut = _cut_value(adj, final, nedges)
    assert cut >= best_cut
    return final, cut


def max_ell_cut(
    g: Hypergraph,
    ell: int,
    mode: str = "exact",
    seed: int = 0,
) -> tuple[Partition, int]:
    """Best ell-way cut of a graph: exact branch and bound, or local search.

    Local mode guarantees a vertex-move-optimal partition: for every vertex
    the internal degree is at most its degree into any other block.
    """
    if g.r != 2:
        raise ValueError("max_ell_cut expects a graph (r = 2)")
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if mode not in ("exact", "local"):
        raise ValueError(f"unknown mode {mode!r}")
    adj = adjacency_masks(g)
    if mode == "exact":
        if g.n > EXACT_CUT_CEILING:
            raise ValueError(f"exact mode supports n <= {EXACT_CUT_CEILING}, got {g.n}")
        assign, cut = _exact_cut(adj, g.n, ell, g.size, seed)
    else:
        assign, cut = _local_cut(adj, g.n, ell, g.size, seed)
    blocks: list[list[int]] = [[] for _ in range(ell)]
    for v0, b in enumerate(assign):
        blocks[b].append(v0 + 1)
    part = Partition(g.n, tuple(tuple(b) for b in blocks))
    return part, cut


def vertex_move_optimal(g: Hypergraph, part: Partition) -> bool:
    """Every vertex's internal degree is <= its degree into each other block."""
    adj = adjacency_masks(g)
    idx = part.block_index()
    ell = len(part.blocks)
    for v in range(g.n):
        counts = [0] * ell
        for b in iter_bits(adj[v]):
            counts[idx[b]] += 1
        own = counts[idx[v]]
        if any(counts[k] < own for k in range(ell)):
            return False
    return True
