"""Structural predicates and inequality certificates for concrete instances.

Certificates never return a bare boolean: they carry every intermediate
quantity so a failed run is inspectable, and the reciprocal/ratio sums are
done in exact rational arithmetic so a pass is a pass.  The one floating
comparison (the fractional-power clique chain) uses a 1e-9 relative
tolerance.  Empty-shadow inputs short-circuit to a vacuous pass flagged in
the report.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .hypergraph import (
    Hypergraph,
    auxiliary_graph,
    contains_clique,
    count_cliques,
    iter_bits,
    mask_of,
    shadow,
    vertices_of,
)

_REL_TOL = 1e-9


@dataclass
class CertificateReport:
    """Named inequality check with all intermediate quantities.

    holds reflects the named comparison; witness is present iff holds is
    False; vacuous marks empty-shadow short-circuits.
    """

    name: str
    quantities: dict = field(default_factory=dict)
    holds: bool = True
    witness: Optional[object] = None
    vacuous: bool = False

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "vacuous": self.vacuous,
            "quantities": self.quantities,
            "witness": self.witness,
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _chunked(items: list, threads: int) -> list[list]:
    if threads <= 1 or len(items) <= 1:
        return [items]
    k = min(threads, len(items))
    size = (len(items) + k - 1) // k
    return [items[i : i + size] for i in range(0, len(items), size)]


def _run_chunks(fn, chunks: list[list], threads: int) -> list:
    """Apply fn to each chunk; results merge deterministically by chunk order."""
    if len(chunks) == 1:
        return [fn(chunks[0])]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


# ---------------------------------------------------------------------------
# Cancellativity


class _CancellativeState:
    """Incrementally maintained cancellativity of a growing/shrinking 3-graph.

    Tracks, for the current edge set S:
      pair_cov[P]  -- number of edges covering the pair P
      nbrs[T]      -- N(T) as a set of 0-based bits, for T in the shadow
      colink[P]    -- number of shadow pairs T with both ends of P in N(T)

    A triple E is addable iff no pair of E is co-neighbored (would become
    A (+) B inside E) and, for every pair T of E with new vertex w, no
    existing x in N(T) has the pair {w, x} covered (would give
    E (+) (T+{x}) inside a covering edge).
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.pair_cov: Counter = Counter()
        self.colink: Counter = Counter()
        self.nbrs: dict[int, set[int]] = {}

    @staticmethod
    def _pairs_of(e: int) -> list[tuple[int, int]]:
        """(pair mask, remaining-vertex bit) for each 2-subset of a triple."""
        b = list(iter_bits(e))
        return [
            ((1 << b[0]) | (1 << b[1]), b[2]),
            ((1 << b[0]) | (1 << b[2]), b[1]),
            ((1 << b[1]) | (1 << b[2]), b[0]),
        ]

    def addable(self, e: int) -> bool:
        pairs = self._pairs_of(e)
        for pm, _ in pairs:
            if self.colink.get(pm, 0):
                return False
        for pm, w in pairs:
            wb = 1 << w
            for x in self.nbrs.get(pm, ()):
                if self.pair_cov.get(wb | (1 << x), 0):
                    return False
        return True

    def add(self, e: int) -> None:
        for pm, w in self._pairs_of(e):
            cur = self.nbrs.setdefault(pm, set())
            wb = 1 << w
            for x in cur:
                self.colink[wb | (1 << x)] += 1
            cur.add(w)
            self.pair_cov[pm] += 1

    def remove(self, e: int) -> None:
        for pm, w in self._pairs_of(e):
            cur = self.nbrs[pm]
            cur.discard(w)
            wb = 1 << w
            for x in cur:
                self.colink[wb | (1 << x)] -= 1
            self.pair_cov[pm] -= 1


def cancellative_witness(h: Hypergraph, allow_any_r: bool = False) -> Optional[tuple]:
    """A violating (A, B, C) with A (+) B inside C, or None if cancellative."""
    if h.r != 3 and not allow_any_r:
        raise ValueError("cancellativity checks expect r = 3 (pass allow_any_r for the general scan)")
    if h.r == 3:
        # only pairs of edges sharing 2 vertices can violate; then superset-test A (+) B
        by_pair: dict[int, list[int]] = {}
        for e in h.edges:
            for pm, _ in _CancellativeState._pairs_of(e):
                by_pair.setdefault(pm, []).append(e)
        for pm, group in sorted(by_pair.items()):
            if len(group) < 2:
                continue
            for a, b in itertools.combinations(group, 2):
                d = a ^ b
                for c in by_pair.get(d, ()):
                    return (vertices_of(a), vertices_of(b), vertices_of(c))
                # d is a pair; any edge covering it works, and by_pair indexes pairs
        return None
    # general r: brute pair scan with superset test
    for a, b in itertools.combinations(h.edges, 2):
        d = a ^ b
        if d.bit_count() > h.r:
            continue
        for c in h.edges:
            if c != a and c != b and d & c == d:
                return (vertices_of(a), vertices_of(b), vertices_of(c))
    return None


def is_cancellative(h: Hypergraph, allow_any_r: bool = False) -> bool:
    """No three distinct edges A, B, C with the symmetric difference of A, B inside C."""
    return cancellative_witness(h, allow_any_r) is None


def is_k_free(h: Hypergraph, ell: int) -> bool:
    """Freeness of the pair-cover family via the auxiliary-graph clique shortcut."""
    if ell < h.r:
        raise ValueError(f"need ell >= r, got ell = {ell}, r = {h.r}")
    return not contains_clique(auxiliary_graph(h), ell + 1)


def is_k_free_direct(h: Hypergraph, ell: int) -> bool:
    """Cross-validation path: embed the minimal pair-cover members directly."""
    from .constructions import k_family
    from .hypergraph import is_subgraph

    fam = k_family(h.r, ell)
    return not any(is_subgraph(f, h) for f in fam.members)


def links_triangle_free(h: Hypergraph) -> bool:
    """Every vertex link of a 3-graph is triangle-free (a cancellativity consequence)."""
    if h.r != 3:
        raise ValueError("links_triangle_free expects r = 3")
    for v in range(1, h.n + 1):
        vb = 1 << (v - 1)
        link_edges = tuple(e ^ vb for e in h.edges if e & vb)
        if not link_edges:
            continue
        if contains_clique(Hypergraph(h.n, 2, link_edges), 3):
            return False
    return True


def neighborhoods_independent(h: Hypergraph) -> bool:
    """No edge meets any shadow neighborhood N(T) in two or more vertices."""
    if h.r != 3:
        raise ValueError("neighborhoods_independent expects r = 3")
    for t in shadow(h):
        nmask = 0
        for e in h.edges:
            if e & t == t:
                nmask |= e ^ t
        for e in h.edges:
            if (e & nmask).bit_count() >= 2:
                return False
    return True


# ---------------------------------------------------------------------------
# Link bookkeeping shared by the rational certificates


def _link_sets(h: Hypergraph) -> list[set[int]]:
    """links[v-1] = set of (r-1)-set masks A with A + {v} an edge."""
    links: list[set[int]] = [set() for _ in range(h.n)]
    for e in h.edges:
        for b in iter_bits(e):
            links[b].add(e ^ (1 << b))
    return links


def _pair_link_size(links: list[set[int]], u: int, v: int) -> int:
    """|L(u, v)| with the diagonal convention |L(u, u)| = |L(u)| (1-based u, v)."""
    if u == v:
        return len(links[u - 1])
    a, b = links[u - 1], links[v - 1]
    if len(a) > len(b):
        a, b = b, a
    return sum(1 for x in a if x in b)


def _shadow_neighborhoods(h: Hypergraph) -> dict[int, list[int]]:
    """shadow mask -> sorted 1-based labels of N(T)."""
    out: dict[int, list[int]] = {}
    for e in h.edges:
        for b in iter_bits(e):
            out.setdefault(e ^ (1 << b), []).append(b + 1)
    return {t: sorted(vs) for t, vs in out.items()}


# ---------------------------------------------------------------------------
# Certificates


def fisher_ryan_certificate(g: Hypergraph, ell: int) -> CertificateReport:
    """Clique-count chain: the normalized i-clique densities are monotone.

    c_i = (k_i / C(ell, i))^(1/i) must satisfy c_ell <= ... <= c_1 for a
    K_{ell+1}-free graph, within 1e-9 relative tolerance (k_i = 0 gives
    c_i = 0).  A K_{ell+1} in the input is a precondition failure.
    """
    if g.r != 2:
        raise ValueError("fisher_ryan_certificate expects a graph (r = 2)")
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if contains_clique(g, ell + 1):
        raise ValueError(f"precondition failed: graph contains K_{ell + 1}")
    ks = [count_cliques(g, i) for i in range(1, ell + 1)]
    cs = [0.0 if k == 0 else (k / comb(ell, i)) ** (1.0 / i) for i, k in enumerate(ks, start=1)]
    holds = True
    witness = None
    for i in range(ell - 1, 0, -1):  # compare c_{i+1} <= c_i, indices 1-based
        hi, lo = cs[i], cs[i - 1]
        if hi > lo * (1 + _REL_TOL) + 1e-12:
            holds = False
            witness = {"i": i + 1, "c_i": hi, "c_prev": lo}
            break
    return CertificateReport(
        name="fisher-ryan",
        quantities={"n": g.n, "ell": ell, "clique_counts": ks, "chain": cs},
        holds=holds,
        witness=witness,
    )


def link_count_identity(h: Hypergraph) -> CertificateReport:
    """Each ordered pair lies in exactly |L(u, v)| of the neighborhoods N(T).

    The left side is tallied from shadow neighborhoods, the right side from
    per-vertex link-set intersections, so the two sides really are computed
    along different paths.  Holds for every 3-graph, cancellative or not.
    """
    if h.r != 3:
        raise ValueError("link_count_identity expects r = 3")
    counts: Counter = Counter()
    for t, nbrs in _shadow_neighborhoods(h).items():
        for u in nbrs:
            for v in nbrs:
                counts[(u, v)] += 1
    links = _link_sets(h)
    mismatch = None
    for u in range(1, h.n + 1):
        for v in range(1, h.n + 1):
            lhs = counts.get((u, v), 0)
            rhs = _pair_link_size(links, u, v)
            if lhs != rhs:
                mismatch = {"u": u, "v": v, "containment_count": lhs, "link_size": rhs}
                break
        if mismatch:
            break
    return CertificateReport(
        name="link-count",
        quantities={
            "n": h.n,
            "edges": h.size,
            "shadow": len(shadow(h)),
            "ordered_pairs_checked": h.n * h.n,
        },
        holds=mismatch is None,
        witness=mismatch,
    )


def inequality2_certificate(h: Hypergraph, threads: int = 1) -> CertificateReport:
    """Reciprocal pair-link sum over shadow neighborhoods vs n^2 - 2|shadow|.

    Exact rational sum of 1/|L(u, v)| over T in the shadow and ordered
    (u, v) in N(T)^2; every |L(u, v)| >= 1 because T itself lies in it.
    """
    if h.r != 3:
        raise ValueError("inequality2_certificate expects r = 3")
    if not is_cancellative(h):
        raise ValueError("precondition failed: input is not cancellative")
    sh = _shadow_neighborhoods(h)
    if not sh:
        return CertificateReport(
            name="inequality2",
            quantities={"n": h.n, "edges": 0, "shadow": 0},
            holds=True,
            vacuous=True,
        )
    links = _link_sets(h)

    def tally(ts: list[int]) -> Counter:
        hist: Counter = Counter()
        for t in ts:
            nbrs = sh[t]
            for u in nbrs:
                for v in nbrs:
                    size = _pair_link_size(links, u, v)
                    assert size >= 1, "T itself always lies in L(u, v)"
                    hist[size] += 1
        return hist

    hist: Counter = Counter()
    for part in _run_chunks(tally, _chunked(sorted(sh), threads), threads):
        hist.update(part)
    lhs = sum((Fraction(cnt, size) for size, cnt in sorted(hist.items())), Fraction(0))
    rhs = h.n * h.n - 2 * len(sh)
    holds = lhs <= rhs
    return CertificateReport(
        name="inequality2",
        quantities={
            "n": h.n,
            "edges": h.size,
            "shadow": len(sh),
            "lhs": _frac_str(lhs),
            "lhs_float": float(lhs),
            "rhs": rhs,
        },
        holds=holds,
        witness=None if holds else {"lhs": _frac_str(lhs), "rhs": rhs},
    )


def theorem13_certificate(h: Hypergraph, threads: int = 1) -> CertificateReport:
    """Shadow-ratio chain bounding a cancellative 3-graph's size.

    With z = (3|H|/|shadow|) / (n - 3|H|/|shadow|), certifies the full
    chain down to 27|H| <= n^3 plus the sharp balanced-partition bound
    |H| <= t_3(n, 3); all comparisons in exact rationals.
    """
    if h.r != 3:
        raise ValueError("theorem13_certificate expects r = 3")
    if not is_cancellative(h):
        raise ValueError("precondition failed: input is not cancellative")
    sh = _shadow_neighborhoods(h)
    if not sh:
        return CertificateReport(
            name="theorem13",
            quantities={"n": h.n, "edges": 0, "shadow": 0},
            holds=True,
            vacuous=True,
        )
    from .constructions import turan_count

    n = h.n
    m = h.size
    s = len(sh)
    degree_sum = sum(len(v) for v in sh.values())
    checks: dict[str, bool] = {}
    checks["degree_sum_is_3_edges"] = degree_sum == 3 * m

    q = Fraction(3 * m, s)
    z = q / (n - q)
    hist_d: Counter = Counter(len(v) for v in sh.values())
    mantel_sum = sum(
        (cnt * Fraction(4 * d * d, (n - d) ** 2) for d, cnt in sorted(hist_d.items())),
        Fraction(0),
    )
    rhs = n * n - 2 * s
    checks["mantel_sum_le_rhs"] = mantel_sum <= rhs
    jensen_lhs = 4 * z * z * s
    checks["jensen_step"] = jensen_lhs <= mantel_sum
    checks["shadow_bound"] = s <= Fraction(n * n, 1) / (2 * (2 * z * z + 1))
    size_bound = z * n**3 / (6 * (z + 1) * (2 * z * z + 1))
    checks["size_bound"] = m <= size_bound
    checks["cube_bound"] = 27 * m <= n**3
    t3 = turan_count(n, 3, 3)
    checks["turan_bound"] = m <= t3
    holds = all(checks.values())
    failed = sorted(k for k, v in checks.items() if not v)
    return CertificateReport(
        name="theorem13",
        quantities={
            "n": n,
            "edges": m,
            "shadow": s,
            "z": _frac_str(z),
            "z_float": float(z),
            "mantel_sum": _frac_str(mantel_sum),
            "rhs": rhs,
            "size_bound_float": float(size_bound),
            "turan_value": t3,
            "checks": {k: bool(v) for k, v in checks.items()},
        },
        holds=holds,
        witness=None if holds else {"failed_checks": failed},
    )


def mantel_link_bound(h: Hypergraph, threads: int = 1) -> CertificateReport:
    """Pair links avoid N(T), stay triangle-free, and obey the Mantel cap.

    For every T in the shadow and ordered (u, v) in N(T)^2:
    the vertex set of L(u, v) misses N(T), L(u, v) is triangle-free, and
    4|L(u, v)| <= (n - d(T))^2.
    """
    if h.r != 3:
        raise ValueError("mantel_link_bound expects r = 3")
    if not is_cancellative(h):
        raise ValueError("precondition failed: input is not cancellative")
    sh = _shadow_neighborhoods(h)
    if not sh:
        return CertificateReport(
            name="mantel-link",
            quantities={"n": h.n, "edges": 0, "shadow": 0},
            holds=True,
            vacuous=True,
        )
    links = _link_sets(h)

    pair_link_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def pair_link(u: int, v: int) -> tuple[int, ...]:
        key = (u, v) if u <= v else (v, u)
        got = pair_link_cache.get(key)
        if got is None:
            if u == v:
                got = tuple(sorted(links[u - 1]))
            else:
                got = tuple(sorted(links[u - 1] & links[v - 1]))
            pair_link_cache[key] = got
        return got

    tf_cache: dict[tuple[int, ...], bool] = {}

    def check(ts: list[int]) -> tuple[int, int, Optional[dict]]:
        checked = 0
        max_link = 0
        for t in ts:
            nbrs = sh[t]
            d = len(nbrs)
            nmask = mask_of(nbrs)
            cap = (h.n - d) ** 2
            for u in nbrs:
                for v in nbrs:
                    lg = pair_link(u, v)
                    checked += 1
                    size = len(lg)
                    max_link = max(max_link, size)
                    support = 0
                    for a in lg:
                        support |= a
                    if support & nmask:
                        return checked, max_link, {
                            "kind": "link_meets_neighborhood",
                            "T": vertices_of(t),
                            "pair": [u, v],
                        }
                    if lg not in tf_cache:
                        tf_cache[lg] = not contains_clique(Hypergraph(h.n, 2, lg), 3)
                    if not tf_cache[lg]:
                        return checked, max_link, {
                            "kind": "link_not_triangle_free",
                            "T": vertices_of(t),
                            "pair": [u, v],
                        }
                    if 4 * size > cap:
                        return checked, max_link, {
                            "kind": "mantel_cap",
                            "T": vertices_of(t),
                            "pair": [u, v],
                            "link_size": size,
                            "cap": cap / 4,
                        }
        return checked, max_link, None

    checked = 0
    max_link = 0
    witness = None
    for c, ml, w in _run_chunks(check, _chunked(sorted(sh), threads), threads):
        checked += c
        max_link = max(max_link, ml)
        if w is not None and witness is None:
            witness = w
    return CertificateReport(
        name="mantel-link",
        quantities={
            "n": h.n,
            "edges": h.size,
            "shadow": len(sh),
            "pairs_checked": checked,
            "max_pair_link": max_link,
        },
        holds=witness is None,
        witness=witness,
    )
