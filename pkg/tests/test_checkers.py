"""Predicates and inequality certificates on spec instances and random runs."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from turanlab.checkers import (
    cancellative_witness,
    fisher_ryan_certificate,
    inequality2_certificate,
    is_cancellative,
    is_k_free,
    is_k_free_direct,
    link_count_identity,
    links_triangle_free,
    mantel_link_bound,
    neighborhoods_independent,
    theorem13_certificate,
)
from turanlab.constructions import (
    k_family,
    perturb,
    random_maximal_cancellative,
    turan_hypergraph,
)
from turanlab.hypergraph import (
    Hypergraph,
    all_r_subsets,
    auxiliary_graph,
    contains_clique,
    count_cliques,
    mask_of,
    vertices_of,
)
from turanlab.stability import greedy_clique_removal


def random_hypergraph(n, r, p, rng):
    return Hypergraph(n, r, tuple(m for m in all_r_subsets(n, r) if rng.random() < p))


def all_cancellative_on_5():
    triples = all_r_subsets(5, 3)
    out = []
    for bits in range(1 << len(triples)):
        edges = tuple(t for i, t in enumerate(triples) if bits >> i & 1)
        h = Hypergraph(5, 3, edges)
        if is_cancellative(h):
            out.append(h)
    return out


def test_is_cancellative_examples():
    bad = Hypergraph.from_edges(5, 3, [(1, 2, 3), (1, 2, 4), (3, 4, 5)])
    w = cancellative_witness(bad)
    assert w is not None
    a, b, c = (set(t) for t in w)
    assert (a ^ b) <= c
    assert is_cancellative(turan_hypergraph(6, 3, 3))
    assert is_cancellative(Hypergraph.from_edges(3, 3, [(1, 2, 3)]))
    with pytest.raises(ValueError):
        is_cancellative(Hypergraph.from_edges(3, 2, [(1, 2)]))
    # general-r scan agrees on r=3 inputs
    assert not is_cancellative(bad, allow_any_r=True)


def test_cancellative_equals_neighborhoods_independent():
    # the witness instance has 3, 4 co-neighbored at T = {1,2} and covered by an edge
    bad = Hypergraph.from_edges(5, 3, [(1, 2, 3), (1, 2, 4), (3, 4, 5)])
    assert not neighborhoods_independent(bad)
    # exhaustive on 5 vertices, then random at larger n
    for h in all_cancellative_on_5():
        assert neighborhoods_independent(h)
    rng = random.Random(17)
    checked_diff = 0
    for _ in range(300):
        h = random_hypergraph(rng.randint(4, 9), 3, rng.uniform(0.05, 0.3), rng)
        assert is_cancellative(h) == neighborhoods_independent(h)
        checked_diff += 1
    assert checked_diff == 300


def test_cancellative_implies_links_triangle_free():
    lemma_instance = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4), (1, 3, 4)])
    assert not links_triangle_free(lemma_instance)  # triangle in the link of 1
    assert links_triangle_free(Hypergraph(4, 3, ()))
    rng = random.Random(23)
    for _ in range(200):
        h = random_hypergraph(rng.randint(4, 9), 3, rng.uniform(0.05, 0.3), rng)
        if is_cancellative(h):
            assert links_triangle_free(h)


def test_is_k_free_examples():
    t9 = turan_hypergraph(9, 3, 3)
    assert is_k_free(t9, 3)
    # adding any absent triple creates a forbidden configuration
    present = t9.edge_set()
    for e in all_r_subsets(9, 3):
        if e not in present:
            assert not is_k_free(Hypergraph(9, 3, t9.edges + (e,)), 3)
    single = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    assert is_k_free(single, 3)


def test_is_k_free_cross_validation():
    rng = random.Random(31)
    fam_cache = {}
    for _ in range(120):
        n = rng.randint(4, 7)
        h = random_hypergraph(n, 3, rng.uniform(0.05, 0.35), rng)
        assert is_k_free(h, 3) == is_k_free_direct(h, 3)
    # ell = 4 on hosts up to 6 vertices, against the capped family
    fam = k_family(3, 4, max_vertices=6)
    from turanlab.hypergraph import is_subgraph

    for _ in range(60):
        h = random_hypergraph(6, 3, rng.uniform(0.1, 0.5), rng)
        direct = not any(is_subgraph(f, h) for f in fam.members)
        assert is_k_free(h, 4) == direct


def test_is_k_free_matches_pair_coverage_scan():
    # independent oracle: an (ell+1)-set with all pairs covered
    rng = random.Random(37)
    for _ in range(120):
        n = rng.randint(5, 7)
        ell = rng.choice([3, 4])
        h = random_hypergraph(n, 3, rng.uniform(0.1, 0.5), rng)
        covered_somewhere = False
        for s in itertools.combinations(range(1, n + 1), ell + 1):
            if all(
                any(mask_of(p) & e == mask_of(p) for e in h.edges)
                for p in itertools.combinations(s, 2)
            ):
                covered_somewhere = True
                break
        assert is_k_free(h, ell) == (not covered_somewhere)


def test_fisher_ryan_examples():
    for ell in (2, 3, 4):
        kl = Hypergraph.from_edges(ell, 2, itertools.combinations(range(1, ell + 1), 2))
        rep = fisher_ryan_certificate(kl, ell)
        assert rep.holds
        assert all(abs(c - 1.0) < 1e-12 for c in rep.quantities["chain"])
    c5 = Hypergraph.from_edges(5, 2, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    rep = fisher_ryan_certificate(c5, 2)
    assert rep.holds
    assert abs(rep.quantities["chain"][1] - math.sqrt(5)) < 1e-12
    assert abs(rep.quantities["chain"][0] - 2.5) < 1e-12
    k222 = auxiliary_graph(turan_hypergraph(6, 3, 3))
    rep = fisher_ryan_certificate(k222, 3)
    assert rep.holds
    assert all(abs(c - 2.0) < 1e-12 for c in rep.quantities["chain"])
    k4 = Hypergraph.from_edges(4, 2, itertools.combinations(range(1, 5), 2))
    with pytest.raises(ValueError):
        fisher_ryan_certificate(k4, 3)


def test_fisher_ryan_random_free_graphs():
    rng = random.Random(41)
    for _ in range(150):
        ell = rng.choice([2, 3, 4])
        n = rng.randint(4, 12)
        g = random_hypergraph(n, 2, rng.uniform(0.2, 0.6), rng)
        gfree, _ = greedy_clique_removal(g, ell)
        rep = fisher_ryan_certificate(gfree, ell)
        assert rep.holds, rep.quantities


def test_link_count_identity():
    h = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4)])
    rep = link_count_identity(h)
    assert rep.holds
    rng = random.Random(43)
    for _ in range(250):
        h = random_hypergraph(rng.randint(3, 9), 3, rng.uniform(0.05, 0.5), rng)
        assert link_count_identity(h).holds


def test_inequality2_tight_single_triple():
    h = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    rep = inequality2_certificate(h)
    assert rep.holds
    assert rep.quantities["lhs"] == "3/1"
    assert rep.quantities["rhs"] == 3


def test_inequality2_on_structured_and_random():
    assert inequality2_certificate(turan_hypergraph(6, 3, 3)).holds
    assert inequality2_certificate(turan_hypergraph(9, 3, 3)).holds
    for seed in range(5):
        h = random_maximal_cancellative(9, seed)
        assert inequality2_certificate(h).holds
    with pytest.raises(ValueError):
        inequality2_certificate(
            Hypergraph.from_edges(5, 3, [(1, 2, 3), (1, 2, 4), (3, 4, 5)])
        )
    rep = inequality2_certificate(Hypergraph(4, 3, ()))
    assert rep.holds and rep.vacuous


def test_theorem13_certificate():
    t9 = turan_hypergraph(9, 3, 3)
    rep = theorem13_certificate(t9)
    assert rep.holds
    # hand oracle: 3|H|/|shadow| = 3, so z = 3/(9-3) = 1/2, where
    # z/(6(z+1)(2z^2+1)) attains its maximum 1/27 and the size bound is tight
    assert rep.quantities["z"] == "1/2"
    assert rep.quantities["size_bound_float"] == 27.0
    assert rep.quantities["edges"] == 27 == (9 // 3) ** 3
    single = theorem13_certificate(Hypergraph.from_edges(3, 3, [(1, 2, 3)]))
    assert single.holds
    assert single.quantities["z"] == "1/2"
    for seed in range(4):
        assert theorem13_certificate(random_maximal_cancellative(8, seed)).holds
    rep = theorem13_certificate(Hypergraph(3, 3, ()))
    assert rep.holds and rep.vacuous


def test_mantel_link_bound():
    t9 = turan_hypergraph(9, 3, 3)
    rep = mantel_link_bound(t9)
    assert rep.holds
    assert rep.quantities["max_pair_link"] == 9  # (n - d)^2 / 4 = 9, attained
    single = mantel_link_bound(Hypergraph.from_edges(3, 3, [(1, 2, 3)]))
    assert single.holds
    assert single.quantities["max_pair_link"] == 1
    assert mantel_link_bound(Hypergraph(4, 3, ())).vacuous
    for seed in range(4):
        assert mantel_link_bound(random_maximal_cancellative(8, seed)).holds


def test_certificates_on_all_cancellative_5_vertex():
    for h in all_cancellative_on_5():
        assert inequality2_certificate(h).holds
        assert theorem13_certificate(h).holds
        assert mantel_link_bound(h).holds


def test_certificates_thread_count_invariance():
    h = turan_hypergraph(9, 3, 3)
    base = inequality2_certificate(h, threads=1)
    for t in (2, 4):
        rep = inequality2_certificate(h, threads=t)
        assert rep.to_json_dict() == base.to_json_dict()
    base = mantel_link_bound(h, threads=1)
    assert mantel_link_bound(h, threads=4).to_json_dict() == base.to_json_dict()


def test_witness_present_iff_fails():
    good = inequality2_certificate(turan_hypergraph(6, 3, 3))
    assert good.holds and good.witness is None
    bad_links = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4), (1, 3, 4)])
    w = cancellative_witness(bad_links)
    assert w is not None


def test_incremental_state_matches_direct_checker():
    from turanlab.checkers import _CancellativeState

    rng = random.Random(59)
    for _ in range(40):
        n = rng.randint(4, 8)
        state = _CancellativeState(n)
        current = []
        pool = list(all_r_subsets(n, 3))
        rng.shuffle(pool)
        for e in pool[: len(pool) // 2]:
            ok = state.addable(e)
            direct = is_cancellative(Hypergraph(n, 3, tuple(current + [e])))
            assert ok == direct, (n, current, e)
            if ok:
                state.add(e)
                current.append(e)
                if rng.random() < 0.25 and current:
                    victim = rng.choice(current)
                    state.remove(victim)
                    current.remove(victim)
