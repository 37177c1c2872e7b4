"""Core hypergraph machinery against definition-level oracles."""

import itertools
import random

import pytest

from turanlab.hypergraph import (
    Hypergraph,
    all_r_subsets,
    auxiliary_graph,
    contains_clique,
    count_cliques,
    degree,
    format_hypergraph,
    is_subgraph,
    link,
    link_pair,
    mask_of,
    neighborhood,
    parse_hypergraph,
    shadow,
    vertices_of,
)
from turanlab.constructions import turan_hypergraph


def edge_sets(masks):
    return sorted(vertices_of(m) for m in masks)


def random_hypergraph(n, r, p, rng):
    edges = [m for m in all_r_subsets(n, r) if rng.random() < p]
    return Hypergraph(n, r, tuple(edges))


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, 3, [(1, 2, 4)])  # label out of range
    with pytest.raises(ValueError):
        Hypergraph(4, 3, (mask_of((1, 2)),))  # wrong edge size
    with pytest.raises(ValueError):
        Hypergraph(4, 3, (mask_of((1, 2, 3)), mask_of((1, 2, 3))))  # duplicate
    with pytest.raises(ValueError):
        Hypergraph(4, 1, ())  # uniformity too small


def test_shadow_examples():
    h = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    assert edge_sets(shadow(h)) == [(1, 2), (1, 3), (2, 3)]
    h = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4)])
    assert edge_sets(shadow(h)) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]
    assert shadow(Hypergraph(4, 3, ())) == frozenset()


def test_shadow_matches_direct_expansion():
    rng = random.Random(11)
    for _ in range(30):
        n, r = rng.choice([(6, 2), (7, 3), (8, 4)])
        h = random_hypergraph(n, r, 0.25, rng)
        expected = set()
        for e in h.edge_sets():
            for a in itertools.combinations(sorted(e), r - 1):
                expected.add(a)
        assert set(edge_sets(shadow(h))) == expected


def test_link_examples():
    h = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4)])
    assert edge_sets(link(h, (3, 4))) == [(1, 2)]
    h1 = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    assert edge_sets(link(h1, (1,))) == [(2, 3)]
    h2 = Hypergraph.from_edges(4, 3, [(1, 2, 3)])
    assert link(h2, (4,)) == frozenset()
    with pytest.raises(ValueError):
        link(h, ())


def test_link_pair_diagonal_convention():
    h = Hypergraph.from_edges(5, 3, [(1, 2, 3), (1, 2, 4), (1, 4, 5)])
    assert link_pair(h, 1, 1) == link(h, (1,))
    # definition round-trip: A in L(S) implies A + {s} is an edge for all s in S
    for s in [(1,), (2,), (1, 2), (3, 4)]:
        for a in link(h, s):
            for v in s:
                assert (a | (1 << (v - 1))) in h.edge_set()


def test_neighborhood_examples():
    h = Hypergraph.from_edges(4, 3, [(1, 2, 3), (1, 2, 4)])
    assert neighborhood(h, (1, 2)) == frozenset({3, 4})
    assert degree(h, (1, 2)) == 2
    assert neighborhood(h, (3, 4)) == frozenset()
    with pytest.raises(ValueError):
        neighborhood(h, (1,))


def test_degree_sum_identity():
    rng = random.Random(5)
    for _ in range(40):
        n, r = rng.choice([(7, 2), (8, 3), (9, 4), (12, 3)])
        h = random_hypergraph(n, r, 0.2, rng)
        total = sum(degree(h, vertices_of(t)) for t in shadow(h))
        assert total == r * h.size


def test_auxiliary_graph():
    h = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    g = auxiliary_graph(h)
    assert edge_sets(g.edges) == [(1, 2), (1, 3), (2, 3)]
    t = turan_hypergraph(6, 3, 3)
    g = auxiliary_graph(t)
    # complete 3-partite on the canonical blocks, nothing else
    blocks = [(1, 2), (3, 4), (5, 6)]
    expected = set()
    for b1, b2 in itertools.combinations(blocks, 2):
        for u in b1:
            for v in b2:
                expected.add(tuple(sorted((u, v))))
    assert set(edge_sets(g.edges)) == expected
    assert auxiliary_graph(Hypergraph(5, 3, ())).edges == ()


def count_cliques_oracle(g, i):
    adj = {v: set() for v in range(1, g.n + 1)}
    for e in g.edge_sets():
        u, v = sorted(e)
        adj[u].add(v)
        adj[v].add(u)
    total = 0
    for combo in itertools.combinations(range(1, g.n + 1), i):
        if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
            total += 1
    return total


def test_count_cliques_examples():
    k4 = Hypergraph.from_edges(4, 2, itertools.combinations(range(1, 5), 2))
    assert count_cliques(k4, 3) == 4
    c5 = Hypergraph.from_edges(5, 2, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    assert count_cliques(c5, 2) == 5
    assert count_cliques(c5, 3) == 0
    k222 = auxiliary_graph(turan_hypergraph(6, 3, 3))
    assert count_cliques(k222, 3) == 8
    # k_1 counts all vertices, isolated included; k_2 is the edge count
    g = Hypergraph.from_edges(6, 2, [(1, 2)])
    assert count_cliques(g, 1) == 6
    assert count_cliques(g, 2) == 1
    with pytest.raises(ValueError):
        count_cliques(g, 0)


def test_count_cliques_against_oracle():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(4, 9)
        g = random_hypergraph(n, 2, 0.45, rng)
        for i in range(1, 6):
            assert count_cliques(g, i) == count_cliques_oracle(g, i)


def test_contains_clique():
    k4 = Hypergraph.from_edges(4, 2, itertools.combinations(range(1, 5), 2))
    assert contains_clique(k4, 4)
    c5 = Hypergraph.from_edges(5, 2, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    assert not contains_clique(c5, 3)
    assert not contains_clique(Hypergraph(4, 2, ()), 2)
    rng = random.Random(9)
    for _ in range(25):
        g = random_hypergraph(rng.randint(4, 9), 2, 0.4, rng)
        for q in range(2, 6):
            assert contains_clique(g, q) == (count_cliques_oracle(g, q) > 0)


def test_is_subgraph():
    f = Hypergraph.from_edges(3, 3, [(1, 2, 3)])
    h = Hypergraph.from_edges(6, 3, [(4, 5, 6)])
    assert is_subgraph(f, h)
    two = Hypergraph.from_edges(6, 3, [(1, 2, 3), (4, 5, 6)])
    one = Hypergraph.from_edges(6, 3, [(1, 2, 3)])
    assert not is_subgraph(two, one)
    assert is_subgraph(turan_hypergraph(6, 3, 3), turan_hypergraph(9, 3, 3))
    with pytest.raises(ValueError):
        is_subgraph(Hypergraph(3, 2, ()), h)


def test_is_subgraph_respects_structure():
    # a path does not contain a triangle
    p4 = Hypergraph.from_edges(4, 2, [(1, 2), (2, 3), (3, 4)])
    k3 = Hypergraph.from_edges(3, 2, [(1, 2), (1, 3), (2, 3)])
    assert not is_subgraph(k3, p4)
    assert is_subgraph(p4, Hypergraph.from_edges(5, 2, [(1, 2), (2, 3), (3, 4), (4, 5)]))


def test_text_format_round_trip():
    t = turan_hypergraph(7, 3, 3)
    text = format_hypergraph(t, comment="balanced transversal")
    back = parse_hypergraph(text)
    assert back == t
    assert text.startswith("# balanced transversal\n7 3\n")


def test_text_format_tolerance_and_errors():
    h = parse_hypergraph("# comment\n\n  4 3  \n 3 2 1 # trailing\n1   2 4\n")
    assert h.n == 4 and h.size == 2
    with pytest.raises(ValueError, match="duplicate"):
        parse_hypergraph("3 3\n1 2 3\n3 2 1\n")
    with pytest.raises(ValueError):
        parse_hypergraph("3 3\n1 2\n")
    with pytest.raises(ValueError):
        parse_hypergraph("1 2 3\n")
    with pytest.raises(ValueError):
        parse_hypergraph("")
    with pytest.raises(ValueError):
        parse_hypergraph("3 3\n1 2 5\n")
