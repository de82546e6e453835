from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from oracles import min_noncrossing_bruteforce
from fanorainbow.coloring import Coloring
from fanorainbow.errors import InternalConsistencyError
from fanorainbow.hypergraph import (
    Bipartition,
    Hypergraph3,
    build_bn,
    build_complete,
    link_graph,
    random_hypergraph,
)
from fanorainbow.stability import (
    KEE_DELTA_MAX,
    check_kee_stability,
    check_sizes_lemma,
    classify_abundant_colors,
    edge_disjoint_k4_packing,
    is_k4_packing,
    max_monochromatic_matching,
    min_noncrossing_bipartition,
    three_colored_triples,
)


def test_bipartition_examples():
    h, p = build_bn(10)
    res = min_noncrossing_bipartition(h)
    assert res.noncrossing == 0
    assert {res.partition.part_a, res.partition.part_b} == {p.part_a, p.part_b}
    res = min_noncrossing_bipartition(build_complete(6))
    assert res.noncrossing == 2 and res.partition.sizes() == (3, 3)
    assert min_noncrossing_bipartition(Hypergraph3(6, 0)).noncrossing == 0
    assert min_noncrossing_bipartition(Hypergraph3(6, 0), "localsearch").noncrossing == 0


@pytest.mark.parametrize("seed", range(10))
def test_bipartition_against_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 11))
    h = random_hypergraph(n, float(rng.uniform(0, 1)), rng)
    want = min_noncrossing_bruteforce(n, h.edges)
    assert min_noncrossing_bipartition(h).noncrossing == want
    assert min_noncrossing_bipartition(h, "localsearch", seed=seed).noncrossing >= want
    assert min_noncrossing_bipartition(h, threads=3) == min_noncrossing_bipartition(h)


def test_localsearch_seeded():
    h = random_hypergraph(14, 0.5, np.random.default_rng(0))
    a = min_noncrossing_bipartition(h, "localsearch", seed=4)
    assert a == min_noncrossing_bipartition(h, "localsearch", seed=4)
    assert 0 in a.partition.part_a
    with pytest.raises(ValueError):
        min_noncrossing_bipartition(h, "annealing")


def test_sizes_examples():
    h, p = build_bn(16)
    rep = check_sizes_lemma(h, p, Fraction(1, 100))
    assert rep.applicable and rep.hypothesis_holds and rep.conclusion_holds
    skew = Bipartition(16, frozenset(range(12)))
    rep = check_sizes_lemma(h, skew, Fraction(1, 10000))
    assert not rep.hypothesis_holds and not rep.conclusion_holds
    # n = 16 is below 1/sqrt(delta) = 100, so the side condition fails as well
    assert not rep.applicable
    k9 = build_complete(9)
    rep = check_sizes_lemma(k9, Bipartition(9, frozenset(range(5))), Fraction(1, 20))
    crossing = sum(1 for e in combinations(range(9), 3) if 0 < sum(v < 5 for v in e) < 3)
    assert rep.crossing == crossing == 70
    assert rep.hypothesis_holds == (crossing >= 70 - Fraction(1, 20) * 729)
    assert rep.conclusion_holds == ((5 - 4.5) ** 2 <= 4 * 0.05 * 81)


def test_kee_examples():
    b8, _ = build_bn(8)
    rep = check_kee_stability(b8, KEE_DELTA_MAX)
    assert rep.applicable and rep.bound_holds and rep.partition.noncrossing == 0
    three = b8.without_edges(b8.edges[:3])
    rep = check_kee_stability(three, KEE_DELTA_MAX)
    assert rep.applicable == (45 >= 48 - KEE_DELTA_MAX * 512)
    assert not rep.applicable
    rep = check_kee_stability(three, KEE_DELTA_MAX, ex_value=45)
    assert rep.applicable and rep.bound_holds
    rep = check_kee_stability(build_complete(7), KEE_DELTA_MAX)
    assert not rep.applicable and not rep.fano_free
    with pytest.raises(ValueError):
        check_kee_stability(b8, Fraction(1, 10))


def _coloring(h, rng, r):
    return Coloring(h, r, tuple(int(x) for x in rng.integers(1, r + 1, h.num_edges)))


def test_monochromatic_matching_examples():
    h = Hypergraph3.from_edges(7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)])
    c = Coloring.constant(h, 2)
    assert max_monochromatic_matching(link_graph(h, 0), c, 1, range(7))[0] == 3
    tri = Hypergraph3.from_edges(4, [(0, 1, 2), (0, 2, 3), (0, 1, 3)])
    assert max_monochromatic_matching(link_graph(tri, 0), Coloring.constant(tri, 1), 1, range(4))[0] == 1
    path = Hypergraph3.from_edges(6, [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5)])
    assert max_monochromatic_matching(link_graph(path, 0), Coloring.constant(path, 1), 1, range(6))[0] == 2
    assert max_monochromatic_matching(link_graph(path, 0), Coloring.constant(path, 2, 2), 1, range(6))[0] == 0


def test_abundance_examples():
    b8, p = build_bn(8)
    ab = classify_abundant_colors(b8, Coloring.constant(b8, 3), 0, p, Fraction(1, 100))
    # the link of 0 in B_8 has no edge inside its own class but all 6 pairs of the other
    assert ab.class_edges["X"] == [] and len(ab.class_edges["Y"]) == 6
    assert ab.abundant == {"X": [], "Y": [1]}
    assert ab.rare_edges == {"X": [], "Y": []}
    k8 = build_complete(8)
    p = Bipartition(8, frozenset(range(4)))
    ab = classify_abundant_colors(k8, Coloring.constant(k8, 1), 0, p, Fraction(1, 8))
    assert ab.threshold == 1 and ab.abundant == {"X": [1], "Y": [1]}
    rb = Coloring(k8, k8.num_edges, tuple(range(1, k8.num_edges + 1)))
    ab = classify_abundant_colors(k8, rb, 0, p, Fraction(1, 4))
    assert ab.abundant == {"X": [], "Y": []}
    assert len(ab.rare_edges["X"]) == 3 and len(ab.rare_edges["Y"]) == 6


def test_abundance_antitone_in_xi():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(6, 12))
        h = random_hypergraph(n, 0.7, rng)
        c = _coloring(h, rng, 3)
        p = Bipartition(n, frozenset(int(v) for v in rng.permutation(n)[: n // 2]))
        prev = None
        for k in range(1, 6):
            ab = classify_abundant_colors(h, c, 0, p, Fraction(k, 10))
            cur = {z: set(v) for z, v in ab.abundant.items()}
            if prev is not None:
                assert all(cur[z] <= prev[z] for z in cur)
            prev = cur


def _all_valid_triples(h, c, v, p):
    """Every 3-set of pairwise disjoint link edges with 3 colors, one in X and one in Y."""
    link = link_graph(h, v)
    x = set(p.part_a) - {v}
    y = set(p.part_b) - {v}
    ex = link.within(x)
    ey = link.within(y)
    pool = ex + ey
    out = set()
    for t in combinations(pool, 3):
        vs = [u for e in t for u in e]
        if len(set(vs)) < 6:
            continue
        if not any(e in ex for e in t) or not any(e in ey for e in t):
            continue
        if len({c.color_of((v,) + e) for e in t}) == 3:
            out.add(frozenset(t))
    return out


def test_triples_sound_and_below_exhaustive():
    rng = np.random.default_rng(3)
    for i in range(30):
        n = int(rng.integers(7, 11))
        h = random_hypergraph(n, float(rng.uniform(0.6, 1.0)), rng)
        c = _coloring(h, rng, int(rng.integers(1, 6)))
        p = Bipartition(n, frozenset(int(u) for u in rng.permutation(n)[: n // 2]))
        rep = three_colored_triples(h, c, 0, p, Fraction(1, 10 + i % 3))
        allowed = _all_valid_triples(h, c, 0, p)
        got = {frozenset(t) for t in rep.triples}
        assert len(got) == len(rep.triples)
        assert got <= allowed
        for t in rep.triples:
            assert set(t) <= set(rep.matching)


def test_triples_product_construction():
    # three disjoint monochromatic matchings: two colors in X, one in Y
    n = 14
    part = Bipartition(n, frozenset(range(1, 8)))
    xs = [(1, 2), (3, 4)]
    x2 = [(5, 6)]
    ys = [(8, 9), (10, 11), (12, 13)]
    colors = {}
    for e in xs:
        colors[(0,) + e] = 1
    for e in x2:
        colors[(0,) + e] = 2
    for e in ys:
        colors[(0,) + e] = 3
    h = Hypergraph3.from_edges(n, list(colors))
    c = Coloring.from_map(h, 3, colors)
    rep = three_colored_triples(h, c, 0, part, Fraction(1, n))
    assert rep.case == "1"
    assert rep.size >= 2 * 1 * 3


def test_k4_examples():
    k4 = list(combinations(range(4), 2))
    assert edge_disjoint_k4_packing(4, k4) == [(0, 1, 2, 3)]
    k5 = list(combinations(range(5), 2))
    pk = edge_disjoint_k4_packing(5, k5)
    assert len(pk) == 1 and is_k4_packing(5, k5, pk)
    # a complete bipartite graph is K4-free and has at most n^2/4 edges
    kb = [(u, w) for u in range(5) for w in range(5, 10)]
    assert edge_disjoint_k4_packing(10, kb) == []


def test_k4_missing_is_internal_error(monkeypatch):
    import fanorainbow.stability as st

    monkeypatch.setattr(st, "_find_k4", lambda adj: None)
    with pytest.raises(InternalConsistencyError):
        st.edge_disjoint_k4_packing(4, list(combinations(range(4), 2)))


def test_k4_packing_validity_random():
    rng = np.random.default_rng(6)
    for _ in range(200):
        n = int(rng.integers(4, 14))
        pairs = list(combinations(range(n), 2))
        k = int(rng.integers(0, len(pairs) + 1))
        edges = [pairs[j] for j in rng.permutation(len(pairs))[:k]]
        pk = edge_disjoint_k4_packing(n, edges)
        assert is_k4_packing(n, edges, pk)
        assert 3 * (len(edges) - 6 * len(pk)) <= n * n
