from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import density_bruteforce, regular_bruteforce
from fanorainbow.coloring import Coloring
from fanorainbow.fano import FANO_LINES
from fanorainbow.hypergraph import Hypergraph3, build_bn, build_complete, random_hypergraph
from fanorainbow.regularity import (
    ClusterHypergraph,
    EquitablePartition,
    beta,
    cluster_hypergraph,
    density,
    greedy_rainbow_assignment,
    is_colored_subhypergraph,
    is_eps_regular,
)


def test_density_examples():
    h = Hypergraph3.from_edges(3, [(0, 1, 2)])
    assert density(h, [0], [1], [2]) == 1
    assert density(build_complete(9), [0, 1], [2, 3, 4], [5]) == 1
    b8, _ = build_bn(8)
    assert density(b8, [0], [1], [5]) == 1
    assert density(b8, [0], [1], [2]) == 0
    with pytest.raises(ValueError):
        density(b8, [0], [0], [1])


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_density_symmetric(seed):
    rng = np.random.default_rng(seed)
    h = random_hypergraph(9, 0.5, rng)
    w = [list(range(0, 3)), list(range(3, 6)), list(range(6, 9))]
    d = density(h, *w)
    assert d == density(h, w[2], w[0], w[1]) == density(h, w[1], w[2], w[0])
    assert d == Fraction(*density_bruteforce(set(h.edges), *w))


def test_planted_irregular():
    v = [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]]
    h = Hypergraph3.from_edges(12, [(a, b, c) for a in (0, 1) for b in (4, 5) for c in v[2]])
    rep = is_eps_regular(h, *v, Fraction(1, 10))
    assert rep.status == "irregular" and rep.regular is False
    assert rep.to_json()["witness"]["max"]


@pytest.mark.parametrize("seed", range(8))
def test_exhaustive_against_bruteforce(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    h = random_hypergraph(3 * k, float(rng.uniform(0.2, 0.9)), rng)
    v = [list(range(i * k, (i + 1) * k)) for i in range(3)]
    for eps in (Fraction(1, 20), Fraction(1, 5), Fraction(1, 2)):
        assert is_eps_regular(h, *v, eps).regular == regular_bruteforce(set(h.edges), *v, eps)


def test_monotone_in_eps():
    rng = np.random.default_rng(5)
    for _ in range(10):
        h = random_hypergraph(12, 0.5, rng)
        v = [list(range(0, 4)), list(range(4, 8)), list(range(8, 12))]
        verdicts = [is_eps_regular(h, *v, Fraction(e, 100)).regular for e in (1, 5, 10, 20, 40, 80)]
        # once regular, regular for every larger eps
        assert verdicts == sorted(verdicts)


def test_sampled_mode():
    v = [list(range(i * 9, i * 9 + 9)) for i in range(3)]
    full = Hypergraph3.from_edges(27, [(a, b, c) for a in v[0] for b in v[1] for c in v[2]])
    rep = is_eps_regular(full, *v, Fraction(1, 10), seed=1, samples=500)
    assert rep.status == "not_refuted" and rep.regular is None and rep.method != "exhaustive"
    half = Hypergraph3.from_edges(27, [(a, b, c) for a in v[0][:5] for b in v[1] for c in v[2]])
    rep = is_eps_regular(half, *v, Fraction(1, 10), seed=1, samples=2000)
    assert rep.status == "irregular"
    again = is_eps_regular(half, *v, Fraction(1, 10), seed=1, samples=2000)
    assert again == rep


def test_cluster_examples():
    v = [list(range(i * 2, i * 2 + 2)) for i in range(3)]
    h = Hypergraph3.from_edges(6, [(a, b, c) for a in v[0] for b in v[1] for c in v[2]])
    p = EquitablePartition.consecutive(6, 3)
    cl = cluster_hypergraph(h, Coloring.constant(h, 1), p, Fraction(1, 10), Fraction(1, 2))
    assert cl.lists == {(0, 1, 2): (1,)}
    two = Coloring(h, 2, (1, 2) * 4)
    cl = cluster_hypergraph(h, two, p, Fraction(1, 2), Fraction(1, 4))
    assert cl.lists == {(0, 1, 2): (1, 2)}
    cl = cluster_hypergraph(h, two, p, Fraction(1, 2), Fraction(3, 4))
    assert cl.lists == {}
    assert cluster_hypergraph(h, two, p, Fraction(1, 2), Fraction(1, 4), verdicts={(0, 1, 2): False}).lists == {}


def _fano_cluster(lists):
    return ClusterHypergraph(7, 7, {line: cols for line, cols in zip(FANO_LINES, lists)})


def test_colored_subhypergraph_examples():
    full = _fano_cluster([tuple(range(1, 8))] * 7)
    ok, phi = is_colored_subhypergraph((1, 2, 3, 4, 5, 6, 7), full)
    assert ok and sorted(phi) == list(range(7))
    one = _fano_cluster([(1,)] + [tuple(range(1, 8))] * 6)
    # every automorphism sends some line onto cluster edge 0, which only carries color 1
    assert not is_colored_subhypergraph((2, 2, 2, 2, 2, 2, 2), one)[0]
    assert is_colored_subhypergraph((1, 1, 1, 1, 1, 1, 1), one)[0]
    assert not is_colored_subhypergraph((1,) * 7, ClusterHypergraph(7, 7, {}))[0]


def test_colored_subhypergraph_embedding_valid():
    rng = np.random.default_rng(0)
    for _ in range(20):
        lists = [tuple(sorted({int(x) for x in rng.integers(1, 8, 3)})) for _ in range(7)]
        cl = _fano_cluster(lists)
        colors = tuple(int(x) for x in rng.integers(1, 8, 7))
        ok, phi = is_colored_subhypergraph(colors, cl)
        if ok:
            for col, line in zip(colors, FANO_LINES):
                assert col in cl.lists[tuple(sorted(phi[x] for x in line))]


def test_greedy_rainbow():
    rng = np.random.default_rng(1)
    for _ in range(100):
        k = int(rng.integers(1, 8))
        lists = [sorted({int(x) for x in rng.choice(20, size=7, replace=False) + 1}) for _ in range(k)]
        pick = greedy_rainbow_assignment(lists)
        assert pick is not None
        assert len(set(pick)) == k and all(c in lst for c, lst in zip(pick, lists))
    assert greedy_rainbow_assignment([[1], [1]]) is None


def test_beta_examples():
    assert beta(ClusterHypergraph(8, 7, {}), 48) == Fraction(48, 512) == Fraction(3, 32)
    b8, _ = build_bn(8)
    full = ClusterHypergraph(8, 7, {e: tuple(range(1, 8)) for e in b8.edges})
    assert beta(full, 48) == 0
    extra = dict(full.lists)
    extra[(0, 1, 2)] = tuple(range(1, 8))
    assert beta(ClusterHypergraph(8, 7, extra), 48) < 0


def test_cluster_validation():
    with pytest.raises(ValueError):
        ClusterHypergraph(3, 2, {(0, 1, 2): (3,)})
    with pytest.raises(ValueError):
        ClusterHypergraph(3, 2, {(0, 1, 1): (1,)})
    with pytest.raises(ValueError):
        EquitablePartition(((0, 1, 2), (3,)))
