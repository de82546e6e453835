"""Maximum-cardinality matchings in small general graphs.

The fast path is Edmonds' blossom algorithm as shipped by networkx. The
exhaustive routine exists as an oracle and for graphs of at most a couple of
dozen edges.
"""

from __future__ import annotations

from typing import Iterable

import networkx as nx

Edge = tuple[int, int]


def _norm(edges: Iterable[Iterable[int]]) -> list[Edge]:
    out = set()
    for e in edges:
        u, w = e
        if u == w:
            raise ValueError(f"loop {u}-{w} is not a simple-graph edge")
        out.add((min(u, w), max(u, w)))
    return sorted(out)


def maximum_matching(edges: Iterable[Iterable[int]]) -> list[Edge]:
    """A maximum-cardinality matching, as a sorted list of sorted pairs."""
    es = _norm(edges)
    g = nx.Graph()
    g.add_edges_from(es)
    m = nx.max_weight_matching(g, maxcardinality=True)
    return sorted((min(u, w), max(u, w)) for u, w in m)


def maximum_matching_exhaustive(edges: Iterable[Iterable[int]]) -> list[Edge]:
    """Branch over edges: each one is either skipped or taken if its ends are free."""
    es = _norm(edges)
    best: list[Edge] = []

    def rec(i: int, used: set[int], chosen: list[Edge]) -> None:
        nonlocal best
        if len(chosen) + (len(es) - i) <= len(best):
            return
        if i == len(es):
            best = list(chosen)
            return
        u, w = es[i]
        if u not in used and w not in used:
            used |= {u, w}
            chosen.append(es[i])
            rec(i + 1, used, chosen)
            chosen.pop()
            used -= {u, w}
        rec(i + 1, used, chosen)

    rec(0, set(), [])
    return best


def greedy_matching(edges: Iterable[Iterable[int]]) -> list[Edge]:
    """Maximal matching taking edges in sorted order."""
    used: set[int] = set()
    out = []
    for u, w in _norm(edges):
        if u not in used and w not in used:
            used |= {u, w}
            out.append((u, w))
    return out


def is_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, w in edges:
        if u in seen or w in seen or u == w:
            return False
        seen |= {u, w}
    return True
