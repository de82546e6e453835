"""Stability diagnostics: near-bipartite structure of dense Fano-free hosts.

Covers the minimum non-crossing bipartition, the class-size window for hosts
with many crossing edges, the Kee-type stability check, abundant and rare
colors in link graphs, extraction of 3-colored triples of link edges, and
edge-disjoint K4 packings in dense graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._exact import as_fraction, certify_lt, frac_str, iv
from ._parallel import pmap
from .coloring import Coloring
from .errors import InternalConsistencyError
from .fano import is_fano_free
from .hypergraph import Bipartition, Hypergraph3, LinkGraph, bn_edge_count, link_graph, split_crossing
from .matching import Edge, greedy_matching, maximum_matching

EXHAUSTIVE_LIMIT = 26
LOCAL_RESTARTS = 32
_CHUNK_CELLS = 1 << 22


# -- minimum non-crossing bipartition ------------------------------------

@dataclass(frozen=True)
class BipartitionResult:
    partition: Bipartition
    noncrossing: int
    mode: str
    seed: int | None = None
    restarts: int | None = None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "partA": sorted(self.partition.part_a),
            "partB": sorted(self.partition.part_b),
            "noncrossing": self.noncrossing,
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["restarts"] = self.restarts
        return out


def _edge_array(h: Hypergraph3) -> np.ndarray:
    return np.array(h.edges, dtype=np.int64).reshape(-1, 3)


def noncrossing_counts(edges: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Non-crossing edge count for each vertex mask (bit v set = v in part A)."""
    if len(edges) == 0:
        return np.zeros(len(masks), dtype=np.int64)
    m = masks.astype(np.int64)[:, None]
    inside = (m >> edges[None, :, 0] & 1) + (m >> edges[None, :, 1] & 1) + (m >> edges[None, :, 2] & 1)
    return ((inside == 0) | (inside == 3)).sum(axis=1)


def _part_key(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def _lex_smallest(masks: np.ndarray) -> int:
    """Mask whose sorted vertex list is lexicographically smallest."""
    prefix = 0
    cand = masks.astype(np.int64)
    while True:
        rest = cand & ~prefix
        if (rest == 0).any():
            return prefix
        low = rest & -rest
        pick = low.min()
        cand = cand[low == pick]
        prefix |= int(pick)


def _scan_chunk(args: tuple[np.ndarray, int, int]) -> tuple[int, int]:
    edges, lo, hi = args
    # masks with vertex 0 in part A: 1 | (k << 1)
    masks = (np.arange(lo, hi, dtype=np.int64) << 1) | 1
    counts = noncrossing_counts(edges, masks)
    best = int(counts.min())
    return best, _lex_smallest(masks[counts == best])


def _exhaustive(h: Hypergraph3, threads: int) -> BipartitionResult:
    n = h.n
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive mode supports n <= {EXHAUSTIVE_LIMIT}, got {n}")
    if n == 0:
        return BipartitionResult(Bipartition(0, frozenset()), 0, "exhaustive")
    edges = _edge_array(h)
    total = 1 << (n - 1)
    step = max(1, _CHUNK_CELLS // max(1, len(edges)))
    jobs = [(edges, lo, min(lo + step, total)) for lo in range(0, total, step)]
    results = pmap(_scan_chunk, jobs, threads)
    value = min(v for v, _ in results)
    mask = min((m for v, m in results if v == value), key=_part_key)
    return BipartitionResult(Bipartition.from_mask(n, mask), value, "exhaustive")


def _normalize(mask: int, n: int) -> int:
    return mask if mask & 1 else mask ^ ((1 << n) - 1)


def _local_search(h: Hypergraph3, seed: int, restarts: int) -> BipartitionResult:
    n = h.n
    if n == 0:
        return BipartitionResult(Bipartition(0, frozenset()), 0, "localsearch", seed, restarts)
    edges = _edge_array(h)
    rng = np.random.Generator(np.random.PCG64(seed))
    flips = np.int64(1) << np.arange(n, dtype=np.int64)
    best: tuple[int, tuple[int, ...], int] | None = None
    for _ in range(restarts):
        mask = int(rng.integers(0, 1 << n))
        value = int(noncrossing_counts(edges, np.array([mask]))[0])
        while True:
            neigh = np.int64(mask) ^ flips
            counts = noncrossing_counts(edges, neigh)
            i = int(counts.argmin())
            if counts[i] < value:
                mask, value = int(neigh[i]), int(counts[i])
                continue
            # stuck for single moves: try exchanging one vertex of A with one of B
            side = (mask >> np.arange(n)) & 1
            swaps = np.int64(mask) ^ (flips[side == 1][:, None] | flips[side == 0][None, :]).ravel()
            if len(swaps) == 0:
                break
            counts = noncrossing_counts(edges, swaps)
            i = int(counts.argmin())
            if counts[i] >= value:
                break
            mask, value = int(swaps[i]), int(counts[i])
        mask = _normalize(mask, n)
        cand = (value, _part_key(mask), mask)
        if best is None or cand[:2] < best[:2]:
            best = cand
    assert best is not None
    return BipartitionResult(Bipartition.from_mask(n, best[2]), best[0], "localsearch", seed, restarts)


def min_noncrossing_bipartition(
    h: Hypergraph3,
    mode: str = "exhaustive",
    seed: int = 0,
    restarts: int = LOCAL_RESTARTS,
    threads: int = 1,
) -> BipartitionResult:
    """Bipartition minimizing e(A) + e(B).

    ``exhaustive`` scans all 2^(n-1) splits with vertex 0 in A (one part may
    be empty) and breaks ties by the lexicographically smallest sorted A.
    ``localsearch`` runs steepest single-vertex-move descent from
    ``restarts`` random starts drawn from ``seed``; when no single move
    helps, the best improving A/B vertex exchange is applied and descent
    resumes, so the result is a local optimum for both move types.
    """
    if mode == "exhaustive":
        return _exhaustive(h, threads)
    if mode == "localsearch":
        return _local_search(h, seed, restarts)
    raise ValueError(f"unknown mode {mode!r}")


# -- class sizes ----------------------------------------------------------

@dataclass(frozen=True)
class SizesReport:
    applicable: bool
    hypothesis_holds: bool
    conclusion_holds: bool
    slack: float
    crossing: int
    crossing_threshold: Fraction
    sizes: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "hypothesisHolds": self.hypothesis_holds,
            "conclusionHolds": self.conclusion_holds,
            "slack": self.slack,
            "crossing": self.crossing,
            "crossingThreshold": frac_str(self.crossing_threshold),
            "sizes": list(self.sizes),
        }


def check_sizes_lemma(h: Hypergraph3, p: Bipartition, delta) -> SizesReport:
    """Check: |E_C| >= |E(B_n)| - delta n^3 forces both class sizes into n/2 +- 2 sqrt(delta) n.

    ``applicable`` is the side condition n >= max(8, 1/sqrt(delta)); both
    flags are computed either way. ``slack`` is the distance from the farther
    class size to the nearest window end (negative when outside).
    """
    d = as_fraction(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    if p.n != h.n:
        raise ValueError("bipartition does not match the host vertex set")
    n = h.n
    applicable = n >= 8 and d * n * n >= 1
    crossing, _ = split_crossing(h, p)
    threshold = bn_edge_count(n) - d * n ** 3
    hypothesis = crossing.num_edges >= threshold
    a, b = p.sizes()
    off = max(abs(Fraction(a) - Fraction(n, 2)), abs(Fraction(b) - Fraction(n, 2)))
    # |s - n/2| <= 2 sqrt(d) n  <=>  (s - n/2)^2 <= 4 d n^2
    conclusion = off * off <= 4 * d * n * n
    radius = 2 * math.sqrt(d.numerator / d.denominator) * n
    return SizesReport(applicable, hypothesis, conclusion, radius - float(off),
                       crossing.num_edges, threshold, (a, b))


# -- Kee-type stability ---------------------------------------------------

KEE_DELTA_MAX = Fraction(1, 36 ** 8)


@dataclass(frozen=True)
class KeeReport:
    applicable: bool
    fano_free: bool
    edges: int
    ex_value: int
    partition: BipartitionResult | None
    bound: str | None
    bound_holds: bool | None

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "fanoFree": self.fano_free,
            "edges": self.edges,
            "ex": self.ex_value,
            "partitionFound": self.partition is not None,
            "partition": None if self.partition is None else self.partition.to_json(),
            "noncrossingBound": self.bound,
            "boundHolds": self.bound_holds,
        }


def check_kee_stability(
    h: Hypergraph3, delta, ex_value: int | None = None, mode: str = "exhaustive", threads: int = 1,
) -> KeeReport:
    """Empirical check of: Fano-free with >= ex - delta n^3 edges => some split has
    e(A) + e(B) < 2 delta^(1/64) n^3.

    The statement is asymptotic, so a failure here is data, not a refutation.
    ``bound_holds`` is None when 256-bit intervals cannot decide.
    """
    d = as_fraction(delta)
    if not 0 < d <= KEE_DELTA_MAX:
        raise ValueError("delta must lie in (0, 1/36^8]")
    from .extremal import known_turan_value

    n = h.n
    ex = known_turan_value(n) if ex_value is None else int(ex_value)
    free = is_fano_free(h)
    applicable = free and h.num_edges >= ex - d * n ** 3
    if not applicable:
        return KeeReport(False, free, h.num_edges, ex, None, None, None)
    part = min_noncrossing_bipartition(h, mode, threads=threads)
    rhs = 2 * iv.exp(iv.log(iv.mpf(d.numerator) / d.denominator) / 64) * n ** 3
    verdict = certify_lt(part.noncrossing, rhs)
    return KeeReport(True, free, h.num_edges, ex, part, iv.nstr(rhs, 20), verdict)


# -- link colors, matchings, abundance -----------------------------------

def link_colors(link: LinkGraph, c: Coloring | Mapping[Edge, int]) -> dict[Edge, int]:
    """Color of each link edge {u, w}, read from the host edge {apex, u, w}."""
    if isinstance(c, Coloring):
        return {e: c.color_of((link.apex,) + e) for e in sorted(link.edges)}
    return {e: c[e] for e in sorted(link.edges)}


def max_monochromatic_matching(
    link: LinkGraph, c: Coloring | Mapping[Edge, int], alpha: int, z: Iterable[int],
) -> tuple[int, list[Edge]]:
    """Maximum matching among link edges inside ``z`` that have color ``alpha``."""
    zs = set(z)
    if link.apex in zs:
        zs.discard(link.apex)
    colors = link_colors(link, c)
    edges = [e for e in link.within(zs) if colors[e] == alpha]
    m = maximum_matching(edges)
    return len(m), m


@dataclass
class AbundanceReport:
    vertex: int
    threshold: int
    abundant: dict[str, list[int]]
    rare_edges: dict[str, list[Edge]]
    class_edges: dict[str, list[Edge]] = field(repr=False, default_factory=dict)
    colors: dict[Edge, int] = field(repr=False, default_factory=dict)

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "threshold": self.threshold,
            "abundant": {k: v for k, v in self.abundant.items()},
            "J": {k: [list(e) for e in v] for k, v in self.rare_edges.items()},
        }


def classify_abundant_colors(
    h: Hypergraph3, c: Coloring, v: int, p: Bipartition, xi,
) -> AbundanceReport:
    """Abundant colors at ``v`` per class and the rare within-class link edges J_Z.

    A color is abundant for class Z when its link edges inside Z contain a
    matching of size at least ceil(xi * n).
    """
    x = as_fraction(xi)
    if x <= 0:
        raise ValueError("xi must be positive")
    if p.n != h.n:
        raise ValueError("bipartition does not match the host vertex set")
    link = link_graph(h, v)
    colors = link_colors(link, c)
    threshold = math.ceil(x * h.n)
    classes = {"X": sorted(p.part_a - {v}), "Y": sorted(p.part_b - {v})}
    abundant: dict[str, list[int]] = {}
    within: dict[str, list[Edge]] = {}
    for name, zs in classes.items():
        edges = link.within(zs)
        within[name] = edges
        by_color: dict[int, list[Edge]] = {}
        for e in edges:
            by_color.setdefault(colors[e], []).append(e)
        abundant[name] = sorted(a for a, es in by_color.items() if len(maximum_matching(es)) >= threshold)
    union = set(abundant["X"]) | set(abundant["Y"])
    rare = {name: [e for e in within[name] if colors[e] not in union] for name in classes}
    return AbundanceReport(v, threshold, abundant, rare, within, colors)


# -- 3-colored triples ----------------------------------------------------

Triple3 = tuple[Edge, Edge, Edge]


@dataclass
class TriplesReport:
    case: str
    in_c1: bool
    triples: list[Triple3]
    matching: list[Edge]
    target: Fraction
    bound_met: bool

    @property
    def size(self) -> int:
        return len(self.triples)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "inC1": self.in_c1,
            "size": self.size,
            "target": frac_str(self.target),
            "boundMet": self.bound_met,
            "matching": [list(e) for e in self.matching],
        }


def _orient(es: Iterable[Edge], x_side: set[int]) -> Triple3 | None:
    """Order a 3-set of link edges as (edge in X, edge in Y, rest)."""
    es = sorted(es)
    xs = [e for e in es if e[0] in x_side]
    ys = [e for e in es if e[0] not in x_side]
    if not xs or not ys:
        return None
    f1, f2 = xs[0], ys[0]
    f3 = next(e for e in es if e not in (f1, f2))
    return (f1, f2, f3)


def _collect(sets: Iterable[Iterable[Edge]], colors: Mapping[Edge, int], x_side: set[int]) -> list[Triple3]:
    seen: set[frozenset[Edge]] = set()
    out = []
    for s in sets:
        fs = frozenset(s)
        if len(fs) != 3 or fs in seen or len({colors[e] for e in fs}) != 3:
            continue
        t = _orient(fs, x_side)
        if t is not None:
            seen.add(fs)
            out.append(t)
    return sorted(out)


def _vertices(m: Iterable[Edge]) -> set[int]:
    return {u for e in m for u in e}


def _best_disjoint_pair(e1: list[Edge], e2: list[Edge]) -> tuple[list[Edge], list[Edge]]:
    """Vertex-disjoint monochromatic matchings maximizing |M1| * |M2|."""
    full1 = maximum_matching(e1)
    best = ([], [])
    for k in range(len(full1), 0, -1):
        m1 = full1[:k]
        used = _vertices(m1)
        m2 = maximum_matching([e for e in e2 if not used & set(e)])
        if len(m1) * len(m2) > len(best[0]) * len(best[1]):
            best = (m1, m2)
    return best


def three_colored_triples(h: Hypergraph3, c: Coloring, v: int, p: Bipartition, xi) -> TriplesReport:
    """Greedy extraction of 3-colored triples of link edges at ``v``.

    Follows the three-way case split on |A_X u A_Y|: at least 3 abundant
    colors, none, or 1-2 with a large rare set J_Z. Within a case every
    orientation and abundant-color choice is tried and the largest set kept. Triples come from a
    single matching M of the link, each has one edge inside X and one inside
    Y, and no 3-set of edges is listed twice. ``bound_met`` is reported
    against xi^3 n^3 / 9 and only claimed for colorings in C1.
    """
    x = as_fraction(xi)
    ab = classify_abundant_colors(h, c, v, p, x)
    n = h.n
    colors = ab.colors
    target = x ** 3 * n ** 3 / 9
    x_side = set(p.part_a)
    ax, ay = set(ab.abundant["X"]), set(ab.abundant["Y"])
    union = ax | ay
    big_j = {z for z in ("X", "Y") if Fraction(len(ab.rare_edges[z])) ** 2 >= 16 * x * n ** 4}
    in_c1 = len(union) not in (1, 2) or bool(big_j)

    def mono(z: str, a: int) -> list[Edge]:
        return [e for e in ab.class_edges[z] if colors[e] == a]

    # each construction is (M1, M2, M3 or None, pairs source); keep the best
    options: list[tuple[list[Triple3], list[Edge]]] = []

    def product(m1: list[Edge], m2: list[Edge], m3: list[Edge]) -> None:
        sets = ((f1, f2, f3) for f1 in m1 for f2 in m2 for f3 in m3)
        options.append((_collect(sets, colors, x_side), sorted(set(m1 + m2 + m3))))

    def single_and_pairs(single: list[Edge], pool: list[Edge]) -> None:
        sets = ((f, g1, g2) for f in single for g1, g2 in combinations(pool, 2))
        options.append((_collect(sets, colors, x_side), sorted(single + pool)))

    case = "none"
    if len(union) >= 3:
        case = "1"
        for big, small in (("X", "Y"), ("Y", "X")):
            a_big, a_small = ab.abundant[big], ab.abundant[small]
            for a1, a2 in combinations(a_big, 2):
                m1, m2 = _best_disjoint_pair(mono(big, a1), mono(big, a2))
                for a3 in a_small:
                    if a3 not in (a1, a2):
                        product(m1, m2, maximum_matching(mono(small, a3)))
                other = [e for e in ab.class_edges[small] if colors[e] not in (a1, a2)]
                product(m1, m2, greedy_matching(other))
    elif not union:
        case = "2"
        mx = greedy_matching(ab.class_edges["X"])
        my = greedy_matching(ab.class_edges["Y"])
        product(mx, my, mx + my)
    elif big_j:
        case = "3"
        for z in sorted(big_j, reverse=True):
            o = "X" if z == "Y" else "Y"
            for a in ab.abundant[o]:
                single_and_pairs(maximum_matching(mono(o, a)), greedy_matching(ab.rare_edges[z]))
            for a in ab.abundant[z]:
                pool = [e for e in ab.rare_edges[o] if colors[e] != a]
                single_and_pairs(maximum_matching(mono(z, a)), greedy_matching(pool))
    triples, matching = max(options, key=lambda t: len(t[0]), default=([], []))
    return TriplesReport(case, in_c1, triples, matching, target, in_c1 and len(triples) >= target)


# -- K4 packing -----------------------------------------------------------

def _find_k4(adj: dict[int, set[int]]) -> tuple[int, int, int, int] | None:
    for a in sorted(adj):
        na = {u for u in adj[a] if u > a}
        for b in sorted(na):
            nab = {u for u in na & adj[b] if u > b}
            for c in sorted(nab):
                rest = nab & adj[c]
                for d in sorted(rest):
                    if d > c:
                        return (a, b, c, d)
    return None


def edge_disjoint_k4_packing(n: int, edges: Iterable[Sequence[int]]) -> list[tuple[int, int, int, int]]:
    """Remove K4s one at a time while |E| > n^2 / 3.

    Turán's theorem guarantees a K4 whenever |E| > n^2/3, so failing to find
    one is reported as an internal error.
    """
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    m = 0
    for e in edges:
        u, w = int(e[0]), int(e[1])
        if u == w or not (0 <= u < n and 0 <= w < n):
            raise ValueError(f"bad edge {tuple(e)}")
        if w not in adj[u]:
            adj[u].add(w)
            adj[w].add(u)
            m += 1
    packing = []
    while 3 * m > n * n:
        q = _find_k4(adj)
        if q is None:
            raise InternalConsistencyError(
                f"graph with {m} edges on {n} vertices exceeds n^2/3 but has no K4")
        for u, w in combinations(q, 2):
            adj[u].discard(w)
            adj[w].discard(u)
        m -= 6
        packing.append(q)
    return packing


def is_k4_packing(n: int, edges: Iterable[Sequence[int]], packing: Sequence[Sequence[int]]) -> bool:
    es = {(min(u, w), max(u, w)) for u, w in edges}
    used: set[tuple[int, int]] = set()
    for q in packing:
        if len(set(q)) != 4:
            return False
        for u, w in combinations(sorted(q), 2):
            if (u, w) not in es or (u, w) in used:
                return False
            used.add((u, w))
    return True
