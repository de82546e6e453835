"""3-uniform hypergraphs stored as bitsets over colex-ranked triples.

A triple ``a < b < c`` has colex rank ``C(a,1) + C(b,2) + C(c,3)``. The rank
does not depend on ``n``, so the bitset of a hypergraph on ``n`` vertices is
also a valid bitset for any larger vertex count.

The canonical edge order used throughout the package (for colorings, JSON
files and CLI output) is the lexicographic order of sorted triples, i.e. the
order of :attr:`Hypergraph3.edges`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

Triple = tuple[int, int, int]


def triple_rank(t: Iterable[int]) -> int:
    a, b, c = sorted(t)
    return a + b * (b - 1) // 2 + c * (c - 1) * (c - 2) // 6


def triple_unrank(rank: int) -> Triple:
    if rank < 0:
        raise ValueError(f"negative rank {rank}")
    c = 2
    while comb(c + 1, 3) <= rank:
        c += 1
    rank -= comb(c, 3)
    b = 1
    while comb(b + 1, 2) <= rank:
        b += 1
    rank -= comb(b, 2)
    return (rank, b, c)


def _check_triple(t: Sequence[int], n: int) -> Triple:
    if len(t) != 3:
        raise ValueError(f"edge {tuple(t)} does not have 3 vertices")
    s = tuple(sorted(int(v) for v in t))
    if s[0] == s[1] or s[1] == s[2]:
        raise ValueError(f"edge {tuple(t)} has repeated vertices")
    if s[0] < 0 or s[2] >= n:
        raise ValueError(f"edge {tuple(t)} has a vertex outside 0..{n - 1}")
    return s  # type: ignore[return-value]


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Hypergraph3:
    """Immutable labeled 3-uniform hypergraph on vertices ``0..n-1``."""

    n: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if self.mask < 0 or self.mask >> comb(self.n, 3):
            raise ValueError("edge bitset has ranks outside the triple universe")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Hypergraph3":
        mask = 0
        for t in edges:
            mask |= 1 << triple_rank(_check_triple(t, n))
        return cls(n, mask)

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.mask))

    @cached_property
    def edges(self) -> tuple[Triple, ...]:
        """Edges as sorted triples in lexicographic order."""
        return tuple(sorted(triple_unrank(r) for r in self.ranks))

    @cached_property
    def edge_index(self) -> dict[Triple, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @property
    def num_edges(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.num_edges

    def has_edge(self, t: Iterable[int]) -> bool:
        a, b, c = sorted(t)
        if a < 0 or c >= self.n or a == b or b == c:
            return False
        return bool(self.mask >> triple_rank((a, b, c)) & 1)

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "Hypergraph3":
        extra = Hypergraph3.from_edges(self.n, edges)
        return Hypergraph3(self.n, self.mask | extra.mask)

    def without_edges(self, edges: Iterable[Sequence[int]]) -> "Hypergraph3":
        gone = Hypergraph3.from_edges(self.n, edges)
        return Hypergraph3(self.n, self.mask & ~gone.mask)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        _check_vertex(self, v)
        return self.degrees[v]

    def induced(self, vertices: Iterable[int]) -> "Hypergraph3":
        """Sub-hypergraph induced on ``vertices``, relabeled in sorted order."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        return Hypergraph3.from_edges(
            len(vs), [(pos[a], pos[b], pos[c]) for a, b, c in self.edges
                      if a in pos and b in pos and c in pos])

    def __repr__(self) -> str:
        return f"Hypergraph3(n={self.n}, edges={self.num_edges})"


def _check_vertex(h: Hypergraph3, v: int) -> None:
    if not 0 <= v < h.n:
        raise ValueError(f"vertex {v} is not in 0..{h.n - 1}")


@dataclass(frozen=True)
class Bipartition:
    """Ordered split of ``0..n-1`` into ``part_a`` and its complement."""

    n: int
    part_a: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "part_a", frozenset(self.part_a))
        if any(not 0 <= v < self.n for v in self.part_a):
            raise ValueError("part_a has vertices outside the vertex set")

    @property
    def part_b(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.part_a

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Bipartition":
        return cls(n, frozenset(v for v in range(n) if mask >> v & 1))

    @property
    def mask(self) -> int:
        return sum(1 << v for v in self.part_a)

    def is_crossing(self, e: Iterable[int]) -> bool:
        inside = sum(v in self.part_a for v in e)
        return 0 < inside < 3

    def sizes(self) -> tuple[int, int]:
        return len(self.part_a), self.n - len(self.part_a)


@dataclass(frozen=True)
class MultipartiteSpec:
    """Intersection vector ``(x_1, ..., x_l)`` with a partition into ``l`` classes."""

    intersection_vector: tuple[int, ...]
    classes: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "intersection_vector", tuple(int(x) for x in self.intersection_vector))
        object.__setattr__(self, "classes", tuple(frozenset(c) for c in self.classes))
        vec = self.intersection_vector
        if any(x < 0 for x in vec) or sum(vec) != 3:
            raise ValueError(f"intersection vector {vec} must be nonnegative and sum to 3")
        if len(vec) != len(self.classes):
            raise ValueError("intersection vector and partition have different lengths")
        seen: set[int] = set()
        for c in self.classes:
            if seen & c:
                raise ValueError("partition classes overlap")
            seen |= c
        if seen != set(range(len(seen))):
            raise ValueError("partition classes must cover 0..n-1")

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    def admits(self, e: Iterable[int]) -> bool:
        counts = sorted(sum(v in c for v in e) for c in self.classes)
        return counts == sorted(self.intersection_vector)


@dataclass(frozen=True)
class LinkGraph:
    apex: int
    n: int
    edges: frozenset[tuple[int, int]]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if v != self.apex)

    def within(self, part: Iterable[int]) -> list[tuple[int, int]]:
        s = set(part)
        return sorted(p for p in self.edges if p[0] in s and p[1] in s)


def build_complete(n: int) -> Hypergraph3:
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    return Hypergraph3(n, (1 << comb(n, 3)) - 1)


def bn_bipartition(n: int) -> Bipartition:
    return Bipartition(n, frozenset(range((n + 1) // 2)))


def build_bn(n: int) -> tuple[Hypergraph3, Bipartition]:
    """Balanced complete bipartite hypergraph B_n and its defining split.

    Class A is the lowest ``ceil(n/2)`` vertex ids.
    """
    part = bn_bipartition(n)
    cut = (n + 1) // 2
    edges = [t for t in combinations(range(n), 3) if t[0] < cut <= t[2]]
    return Hypergraph3.from_edges(n, edges), part


def bn_edge_count(n: int) -> int:
    return comb(n, 3) - comb((n + 1) // 2, 3) - comb(n // 2, 3)


def build_multipartite(spec: MultipartiteSpec) -> Hypergraph3:
    n = spec.n
    return Hypergraph3.from_edges(n, (t for t in combinations(range(n), 3) if spec.admits(t)))


def bad_edges(h: Hypergraph3, spec: MultipartiteSpec) -> Hypergraph3:
    """Edges of ``h`` outside the complete multipartite hypergraph of ``spec``."""
    if spec.n != h.n:
        raise ValueError("spec partition does not match the host vertex set")
    return Hypergraph3(h.n, h.mask & ~build_multipartite(spec).mask)


def link_graph(h: Hypergraph3, v: int) -> LinkGraph:
    _check_vertex(h, v)
    pairs = frozenset(tuple(u for u in e if u != v) for e in h.edges if v in e)
    return LinkGraph(v, h.n, pairs)  # type: ignore[arg-type]


def min_degree(h: Hypergraph3) -> int:
    if h.n < 1:
        raise ValueError("minimum degree needs at least one vertex")
    return min(h.degrees)


def min_degree_threshold(n: int) -> Fraction:
    """``3n^2/8 - n`` as an exact rational."""
    return Fraction(3 * n * n, 8) - n


def meets_bn_degree_threshold(h: Hypergraph3) -> bool:
    return min_degree(h) >= min_degree_threshold(h.n)


def split_crossing(h: Hypergraph3, p: Bipartition) -> tuple[Hypergraph3, Hypergraph3]:
    """Return (crossing, non-crossing) sub-hypergraphs of ``h`` under ``p``."""
    if p.n != h.n:
        raise ValueError("bipartition does not match the host vertex set")
    crossing = 0
    for r in h.ranks:
        if p.is_crossing(triple_unrank(r)):
            crossing |= 1 << r
    return Hypergraph3(h.n, crossing), Hypergraph3(h.n, h.mask & ~crossing)


def noncrossing_count(h: Hypergraph3, part_a: Iterable[int]) -> int:
    a = set(part_a)
    return sum(1 for e in h.edges if sum(v in a for v in e) in (0, 3))


def random_hypergraph(n: int, p: float, rng) -> Hypergraph3:
    """Each triple independently with probability ``p``; ``rng`` is a numpy Generator."""
    m = comb(n, 3)
    keep = rng.random(m) < p
    mask = 0
    for r in map(int, keep.nonzero()[0]):
        mask |= 1 << r
    return Hypergraph3(n, mask)
