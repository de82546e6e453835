"""The Fano plane and enumeration of its copies inside a host hypergraph.

Canonical labeling (lines of PG(2,2)):

    0: {0,1,2}  1: {0,3,4}  2: {0,5,6}  3: {1,3,5}
    4: {1,4,6}  5: {2,3,6}  6: {2,4,5}

Copies are found by pivoting on the smallest host vertex ``p`` of the copy.
The three lines through ``p`` split the other six points into three pairs,
and each choice of three disjoint pairs from the link of ``p`` has exactly
two completions by four transversal lines. Each unlabeled copy is therefore
produced exactly once, with no division by the automorphism count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

from ._parallel import pmap
from .hypergraph import Hypergraph3, Triple, build_complete, triple_rank

FANO_LINES: tuple[Triple, ...] = (
    (0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5),
)
FANO_HYPERGRAPH = Hypergraph3.from_edges(7, FANO_LINES)


@lru_cache(maxsize=None)
def fano_automorphisms() -> tuple[tuple[int, ...], ...]:
    """All vertex permutations of {0..6} preserving the line set (brute force over 7!)."""
    lines = set(FANO_LINES)
    return tuple(
        perm for perm in permutations(range(7))
        if all(tuple(sorted(perm[v] for v in line)) in lines for line in FANO_LINES)
    )


@lru_cache(maxsize=None)
def line_permutations() -> tuple[tuple[int, ...], ...]:
    """Automorphisms acting on line indices: ``pi[i]`` is the image of line ``i``."""
    index = {line: i for i, line in enumerate(FANO_LINES)}
    return tuple(
        tuple(index[tuple(sorted(perm[v] for v in line))] for line in FANO_LINES)
        for perm in fano_automorphisms()
    )


@dataclass(frozen=True, order=True)
class FanoCopy:
    """One unlabeled Fano copy in a host.

    ``edge_ranks`` is the sorted tuple of host edge ranks and identifies the
    copy. ``vertex_image`` maps canonical point ``i`` to a host vertex; it is
    the lexicographically smallest labeling among the automorphic ones.
    """

    edge_ranks: tuple[int, ...]
    vertex_image: tuple[int, ...]

    @property
    def lines(self) -> tuple[Triple, ...]:
        """Host triples in canonical line order."""
        img = self.vertex_image
        return tuple(tuple(sorted(img[v] for v in line)) for line in FANO_LINES)  # type: ignore[misc]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertex_image))


_THIRD = {}
for _line in FANO_LINES:
    for _x in _line:
        for _y in _line:
            if _x != _y:
                _THIRD[_x, _y] = sum(_line) - _x - _y


def smallest_labeling(image: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest automorphic relabeling of ``image``.

    The automorphism group acts sharply transitively on ordered
    non-collinear point triples, so the images of points 0, 1 and 3 can be
    chosen greedily as minima and the rest follow along lines.
    """
    label = {v: i for i, v in enumerate(image)}

    def third(x: int, y: int) -> int:
        return image[_THIRD[label[x], label[y]]]

    p0 = min(image)
    p1 = min(v for v in image if v != p0)
    p2 = third(p0, p1)
    p3 = min(v for v in image if v not in (p0, p1, p2))
    p4 = third(p0, p3)
    p5 = third(p1, p3)
    p6 = third(p1, p4)
    return (p0, p1, p2, p3, p4, p5, p6)


def copy_from_image(image: Sequence[int]) -> FanoCopy:
    ranks = tuple(sorted(triple_rank(image[v] for v in line) for line in FANO_LINES))
    return FanoCopy(ranks, smallest_labeling(image))


def _pivot_pairs(h: Hypergraph3, p: int) -> list[tuple[int, int]]:
    return [(u, w) for u in range(p + 1, h.n) for w in range(u + 1, h.n) if h.has_edge((p, u, w))]


def _iter_images_at(h: Hypergraph3, p: int) -> Iterator[tuple[int, ...]]:
    pairs = _pivot_pairs(h, p)
    has = h.has_edge
    count = len(pairs)
    for i in range(count):
        a, a2 = pairs[i]
        for j in range(i + 1, count):
            b, b2 = pairs[j]
            if b == a2 or b2 == a2 or b2 == a:
                continue
            ab = (a, b)
            for k in range(j + 1, count):
                c, c2 = pairs[k]
                if c in (a2, b, b2) or c2 in (a2, b, b2):
                    continue
                if has(ab + (c,)) and has((a, b2, c2)) and has((a2, b, c2)) and has((a2, b2, c)):
                    yield (p, a, a2, b, b2, c, c2)
                if has(ab + (c2,)) and has((a, b2, c)) and has((a2, b, c)) and has((a2, b2, c2)):
                    yield (p, a, a2, b, b2, c2, c)


def iter_fano_images(h: Hypergraph3) -> Iterator[tuple[int, ...]]:
    """Lazily yield one vertex labeling per Fano copy (not canonicalized)."""
    for p in range(max(h.n - 6, 0)):
        yield from _iter_images_at(h, p)


def _copies_at(args: tuple[Hypergraph3, int]) -> list[FanoCopy]:
    h, p = args
    return [copy_from_image(img) for img in _iter_images_at(h, p)]


def enumerate_fano_copies(h: Hypergraph3, threads: int = 1) -> list[FanoCopy]:
    """All Fano copies in ``h``, each once, sorted by their edge-rank tuple."""
    chunks = pmap(_copies_at, [(h, p) for p in range(max(h.n - 6, 0))], threads)
    return sorted(c for chunk in chunks for c in chunk)


def count_fano_copies(h: Hypergraph3, threads: int = 1) -> int:
    return len(enumerate_fano_copies(h, threads))


def is_fano_free(h: Hypergraph3) -> bool:
    return next(iter_fano_images(h), None) is None


def find_fano_copy(h: Hypergraph3) -> FanoCopy | None:
    img = next(iter_fano_images(h), None)
    return None if img is None else copy_from_image(img)


def copies_per_edge(copies: Sequence[FanoCopy]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for cp in copies:
        for r in cp.edge_ranks:
            counts[r] = counts.get(r, 0) + 1
    return counts


def fano_copies_through_edge(h: Hypergraph3, e: Sequence[int]) -> int:
    if not h.has_edge(e):
        raise ValueError(f"{tuple(e)} is not an edge of the host")
    r = triple_rank(e)
    return sum(1 for cp in enumerate_fano_copies(h) if r in cp.edge_ranks)


def is_linear(triples: Sequence[Sequence[int]]) -> bool:
    """Every pair of the given triples meets in exactly one vertex."""
    sets = [set(t) for t in triples]
    return all(len(sets[i] & sets[j]) == 1 for i in range(len(sets)) for j in range(i + 1, len(sets)))


@lru_cache(maxsize=None)
def complete_host_copies(n: int) -> tuple[FanoCopy, ...]:
    return tuple(enumerate_fano_copies(build_complete(n)))
