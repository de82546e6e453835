"""Edge colorings, Fano color patterns and counting of pattern-free colorings.

A pattern is a set partition of the 7 canonical Fano lines. A copy of the
Fano plane in a colored host matches a pattern when the partition of its
lines induced by the colors equals the pattern after applying some
automorphism of the Fano plane; colors themselves are anonymous. For the
rainbow pattern this is just "the 7 lines get 7 distinct colors".

The exact counter exploits two facts. Edges in no Fano copy are free and
contribute a factor ``r`` each; connected groups of overlapping copies are
independent and their counts multiply. Inside a group, colors are
interchangeable, so the search assigns colors in first-use order and
weights each "new color" branch by the number of unused colors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import perm, sqrt
from typing import Iterable, Sequence

import numpy as np

from ._parallel import pmap
from .errors import BudgetExhausted
from .fano import FANO_LINES, FanoCopy, enumerate_fano_copies, line_permutations
from .hypergraph import Hypergraph3, Triple, triple_rank

# pairs of line indices, in a fixed order, for equality codes
LINE_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(7), 2))
BLOCK_SIZE = 16384


def restricted_growth(labels: Sequence[object]) -> tuple[int, ...]:
    first: dict[object, int] = {}
    return tuple(first.setdefault(x, len(first)) for x in labels)


@dataclass(frozen=True)
class Pattern:
    """Partition of the canonical Fano lines ``0..6`` into color classes."""

    classes: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        classes = tuple(sorted((frozenset(c) for c in self.classes), key=min))
        if any(not c for c in classes):
            raise ValueError("pattern classes must be nonempty")
        flat = [i for c in classes for i in c]
        if sorted(flat) != list(range(7)):
            raise ValueError("pattern classes must partition the line indices 0..6")
        object.__setattr__(self, "classes", classes)

    @classmethod
    def rainbow(cls) -> "Pattern":
        return cls(tuple(frozenset([i]) for i in range(7)))

    @classmethod
    def monochromatic(cls) -> "Pattern":
        return cls((frozenset(range(7)),))

    @classmethod
    def from_labels(cls, labels: Sequence[object]) -> "Pattern":
        groups: dict[object, set[int]] = {}
        for i, x in enumerate(labels):
            groups.setdefault(x, set()).add(i)
        return cls(tuple(frozenset(g) for g in groups.values()))

    @property
    def is_rainbow(self) -> bool:
        return len(self.classes) == 7

    @cached_property
    def labels(self) -> tuple[int, ...]:
        out = [0] * 7
        for k, c in enumerate(self.classes):
            for i in c:
                out[i] = k
        return tuple(out)

    @cached_property
    def orbit(self) -> frozenset[tuple[int, ...]]:
        """Restricted-growth strings of every automorphic image of this pattern."""
        images = set()
        for pi in line_permutations():
            moved = [0] * 7
            for i, lab in enumerate(self.labels):
                moved[pi[i]] = lab
            images.add(restricted_growth(moved))
        return frozenset(images)

    @cached_property
    def orbit_codes(self) -> np.ndarray:
        codes = [sum(1 << j for j, (a, b) in enumerate(LINE_PAIRS) if rgs[a] == rgs[b])
                 for rgs in self.orbit]
        return np.array(sorted(codes), dtype=np.int64)

    def matches(self, line_colors: Sequence[int]) -> bool:
        """True if the colors of a copy's lines (canonical order) realize this pattern."""
        if self.is_rainbow:
            return len(set(line_colors)) == 7
        return restricted_growth(line_colors) in self.orbit

    def to_json(self) -> dict:
        return {"classes": [sorted(c) for c in self.classes]}


RAINBOW = Pattern.rainbow()


@dataclass(frozen=True)
class Coloring:
    """Colors ``1..r`` for the host edges, aligned with ``host.edges``."""

    host: Hypergraph3
    r: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.r < 1:
            raise ValueError("need at least one color")
        if len(self.colors) != self.host.num_edges:
            raise ValueError(f"expected {self.host.num_edges} colors, got {len(self.colors)}")
        if any(not 1 <= c <= self.r for c in self.colors):
            raise ValueError(f"colors must lie in 1..{self.r}")

    @classmethod
    def constant(cls, host: Hypergraph3, r: int, color: int = 1) -> "Coloring":
        return cls(host, r, (color,) * host.num_edges)

    @classmethod
    def from_map(cls, host: Hypergraph3, r: int, mapping: dict) -> "Coloring":
        return cls(host, r, tuple(mapping[e] for e in host.edges))

    @cached_property
    def _by_edge(self) -> dict[Triple, int]:
        return dict(zip(self.host.edges, self.colors))

    def color_of(self, e: Iterable[int]) -> int:
        return self._by_edge[tuple(sorted(e))]  # type: ignore[index]

    def line_colors(self, cp: FanoCopy) -> tuple[int, ...]:
        return tuple(self.color_of(t) for t in cp.lines)


def is_pattern_free(c: Coloring, p: Pattern = RAINBOW) -> tuple[bool, FanoCopy | None]:
    """Whether no Fano copy realizes ``p``; on failure also the first offending copy."""
    for cp in enumerate_fano_copies(c.host):
        if p.matches(c.line_colors(cp)):
            return False, cp
    return True, None


def falling_factorial(x: int, k: int) -> int:
    return perm(x, k) if x >= 0 else 0


def rainbow_free_single_fano_closed_form(r: int) -> int:
    """Rainbow-free r-colorings of a host that is exactly one Fano plane."""
    if r < 1:
        raise ValueError("need at least one color")
    return r ** 7 - falling_factorial(r, 7)


@dataclass
class CountResult:
    count: int | None
    complete: bool
    nodes: int
    copies: int
    free_edges: int
    components: int = 0

    def to_json(self) -> dict:
        return {
            "count": None if self.count is None else str(self.count),
            "complete": self.complete,
            "nodesExpanded": self.nodes,
            "fanoCopies": self.copies,
            "freeEdges": self.free_edges,
            "components": self.components,
        }


@dataclass
class _Component:
    r: int
    order: list[int]                      # edge ranks in assignment order
    checks: list[list[tuple[int, ...]]]   # per position: copies completed there, as line positions
    rainbow: bool
    orbit: frozenset = field(default_factory=frozenset)
    budget: int | None = None


def _count_component(comp: _Component) -> tuple[int | None, int]:
    r, checks, rainbow, orbit = comp.r, comp.checks, comp.rainbow, comp.orbit
    size = len(comp.order)
    colors = [0] * size
    nodes = 0
    limit = comp.budget
    copies = [lines for per in checks for lines in per]
    # copies still open at position i, i.e. with a line at position >= i
    open_at = [[cp for cp in copies if max(cp) >= i] for i in range(size + 1)]
    images = [tuple(rgs[a] == rgs[b] for a, b in LINE_PAIRS) for rgs in orbit]

    def violates(i: int) -> bool:
        for lines in checks[i]:
            lc = [colors[j] for j in lines]
            if rainbow:
                if len(set(lc)) == 7:
                    return True
            elif restricted_growth(lc) in orbit:
                return True
        return False

    def alive(lines: tuple[int, ...], i: int) -> bool:
        """Can the copy still realize the pattern once positions >= i are filled?"""
        if rainbow:
            seen = [colors[j] for j in lines if j < i]
            return len(seen) == len(set(seen))
        eq = [(k, colors[lines[a]] == colors[lines[b]]) for k, (a, b) in enumerate(LINE_PAIRS)
              if lines[a] < i and lines[b] < i]
        return any(all(img[k] == e for k, e in eq) for img in images)

    def rec(i: int, used: int) -> int:
        nonlocal nodes
        nodes += 1
        if limit is not None and nodes > limit:
            raise BudgetExhausted
        if i == size:
            return 1
        if not any(alive(cp, i) for cp in open_at[i]):
            # nothing left can be completed: the remaining edges are free
            return r ** (size - i)
        total = 0
        top = used + 1 if used < r else used
        for c in range(top):
            colors[i] = c
            if violates(i):
                continue
            if c == used:
                total += (r - used) * rec(i + 1, used + 1)
            else:
                total += rec(i + 1, used)
        return total

    try:
        return rec(0, 0), nodes
    except BudgetExhausted:
        return None, nodes


def _components(copies: Sequence[FanoCopy]) -> list[list[int]]:
    """Group copy indices whose edge sets overlap (union-find over edges)."""
    parent = list(range(len(copies)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    for i, cp in enumerate(copies):
        for rk in cp.edge_ranks:
            if rk in owner:
                a, b = find(owner[rk]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[rk] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(copies)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def count_pattern_free_exact(
    h: Hypergraph3,
    r: int,
    pattern: Pattern = RAINBOW,
    budget: int | None = None,
    edge_order: Sequence[int] | None = None,
    fast_path: bool = True,
    threads: int = 1,
) -> CountResult:
    """Exact number of ``pattern``-free r-colorings of ``h``.

    ``edge_order`` optionally fixes the assignment order by listing edge
    ranks; by default edges in more Fano copies go first, ties by rank.
    ``budget`` caps the number of search nodes; when it is exceeded the
    result has ``count=None`` and ``complete=False``.
    """
    if r < 1:
        raise ValueError("need at least one color")
    copies = enumerate_fano_copies(h)
    m = h.num_edges
    if fast_path and not copies:
        return CountResult(r ** m, True, 0, 0, m)
    # a pattern with more classes than colors can never be realized
    if fast_path and len(pattern.classes) > r:
        return CountResult(r ** m, True, 0, len(copies), m)

    through: dict[int, int] = {}
    for cp in copies:
        for rk in cp.edge_ranks:
            through[rk] = through.get(rk, 0) + 1
    if edge_order is None:
        priority = {rk: (-cnt, rk) for rk, cnt in through.items()}
    else:
        seq = [triple_rank(e) if not isinstance(e, int) else e for e in edge_order]
        if sorted(seq) != sorted(h.ranks):
            raise ValueError("edge_order must list every host edge exactly once")
        priority = {rk: (i,) for i, rk in enumerate(seq)}

    jobs = []
    for group in _components(copies):
        ranks = sorted({rk for i in group for rk in copies[i].edge_ranks}, key=priority.__getitem__)
        pos = {rk: i for i, rk in enumerate(ranks)}
        checks: list[list[tuple[int, ...]]] = [[] for _ in ranks]
        for i in group:
            lines = tuple(pos[triple_rank(t)] for t in copies[i].lines)
            checks[max(lines)].append(lines)
        jobs.append(_Component(r, ranks, checks, pattern.is_rainbow, pattern.orbit, budget))

    results = pmap(_count_component, jobs, threads)
    nodes = sum(n for _, n in results)
    free = m - len(through)
    if any(c is None for c, _ in results) or (budget is not None and nodes > budget):
        return CountResult(None, False, nodes, len(copies), free, len(jobs))
    total = r ** free
    for c, _ in results:
        total *= c  # type: ignore[operator]
    return CountResult(total, True, nodes, len(copies), free, len(jobs))


@dataclass
class Estimate:
    estimate: float
    half_width: float
    samples: int
    seed: int
    pattern_free: int

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "halfWidth": self.half_width,
            "samples": self.samples,
            "seed": self.seed,
            "patternFreeSamples": self.pattern_free,
        }


def block_generator(seed: int, block: int) -> np.random.Generator:
    """PCG64 stream for sample block ``block``: SeedSequence(seed, spawn_key=(block,))."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _line_index_array(h: Hypergraph3, copies: Sequence[FanoCopy]) -> np.ndarray:
    idx = h.edge_index
    return np.array([[idx[t] for t in cp.lines] for cp in copies], dtype=np.intp).reshape(-1, 7)


def _free_in_block(args) -> int:
    seed, block, size, r, m, lines, codes = args
    rng = block_generator(seed, block)
    colors = rng.integers(1, r + 1, size=(size, m), dtype=np.int16 if r < 2 ** 15 else np.int64)
    if lines.shape[0] == 0:
        return size
    gathered = colors[:, lines]                       # (size, copies, 7)
    code = np.zeros(gathered.shape[:2], dtype=np.int64)
    for j, (a, b) in enumerate(LINE_PAIRS):
        code |= (gathered[:, :, a] == gathered[:, :, b]).astype(np.int64) << j
    bad = np.isin(code, codes).any(axis=1)
    return int(size - bad.sum())


def estimate_pattern_free(
    h: Hypergraph3,
    r: int,
    pattern: Pattern = RAINBOW,
    samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> Estimate:
    """Monte-Carlo estimate of the pattern-free fraction of uniform r-colorings.

    Sample ``i`` belongs to block ``i // BLOCK_SIZE``, and every block draws
    from its own stream (see :func:`block_generator`), so the estimate does
    not depend on how blocks are spread over workers.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if r < 1:
        raise ValueError("need at least one color")
    copies = enumerate_fano_copies(h)
    lines = _line_index_array(h, copies)
    m = h.num_edges
    jobs = []
    for block, start in enumerate(range(0, samples, BLOCK_SIZE)):
        size = min(BLOCK_SIZE, samples - start)
        jobs.append((seed, block, size, r, m, lines, pattern.orbit_codes))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            free = sum(pool.map(_free_in_block, jobs))
    else:
        free = sum(map(_free_in_block, jobs))
    p_hat = free / samples
    half = 2.576 * sqrt(p_hat * (1 - p_hat) / samples)
    return Estimate(p_hat, half, samples, seed, free)
