"""Exact ex(n, Fano) for small n, and comparison against r^ex(n, Fano).

The search works on the complement: a Fano-free hypergraph on ``n``
vertices is K_n minus a set of triples that meets every Fano copy of K_n,
so ex(n, Fano) = C(n,3) - (minimum hitting set size). Branch-and-bound runs
over triple ranks with

* the incumbent seeded by B_n,
* branching on an un-hit copy with the fewest undecided triples
  (branch j removes its j-th undecided triple and keeps the earlier ones),
* a lower bound from the larger of a greedy packing of pairwise disjoint
  un-hit copies and the covering bound ``ceil(unhit / max hits per triple)``,
* symmetry breaking at the root: the stabilizer of a copy is transitive on
  its lines, so some optimal hitting set contains the first line of the
  first copy.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from ._parallel import pmap
from .errors import InternalConsistencyError
from .fano import complete_host_copies, is_fano_free
from .hypergraph import Hypergraph3, bn_edge_count, build_bn, build_complete, triple_unrank

DEFAULT_TURAN_BUDGET = int(float(os.environ.get("FANORAINBOW_TURAN_BUDGET", "1e8")))


@dataclass
class TuranResult:
    n: int
    value: int
    witness: Hypergraph3
    proved_optimal: bool
    nodes: int
    seconds: float
    budget: int
    trace: list[int] = field(default_factory=list)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "value": self.value,
            "provedOptimal": self.proved_optimal,
            "witnessEdges": [list(e) for e in self.witness.edges],
            "nodesExpanded": self.nodes,
            "budget": self.budget,
            "incumbentTrace": self.trace,
        }
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class _Job:
    copies: tuple[int, ...]
    removed: int
    kept: int
    size: int
    best: int
    budget: int


def _popcount(x: int) -> int:
    return x.bit_count()


def _lower_bound(unhit: list[int], kept: int) -> int:
    if not unhit:
        return 0
    free = [c & ~kept for c in unhit]
    free.sort(key=_popcount)
    used = 0
    packing = 0
    for f in free:
        if not f & used:
            used |= f
            packing += 1
    hits: dict[int, int] = {}
    for f in free:
        while f:
            low = f & -f
            hits[low] = hits.get(low, 0) + 1
            f ^= low
    covering = -(-len(unhit) // max(hits.values()))
    return max(packing, covering)


def _search(job: _Job) -> tuple[int | None, int, int, list[int], bool]:
    """DFS for a hitting set smaller than ``job.best``.

    Returns (best size found or None, its mask, nodes, sizes found, exhausted).
    """
    copies = job.copies
    best = job.best
    best_mask = 0
    found: list[int] = []
    nodes = 0
    exhausted = False

    def rec(removed: int, kept: int, size: int) -> None:
        nonlocal best, best_mask, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > job.budget:
            exhausted = True
            return
        unhit = [c for c in copies if not c & removed]
        if not unhit:
            if size < best:
                best, best_mask = size, removed
                found.append(size)
            return
        if size + _lower_bound(unhit, kept) >= best:
            return
        pick = min(unhit, key=lambda c: _popcount(c & ~kept))
        free = pick & ~kept
        if not free:
            return
        prefix = 0
        while free:
            low = free & -free
            free ^= low
            rec(removed | low, kept | prefix, size + 1)
            prefix |= low

    rec(job.removed, job.kept, job.size)
    if best < job.best:
        return best, best_mask, nodes, found, exhausted
    return None, 0, nodes, found, exhausted


def _root_jobs(n: int, best: int, budget: int) -> tuple[list[_Job], int]:
    copies = tuple(sum(1 << rk for rk in cp.edge_ranks) for cp in complete_host_copies(n))
    first = copies[0]
    root = first & -first
    unhit = [c for c in copies if not c & root]
    if not unhit:
        return [_Job(copies, root, 0, 1, best, budget)], 1
    pick = min(unhit, key=_popcount)
    jobs = []
    prefix = 0
    free = pick
    while free:
        low = free & -free
        free ^= low
        jobs.append(_Job(copies, root | low, prefix, 2, best, budget))
        prefix |= low
    return jobs, 1


def turan_number(n: int, budget: int | None = None, threads: int = 1) -> TuranResult:
    """ex(n, Fano) by branch-and-bound.

    ``budget`` caps the search nodes of each root subtree. If any subtree
    runs out, the best hypergraph found so far is returned with
    ``proved_optimal=False``.
    """
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    budget = DEFAULT_TURAN_BUDGET if budget is None else int(budget)
    start = time.perf_counter()
    total = comb(n, 3)
    if n < 7:
        h = build_complete(n)
        return TuranResult(n, total, h, True, 0, time.perf_counter() - start, budget, [total])

    bn, _ = build_bn(n)
    universe = (1 << total) - 1
    best = total - bn.num_edges
    best_mask = universe & ~bn.mask
    jobs, nodes = _root_jobs(n, best, budget)
    results = pmap(_search, jobs, threads)

    trace = [bn.num_edges]
    exhausted = False
    candidates = []
    for size, mask, job_nodes, found, job_exhausted in results:
        nodes += job_nodes
        exhausted |= job_exhausted
        for s in found:
            if total - s > trace[-1]:
                trace.append(total - s)
        if size is not None:
            candidates.append((size, universe & ~mask))
    if candidates:
        size = min(s for s, _ in candidates)
        if size < best:
            best = size
            best_mask = universe & ~min(w for s, w in candidates if s == size)
    witness = Hypergraph3(n, universe & ~best_mask)
    if not is_fano_free(witness):
        raise InternalConsistencyError(f"Turán witness for n={n} contains a Fano plane")
    return TuranResult(n, witness.num_edges, witness, not exhausted, nodes,
                       time.perf_counter() - start, budget, trace)


def known_turan_value(n: int, budget: int | None = None) -> int:
    """ex(n, Fano): by search for n <= 7, |E(B_n)| for n >= 8, where B_n is known to be extremal."""
    if n >= 8:
        return bn_edge_count(n)
    res = turan_number(n, budget)
    if not res.proved_optimal:
        raise ValueError(f"ex({n}, Fano) not proved within the budget")
    return res.value


@dataclass
class Benchmark:
    n: int
    r: int
    ex: int
    log_r_count: float
    difference: float
    sign: int
    exact: bool

    def to_json(self) -> dict:
        return {
            "n": self.n, "r": self.r, "ex": self.ex, "logRCount": self.log_r_count,
            "difference": self.difference, "sign": self.sign, "exact": self.exact,
        }


def _exact_log(value: int, base: int) -> int | None:
    if value < 1:
        return None
    if base == 1:
        return 0 if value == 1 else None
    k = 0
    while value % base == 0:
        value //= base
        k += 1
    return k if value == 1 else None


def benchmark_against_theorem(
    h: Hypergraph3,
    r: int,
    count: int | None = None,
    estimate: float | None = None,
    ex_value: int | None = None,
) -> Benchmark:
    """Compare a (count or estimated fraction of) rainbow-free colorings with r^ex(n).

    Pass ``count`` for an exact count, or ``estimate`` for the fraction of
    rainbow-free colorings (as from Monte-Carlo sampling). The reported
    difference is log_r(count) - ex(n, Fano).
    """
    if r < 2:
        raise ValueError("log base r needs r >= 2")
    if (count is None) == (estimate is None):
        raise ValueError("give exactly one of count and estimate")
    ex = ex_value if ex_value is not None else known_turan_value(h.n)
    if count is not None:
        if count < 1:
            raise ValueError("count must be positive")
        target = r ** ex
        sign = (count > target) - (count < target)
        k = _exact_log(count, r)
        if k is not None:
            return Benchmark(h.n, r, ex, float(k), float(k - ex), sign, True)
        log_c = math.log(count) / math.log(r)
        return Benchmark(h.n, r, ex, log_c, log_c - ex, sign, True)
    if not 0 < estimate <= 1:  # type: ignore[operator]
        raise ValueError("estimate must be a fraction in (0, 1]")
    log_c = h.num_edges + math.log(estimate) / math.log(r)  # type: ignore[arg-type]
    diff = log_c - ex
    return Benchmark(h.n, r, ex, log_c, diff, (diff > 0) - (diff < 0), False)


def witness_edges(mask: int) -> list[tuple[int, int, int]]:
    out = []
    while mask:
        low = mask & -mask
        out.append(triple_unrank(low.bit_length() - 1))
        mask ^= low
    return sorted(out)


def sweep(ns: Sequence[int], budget: int | None = None, threads: int = 1) -> list[TuranResult]:
    return [turan_number(n, budget, threads) for n in ns]
