"""Weak hypergraph regularity: densities, (eps, d)-regular triples and cluster hypergraphs.

Given classes V1, V2, V3, a sub-triple (W1, W2, W3) with Wi a nonempty
subset of Vi *qualifies* when |W1||W2||W3| >= eps |V1||V2||V3|. The triple is
(eps, d)-regular when every qualifying sub-triple has density within eps of
d, and eps-regular when such a d exists; that is the case exactly when
(max - min) of the qualifying densities is at most 2 eps, with d the
midpoint.

The exhaustive verifier enumerates all subset triples for classes of at most
8 vertices, using subset-indicator matrices so each axis is one matrix
product, and reduces exactly (integer edge counts grouped by the size
triple). Larger classes get a seeded random refutation search, whose pass
means "not refuted", never "regular".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._exact import as_fraction, frac_str
from .coloring import Coloring
from .fano import FANO_LINES, enumerate_fano_copies, fano_automorphisms
from .hypergraph import Hypergraph3, Triple, triple_rank

EXHAUSTIVE_CLASS_LIMIT = 8
REFUTATION_SAMPLES = 10_000


def _check_classes(h: Hypergraph3, classes: Sequence[Iterable[int]]) -> list[list[int]]:
    out = [sorted(set(int(v) for v in c)) for c in classes]
    seen: set[int] = set()
    for c in out:
        if not c:
            raise ValueError("classes must be nonempty")
        if any(not 0 <= v < h.n for v in c):
            raise ValueError("class has a vertex outside the host")
        if seen & set(c):
            raise ValueError("classes must be pairwise disjoint")
        seen |= set(c)
    return out


def _tensor(h: Hypergraph3, v1: Sequence[int], v2: Sequence[int], v3: Sequence[int]) -> np.ndarray:
    t = np.zeros((len(v1), len(v2), len(v3)), dtype=np.int32)
    for i, a in enumerate(v1):
        for j, b in enumerate(v2):
            for k, c in enumerate(v3):
                if h.has_edge((a, b, c)):
                    t[i, j, k] = 1
    return t


def density(h: Hypergraph3, w1: Iterable[int], w2: Iterable[int], w3: Iterable[int]) -> Fraction:
    """Fraction of the |W1||W2||W3| transversal triples that are edges."""
    a, b, c = _check_classes(h, (w1, w2, w3))
    return Fraction(int(_tensor(h, a, b, c).sum()), len(a) * len(b) * len(c))


@dataclass(frozen=True)
class EquitablePartition:
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cls = tuple(tuple(sorted(int(v) for v in c)) for c in self.classes)
        object.__setattr__(self, "classes", cls)
        flat = [v for c in cls for v in c]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("classes must be disjoint and cover 0..n-1")
        sizes = [len(c) for c in cls]
        if sizes and max(sizes) - min(sizes) > 1:
            raise ValueError("class sizes differ by more than one")

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def m(self) -> int:
        return len(self.classes)

    @classmethod
    def consecutive(cls, n: int, m: int) -> "EquitablePartition":
        """Split 0..n-1 into m consecutive blocks of near-equal size."""
        if m < 1 or m > max(n, 1):
            raise ValueError("need 1 <= m <= n")
        bounds = [i * n // m for i in range(m + 1)]
        return cls(tuple(tuple(range(bounds[i], bounds[i + 1])) for i in range(m)))


SubTriple = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of a regularity check.

    ``status`` is "regular" (certified, with ``d``), "irregular" (with a
    witness pair: the qualifying sub-triples of largest and smallest
    density) or "not_refuted" (sampling found nothing, no certificate).
    """

    status: str
    eps: Fraction
    d: Fraction | None
    max_density: Fraction
    min_density: Fraction
    witness: tuple[SubTriple, SubTriple] | None = None
    method: str = "exhaustive"
    seed: int | None = None
    samples: int | None = None

    @property
    def regular(self) -> bool | None:
        return {"regular": True, "irregular": False}.get(self.status)

    def to_json(self) -> dict:
        out: dict = {
            "status": self.status,
            "regular": self.regular,
            "eps": frac_str(self.eps),
            "d": None if self.d is None else frac_str(self.d),
            "maxDensity": frac_str(self.max_density),
            "minDensity": frac_str(self.min_density),
            "method": self.method,
        }
        if self.witness is not None:
            out["witness"] = {"max": [list(w) for w in self.witness[0]],
                              "min": [list(w) for w in self.witness[1]]}
        if self.seed is not None:
            out["seed"] = self.seed
            out["samples"] = self.samples
        return out


def _subset_matrix(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows = nonempty subsets of range(k) sorted by (size, mask); plus sizes."""
    masks = sorted(range(1, 1 << k), key=lambda s: (s.bit_count(), s))
    mat = np.array([[s >> i & 1 for i in range(k)] for s in masks], dtype=np.int32)
    return mat, np.array([s.bit_count() for s in masks]), np.array(masks)


def _group_reduce(a: np.ndarray, sizes: np.ndarray, axis: int, op) -> np.ndarray:
    starts = np.flatnonzero(np.r_[True, sizes[1:] != sizes[:-1]])
    return op.reduceat(a, starts, axis=axis)


def _members(vs: Sequence[int], mask: int) -> tuple[int, ...]:
    return tuple(v for i, v in enumerate(vs) if mask >> i & 1)


def _exhaustive(t: np.ndarray, classes: list[list[int]], eps: Fraction) -> RegularityReport:
    (s1, z1, m1), (s2, z2, m2), (s3, z3, m3) = (_subset_matrix(len(c)) for c in classes)
    e = np.einsum("ia,abc->ibc", s1, t)
    e = np.einsum("jb,ibc->ijc", s2, e)
    e = np.einsum("kc,ijc->ijk", s3, e)
    hi, lo = e, e
    for axis, z in enumerate((z1, z2, z3)):
        hi = _group_reduce(hi, z, axis, np.maximum)
        lo = _group_reduce(lo, z, axis, np.minimum)
    full = len(classes[0]) * len(classes[1]) * len(classes[2])
    best_hi: tuple[Fraction, tuple[int, int, int]] | None = None
    best_lo: tuple[Fraction, tuple[int, int, int]] | None = None
    for a in range(1, len(classes[0]) + 1):
        for b in range(1, len(classes[1]) + 1):
            for c in range(1, len(classes[2]) + 1):
                if a * b * c < eps * full:
                    continue
                top = Fraction(int(hi[a - 1, b - 1, c - 1]), a * b * c)
                bot = Fraction(int(lo[a - 1, b - 1, c - 1]), a * b * c)
                if best_hi is None or top > best_hi[0]:
                    best_hi = (top, (a, b, c))
                if best_lo is None or bot < best_lo[0]:
                    best_lo = (bot, (a, b, c))
    assert best_hi is not None and best_lo is not None  # the full triple always qualifies
    if best_hi[0] - best_lo[0] <= 2 * eps:
        return RegularityReport("regular", eps, (best_hi[0] + best_lo[0]) / 2, best_hi[0], best_lo[0])

    def locate(size: tuple[int, int, int], value: Fraction) -> SubTriple:
        a, b, c = size
        i = np.flatnonzero(z1 == a)
        j = np.flatnonzero(z2 == b)
        k = np.flatnonzero(z3 == c)
        target = value * a * b * c
        hit = np.argwhere(e[np.ix_(i, j, k)] == int(target))[0]
        return (_members(classes[0], int(m1[i[hit[0]]])),
                _members(classes[1], int(m2[j[hit[1]]])),
                _members(classes[2], int(m3[k[hit[2]]])))

    witness = (locate(best_hi[1], best_hi[0]), locate(best_lo[1], best_lo[0]))
    return RegularityReport("irregular", eps, None, best_hi[0], best_lo[0], witness)


def _sampled(t: np.ndarray, classes: list[list[int]], eps: Fraction, seed: int, samples: int) -> RegularityReport:
    rng = np.random.Generator(np.random.PCG64(seed))
    ks = t.shape
    full = ks[0] * ks[1] * ks[2]
    all_in = tuple(np.ones(k, dtype=bool) for k in ks)
    found = [(Fraction(int(t.sum()), full), all_in)]
    for _ in range(samples):
        while True:
            q = rng.uniform(eps ** (1 / 3) if eps < 1 else 1.0, 1.0, size=3)
            ws = tuple(rng.random(k) < qi for k, qi in zip(ks, q))
            sizes = [int(w.sum()) for w in ws]
            if min(sizes) > 0 and sizes[0] * sizes[1] * sizes[2] >= eps * full:
                break
        cnt = int(t[np.ix_(*ws)].sum())
        found.append((Fraction(cnt, sizes[0] * sizes[1] * sizes[2]), ws))
    top = max(found, key=lambda f: f[0])
    bot = min(found, key=lambda f: f[0])

    def as_sets(ws) -> SubTriple:
        return tuple(tuple(v for v, keep in zip(c, w) if keep) for c, w in zip(classes, ws))  # type: ignore[return-value]

    if top[0] - bot[0] > 2 * eps:
        return RegularityReport("irregular", eps, None, top[0], bot[0],
                                (as_sets(top[1]), as_sets(bot[1])), "sampled", seed, samples)
    return RegularityReport("not_refuted", eps, None, top[0], bot[0], None, "sampled", seed, samples)


def is_eps_regular(
    h: Hypergraph3,
    v1: Iterable[int],
    v2: Iterable[int],
    v3: Iterable[int],
    eps,
    seed: int = 0,
    samples: int = REFUTATION_SAMPLES,
) -> RegularityReport:
    """Decide eps-regularity of (V1, V2, V3) in ``h``.

    Exact when every class has at most 8 vertices, otherwise a randomized
    refutation attempt with ``samples`` qualifying sub-triples.
    """
    e = as_fraction(eps)
    if e <= 0:
        raise ValueError("eps must be positive")
    classes = _check_classes(h, (v1, v2, v3))
    t = _tensor(h, *classes)
    if max(len(c) for c in classes) <= EXHAUSTIVE_CLASS_LIMIT:
        return _exhaustive(t, classes, e)
    return _sampled(t, classes, e, seed, samples)


# -- cluster hypergraphs --------------------------------------------------

@dataclass
class ClusterHypergraph:
    """Hypergraph on class indices 0..m-1; each edge carries its list of dense colors."""

    m: int
    r: int
    lists: dict[Triple, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for t, cols in self.lists.items():
            key = tuple(sorted(t))
            if len(set(key)) != 3 or not all(0 <= i < self.m for i in key):
                raise ValueError(f"bad cluster edge {t}")
            cols = tuple(sorted(set(cols)))
            if not cols:
                raise ValueError(f"cluster edge {key} has an empty color list")
            if not all(1 <= c <= self.r for c in cols):
                raise ValueError(f"cluster edge {key} has colors outside 1..{self.r}")
            clean[key] = cols
        self.lists = dict(sorted(clean.items()))

    @property
    def edges(self) -> list[Triple]:
        return list(self.lists)

    def as_hypergraph(self) -> Hypergraph3:
        return Hypergraph3.from_edges(self.m, self.lists)

    def list_size_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for cols in self.lists.values():
            out[len(cols)] = out.get(len(cols), 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {"m": self.m, "r": self.r,
                "edges": [{"triple": list(t), "colors": list(c)} for t, c in self.lists.items()]}


def color_hypergraphs(c: Coloring) -> dict[int, Hypergraph3]:
    masks = {a: 0 for a in range(1, c.r + 1)}
    for e, col in zip(c.host.edges, c.colors):
        masks[col] |= 1 << triple_rank(e)
    return {a: Hypergraph3(c.host.n, m) for a, m in masks.items()}


def cluster_hypergraph(
    h: Hypergraph3,
    c: Coloring,
    p: EquitablePartition,
    eps,
    eta,
    verdicts: Mapping[Triple, bool] | None = None,
) -> ClusterHypergraph:
    """Multicolored cluster hypergraph of a colored host.

    Class triple {i, j, k} is an edge when it is eps-regular in every color
    class and some color has density at least ``eta``; its list holds all
    such colors. Regularity is decided exhaustively unless ``verdicts`` maps
    the (sorted) index triple to a caller-supplied answer.
    """
    if c.host != h:
        raise ValueError("coloring is not over this host")
    if p.n != h.n:
        raise ValueError("partition does not cover the host vertex set")
    e = as_fraction(eps)
    et = as_fraction(eta)
    per_color = color_hypergraphs(c)
    lists: dict[Triple, tuple[int, ...]] = {}
    for tri in combinations(range(p.m), 3):
        vs = [list(p.classes[i]) for i in tri]
        tensors = {a: _tensor(g, *vs) for a, g in per_color.items()}
        size = len(vs[0]) * len(vs[1]) * len(vs[2])
        dense = tuple(a for a, t in tensors.items() if Fraction(int(t.sum()), size) >= et)
        if not dense:
            continue
        if verdicts is not None and tri in verdicts:
            ok = bool(verdicts[tri])
        else:
            if max(len(v) for v in vs) > EXHAUSTIVE_CLASS_LIMIT:
                raise ValueError(f"classes of {tri} exceed the exhaustive limit; supply a verdict")
            ok = all(t.min() == t.max() or _exhaustive(t, vs, e).status == "regular"
                     for t in tensors.values())
        if ok:
            lists[tri] = dense  # type: ignore[index]
    return ClusterHypergraph(p.m, c.r, lists)


def is_colored_subhypergraph(
    line_colors: Sequence[int], cluster: ClusterHypergraph,
) -> tuple[bool, tuple[int, ...] | None]:
    """Is the Fano plane, with line i colored ``line_colors[i]``, a colored sub-hypergraph?

    Returns an injective map of Fano points to cluster vertices under which
    every line lands on a cluster edge whose list has the line's color.
    """
    if len(line_colors) != 7:
        raise ValueError("need one color per Fano line")
    for cp in enumerate_fano_copies(cluster.as_hypergraph()):
        for sigma in fano_automorphisms():
            phi = tuple(cp.vertex_image[sigma[i]] for i in range(7))
            if all(line_colors[i] in cluster.lists[tuple(sorted(phi[v] for v in line))]  # type: ignore[index]
                   for i, line in enumerate(FANO_LINES)):
                return True, phi
    return False, None


def greedy_rainbow_assignment(lists: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Pick pairwise distinct colors, one per list, smallest available first.

    Always succeeds when there are at most 7 lists of size at least 7.
    """
    used: set[int] = set()
    out = []
    for cols in lists:
        pick = next((a for a in sorted(cols) if a not in used), None)
        if pick is None:
            return None
        used.add(pick)
        out.append(pick)
    return tuple(out)


def beta(cluster: ClusterHypergraph, ex_value: int) -> Fraction:
    """(ex(m, Fano) - #edges whose list has at least 7 colors) / m^3."""
    if cluster.m < 1:
        raise ValueError("cluster hypergraph needs at least one vertex")
    big = sum(1 for cols in cluster.lists.values() if len(cols) >= 7)
    return Fraction(ex_value - big, cluster.m ** 3)


def max_cluster_edges(m: int) -> int:
    return comb(m, 3)
