"""JSON file formats.

hypergraph  {"n": 7, "edges": [[0,1,2], ...]}   triples sorted, list sorted
pattern     {"classes": [[0], [1,2], ...]}      Fano line indices 0..6
coloring    {"r": 3, "colors": [1, 2, ...]}     one color per edge, canonical edge order
partition   {"classes": [[0,1,2], [3,4]]}
graph       {"n": 5, "edges": [[0,1], ...]}

Extra keys (such as ``schemaVersion`` or ``config`` written by the CLI) are
ignored on reading, so CLI outputs can be fed back as inputs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .coloring import Coloring, Pattern
from .errors import InputError
from .hypergraph import Bipartition, Hypergraph3


def dumps(obj: Any) -> str:
    """Deterministic pretty JSON with a trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def _require(obj: Any, key: str, kind: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{kind} JSON needs a {key!r} field")
    return obj[key]


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{what} must be an integer, got {x!r}")
    return x


def hypergraph_to_json(h: Hypergraph3) -> dict:
    return {"n": h.n, "edges": [list(e) for e in h.edges]}


def hypergraph_from_json(obj: Any) -> Hypergraph3:
    n = _int(_require(obj, "n", "hypergraph"), "n")
    edges = _require(obj, "edges", "hypergraph")
    if not isinstance(edges, list):
        raise InputError("edges must be a list")
    try:
        return Hypergraph3.from_edges(n, [[_int(v, "vertex") for v in e] for e in edges])
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def dumps_hypergraph(h: Hypergraph3) -> str:
    """The canonical single-line form."""
    return json.dumps(hypergraph_to_json(h), separators=(",", ":")) + "\n"


def pattern_from_json(obj: Any) -> Pattern:
    classes = _require(obj, "classes", "pattern")
    try:
        return Pattern(tuple(frozenset(_int(i, "line index") for i in c) for c in classes))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def coloring_to_json(c: Coloring) -> dict:
    return {"r": c.r, "colors": list(c.colors)}


def coloring_from_json(obj: Any, host: Hypergraph3) -> Coloring:
    r = _int(_require(obj, "r", "coloring"), "r")
    colors = _require(obj, "colors", "coloring")
    try:
        return Coloring(host, r, tuple(_int(x, "color") for x in colors))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def partition_from_json(obj: Any) -> list[list[int]]:
    classes = _require(obj, "classes", "partition")
    if not isinstance(classes, list) or not all(isinstance(c, list) for c in classes):
        raise InputError("partition classes must be a list of lists")
    return [[_int(v, "vertex") for v in c] for c in classes]


def bipartition_from_json(obj: Any, n: int) -> Bipartition:
    classes = partition_from_json(obj)
    if len(classes) != 2:
        raise InputError(f"a bipartition needs 2 classes, got {len(classes)}")
    a, b = set(classes[0]), set(classes[1])
    if a & b or a | b != set(range(n)):
        raise InputError(f"bipartition classes must split 0..{n - 1}")
    return Bipartition(n, frozenset(a))


def graph_from_json(obj: Any) -> tuple[int, list[tuple[int, int]]]:
    n = _int(_require(obj, "n", "graph"), "n")
    edges = _require(obj, "edges", "graph")
    out = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"graph edge {e!r} must be a pair")
        u, w = (_int(v, "vertex") for v in e)
        if u == w or not (0 <= u < n and 0 <= w < n):
            raise InputError(f"graph edge {e!r} is not a pair of distinct vertices below {n}")
        out.append((u, w))
    return n, out
