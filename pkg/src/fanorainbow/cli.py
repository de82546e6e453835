"""Command-line front end: ``fanorainbow <command> ...``.

Every run prints (or writes to ``--output``) one JSON document carrying
``schemaVersion`` and the resolved ``config``. The worker count is left out
of ``config`` on purpose: results do not depend on it, and neither should the
bytes of the artifact.

Exit codes: 0 success, 2 bad input, 3 budget exhausted (partial output is
still written), 4 internal consistency violation.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import bounds, io
from ._exact import as_fraction, frac_str
from .coloring import RAINBOW, Pattern, count_pattern_free_exact, estimate_pattern_free
from .errors import InputError, InternalConsistencyError
from .extremal import DEFAULT_TURAN_BUDGET, turan_number
from .fano import count_fano_copies, enumerate_fano_copies
from .hypergraph import (
    Bipartition,
    MultipartiteSpec,
    build_bn,
    build_complete,
    build_multipartite,
    random_hypergraph,
)
from .regularity import EquitablePartition, cluster_hypergraph, density, is_eps_regular
from .stability import (
    check_kee_stability,
    check_sizes_lemma,
    classify_abundant_colors,
    edge_disjoint_k4_packing,
    min_noncrossing_bipartition,
    three_colored_triples,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(float(raw))
    except ValueError:
        raise InputError(f"environment variable {name}={raw!r} is not a number") from None


def _budget(value: str | None, env: str) -> int | None:
    if value is not None:
        try:
            return int(float(value))
        except ValueError:
            raise InputError(f"budget {value!r} is not a number") from None
    return _env_int(env)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{text!r} is not a rational number") from None


def _config(args: argparse.Namespace) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("threads", "output", "func"):
            continue
        out[k] = frac_str(v) if isinstance(v, Fraction) else v
    return out


def _csv_text(rows: list[dict]) -> str:
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _host(args: argparse.Namespace):
    return io.hypergraph_from_json(io.load(args.input))


# -- commands -------------------------------------------------------------

def cmd_gen(args) -> tuple[dict, int]:
    extra: dict[str, Any] = {}
    if args.kind == "complete":
        h = build_complete(args.n)
    elif args.kind == "bn":
        h, part = build_bn(args.n)
        extra["partition"] = {"classes": [sorted(part.part_a), sorted(part.part_b)]}
    elif args.kind == "multipartite":
        vec, sizes = _int_list(args.vector), _int_list(args.sizes)
        start, classes = 0, []
        for s in sizes:
            classes.append(list(range(start, start + s)))
            start += s
        try:
            h = build_multipartite(MultipartiteSpec(tuple(vec), tuple(frozenset(c) for c in classes)))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        extra["partition"] = {"classes": classes}
    else:
        if not 0 <= args.p <= 1:
            raise InputError("p must lie in [0, 1]")
        h = random_hypergraph(args.n, args.p, np.random.Generator(np.random.PCG64(args.seed)))
    return {**io.hypergraph_to_json(h), **extra}, EXIT_OK


def cmd_fano(args) -> tuple[dict, int]:
    h = _host(args)
    if args.action == "count":
        return {"copies": count_fano_copies(h, args.threads)}, EXIT_OK
    copies = enumerate_fano_copies(h, args.threads)
    return {"count": len(copies), "copies": [[list(t) for t in cp.lines] for cp in copies]}, EXIT_OK


def _pattern(spec: str) -> Pattern:
    if spec == "rainbow":
        return RAINBOW
    if spec in ("monochromatic", "mono"):
        return Pattern.monochromatic()
    return io.pattern_from_json(io.load(spec))


def cmd_count(args) -> tuple[dict, int]:
    h = _host(args)
    pattern = _pattern(args.pattern)
    rs = _int_list(args.colors)
    if not rs or min(rs) < 1:
        raise InputError("--colors needs positive integers")
    args.exact = args.estimate is None
    args.budget = None if not args.exact else _budget(args.budget, "FANORAINBOW_COUNT_BUDGET")
    rows, status = [], EXIT_OK
    for r in rs:
        if args.estimate is not None:
            est = estimate_pattern_free(h, r, pattern, args.estimate, args.seed, args.threads)
            rows.append({"r": r, **est.to_json()})
        else:
            res = count_pattern_free_exact(h, r, pattern, args.budget, threads=args.threads)
            if not res.complete:
                status = EXIT_BUDGET
            rows.append({"r": r, **res.to_json()})
    out: dict[str, Any] = {"pattern": pattern.to_json(), "edges": h.num_edges}
    if len(rows) == 1:
        out.update(rows[0])
    else:
        out["rows"] = rows
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(_csv_text(rows))
    return out, status


def cmd_extremal(args) -> tuple[dict, int]:
    ns = _int_list(args.n)
    budget = _budget(args.budget, "FANORAINBOW_TURAN_BUDGET")
    if budget is None:
        budget = DEFAULT_TURAN_BUDGET
    args.budget = budget
    rows, status = [], EXIT_OK
    for n in ns:
        res = turan_number(n, budget, args.threads)
        if not res.proved_optimal:
            status = EXIT_BUDGET
        row = res.to_json(timing=not args.no_timing)
        if not res.proved_optimal:
            row["note"] = "budget exhausted: value is the best incumbent found, not a proof"
        rows.append(row)
    out: dict[str, Any] = rows[0] if len(rows) == 1 else {"rows": rows}
    if args.csv:
        flat = [{k: v for k, v in r.items() if k not in ("witnessEdges", "incumbentTrace")} for r in rows]
        with open(args.csv, "w", newline="") as fh:
            fh.write(_csv_text(flat))
    return out, status


def _bipartition(args, n: int) -> Bipartition:
    return io.bipartition_from_json(io.load(_need(args.partition, "--partition")), n)


def cmd_stability(args) -> tuple[dict, int]:
    if args.action == "k4pack":
        n, edges = io.graph_from_json(io.load(args.input))
        packing = edge_disjoint_k4_packing(n, edges)
        guarantee = Fraction(len(set(map(tuple, map(sorted, edges)))) * 3 - n * n, 18)
        return {"count": len(packing), "packing": [list(q) for q in packing],
                "guaranteedAtLeast": frac_str(max(guarantee, Fraction(0)))}, EXIT_OK
    h = _host(args)
    if args.action == "bipartition":
        if args.mode == "exhaustive" and h.n > 26:
            raise InputError("exhaustive mode supports n <= 26")
        return min_noncrossing_bipartition(h, args.mode, args.seed, args.restarts, args.threads).to_json(), EXIT_OK
    if args.action == "sizes":
        return check_sizes_lemma(h, _bipartition(args, h.n), _need(args.delta, "--delta")).to_json(), EXIT_OK
    if args.action == "kee":
        return check_kee_stability(h, _need(args.delta, "--delta"), args.ex, threads=args.threads).to_json(), EXIT_OK
    # abundant
    c = io.coloring_from_json(io.load(_need(args.coloring, "--coloring")), h)
    p = _bipartition(args, h.n)
    xi = _need(args.xi, "--xi")
    ab = classify_abundant_colors(h, c, args.vertex, p, xi)
    tri = three_colored_triples(h, c, args.vertex, p, xi)
    return {**ab.to_json(), "triples": {**tri.to_json(),
                                        "list": [[list(f) for f in t] for t in tri.triples]}}, EXIT_OK


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required for this command")
    return value


def cmd_regularity(args) -> tuple[dict, int]:
    h = _host(args)
    classes = io.partition_from_json(io.load(args.partition))
    if args.action in ("density", "check"):
        if len(classes) != 3:
            raise InputError("density and check need a partition file with exactly 3 classes")
        if args.action == "density":
            return {"density": frac_str(density(h, *classes))}, EXIT_OK
        rep = is_eps_regular(h, *classes, _need(args.eps, "--eps"), seed=args.seed, samples=args.samples)
        return rep.to_json(), EXIT_OK
    c = io.coloring_from_json(io.load(_need(args.coloring, "--coloring")), h)
    try:
        p = EquitablePartition(tuple(tuple(x) for x in classes))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cl = cluster_hypergraph(h, c, p, _need(args.eps, "--eps"), _need(args.eta, "--eta"))
    return cl.to_json(), EXIT_OK


def cmd_bounds(args) -> tuple[dict, int]:
    if args.action == "r0":
        delta = args.delta = args.delta if args.delta is not None else bounds.THEOREM_DELTA
        a = bounds.r0_exponent_lemma(delta, "pow")
        b = bounds.r0_exponent_lemma(delta, "loop")
        if a != b:
            raise InternalConsistencyError("the two big-integer paths disagree")
        text = str(a) if isinstance(a, int) else frac_str(a)
        return {"delta": frac_str(as_fraction(delta)), "log6R0": text, "exact": isinstance(a, int),
                "digits": len(str(a)) if isinstance(a, int) else None, "pathsAgree": True}, EXIT_OK
    if args.action == "eta":
        delta, r = _need(args.delta, "--delta"), _need(args.r, "--r")
        if args.eta is not None:
            return bounds.eta_window_check(delta, r, args.eta).to_json(), EXIT_OK
        return bounds.solve_eta(delta, r).to_json(), EXIT_OK
    if args.action == "check41":
        g, x, d = bounds.pinned_parameters()
        g = args.gamma = args.gamma if args.gamma is not None else g
        x = args.xi = args.xi if args.xi is not None else x
        d = args.delta = args.delta if args.delta is not None else d
        return {"gamma": frac_str(g), "xi": frac_str(x), "delta": frac_str(d),
                **bounds.params_check_41(g, x, d, args.r).to_json()}, EXIT_OK
    if args.action == "edges":
        lo, ex, hi = bounds.bn_edge_bounds(_need(args.n, "--n"))
        return {"n": args.n, "lower": frac_str(lo), "exact": ex, "upper": frac_str(hi)}, EXIT_OK
    if args.action == "extension":
        return bounds.extension_counts(_need(args.r, "--r")).to_json(exact=True), EXIT_OK
    x = _need(args.x, "--x")
    return {"x": frac_str(x), "entropy": bounds.entropy(float(x)),
            "boundHolds": bounds.check_entropy_bound_23(x) if 0 < x <= Fraction(1, 8) else None}, EXIT_OK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--output", help="write the JSON artifact here instead of stdout")

    parser = argparse.ArgumentParser(prog="fanorainbow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a hypergraph")
    p.add_argument("kind", choices=["complete", "bn", "multipartite", "random"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--vector", default="2,1", help="intersection vector, e.g. 2,1")
    p.add_argument("--sizes", default="", help="class sizes, e.g. 4,4")
    p.add_argument("--p", type=float, default=0.5, help="edge probability for random")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fano", parents=[common], help="Fano copies of a host")
    p.add_argument("action", choices=["count", "list"])
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_fano)

    p = sub.add_parser("count", parents=[common], help="pattern-free colorings")
    p.add_argument("--input", required=True)
    p.add_argument("--colors", required=True, help="r, or a comma-separated sweep")
    p.add_argument("--pattern", default="rainbow", help="rainbow, monochromatic or a pattern JSON file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--estimate", type=int, metavar="N", help="Monte-Carlo with N samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", help="node budget (env FANORAINBOW_COUNT_BUDGET)")
    p.add_argument("--csv", help="also write the rows as CSV")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("extremal", parents=[common], help="ex(n, Fano) by branch-and-bound")
    p.add_argument("--n", required=True, help="n, or a comma-separated sweep")
    p.add_argument("--budget", help="node budget per root subtree (env FANORAINBOW_TURAN_BUDGET)")
    p.add_argument("--csv")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock seconds")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("stability", parents=[common], help="stability diagnostics")
    p.add_argument("action", choices=["bipartition", "sizes", "kee", "k4pack", "abundant"])
    p.add_argument("--input", required=True)
    p.add_argument("--coloring")
    p.add_argument("--partition")
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--xi", type=_fraction)
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--mode", choices=["exhaustive", "localsearch"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--ex", type=int, help="ex(n, Fano) if known")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("regularity", parents=[common], help="densities and regularity")
    p.add_argument("action", choices=["density", "check", "cluster"])
    p.add_argument("--input", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--coloring")
    p.add_argument("--eps", type=_fraction)
    p.add_argument("--eta", type=_fraction)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("bounds", parents=[common], help="constants and inequalities")
    p.add_argument("action", choices=["r0", "eta", "check41", "edges", "extension", "entropy"])
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--r", type=int)
    p.add_argument("--eta", type=_fraction)
    p.add_argument("--gamma", type=_fraction)
    p.add_argument("--xi", type=_fraction)
    p.add_argument("--n", type=int)
    p.add_argument("--x", type=_fraction)
    p.set_defaults(func=cmd_bounds)
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Parse and execute; returns (exit status, artifact text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), ""
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT, ""
    func: Callable = args.func
    try:
        result, status = func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL, ""
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""
    doc = {"schemaVersion": SCHEMA_VERSION, "command": args.command, "config": _config(args), **result}
    text = io.dumps(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status, text


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
