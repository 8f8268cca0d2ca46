"""``atfcert`` command line.

Exit codes: 0 success, 1 a check or certificate failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import serialize
from .affine import GeometryError, fmt_q, parse_q
from .atf import cluster_nodes, diagram_equiv, mutate_slot, seed_diagram, trade_all
from .markov import MarkovError, MarkovTriple, mutate, parent, sorted_triples
from .momentmap import invariance_suite
from .packing import (
    COMPLEMENT_E,
    Packing,
    best_diamond,
    capacity_report,
    diamond_bounds,
    five_monotone_triangles,
    glued_corner_triangle,
    nine_ball_skeleton_packing,
    single_monotone_triangle,
)
from .polytope import build, check_invariants, normalize
from .svg import render

GOALS = ("single", "five", "nine", "glued", "report", "diamond:general", "diamond:c_ge_2", "diamond:clifford", "diamond:best")


class UsageError(Exception):
    pass


def _triple(text: str) -> MarkovTriple:
    try:
        return MarkovTriple.parse(text)
    except MarkovError as exc:
        raise UsageError(f"invalid TRIPLE: {exc}") from None


def _rational(text: str) -> Fraction:
    try:
        q = parse_q(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None
    return q


def _emit(doc, out=None):
    (out or sys.stdout).write(serialize.dumps(doc))


def _read_document(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return serialize.loads(text)
    except serialize.DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from None


# --- subcommands ----------------------------------------------------------------


def cmd_markov(args) -> int:
    if args.max_c < 0:
        raise UsageError("--max-c must be a non-negative integer")
    for t in sorted_triples(args.max_c):
        row = {"triple": list(t)}
        if args.tree:
            row["parent"] = None if t.c == 1 else list(parent(t))
        print(json.dumps(row))
    return 0


def cmd_build(args) -> int:
    t = _triple(args.triple).canonical()
    if args.normalized:
        d = seed_diagram(t)
        if args.trade_all:
            d = trade_all(d)
        if args.cluster is not None:
            d = cluster_nodes(trade_all(d), _rational(args.cluster))
        _emit(serialize.make_document(d))
        return 0
    data = build(t)
    problems = check_invariants(data)
    doc = {
        "triple": list(t),
        "l": [data.l1, data.l2, data.l3],
        "polygon": data.polygon.to_json(),
        "corner_weights": list(data.corner_weights),
        "normals": [list(n) for n in data.normals],
        "offsets": [fmt_q(x) for x in data.offsets],
        "lens_labels": [list(x) for x in data.lens_labels],
        "fiber": [fmt_q(x) for x in data.fiber],
        "normalizing_scale": fmt_q(normalize(data).scale),
        "checks_failed": problems,
    }
    _emit(doc)
    return 1 if problems else 0


def _parse_word(word: str) -> list[int]:
    slots = []
    for ch in word.replace(",", "").replace(" ", ""):
        if ch in "012":
            slots.append(int(ch))
        elif ch.upper() in "ABC":
            slots.append("ABC".index(ch.upper()))
        else:
            raise UsageError(f"bad mutation word {word!r}: use letters A, B, C or digits 0, 1, 2")
    return slots


def cmd_mutate(args) -> int:
    t = _triple(args.triple).canonical()
    d = seed_diagram(t)
    cur = t
    for slot in _parse_word(args.word):
        d = mutate_slot(d, slot)
        cur = mutate(cur, slot).canonical()
    equivalent = diagram_equiv(d, seed_diagram(cur)) is not None
    extra = {"mutation": {"start": list(t), "word": args.word, "result": list(cur), "equivalent_to_seed": equivalent}}
    _emit(serialize.make_document(d, extra=extra))
    return 0 if equivalent else 1


def _packings_for(goal: str, t: MarkovTriple, eps: Fraction, side: Fraction):
    d = seed_diagram(t)
    if goal == "single":
        return [single_monotone_triangle(d)]
    if goal == "five":
        return [five_monotone_triangles(d)]
    if goal == "nine":
        if t.c != 1:
            raise UsageError("the nine-ball packing lives in the clustered (1,1,1) diagram")
        return [nine_ball_skeleton_packing(side, eps)]
    if goal == "glued":
        return [glued_corner_triangle(d)]
    if goal == "diamond:best":
        _, placement = best_diamond(d)
        return [Packing("best_diamond", d, (placement,), COMPLEMENT_E, note="search evidence only")]
    target = goal.split(":", 1)[1]
    return [diamond_bounds(d, target, eps)]


def cmd_pack(args) -> int:
    t = _triple(args.triple).canonical()
    if args.goal not in GOALS:
        raise UsageError(f"unknown goal {args.goal!r}; choose from {', '.join(GOALS)}")
    eps = _rational(args.eps)
    side = _rational(args.side)
    try:
        if args.goal == "report":
            rep = capacity_report(t, eps, side)
            packs = [e.packing for e in rep.entries]
            doc = serialize.make_document(seed_diagram(t), packs, rep)
            ok = rep.ok
        else:
            packs = _packings_for(args.goal, t, eps, side)
            doc = serialize.make_document(packs[0].diagram, packs)
            ok = all(p.verdict() for p in packs)
    except (GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(doc)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    doc = _read_document(args.file)
    try:
        problems = serialize.verify_document(doc)
    except serialize.DocumentError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    for p in problems:
        print(p, file=sys.stderr)
    n = len(doc.get("packings", []))
    print(f"{args.file}: {'FAIL' if problems else 'OK'} ({n} packing{'s' if n != 1 else ''})")
    return 1 if problems else 0


def cmd_moment(args) -> int:
    t = _triple(args.triple).canonical()
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    rep = invariance_suite(t, args.samples, args.seed)
    print(
        json.dumps(
            {
                "triple": list(t),
                "samples": rep.samples,
                "ok": rep.ok,
                "max_errors": {k: float(f"{v:.3e}") for k, v in sorted(rep.max_errors.items())},
                "failures": [
                    {"check": name, "error": err, "witness": None if w is None else [str(c) for c in w]}
                    for name, err, w in rep.failures
                ],
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0 if rep.ok else 1


def cmd_render(args) -> int:
    doc = _read_document(args.file)
    try:
        d, packs = serialize.parse_document(doc)
    except serialize.DocumentError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    top = serialize.diagram_to_json(d)
    shown = tuple(p for p in packs if serialize.diagram_to_json(p.diagram) == top)
    svg = render(d, shown)
    if args.output == "-":
        sys.stdout.write(svg)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    return 0


# --- entry point ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="atfcert", description="Exact certificates for almost toric diagrams of CP^2.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("markov", help="list canonical Markov triples as JSON lines")
    s.add_argument("--max-c", type=int, required=True, metavar="N")
    s.add_argument("--tree", action="store_true", help="include the parent of each triple")
    s.set_defaults(func=cmd_markov)

    s = sub.add_parser("build", help="weighted projective polytope or normalized seed diagram")
    s.add_argument("triple", metavar="TRIPLE", help="e.g. 1,2,5")
    s.add_argument("--normalized", action="store_true", help="emit the normalized base diagram document")
    s.add_argument("--trade-all", action="store_true", help="trade every smooth corner for a node")
    s.add_argument("--cluster", metavar="EPS", help="trade all corners and slide every node into the EPS-disk")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("mutate", help="apply a mutation word to the seed diagram")
    s.add_argument("triple", metavar="TRIPLE")
    s.add_argument("--word", required=True, metavar="W", help="slots of the running sorted triple, e.g. ABA or 0,1,0")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("pack", help="build and verify ball packings")
    s.add_argument("triple", metavar="TRIPLE")
    s.add_argument("--goal", required=True, metavar="GOAL", help=" | ".join(GOALS))
    s.add_argument("--eps", default="1/100", help="slack for diamonds; disk radius for the nine-ball packing (default 1/100)")
    s.add_argument("--side", default="9/10", help="triangle side for the nine-ball packing (default 9/10)")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("verify", help="re-check every certificate in a document")
    s.add_argument("file", metavar="FILE")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("moment", help="numerical moment map checks")
    s.add_argument("triple", metavar="TRIPLE")
    s.add_argument("--samples", type=int, default=1000, metavar="N")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_moment)

    s = sub.add_parser("render", help="draw a document as SVG")
    s.add_argument("file", metavar="FILE")
    s.add_argument("-o", "--output", required=True, metavar="SVG", help="output path, or - for stdout")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"atfcert: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
