"""Acceptance criteria 1-6.

Each criterion is a plain function returning a list of problems, so the
file also runs as a script (``python3 tests/test_acceptance.py``).  Under
pytest each criterion prints one PASS/FAIL line to the terminal.
"""

import json
import random
import sys
import time
from fractions import Fraction as F
from math import gcd
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import _hull  # noqa: E402
from oracles import (  # noqa: E402
    clifford_image,
    corner_invariants,
    cyclic_equal,
    l1_by_search,
    lattice_len,
    markov_scan,
    packing_problems,
    shoelace,
)

from atfcert import serialize  # noqa: E402
from atfcert.affine import AffineMap, ConvexPolygon, mat_det, mat_vec, monodromy  # noqa: E402
from atfcert.atf import (  # noqa: E402
    CUT,
    check_diagram,
    cluster_nodes,
    diagram_equiv,
    mutate_diagram,
    mutate_slot,
    mutation_locality,
    mutation_step,
    seed_diagram,
    trade_all,
)
from atfcert.markov import MarkovTriple, enumerate_triples, mutate  # noqa: E402
from atfcert.momentmap import invariance_suite, phi_P, rescale_to_level  # noqa: E402
from atfcert.packing import (  # noqa: E402
    COMPLEMENT_E,
    DiamondPlacement,
    TrianglePlacement,
    capacity_report,
    clustered_clifford,
    fs_capacity_over_pi,
    nine_ball_triangles,
    verify,
    verify_packing,
)
from atfcert.polytope import (  # noqa: E402
    barycenter,
    build,
    check_invariants,
    check_kernel,
    check_normalized,
    disc_sizes,
    evans_smith_failures,
    normalize,
)
from atfcert.svg import render  # noqa: E402

TOL = 1e-9
ROOT = MarkovTriple(1, 1, 1)


def _triples(max_c):
    return sorted(enumerate_triples(max_c), key=lambda t: t.c)


# --- 1 ------------------------------------------------------------------------


def markov_suite():
    out = []
    got = {tuple(t) for t in enumerate_triples(1000)}
    if got != markov_scan(1000):
        out.append("enumeration differs from the brute-force scan")
    prefix = sorted((t for t in got if t[2] <= 34), key=lambda t: t[2])
    if prefix != [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29), (1, 13, 34)]:
        out.append(f"prefix {prefix}")
    for a, b, c in got:
        if c < 2:
            continue
        if not 2 * a * b <= c:
            out.append(f"2ab <= c fails at {(a, b, c)}")
        if F(c * c, a * a + b * b + c * c) < F(2, 3):
            out.append(f"ratio fails at {(a, b, c)}")
    return out


# --- 2 ------------------------------------------------------------------------


def polytope_suite():
    out = []
    for t in _triples(500):
        a, b, c = t
        d = build(t)
        u1, u2, u3 = d.u
        if any(a * a * u1[i] + b * b * u2[i] + c * c * u3[i] for i in range(2)):
            out.append(f"{t}: balancing")
        if a * d.l2 + b * d.l1 != 3 * c or d.l1 != l1_by_search(a, b, c):
            out.append(f"{t}: l-relation")
        out += [f"{t}: {m}" for m in check_invariants(d) + evans_smith_failures(t, d.l1, d.l2)]
        if not check_kernel(d):
            out.append(f"{t}: kernel")
        p = barycenter(d)
        if p != (F(a * b * c, 3), F(b * c * d.l1, 3)):
            out.append(f"{t}: barycenter {p}")
        if disc_sizes(d, p) != (F(a * b * c, 3),) * 3:
            out.append(f"{t}: disc sizes")
        n = normalize(d)
        out += [f"{t}: {m}" for m in check_normalized(n)]
        verts = list(n.polygon.vertices)
        lengths = [lattice_len(p, q) for p, q in zip(verts, verts[1:] + verts[:1])]
        if sum(lengths) != 9 or shoelace(verts) != F(9, 2):
            out.append(f"{t}: normalized boundary/area")
        if c >= 2 and max(lengths) < 6:
            out.append(f"{t}: longest edge {max(lengths)}")
    return out


# --- 3 ------------------------------------------------------------------------


def _oracle_equiv(d1, d2):
    s = corner_invariants(list(d1.polygon.vertices))
    v = list(d2.polygon.vertices)
    return cyclic_equal(s, corner_invariants(v)) or cyclic_equal(s, corner_invariants([(x, -y) for x, y in v]))


def mutation_suite():
    out = []
    eps = F(1, 10)
    for t in _triples(50):
        d = seed_diagram(t)
        for slot in range(3):
            m = mutate_slot(d, slot)
            target = mutate(t, slot).canonical()
            ref = seed_diagram(target)
            if m.triple != target or diagram_equiv(m, ref) is None or not _oracle_equiv(m, ref):
                out.append(f"{t} slot {slot}: not equivalent to the seed of {target}")
            if m.polygon.area() != F(9, 2) or m.fiber != d.fiber:
                out.append(f"{t} slot {slot}: area or fiber changed")
            check_diagram(m)
        traded = trade_all(d)
        clustered = cluster_nodes(traded, eps)
        for i, corner in enumerate(traded.corners):
            if corner.kind != CUT:
                continue
            step = mutation_step(traded, i)
            back = mutate_diagram(step.after, step.after.corner_index(step.exit_point))
            if diagram_equiv(back, traded) is None:
                out.append(f"{t} corner {i}: double mutation")
            if not mutation_locality(clustered, i, eps).ok:
                out.append(f"{t} corner {i}: locality")
    return out


# --- 4 ------------------------------------------------------------------------


def capacity_suite():
    out = []
    eps = F(1, 100)
    for t in _triples(100):
        r = capacity_report(t)
        by = {e.packing.name: e for e in r.entries}
        for e in r.entries:
            if not e.verified:
                out.append(f"{t}: {e.packing.name} not verified {e.reasons}")
            out += [f"{t}: {e.packing.name}: {m}" for m in packing_problems(e.packing)]
        single = by["single"].packing.placements[0]
        if fs_capacity_over_pi(single.size) != F(2, 3):
            out.append(f"{t}: monotone triangle capacity")
        if t.c >= 2:
            if len(by["five"].packing.placements) != 5:
                out.append(f"{t}: five triangles")
            d = by["diamond:c_ge_2"].packing.placements[0].d
            if d != F(6, 7) - eps or r.headline["c_G(CP2 minus E;T) >= pi *"] != F(2, 3) * d:
                out.append(f"{t}: c>=2 diamond {d}")
            if r.headline["limit of c_G(CP2 minus E;T) bound, pi *"] != F(4, 7):
                out.append(f"{t}: limit")
        else:
            d = by["diamond:clifford"].packing.placements[0].d
            if d != 1 - eps or r.headline["limit of c_G(CP2 minus E;T) bound, pi *"] != F(2, 3):
                out.append(f"{t}: clifford diamond {d}")
        g = by["diamond:general"].packing.placements[0]
        if g.d != F(1, 2) - eps or fs_capacity_over_pi(F(1, 2)) != F(1, 3):
            out.append(f"{t}: general diamond")
        nine = by["nine"].packing
        s = F(9, 10)
        area = sum(p.region().area() for p in nine.placements)
        if len(nine.placements) != 9 or area != 9 * s * s / 2 or not area < F(9, 2):
            out.append(f"{t}: nine-ball accounting")
        for p in nine.placements:
            if any(p.region().segment_meets_closed(a, b) for a, b in nine.diagram.skeleton()):
                out.append(f"{t}: nine-ball triangle touches the skeleton")
    return out


# --- 5 ------------------------------------------------------------------------


def moment_suite():
    out = []
    for t in _triples(13):
        rep = invariance_suite(t, 1000, seed=0)
        out += [f"{t}: {name} error {err:.2e}" for name, err, _ in rep.failures]
        worst = max(rep.max_errors.values())
        if worst > TOL:
            out.append(f"{t}: worst error {worst:.2e}")
        if "y expressions" not in rep.max_errors or "S1 invariance" not in rep.max_errors:
            out.append(f"{t}: suite incomplete")
    img = phi_P(rescale_to_level([1, 1, 1], ROOT), ROOT)
    if max(abs(img.x - 1 / 3), abs(img.y - 1 / 3)) > 1e-12:
        out.append(f"[1:1:1] maps to {(img.x, img.y)}")
    if max(abs(v - 1 / 3) for v in clifford_image(np.ones(3))) > 1e-12:
        out.append("closed-form Clifford image")
    return out


# --- 6 ------------------------------------------------------------------------


def property_suite():
    out = []
    rng = random.Random(20261019)
    for _ in range(300):
        k, l = rng.randint(-20, 20), rng.randint(-20, 20)
        if gcd(k, l) != 1:
            continue
        A = monodromy(k, l)
        if mat_det(A) != 1 or mat_vec(A, (k, l)) != (k, l):
            out.append(f"monodromy {(k, l)}")
    for _ in range(200):
        hull = _hull([(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(6)])
        if len(hull) < 3:
            continue
        P = ConvexPolygon(hull)
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        M = ((a * b + 1, a), (b, 1))
        g = AffineMap(M, (F(rng.randint(-9, 9), 7), F(rng.randint(-9, 9), 5)))
        R = P.apply(g)
        if R.area() != P.area() or sorted(R.lattice_lengths()) != sorted(P.lattice_lengths()):
            out.append(f"invariance under {M}")

    D = seed_diagram(ROOT)
    bottom = D.polygon.vertices.index((0, 0))
    moved = TrianglePlacement(((F(3, 4), F(1, 2)), (F(7, 4), F(1, 2)), (F(3, 4), F(3, 2))), 1, bottom)
    if verify(D, moved, {"fiber"}):
        out.append("fiber-overlapping triangle accepted")
    if verify(D, DiamondPlacement(((1, 0), (0, 1)), (1, 1), 3), {"boundary"}):
        out.append("oversize diamond accepted")
    C = clustered_clifford()
    if verify_packing(C, nine_ball_triangles(C, F(1)), {"fiber", "nodes", "skeleton"}, strict=True):
        out.append("side-1 nine-ball layout accepted")
    if verify(D, DiamondPlacement(((1, 0), (0, 1)), (1, 1), F(1, 2)), COMPLEMENT_E):
        out.append("diamond over the fiber accepted")

    for t in _triples(29):
        r = capacity_report(t)
        packs = [e.packing for e in r.entries]
        d = seed_diagram(t)
        text = serialize.dumps(serialize.make_document(d, packs, r))
        d2, packs2 = serialize.parse_document(serialize.loads(text))
        if serialize.dumps(serialize.make_document(d2, packs2, r)) != text:
            out.append(f"{t}: JSON round trip")
        if serialize.verify_document(json.loads(text)):
            out.append(f"{t}: re-verification")
        shown = tuple(p for p in packs2 if p.diagram == d2)
        if render(d2, shown) != render(d, tuple(p for p in packs if p.diagram == d)):
            out.append(f"{t}: SVG differs after round trip")
    return out


CRITERIA = [
    (1, "Markov enumeration and growth, c <= 1000", markov_suite),
    (2, "polytope identities, c <= 500", polytope_suite),
    (3, "mutation coherence, c <= 50", mutation_suite),
    (4, "capacity certificates, c <= 100", capacity_suite),
    (5, "moment-map numerics, c <= 13", moment_suite),
    (6, "standalone property checks", property_suite),
]


def _line(n, label, problems, secs):
    status = "PASS" if not problems else "FAIL"
    extra = "" if not problems else f" ({len(problems)} problems; first: {problems[0]})"
    return f"[{status}] criterion {n}: {label} [{secs:.1f}s]{extra}"


@pytest.mark.parametrize("n,label,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, label, fn, capsys):
    start = time.perf_counter()
    problems = fn()
    with capsys.disabled():
        print("\n" + _line(n, label, problems, time.perf_counter() - start))
    assert problems == []


if __name__ == "__main__":
    failed = 0
    for n, label, fn in CRITERIA:
        start = time.perf_counter()
        problems = fn()
        print(_line(n, label, problems, time.perf_counter() - start))
        failed += bool(problems)
    sys.exit(1 if failed else 0)
