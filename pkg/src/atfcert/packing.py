"""Exact placement certificates for triangles and diamonds in base diagrams.

Units: every diagram is normalized so each Maslov-2 disc has affine size 1
(boundary 9, the line 3).  The Fubini-Study capacity attached to a region
is ``(2/3) * size`` in units of pi, where a triangle of side s has size s
and ``Psi(<>(d)) + x`` has size d.

Constructors compute placements with closed formulas; nothing they return
is trusted until :func:`verify` accepts it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .affine import (
    AffineMap,
    ConvexPolygon,
    GeometryError,
    IDENTITY,
    as_point,
    det,
    dot,
    fmt_q,
    lattice_length,
    lerp,
    mat_det,
    mat_mul,
    mat_vec,
    primitive_direction,
    sub,
)
from .atf import (
    CUT,
    BaseDiagram,
    apply_map,
    long_edge_frame,
    mutation_step,
    nodal_slide,
    nodal_trade,
    seed_diagram,
)
from .markov import ROOT, MarkovTriple

EXCLUDABLE = frozenset({"fiber", "nodes", "cuts", "skeleton", "boundary"})
MONOTONE = frozenset({"fiber", "nodes"})
COMPLEMENT_E = frozenset({"fiber", "nodes", "boundary"})
SKELETON = frozenset({"fiber", "nodes", "skeleton"})


class CertificateError(ValueError):
    """The certificate itself is malformed (as opposed to failing verification)."""


# ---------------------------------------------------------------------------
# placement types


@dataclass(frozen=True)
class TrianglePlacement:
    """A triangle with all sides of lattice length ``side`` and one side on the boundary.

    ``vertices`` are (base start, base end, apex); ``base_edge`` is the index
    of the diagram edge holding the base.
    """

    vertices: tuple
    side: Fraction
    base_edge: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(as_point(v) for v in self.vertices))
        object.__setattr__(self, "side", Fraction(self.side))

    @property
    def kind(self) -> str:
        return "triangle"

    @property
    def size(self) -> Fraction:
        return self.side

    def region(self) -> ConvexPolygon:
        return ConvexPolygon(self.vertices)

    def transported(self, g: AffineMap, base_edge: int) -> "TrianglePlacement":
        return TrianglePlacement(tuple(g(v) for v in self.vertices), self.side, base_edge)


@dataclass(frozen=True)
class DiamondPlacement:
    """``psi(<>(d)) + center`` with ``<>(d) = {|x| + |y| < d/2}`` (an open set)."""

    psi: tuple
    center: tuple
    d: Fraction

    def __post_init__(self):
        psi = tuple(tuple(int(x) for x in row) for row in self.psi)
        if mat_det(psi) not in (1, -1):
            raise CertificateError(f"diamond map {psi} is not in GL(2,Z)")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "d", Fraction(self.d))
        if self.d <= 0:
            raise CertificateError("diamond size must be positive")

    @property
    def kind(self) -> str:
        return "diamond"

    @property
    def size(self) -> Fraction:
        return self.d

    def region(self) -> ConvexPolygon:
        """The closure of the diamond."""
        h = self.d / 2
        model = [(h, 0), (0, h), (-h, 0), (0, -h)]
        return ConvexPolygon([tuple(a + b for a, b in zip(mat_vec(self.psi, v), self.center)) for v in model])

    def transported(self, g: AffineMap) -> "DiamondPlacement":
        return DiamondPlacement(mat_mul(g.linear, self.psi), g(self.center), self.d)

    def shrunk(self, d) -> "DiamondPlacement":
        return DiamondPlacement(self.psi, self.center, d)


@dataclass(frozen=True)
class GluingCertificate:
    """A model region presented as pieces of the diagram glued across cuts.

    ``transitions[j-1] = (corner, power)`` names the monodromy, fixing that
    corner's eigenline, that carries piece j into the chart of piece j-1.
    Piece 0 is drawn in the model chart.
    """

    pieces: tuple
    transitions: tuple
    model: Union[TrianglePlacement, DiamondPlacement]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "transitions", tuple((int(c), int(p)) for c, p in self.transitions))

    @property
    def kind(self) -> str:
        return "glued"

    @property
    def size(self) -> Fraction:
        return self.model.size

    def cumulative(self, d: BaseDiagram) -> list[AffineMap]:
        """Maps sending piece j into the model chart."""
        maps = [AffineMap()]
        for corner, power in self.transitions:
            maps.append(maps[-1] @ d.monodromy_map(corner, power))
        return maps


Placement = Union[TrianglePlacement, DiamondPlacement, GluingCertificate]


@dataclass
class Verdict:
    ok: bool
    reasons: list = field(default_factory=list)
    malformed: bool = False

    def __bool__(self):
        return self.ok

    def fail(self, msg: str, malformed: bool = False):
        self.ok = False
        self.reasons.append(msg)
        self.malformed = self.malformed or malformed
        return self


# ---------------------------------------------------------------------------
# the verifier


def _normalize_excluded(excluded: Iterable[str]) -> frozenset:
    ex = frozenset(excluded)
    bad = ex - EXCLUDABLE
    if bad:
        raise CertificateError(f"unknown excluded sets {sorted(bad)}; allowed {sorted(EXCLUDABLE)}")
    return ex


def _point_hits(R: ConvexPolygon, p, strict: bool) -> bool:
    # non-strict: the open region must miss p; strict: the closed region must
    return R.contains_point(p, strict=not strict)


def _segment_hits(R: ConvexPolygon, p, q, strict: bool) -> bool:
    return R.segment_meets_closed(p, q) if strict else R.segment_meets_interior(p, q)


def _check_region(d: BaseDiagram, R: ConvexPolygon, ex: frozenset, strict: bool, v: Verdict, label: str,
                  skip_cut: Optional[int] = None):
    P = d.polygon
    if not P.contains_polygon(R):
        v.fail(f"{label}: not inside the diagram")
    if "fiber" in ex and _point_hits(R, d.fiber, strict):
        v.fail(f"{label}: meets the monotone fiber")
    if "nodes" in ex:
        for n in d.nodes():
            if _point_hits(R, n, strict):
                v.fail(f"{label}: meets the node at ({fmt_q(n[0])},{fmt_q(n[1])})")
    # cuts are always avoided by a single chart piece
    for i, (vert, c) in enumerate(zip(P.vertices, d.corners)):
        if c.kind != CUT or i == skip_cut:
            continue
        end = lerp(vert, d.fiber, max(c.node_params))
        if _segment_hits(R, vert, end, strict):
            v.fail(f"{label}: crosses the cut at corner {i}")
    if "skeleton" in ex:
        for a, b in d.skeleton():
            if _segment_hits(R, a, b, strict):
                v.fail(f"{label}: meets the skeleton segment to ({fmt_q(b[0])},{fmt_q(b[1])})")


def _on_edge(P: ConvexPolygon, p, q) -> Optional[int]:
    for i in range(len(P)):
        if P.edge_value(i, p) == 0 and P.edge_value(i, q) == 0:
            return i
    return None


def _check_triangle_shape(t: TrianglePlacement, v: Verdict) -> bool:
    verts = t.vertices
    if len(set(verts)) != 3 or det(sub(verts[1], verts[0]), sub(verts[2], verts[0])) == 0:
        v.fail("triangle is degenerate", malformed=True)
        return False
    lengths = [lattice_length(verts[i], verts[(i + 1) % 3]) for i in range(3)]
    if any(L != t.side for L in lengths):
        v.fail(f"side lattice lengths {lengths} differ from {t.side}", malformed=True)
        return False
    e1 = primitive_direction(sub(verts[1], verts[0]))[0]
    e2 = primitive_direction(sub(verts[2], verts[0]))[0]
    if abs(det(e1, e2)) != 1:
        v.fail("triangle is not a unimodular image of the standard corner", malformed=True)
        return False
    return True


def verify(d: BaseDiagram, placement: Placement, excluded: Iterable[str] = MONOTONE, strict: bool = False) -> Verdict:
    """Exact check of one placement.

    By default the region is open: excluded points must miss its interior
    and excluded segments must not enter it.  ``strict=True`` asks the closed
    region to avoid them.  Excluding ``boundary`` means the region must not
    meet the divisor over the polygon boundary; a triangle always does.
    """
    ex = _normalize_excluded(excluded)
    v = Verdict(True)
    if isinstance(placement, GluingCertificate):
        return _verify_glued(d, placement, ex, strict, v)
    if isinstance(placement, TrianglePlacement):
        if not _check_triangle_shape(placement, v):
            return v
        b0, b1, _ = placement.vertices
        edge = _on_edge(d.polygon, b0, b1)
        if edge is None:
            v.fail("triangle base does not lie on a boundary edge")
        elif edge != placement.base_edge:
            v.fail(f"triangle base lies on edge {edge}, recorded {placement.base_edge}", malformed=True)
        if "boundary" in ex:
            v.fail("triangle base lies on the boundary divisor")
        _check_region(d, placement.region(), ex, strict, v, "triangle")
        return v
    if isinstance(placement, DiamondPlacement):
        # open diamond inside the open polygon is the same as closures nested
        _check_region(d, placement.region(), ex, strict, v, "diamond")
        return v
    raise CertificateError(f"cannot verify {type(placement).__name__}")


def clip(poly: ConvexPolygon, window: ConvexPolygon) -> Optional[ConvexPolygon]:
    """poly intersected with window, or None when the interior is empty."""
    cur = poly
    for p, q in window.edges():
        if cur is None:
            return None
        left, _, _ = cur.split_by_line(p, sub(q, p))
        cur = left
    return cur


def _clip_segment(p, q, window: ConvexPolygon):
    lo, hi = Fraction(0), Fraction(1)
    for i in range(len(window)):
        a = window.edge_value(i, p)
        b = window.edge_value(i, q) - a
        if b == 0:
            if a < 0:
                return None
        elif b > 0:
            lo = max(lo, -a / b)
        else:
            hi = min(hi, -a / b)
    if lo >= hi:
        return None
    return lerp(p, q, lo), lerp(p, q, hi)


def _edges_on_line(poly: ConvexPolygon, base, direction):
    out = []
    for p, q in poly.edges():
        if det(direction, sub(p, base)) == 0 and det(direction, sub(q, base)) == 0:
            out.append(frozenset((p, q)))
    return out


def _verify_glued(d: BaseDiagram, cert: GluingCertificate, ex, strict, v: Verdict) -> Verdict:
    m = len(cert.pieces)
    if m < 1 or len(cert.transitions) != m - 1:
        return v.fail("need one transition per extra piece", malformed=True)
    for corner, power in cert.transitions:
        if not 0 <= corner < len(d.corners) or d.corners[corner].kind != CUT:
            return v.fail(f"transition names corner {corner}, which has no cut", malformed=True)
        if power not in (1, -1):
            return v.fail("transitions are single monodromies (power +1 or -1)", malformed=True)
    model = cert.model
    if isinstance(model, TrianglePlacement):
        if not _check_triangle_shape(model, v):
            return v
    region = model.region()
    maps = cert.cumulative(d)
    pulled = [Q.apply(g) for Q, g in zip(cert.pieces, maps)]

    # tiling of the model
    total = Fraction(0)
    for j, Q in enumerate(pulled):
        if not region.contains_polygon(Q):
            v.fail(f"piece {j} does not map into the model region", malformed=True)
        total += Q.area()
    for i in range(m):
        for j in range(i + 1, m):
            if not pulled[i].interior_disjoint(pulled[j]):
                v.fail(f"pieces {i} and {j} overlap in the model chart", malformed=True)
    if total != region.area():
        v.fail(f"pieces cover area {total} of the model's {region.area()}", malformed=True)

    # consecutive pieces meet along the crossed eigenline, inside the cut
    for j, (corner, _) in enumerate(cert.transitions, start=1):
        V = d.polygon.vertices[corner]
        c = d.corners[corner]
        a = _edges_on_line(cert.pieces[j - 1], V, c.cut_direction)
        b = _edges_on_line(cert.pieces[j], V, c.cut_direction)
        shared = set(a) & set(b)
        if len(shared) != 1:
            v.fail(f"pieces {j - 1} and {j} do not share an edge on the eigenline of corner {j}", malformed=True)
            continue
        span = sub(d.fiber, V)
        t_node = max(c.node_params)
        for p in next(iter(shared)):
            t = dot(sub(p, V), span) / dot(span, span)
            if not 0 <= t <= t_node:
                v.fail(f"gluing chord leaves the cut of corner {corner} (node not beyond it)")

    # pieces in the diagram
    crossed = {corner for corner, _ in cert.transitions}
    for j, Q in enumerate(cert.pieces):
        skip = None
        if len(crossed) == 1:
            skip = next(iter(crossed))
        _check_region(d, Q, ex, strict, v, f"piece {j}", skip_cut=skip)
        for corner in crossed:
            # the crossed cut may only touch a piece along its boundary
            Vc = d.polygon.vertices[corner]
            end = lerp(Vc, d.fiber, max(d.corners[corner].node_params))
            if Q.segment_meets_interior(Vc, end):
                v.fail(f"piece {j} has the crossed cut in its interior")
    for i in range(m):
        for j in range(i + 1, m):
            if not cert.pieces[i].interior_disjoint(cert.pieces[j]):
                v.fail(f"pieces {i} and {j} overlap in the diagram")

    if isinstance(model, TrianglePlacement):
        if "boundary" in ex:
            v.fail("triangle base lies on the boundary divisor")
        b0, b1, _ = model.vertices
        covered = Fraction(0)
        for j, (Q, g) in enumerate(zip(pulled, maps)):
            seg = _clip_segment(b0, b1, Q)
            if seg is None:
                continue
            ginv = g.inverse()
            p, q = ginv(seg[0]), ginv(seg[1])
            if _on_edge(d.polygon, p, q) is None:
                v.fail(f"base part in piece {j} is not on the diagram boundary")
            covered += lattice_length(*seg)
        if covered != model.side:
            v.fail(f"base pieces cover length {covered} of {model.side}")
    return v


def verify_packing(d: BaseDiagram, placements: Sequence[Placement], excluded=MONOTONE, strict: bool = False) -> Verdict:
    """Each placement verifies and all regions are pairwise interior-disjoint."""
    v = Verdict(True)
    regions = []
    for k, p in enumerate(placements):
        r = verify(d, p, excluded, strict)
        if not r:
            v.ok = False
            v.malformed |= r.malformed
            v.reasons.extend(f"#{k}: {msg}" for msg in r.reasons)
        regions.append(list(p.pieces) if isinstance(p, GluingCertificate) else [p.region()])
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if any(not A.interior_disjoint(B) for A in regions[i] for B in regions[j]):
                v.fail(f"regions {i} and {j} overlap")
    area = sum((R.area() for rs in regions for R in rs), Fraction(0))
    if area > d.polygon.area():
        v.fail(f"total area {area} exceeds the diagram area")
    return v


# ---------------------------------------------------------------------------
# constructors


@dataclass(frozen=True)
class Packing:
    """Placements for one diagram plus the exclusion rule they were verified against."""

    name: str
    diagram: BaseDiagram
    placements: tuple
    excluded: frozenset
    strict: bool = False
    note: str = ""

    def verdict(self) -> Verdict:
        return verify_packing(self.diagram, self.placements, self.excluded, self.strict)


def _frame(d: BaseDiagram):
    g, edge = long_edge_frame(d)
    D = apply_map(d, g)
    p, q = d.polygon.edge(edge)
    L = lattice_length(p, q)
    return g, D, L


def _base_edge(D: BaseDiagram) -> int:
    for i, (p, q) in enumerate(D.polygon.edges()):
        if p[1] == 0 and q[1] == 0:
            return i
    raise GeometryError("no edge on the x-axis in the long-edge frame")


def _pull_triangle(d: BaseDiagram, g: AffineMap, t: TrianglePlacement) -> TrianglePlacement:
    ginv = g.inverse()
    verts = tuple(ginv(v) for v in t.vertices)
    edge = _on_edge(d.polygon, verts[0], verts[1])
    return TrianglePlacement(verts, t.side, edge if edge is not None else -1)


def _fan(f, start, count: int):
    """Side-1 triangles over [start + k, start + k + 1], k < count, all with apex (f, 1)."""
    apex = (f, Fraction(1))
    return [((start + k, Fraction(0)), (start + k + 1, Fraction(0)), apex) for k in range(count)]


def _offsets(f: Fraction, lo: Fraction, hi: Fraction, count: int):
    """Starts x = f + n inside [lo, hi - count], ordered by distance to the middle, strict ones first."""
    mid = (lo + hi - count) / 2
    n0 = (lo - f).__floor__()
    cands = []
    for n in range(n0, n0 + int(hi - lo) + 2):
        x = f + n
        if lo <= x and x + count <= hi:
            cands.append(x)
    return sorted(cands, key=lambda x: (not (lo < x and x + count < hi), abs(x - mid), x))


def single_monotone_triangle(d: BaseDiagram) -> Packing:
    """One side-1 triangle on the longest edge with its apex at the fiber."""
    g, D, L = _frame(d)
    f = D.fiber[0]
    edge = _base_edge(D)
    for start in _offsets(f, Fraction(0), L, 1):
        (tri,) = _fan(f, start, 1)
        t = TrianglePlacement(tri, 1, edge)
        if verify(D, t, MONOTONE):
            return Packing("single", d, (_pull_triangle(d, g, t),), MONOTONE)
    raise GeometryError("no monotone triangle fits on the longest edge")


def five_monotone_triangles(d: BaseDiagram) -> Packing:
    """Five interior-disjoint side-1 triangles.

    For c >= 2 the longest edge has length at least 6, so a fan of five
    triangles with common apex at the fiber sits on it.  For (1,1,1) two
    corners are traded and their nodes slid close to the fiber, which frees
    three triangles on one edge and two on another.
    """
    if d.triple == ROOT:
        return _five_clifford()
    g, D, L = _frame(d)
    f = D.fiber[0]
    edge = _base_edge(D)
    for start in _offsets(f, Fraction(0), L, 5):
        tris = [TrianglePlacement(t, 1, edge) for t in _fan(f, start, 5)]
        if verify_packing(D, tris, MONOTONE):
            return Packing("five", d, tuple(_pull_triangle(d, g, t) for t in tris), MONOTONE)
    raise GeometryError(f"no fan of five monotone triangles fits for {d.triple}")


def clifford_two_cut_diagram(node_t=Fraction(9, 10)) -> BaseDiagram:
    D = seed_diagram(ROOT)
    for i in (D.corner_index((0, 0)), D.corner_index((3, 0))):
        D = nodal_trade(D, i, node_t)
    return D


def _five_clifford() -> Packing:
    D = clifford_two_cut_diagram()
    F = D.fiber
    e_bottom = _on_edge(D.polygon, (0, 0), (3, 0))
    e_left = _on_edge(D.polygon, (0, 0), (0, 3))
    tris = [
        TrianglePlacement(((0, 0), (1, 0), F), 1, e_bottom),
        TrianglePlacement(((1, 0), (2, 0), F), 1, e_bottom),
        TrianglePlacement(((2, 0), (3, 0), F), 1, e_bottom),
        TrianglePlacement(((0, 1), (0, 0), F), 1, e_left),
        TrianglePlacement(((0, 2), (0, 1), F), 1, e_left),
    ]
    return Packing("five", D, tuple(tris), MONOTONE, note="two nodal trades at (0,0) and (3,0)")


def clustered_clifford(eps=Fraction(1, 10)) -> BaseDiagram:
    from .atf import cluster_nodes, trade_all

    return cluster_nodes(trade_all(seed_diagram(ROOT)), eps)


def nine_ball_skeleton_packing(s, eps=Fraction(1, 10)) -> Packing:
    """Nine side-s triangles in the clustered Clifford diagram, three per edge.

    With delta = (1 - s)/2 the bottom edge carries
    conv{(delta, 0), (delta + s, 0), (delta + s, s)},
    conv{(delta + s, 0), (delta + 2s, 0), (delta + s, s)} and
    conv{(3 - delta - s, 0), (3 - delta, 0), (3 - delta - 2s, s)};
    the order-3 symmetry (x, y) -> (3 - x - y, x) supplies the other six.
    """
    s = Fraction(s)
    if not 0 < s < 1:
        raise GeometryError(f"nine-ball packing needs 0 < s < 1, got {s}")
    D = clustered_clifford(eps)
    return Packing("nine", D, tuple(nine_ball_triangles(D, s)), SKELETON | {"cuts"}, strict=True)


def nine_ball_triangles(D: BaseDiagram, s: Fraction) -> list[TrianglePlacement]:
    delta = (1 - s) / 2
    base = [
        ((delta, 0), (delta + s, 0), (delta + s, s)),
        ((delta + s, 0), (delta + 2 * s, 0), (delta + s, s)),
        ((3 - delta - s, 0), (3 - delta, 0), (3 - delta - 2 * s, s)),
    ]
    rot = AffineMap(((-1, -1), (1, 0)), (3, 0))
    out = []
    tris = [tuple(as_point(p) for p in t) for t in base]
    for _ in range(3):
        for t in tris:
            out.append(TrianglePlacement(t, s, _on_edge(D.polygon, t[0], t[1])))
        tris = [tuple(rot(p) for p in t) for t in tris]
    return out


DIAMOND_TARGETS = {
    "general": Fraction(1, 2),
    "c_ge_2": Fraction(6, 7),
    "clifford": Fraction(1),
}


def diamond_bounds(d: BaseDiagram, target: str, eps=Fraction(1, 100)) -> Packing:
    """A verified diamond of size (target limit) - eps avoiding fiber, nodes and E."""
    eps = Fraction(eps)
    if target not in DIAMOND_TARGETS:
        raise ValueError(f"unknown diamond target {target!r}; choose from {sorted(DIAMOND_TARGETS)}")
    if eps <= 0 or eps >= DIAMOND_TARGETS[target]:
        raise ValueError("eps must lie strictly between 0 and the target size")
    if target == "c_ge_2" and d.triple.c < 2:
        raise ValueError("the c >= 2 diamond needs a triple with c >= 2")
    if target == "clifford" and d.triple != ROOT:
        raise ValueError("the clifford diamond is only claimed for (1,1,1)")
    size = DIAMOND_TARGETS[target] - eps
    g, D, L = _frame(d)
    if target == "general":
        cand = _diamond_in_monotone_triangle(D, L, size)
    else:
        cand = _diamond_on_long_edge(D, L, size)
    if cand is None:
        raise GeometryError(f"no {target} diamond found for {d.triple}")
    return Packing(f"diamond:{target}", d, (cand.transported(g.inverse()),), COMPLEMENT_E)


def _diamond_in_monotone_triangle(D: BaseDiagram, L, size) -> Optional[DiamondPlacement]:
    """Center the diamond at the point (1/3, 1/3) of the sheared monotone triangle."""
    f = D.fiber[0]
    third = Fraction(1, 3)
    for start in _offsets(f, Fraction(0), L, 1):
        n = int(f - start)
        psi = ((1, n), (0, 1))
        center = (start + third + n * third, third)
        cand = DiamondPlacement(psi, center, size)
        if verify(D, cand, COMPLEMENT_E):
            return cand
    return None


def _diamond_on_long_edge(D: BaseDiagram, L, size) -> Optional[DiamondPlacement]:
    """Axis diamond of radius r = size/2 resting on the longest edge below the fiber.

    With the fiber at (f, 1) the left and right vertices must stay inside
    the lines through the fiber and the two ends of the edge; this gives an
    interval for the x-coordinate of the center, whose midpoint we use.
    """
    r = size / 2
    for k in range(0, int(L) + 1):
        shear = AffineMap(((1, k), (0, 1)))
        E = apply_map(D, shear)
        f = E.fiber[0]
        lo = max((1 + f) * r, 2 * f * r)
        hi = min(L - (L - f + 1) * r, L - 2 * (L - f) * r)
        if lo > hi:
            continue
        cand = DiamondPlacement(IDENTITY, ((lo + hi) / 2, r), size)
        if verify(E, cand, COMPLEMENT_E):
            return cand.transported(shear.inverse())
    return None


def best_diamond(d: BaseDiagram, shears: int = 3, eps=Fraction(1, 1000)) -> tuple[Fraction, Optional[DiamondPlacement]]:
    """Largest verified diamond found by a small linear-program search (evidence only).

    For every edge triangle conv{V_i, V_(i+1), fiber} and every shear of the
    long-edge frame with |n| <= ``shears``, scipy's linprog maximizes the
    radius of a diamond inside the triangle.  The float optimum is rounded to
    rationals, shrunk by ``eps`` and passed to :func:`verify`.
    """
    import numpy as np
    from scipy.optimize import linprog

    g, D, _ = _frame(d)
    best = (Fraction(0), None)
    verts = D.polygon.vertices
    for i in range(len(verts)):
        tri = ConvexPolygon([verts[i], verts[(i + 1) % len(verts)], D.fiber])
        for n in range(-shears, shears + 1):
            for psi in (((1, n), (0, 1)), ((1, 0), (n, 1))):
                A, b = [], []
                for j in range(3):
                    nrm = tri.inward_normal(j)
                    p0 = tri.vertices[j]
                    h = max(abs(dot(nrm, mat_vec(psi, (1, 0)))), abs(dot(nrm, mat_vec(psi, (0, 1)))))
                    # n.x - n.p0 >= r*h  ->  -n.x + r*h <= -n.p0
                    A.append([-nrm[0], -nrm[1], h])
                    b.append(float(-dot(nrm, p0)))
                res = linprog([0, 0, -1], A_ub=np.array(A, float), b_ub=np.array(b), bounds=[(None, None)] * 2 + [(0, None)])
                if not res.success:
                    continue
                cx = Fraction(res.x[0]).limit_denominator(10**6)
                cy = Fraction(res.x[1]).limit_denominator(10**6)
                r = None
                for j in range(3):
                    nrm = tri.inward_normal(j)
                    h = max(abs(dot(nrm, mat_vec(psi, (1, 0)))), abs(dot(nrm, mat_vec(psi, (0, 1)))))
                    val = tri.edge_value(j, (cx, cy)) / h
                    r = val if r is None else min(r, val)
                size = 2 * r - eps
                if size <= best[0]:
                    continue
                cand = DiamondPlacement(psi, (cx, cy), size)
                if verify(D, cand, COMPLEMENT_E):
                    best = (size, cand.transported(g.inverse()))
    return best


def glued_corner_triangle(d: BaseDiagram, slide_to=Fraction(3, 4)) -> Packing:
    """A triangle whose base runs past an end of the longest edge, glued across that corner's cut.

    Mutating the corner straightens the boundary there, so in the mutated
    chart the triangle is an honest single-chart triangle.  Cutting it along
    the eigenline and moving one half back by the monodromy gives the two
    pieces in the original diagram.  The node is slid to ``slide_to`` so the
    gluing chord stays on the cut.  Side 1 is tried first; for large triples
    the straightened wedge is thin and a smaller side is used.
    """
    g, D, L = _frame(d)
    left = D.corner_index((0, 0))
    right = D.corner_index((L, 0))
    for corner in sorted((left, right), key=lambda i: -D.corners[i].weight):
        E = D
        if E.corners[corner].kind != CUT:
            E = nodal_trade(E, corner)
        if E.corners[corner].node_params[0] < slide_to:
            E = nodal_slide(E, corner, slide_to)
        step = mutation_step(E, corner)
        if not (step.anchor.contains_point((0, 0)) and step.anchor.contains_point((L, 0))):
            continue
        power = 1 if step.transform.linear == E.monodromy_map(corner, 1).linear else -1
        # how far the straightened boundary reaches past the corner
        ext = max(max(-x, x - L) for x, y in step.after.polygon.vertices if y == 0)
        for tri, side in _overhang_triangles(corner == left, L, ext):
            model_region = ConvexPolygon(tri)
            if not step.after.polygon.contains_polygon(model_region):
                continue
            q0 = clip(model_region, step.anchor)
            q1m = clip(model_region, step.moved_image)
            if q0 is None or q1m is None:
                continue
            q1 = q1m.apply(step.transform.inverse())
            cert = GluingCertificate((q0, q1), ((corner, power),), TrianglePlacement(tri, side, -1))
            if verify(E, cert, MONOTONE):
                return Packing(
                    "glued",
                    apply_map(E, g.inverse()),
                    (_pull_glued(cert, g.inverse()),),
                    MONOTONE,
                    note=f"crosses the cut of the weight-{E.corners[corner].weight} corner",
                )
    raise GeometryError(f"no glued corner triangle found for {d.triple}")


def _overhang_triangles(at_left: bool, L, ext):
    """Side-s triangles on the x-axis sticking out by h past x = 0 (or x = L)."""
    for s in (Fraction(1), Fraction(1, 2), Fraction(1, 4)):
        for h in sorted({min(s / 2, ext / 2), ext / 4}, reverse=True):
            x0 = -h if at_left else L - s + h
            for m in (0, 1, -1, 2):
                yield ((x0, 0), (x0 + s, 0), (x0 + m * s, s)), s


def _pull_glued(cert: GluingCertificate, h: AffineMap) -> GluingCertificate:
    pieces = tuple(Q.apply(h) for Q in cert.pieces)
    model = TrianglePlacement(tuple(h(v) for v in cert.model.vertices), cert.model.side, -1)
    return GluingCertificate(pieces, cert.transitions, model)


# ---------------------------------------------------------------------------
# capacity report


@dataclass(frozen=True)
class ReportEntry:
    packing: Packing
    verified: bool
    affine_size: Fraction
    capacity_over_pi: Fraction  # FS capacity / pi, one ball
    reasons: tuple = ()


@dataclass(frozen=True)
class CapacityReport:
    triple: MarkovTriple
    entries: tuple
    headline: dict
    external: dict

    @property
    def ok(self) -> bool:
        return all(e.verified for e in self.entries)


def fs_capacity_over_pi(size) -> Fraction:
    """Fubini-Study capacity divided by pi for an object of affine size ``size``."""
    return Fraction(2, 3) * Fraction(size)


def _entry(p: Packing) -> ReportEntry:
    v = p.verdict()
    size = min(pl.size for pl in p.placements)
    return ReportEntry(p, bool(v), size, fs_capacity_over_pi(size), tuple(v.reasons))


def capacity_report(t: MarkovTriple, eps=Fraction(1, 100), nine_s=Fraction(9, 10)) -> CapacityReport:
    t = t.canonical()
    d = seed_diagram(t)
    entries = [_entry(single_monotone_triangle(d)), _entry(five_monotone_triangles(d))]
    entries.append(_entry(diamond_bounds(d, "general", eps)))
    if t.c >= 2:
        entries.append(_entry(diamond_bounds(d, "c_ge_2", eps)))
    else:
        entries.append(_entry(diamond_bounds(d, "clifford", eps)))
    entries.append(_entry(nine_ball_skeleton_packing(nine_s)))
    try:
        entries.append(_entry(glued_corner_triangle(d)))
    except GeometryError:
        pass
    ok = {e.packing.name: e.verified for e in entries}
    headline = {
        "c_G(CP2;T) >= pi *": Fraction(2, 3) if ok["single"] else None,
        "c_G(CP2 minus E;T) >= pi *": entries[3].capacity_over_pi if entries[3].verified else None,
        "limit of c_G(CP2 minus E;T) bound, pi *": Fraction(4, 7) if t.c >= 2 else Fraction(2, 3),
        "five monotone balls": ok["five"],
        "nine balls of side": nine_s if ok["nine"] else None,
    }
    external = {}
    if t == ROOT:
        external["c_G(CP2;T_Cl) = pi *"] = Fraction(4, 3)
    return CapacityReport(t, tuple(entries), headline, external)


__all__ = [
    "COMPLEMENT_E",
    "CapacityReport",
    "CertificateError",
    "DiamondPlacement",
    "GluingCertificate",
    "MONOTONE",
    "Packing",
    "SKELETON",
    "TrianglePlacement",
    "Verdict",
    "best_diamond",
    "capacity_report",
    "clip",
    "clustered_clifford",
    "diamond_bounds",
    "five_monotone_triangles",
    "fs_capacity_over_pi",
    "glued_corner_triangle",
    "nine_ball_skeleton_packing",
    "single_monotone_triangle",
    "verify",
    "verify_packing",
]
