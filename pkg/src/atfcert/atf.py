"""Almost toric base diagrams of CP^2 and the surgeries acting on them.

A diagram is a convex polygon in disc-1 units together with, for every
vertex, either a smooth (Delzant) corner or a cut: a ray from the vertex
toward the marked fiber with one node on it.  Three surgeries act on
diagrams:

* nodal trade turns a Delzant corner into a cut corner without moving the
  boundary,
* nodal slide moves a node along its eigenline,
* mutation re-cuts along the opposite ray; half of the polygon is sheared by
  the node's monodromy and the Markov triple mutates at that corner.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .affine import (
    AffineMap,
    ConvexPolygon,
    GeometryError,
    add,
    as_point,
    canonical_form,
    det,
    dist2,
    dot,
    fmt_q,
    frame_from_direction,
    lattice_length,
    lerp,
    mat_vec,
    monodromy,
    node_monodromy,
    polygon_equiv,
    primitive_direction,
    scale,
    sub,
)
from .markov import MarkovTriple, mutate
from .polytope import build, corner_label, normalize

DELZANT = "delzant"
CUT = "cut"
DEFAULT_NODE_T = Fraction(1, 2)


class SurgeryError(ValueError):
    """A surgery was requested on a corner where it is not defined."""


@dataclass(frozen=True)
class Corner:
    kind: str
    weight: int
    cut_direction: Optional[tuple[int, int]] = None
    node_params: tuple[Fraction, ...] = ()
    lens_label: tuple[int, int] = (1, 0)

    def __post_init__(self):
        if self.kind not in (DELZANT, CUT):
            raise GeometryError(f"unknown corner kind {self.kind!r}")
        if self.kind == DELZANT and (self.weight != 1 or self.node_params):
            raise GeometryError("only a weight-1 corner can be smooth, and it carries no node")
        if self.kind == CUT and self.cut_direction is None:
            raise GeometryError("a cut corner needs a direction")
        object.__setattr__(self, "node_params", tuple(Fraction(t) for t in self.node_params))


@dataclass(frozen=True)
class BaseDiagram:
    """Normalized almost toric base diagram.

    ``corners[i]`` describes ``polygon.vertices[i]``.  ``triple`` is the
    canonical Markov triple; the per-corner weights are a permutation of it.
    """

    polygon: ConvexPolygon
    corners: tuple[Corner, ...]
    fiber: tuple
    triple: MarkovTriple

    def __post_init__(self):
        object.__setattr__(self, "fiber", as_point(self.fiber))
        object.__setattr__(self, "corners", tuple(self.corners))
        if len(self.corners) != len(self.polygon):
            raise GeometryError("one corner record per polygon vertex is required")

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(c.weight for c in self.corners)

    def nodes(self) -> list[tuple]:
        """All node positions, in corner order."""
        out = []
        for v, c in zip(self.polygon.vertices, self.corners):
            for t in c.node_params:
                out.append(lerp(v, self.fiber, t))
        return out

    def cut_segments(self) -> list[tuple]:
        """The dashed part of each cut: from the vertex to its node."""
        segs = []
        for v, c in zip(self.polygon.vertices, self.corners):
            if c.kind == CUT:
                far = max(c.node_params) if c.node_params else Fraction(0)
                segs.append((v, lerp(v, self.fiber, far)))
        return segs

    def skeleton(self) -> list[tuple]:
        """Segments from the fiber to every vertex."""
        return [(self.fiber, v) for v in self.polygon.vertices]

    def monodromy_map(self, i: int, power: int = 1) -> AffineMap:
        c = self.corners[i]
        if c.kind != CUT:
            raise SurgeryError(f"corner {i} has no cut")
        return node_monodromy(c.cut_direction, self.polygon.vertices[i], power)

    def corner_index(self, vertex) -> int:
        vertex = as_point(vertex)
        try:
            return self.polygon.vertices.index(vertex)
        except ValueError:
            raise SurgeryError(f"{vertex} is not a vertex of the diagram") from None

    def slot_corner(self, slot: int) -> int:
        """A corner whose weight is ``triple[slot]`` (first one in vertex order)."""
        return self.weights.index(self.triple[slot])

    def __str__(self):
        verts = ", ".join(f"({fmt_q(x)},{fmt_q(y)})" for x, y in self.polygon.vertices)
        return f"BaseDiagram{self.triple} [{verts}] fiber=({fmt_q(self.fiber[0])},{fmt_q(self.fiber[1])})"


def cut_direction_at(poly: ConvexPolygon, i: int) -> tuple[int, int]:
    """(e_prev + e_next)/k for a corner of weight k^2; an integer primitive vector."""
    e_prev, e_next = poly.corner_directions(i)
    k2 = abs(det(e_prev, e_next))
    k = _isqrt_exact(k2)
    s = add(e_prev, e_next)
    if s[0] % k or s[1] % k:
        raise GeometryError(f"corner {i} is not a T-singularity of the expected type")
    return (s[0] // k, s[1] // k)


def _isqrt_exact(n: int) -> int:
    from math import isqrt

    r = isqrt(n)
    if r * r != n:
        raise GeometryError(f"corner weight {n} is not a square")
    return r


def _make_corner(poly: ConvexPolygon, i: int, fiber, kind: str, params=()) -> Corner:
    e_prev, e_next = poly.corner_directions(i)
    k = _isqrt_exact(abs(det(e_prev, e_next)))
    l = corner_label(poly, i, k)
    v = cut_direction_at(poly, i)
    if det(v, sub(fiber, poly.vertices[i])) != 0 or dot(v, sub(fiber, poly.vertices[i])) <= 0:
        raise GeometryError(f"cut at corner {i} does not point at the fiber")
    if kind == DELZANT:
        return Corner(DELZANT, k, None, (), (k * k, k * l - 1))
    return Corner(CUT, k, v, tuple(params), (k * k, k * l - 1))


def seed_diagram(t: MarkovTriple, trade_all: bool = False, node_t=DEFAULT_NODE_T) -> BaseDiagram:
    """Normalized diagram of the ordered triple ``t`` with a cut at every weighted corner."""
    data = normalize(build(t))
    poly = data.polygon
    corners = []
    for i, k in enumerate(data.corner_weights):
        kind = CUT if (k > 1 or trade_all) else DELZANT
        corners.append(_make_corner(poly, i, data.fiber, kind, (node_t,) if kind == CUT else ()))
    d = BaseDiagram(poly, tuple(corners), data.fiber, t.canonical())
    check_diagram(d)
    return d


def check_diagram(d: BaseDiagram) -> None:
    """Raise GeometryError unless every BaseDiagram invariant holds."""
    P, F = d.polygon, d.fiber
    if P.area() != Fraction(9, 2):
        raise GeometryError(f"area {P.area()} != 9/2")
    if not P.contains_point(F, strict=True):
        raise GeometryError("fiber not in the open polygon")
    for i in range(len(P)):
        if P.edge_value(i, F) != 1:
            raise GeometryError(f"fiber is not at lattice distance 1 from edge {i}")
    if sorted(d.weights) != sorted(d.triple):
        raise GeometryError(f"corner weights {d.weights} do not match {d.triple}")
    for i, (v, c) in enumerate(zip(P.vertices, d.corners)):
        if P.corner_weight(i) != c.weight * c.weight:
            raise GeometryError(f"corner {i} has weight {P.corner_weight(i)}, recorded {c.weight}^2")
        if c.kind == DELZANT:
            continue
        if c.cut_direction != cut_direction_at(P, i):
            raise GeometryError(f"cut direction at corner {i} is not the eigendirection")
        if det(c.cut_direction, sub(F, v)) != 0 or dot(c.cut_direction, sub(F, v)) <= 0:
            raise GeometryError(f"eigenline of corner {i} misses the fiber")
        if len(c.node_params) != 1:
            raise GeometryError(f"corner {i} must carry exactly one node")
        for t in c.node_params:
            if not 0 < t < 1:
                raise GeometryError(f"node parameter {t} at corner {i} is outside (0, 1)")
        # monodromy fixes the cut direction and sends e_next to -e_prev
        M = monodromy(*c.cut_direction)
        e_prev, e_next = P.corner_directions(i)
        if mat_vec(M, c.cut_direction) != c.cut_direction:
            raise GeometryError("monodromy does not fix its cut")
        if mat_vec(M, e_next) != (-e_prev[0], -e_prev[1]):
            raise GeometryError(f"monodromy at corner {i} does not straighten the corner")


def nodal_trade(d: BaseDiagram, corner: int, node_t=DEFAULT_NODE_T) -> BaseDiagram:
    c = d.corners[corner]
    if c.kind != DELZANT:
        raise SurgeryError(f"corner {corner} already carries a cut")
    new = _make_corner(d.polygon, corner, d.fiber, CUT, (Fraction(node_t),))
    out = replace(d, corners=d.corners[:corner] + (new,) + d.corners[corner + 1 :])
    check_diagram(out)
    return out


def trade_all(d: BaseDiagram, node_t=DEFAULT_NODE_T) -> BaseDiagram:
    for i, c in enumerate(d.corners):
        if c.kind == DELZANT:
            d = nodal_trade(d, i, node_t)
    return d


def nodal_slide(d: BaseDiagram, corner: int, new_t) -> BaseDiagram:
    c = d.corners[corner]
    if c.kind != CUT:
        raise SurgeryError(f"corner {corner} has no node to slide")
    new_t = Fraction(new_t)
    if not 0 < new_t < 1:
        raise SurgeryError(f"node parameter must lie in the open interval (0, 1), got {new_t}")
    new = replace(c, node_params=(new_t,))
    out = replace(d, corners=d.corners[:corner] + (new,) + d.corners[corner + 1 :])
    check_diagram(out)
    return out


def cluster_nodes(d: BaseDiagram, eps) -> BaseDiagram:
    """Slide every node to Euclidean distance < eps from the fiber.

    With V the vertex and F the fiber, the node at parameter t sits at
    distance (1 - t)|F - V|.  The L1 norm bounds |F - V|, so
    1 - t = eps / (2 |F - V|_1) is enough and stays rational.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise SurgeryError("eps must be positive")
    if any(c.kind != CUT for c in d.corners):
        raise SurgeryError("cluster_nodes needs every corner traded to a cut")
    for i, v in enumerate(d.polygon.vertices):
        diff = sub(d.fiber, v)
        l1 = abs(diff[0]) + abs(diff[1])
        gap = min(eps / (2 * l1), Fraction(1, 2))
        current = d.corners[i].node_params[0]
        if 1 - current > gap:
            d = nodal_slide(d, i, 1 - gap)
    return d


def nodes_within(d: BaseDiagram, eps) -> bool:
    eps2 = Fraction(eps) ** 2
    return all(dist2(n, d.fiber) < eps2 for n in d.nodes())


# ---------------------------------------------------------------------------
# mutation


@dataclass(frozen=True)
class MutationStep:
    """Everything needed to audit one mutation."""

    corner: int
    vertex: tuple
    exit_point: tuple
    anchor: ConvexPolygon
    moved: ConvexPolygon
    moved_image: ConvexPolygon
    transform: AffineMap
    before: BaseDiagram
    after: BaseDiagram


def _hull(points) -> list:
    """Exact convex hull, counter-clockwise, without collinear points."""
    pts = sorted(set(as_point(p) for p in points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and det(sub(out[-1], out[-2]), sub(p, out[-1])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def mutation_step(d: BaseDiagram, corner: int) -> MutationStep:
    c = d.corners[corner]
    if c.kind != CUT:
        raise SurgeryError(f"corner {corner} has no cut; trade it first")
    if len(c.node_params) != 1:
        raise SurgeryError("mutation needs exactly one node on the cut")
    P, F = d.polygon, d.fiber
    V = P.vertices[corner]
    v = c.cut_direction
    left, right, chord = P.split_by_line(V, v)
    if left is None or right is None or chord is None:
        raise GeometryError("eigenline does not split the polygon")
    W = chord[0] if chord[1] == V else chord[1]
    if W in P.vertices:
        raise GeometryError("eigenline exits through a vertex")

    n = len(P)
    len_prev = lattice_length(P.vertices[corner - 1], V)
    len_next = lattice_length(V, P.vertices[(corner + 1) % n])
    # e_prev lies on the left of the oriented eigenline, e_next on the right
    if len_next >= len_prev:
        anchor, moved, power = right, left, -1
    else:
        anchor, moved, power = left, right, 1
    g = node_monodromy(v, V, power)
    image = moved.apply(g)
    hull = _hull(list(anchor.vertices) + list(image.vertices))
    newP = ConvexPolygon(hull)
    if newP.area() != anchor.area() + image.area():
        raise GeometryError("mutated pieces do not glue to a convex polygon (frame bug)")

    placed = {}
    for i, (u, cu) in enumerate(zip(P.vertices, d.corners)):
        if i == corner:
            continue
        if anchor.contains_point(u):
            placed[u] = cu
        else:
            u2 = g(u)
            if cu.kind == CUT:
                cu = replace(cu, cut_direction=g.vector(cu.cut_direction))
            placed[u2] = cu
    if V in newP.vertices:
        raise GeometryError("mutated vertex did not straighten")

    k_new = 1
    others = [cu.weight for cu in placed.values()]
    expect = 3 * others[0] * others[1] - c.weight if len(others) == 2 else None
    idx_w = newP.vertices.index(W)
    k_new = _isqrt_exact(newP.corner_weight(idx_w))
    if expect is not None and k_new != expect:
        raise GeometryError(f"new corner weight {k_new} != 3*{others[0]}*{others[1]} - {c.weight}")

    # node placement: mirror through the fiber when that stays inside (W, F)
    node = lerp(V, F, c.node_params[0])
    mirrored = sub(scale(2, F), node)
    span = sub(F, W)
    t_new = dot(sub(mirrored, W), span) / dot(span, span)
    if not 0 < t_new < 1:
        t_new = c.node_params[0]
    new_corner = _make_corner(newP, idx_w, F, CUT, (t_new,))
    if new_corner.cut_direction != (-v[0], -v[1]):
        raise GeometryError("new cut is not the opposite eigenray")
    placed[W] = new_corner
    corners = tuple(placed[u] for u in newP.vertices)
    new_triple = MarkovTriple(*sorted(cu.weight for cu in corners))
    slot = d.triple.as_tuple().index(c.weight)
    if mutate(d.triple, slot).canonical() != new_triple:
        raise GeometryError("mutated weights disagree with Markov mutation")
    after = BaseDiagram(newP, corners, F, new_triple)
    check_diagram(after)
    return MutationStep(corner, V, W, anchor, moved, image, g, d, after)


def mutate_diagram(d: BaseDiagram, corner: int) -> BaseDiagram:
    """Re-cut along the opposite ray at ``corner``.

    The eigenline through the corner and the fiber splits the polygon.  The
    half holding the longer of the two edges at the corner stays fixed (ties
    keep the half after the corner in counter-clockwise order); the other
    half is moved by the node's monodromy, chosen so that the corner
    straightens out.
    """
    return mutation_step(d, corner).after


def mutate_slot(d: BaseDiagram, slot: int) -> BaseDiagram:
    """Mutate the corner holding ``triple[slot]``, trading it first if it is smooth."""
    i = d.slot_corner(slot)
    if d.corners[i].kind == DELZANT:
        d = nodal_trade(d, i)
    return mutate_diagram(d, i)


@dataclass(frozen=True)
class LocalityReport:
    eps: Fraction
    nodes_before_in_disk: bool
    nodes_after_in_disk: bool
    anchor_unchanged: bool
    moved_piece_is_image: bool
    corners_outside_unchanged: bool

    @property
    def ok(self) -> bool:
        return all(
            (
                self.nodes_before_in_disk,
                self.nodes_after_in_disk,
                self.anchor_unchanged,
                self.moved_piece_is_image,
                self.corners_outside_unchanged,
            )
        )


def mutation_locality(d: BaseDiagram, corner: int, eps) -> LocalityReport:
    """Check that, in the chart glued along the eigenline, only data inside the eps-disk changes.

    Away from the disk the old and new diagrams are the same integral affine
    surface: the anchor piece is literally unchanged and the other piece is
    its image under the monodromy.  The only moved objects are the node and
    the part of the cut between the nodes, which live in the disk.
    """
    step = mutation_step(d, corner)
    after = step.after
    g = step.transform
    newP = after.polygon
    anchor_ok = all(newP.contains_point(p) for p in step.anchor.vertices)
    image_ok = step.moved_image == step.moved.apply(g) and all(newP.contains_point(p) for p in step.moved_image.vertices)
    # every corner other than the mutated one survives with the same data up to g
    same = True
    for i, (u, cu) in enumerate(zip(d.polygon.vertices, d.corners)):
        if i == corner:
            continue
        target = u if step.anchor.contains_point(u) else g(u)
        j = after.corner_index(target)
        cv = after.corners[j]
        dirn = cu.cut_direction if target == u or cu.cut_direction is None else g.vector(cu.cut_direction)
        same &= cv.weight == cu.weight and cv.node_params == cu.node_params and cv.cut_direction == dirn
    return LocalityReport(
        eps=Fraction(eps),
        nodes_before_in_disk=nodes_within(d, eps) if all(c.kind == CUT for c in d.corners) else _node_in(d, corner, eps),
        nodes_after_in_disk=_node_in(after, after.corner_index(step.exit_point), eps),
        anchor_unchanged=anchor_ok,
        moved_piece_is_image=image_ok,
        corners_outside_unchanged=same,
    )


def _node_in(d: BaseDiagram, i: int, eps) -> bool:
    v = d.polygon.vertices[i]
    return all(dist2(lerp(v, d.fiber, t), d.fiber) < Fraction(eps) ** 2 for t in d.corners[i].node_params)


# ---------------------------------------------------------------------------
# comparison and hashing


def diagram_equiv(d1: BaseDiagram, d2: BaseDiagram) -> Optional[AffineMap]:
    """A map g with g(d1.polygon) == d2.polygon and g(fiber1) == fiber2, if one exists.

    Corner weights are compared through the map as well.
    """
    if d1.triple != d2.triple:
        return None
    g = polygon_equiv(d1.polygon, d2.polygon, [d1.fiber], [d2.fiber])
    if g is None:
        return None
    for v, c in zip(d1.polygon.vertices, d1.corners):
        if d2.corners[d2.corner_index(g(v))].weight != c.weight:
            return None
    return g


def diagram_hash(d: BaseDiagram) -> str:
    key = canonical_form(d.polygon, [d.fiber])
    cuts = sorted((c.weight, c.kind, tuple(c.node_params)) for c in d.corners)
    text = repr((str(d.triple), [(fmt_q(x), fmt_q(y)) for x, y in key[0]], cuts))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class MutationTrace:
    start: MarkovTriple
    steps: tuple[int, ...]
    result_hash: str


def replay_corners(d: BaseDiagram, corners: Sequence[int]) -> tuple[BaseDiagram, MutationTrace]:
    start = d.triple
    for i in corners:
        if d.corners[i].kind == DELZANT:
            d = nodal_trade(d, i)
        d = mutate_diagram(d, i)
    return d, MutationTrace(start, tuple(corners), diagram_hash(d))


def long_edge_frame(d: BaseDiagram) -> tuple[AffineMap, int]:
    """A unimodular map sending the longest edge to [0, L] x {0} with the polygon above.

    The remaining shear freedom is used to put the fiber at (f, 1) with
    0 <= f < 1.  Returns the map and the index of the longest edge.
    """
    P = d.polygon
    lengths = P.lattice_lengths()
    i = max(range(len(P)), key=lambda j: (lengths[j], -j))
    p, q = P.edge(i)
    e = primitive_direction(sub(q, p))[0]
    F = frame_from_direction(e)
    g = AffineMap(F, scale(-1, mat_vec(F, p)))
    # det F = 1 and the polygon is counter-clockwise, so it lies above the edge
    fx, fy = g(d.fiber)
    if fy != 1:
        raise GeometryError(f"fiber at height {fy} above the longest edge, expected 1")
    n = -(fx.numerator // fx.denominator)
    h = AffineMap(((1, n), (0, 1)))
    return h @ g, i


def apply_map(d: BaseDiagram, g: AffineMap) -> BaseDiagram:
    """Transport a diagram through an affine map in GL(2,Z) x R^2."""
    if g.det != 1:
        raise GeometryError("diagram maps must preserve orientation")
    poly = d.polygon.apply(g)
    corners = []
    for v in poly.vertices:
        src = g.inverse()(v)
        c = d.corners[d.corner_index(src)]
        if c.kind == CUT:
            c = replace(c, cut_direction=g.vector(c.cut_direction))
        corners.append(c)
    out = BaseDiagram(poly, tuple(corners), g(d.fiber), d.triple)
    check_diagram(out)
    return out


def in_long_edge_frame(d: BaseDiagram) -> BaseDiagram:
    g, _ = long_edge_frame(d)
    return apply_map(d, g)


__all__ = [
    "BaseDiagram",
    "CUT",
    "Corner",
    "DELZANT",
    "LocalityReport",
    "MutationStep",
    "MutationTrace",
    "SurgeryError",
    "apply_map",
    "check_diagram",
    "cluster_nodes",
    "cut_direction_at",
    "diagram_equiv",
    "diagram_hash",
    "in_long_edge_frame",
    "long_edge_frame",
    "mutate_diagram",
    "mutate_slot",
    "mutation_locality",
    "mutation_step",
    "nodal_slide",
    "nodal_trade",
    "nodes_within",
    "replay_corners",
    "seed_diagram",
    "trade_all",
]
