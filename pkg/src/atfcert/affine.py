"""Exact planar integral-affine geometry.

Points and vectors are pairs of :class:`fractions.Fraction`.  Linear parts of
maps are 2x2 integer matrices stored as nested tuples.  Nothing in here uses
floating point: certificates built on top of these predicates are equalities
and inequalities between rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Point = tuple  # (Fraction, Fraction)
Matrix = tuple  # ((int, int), (int, int))


class GeometryError(ValueError):
    pass


def Q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted by the exact geometry layer")
    return Fraction(x)


def pt(x, y) -> Point:
    return (Q(x), Q(y))


def as_point(p) -> Point:
    return (Q(p[0]), Q(p[1]))


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def scale(s, p):
    return (s * p[0], s * p[1])


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def dist2(p, q):
    d = sub(p, q)
    return dot(d, d)


def lerp(p, q, t):
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def primitive(v) -> tuple[int, int]:
    """Integer vector divided by the gcd of its entries (sign kept)."""
    x, y = v
    if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
        raise GeometryError(f"primitive() needs an integer vector, got {v}")
    x, y = int(x), int(y)
    if x == 0 and y == 0:
        raise GeometryError("the zero vector has no primitive direction")
    g = gcd(x, y)
    return (x // g, y // g)


def primitive_direction(v) -> tuple[tuple[int, int], Fraction]:
    """Split a rational vector as ``length * primitive`` with length > 0.

    Raises if the vector is zero.  Any rational vector has rational slope,
    so the decomposition always exists.
    """
    x, y = Q(v[0]), Q(v[1])
    if x == 0 and y == 0:
        raise GeometryError("zero vector has no lattice direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    ix, iy = int(x * den), int(y * den)
    g = gcd(ix, iy)
    return (ix // g, iy // g), Fraction(g, den)


def lattice_length(p, q) -> Fraction:
    """Affine length of the segment [p, q]: q - p = length * primitive vector."""
    if p[0] == q[0] and p[1] == q[1]:
        return Fraction(0)
    return primitive_direction(sub(q, p))[1]


# ---------------------------------------------------------------------------
# integer matrices and affine maps


IDENTITY: Matrix = ((1, 0), (0, 1))


def mat_mul(m, n) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def mat_vec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat_det(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_inv(m) -> Matrix:
    d = mat_det(m)
    if d not in (1, -1):
        raise GeometryError(f"matrix {m} is not unimodular (det {d})")
    return ((m[1][1] * d, -m[0][1] * d), (-m[1][0] * d, m[0][0] * d))


def mat_pow(m, n: int) -> Matrix:
    if n < 0:
        return mat_pow(mat_inv(m), -n)
    out = IDENTITY
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def monodromy(k: int, l: int) -> Matrix:
    """Monodromy of a node whose cut has direction (k, l).

    ``u -> u + det((k, l), u) * (k, l)``: determinant 1, trace 2, fixes (k, l).
    """
    if gcd(k, l) != 1:
        raise GeometryError(f"monodromy direction ({k}, {l}) is not primitive")
    return ((1 - k * l, k * k), (-l * l, 1 + k * l))


def frame_from_direction(e) -> Matrix:
    """An SL(2,Z) matrix sending the primitive vector ``e`` to (1, 0)."""
    p, q = primitive(e)
    if (p, q) != tuple(e):
        raise GeometryError(f"{e} is not primitive")
    # ext. gcd: p*s - q*r = 1
    g, s, r_neg = _xgcd(p, q)
    # p*s + q*r_neg = 1  ->  r = -r_neg
    r = -r_neg
    inv = ((p, r), (q, s))  # columns (p,q), (r,s); det = p*s - q*r = 1
    assert mat_det(inv) == 1
    return mat_inv(inv)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class AffineMap:
    """``p -> linear @ p + shift`` with an integer unimodular linear part."""

    linear: Matrix = IDENTITY
    shift: Point = (Fraction(0), Fraction(0))

    def __post_init__(self):
        lin = tuple(tuple(int(x) for x in row) for row in self.linear)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "shift", as_point(self.shift))
        if mat_det(lin) not in (1, -1):
            raise GeometryError(f"linear part {lin} is not in GL(2,Z)")

    @classmethod
    def fixing(cls, linear: Matrix, center) -> "AffineMap":
        """The map with linear part ``linear`` that fixes ``center``."""
        c = as_point(center)
        return cls(linear, sub(c, mat_vec(linear, c)))

    @property
    def det(self) -> int:
        return mat_det(self.linear)

    def __call__(self, p) -> Point:
        p = as_point(p)
        return add(mat_vec(self.linear, p), self.shift)

    def vector(self, v):
        return mat_vec(self.linear, v)

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        """Composition: ``(self @ other)(p) == self(other(p))``."""
        return AffineMap(mat_mul(self.linear, other.linear), self(other.shift))

    def inverse(self) -> "AffineMap":
        inv = mat_inv(self.linear)
        return AffineMap(inv, scale(-1, mat_vec(inv, self.shift)))

    def is_identity(self) -> bool:
        return self.linear == IDENTITY and self.shift == (0, 0)

    def to_json(self) -> dict:
        return {
            "linear": [list(r) for r in self.linear],
            "shift": [fmt_q(self.shift[0]), fmt_q(self.shift[1])],
        }

    @classmethod
    def from_json(cls, obj) -> "AffineMap":
        return cls(tuple(tuple(r) for r in obj["linear"]), tuple(parse_q(s) for s in obj["shift"]))


IDENTITY_MAP = AffineMap()


def shear(n: int) -> AffineMap:
    """(x, y) -> (x + n*y, y)."""
    return AffineMap(((1, n), (0, 1)))


def node_monodromy(v, center, power: int = 1) -> AffineMap:
    """Affine monodromy of a node with eigendirection ``v``, fixing the line through ``center``."""
    return AffineMap.fixing(mat_pow(monodromy(*v), power), center)


def fmt_q(x: Fraction) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_q(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise GeometryError(f"exact rationals are serialized as strings, got {s!r}")
    return Fraction(s)


# ---------------------------------------------------------------------------
# convex polygons


def _orient(points):
    a = Fraction(0)
    n = len(points)
    for i in range(n):
        a += det(points[i], points[(i + 1) % n])
    return a


class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise rational vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable):
        vs = [as_point(v) for v in vertices]
        if len(vs) < 3:
            raise GeometryError("a polygon needs at least three vertices")
        if _orient(vs) < 0:
            vs.reverse()
        n = len(vs)
        for i in range(n):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
            turn = det(sub(b, a), sub(c, b))
            if turn <= 0:
                raise GeometryError(
                    f"vertices are not strictly convex at {b} (turn {turn})"
                )
        self.vertices = tuple(vs)

    def __repr__(self):
        inner = ", ".join(f"({fmt_q(x)}, {fmt_q(y)})" for x, y in self.vertices)
        return f"ConvexPolygon([{inner}])"

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        """Same vertex cycle (any starting vertex)."""
        if not isinstance(other, ConvexPolygon) or len(self) != len(other):
            return NotImplemented if not isinstance(other, ConvexPolygon) else False
        vs, ws = self.vertices, other.vertices
        if vs[0] not in ws:
            return False
        k = ws.index(vs[0])
        return all(vs[i] == ws[(i + k) % len(ws)] for i in range(len(vs)))

    def __hash__(self):
        return hash(frozenset(self.vertices))

    # --- basic measurements -------------------------------------------------

    def edge(self, i: int):
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    def edges(self):
        return [self.edge(i) for i in range(len(self.vertices))]

    def area(self) -> Fraction:
        return _orient(self.vertices) / 2

    def lattice_lengths(self) -> list[Fraction]:
        return [lattice_length(p, q) for p, q in self.edges()]

    def perimeter(self) -> Fraction:
        return sum(self.lattice_lengths(), Fraction(0))

    def edge_direction(self, i: int) -> tuple[int, int]:
        p, q = self.edge(i)
        return primitive_direction(sub(q, p))[0]

    def inward_normal(self, i: int) -> tuple[int, int]:
        ex, ey = self.edge_direction(i)
        return (-ey, ex)

    def edge_value(self, i: int, p) -> Fraction:
        """Lattice distance from ``p`` to the line of edge ``i`` (positive inside)."""
        return dot(sub(p, self.vertices[i]), self.inward_normal(i))

    def corner_directions(self, i: int):
        """Primitive directions from vertex ``i`` toward its previous and next vertex."""
        v = self.vertices[i]
        prev = self.vertices[i - 1]
        nxt = self.vertices[(i + 1) % len(self.vertices)]
        return primitive_direction(sub(prev, v))[0], primitive_direction(sub(nxt, v))[0]

    def corner_weight(self, i: int) -> int:
        """|det| of the two primitive edge directions at vertex ``i`` (1 for Delzant)."""
        e_prev, e_next = self.corner_directions(i)
        return abs(det(e_prev, e_next))

    # --- containment ---------------------------------------------------------

    def contains_point(self, p, strict: bool = False) -> bool:
        p = as_point(p)
        for i in range(len(self.vertices)):
            v = self.edge_value(i, p)
            if v < 0 or (strict and v == 0):
                return False
        return True

    def on_boundary(self, p) -> bool:
        return self.contains_point(p) and not self.contains_point(p, strict=True)

    def contains_polygon(self, other: "ConvexPolygon") -> bool:
        """Closed containment; equivalent to int(other) inside int(self)."""
        return all(self.contains_point(v) for v in other.vertices)

    def segment_meets_interior(self, p, q) -> bool:
        """True iff the closed segment [p, q] meets the open polygon."""
        p, q = as_point(p), as_point(q)
        lo, hi = None, None  # open bounds on the segment parameter
        for i in range(len(self.vertices)):
            a = self.edge_value(i, p)
            b = self.edge_value(i, q) - a
            if b == 0:
                if a <= 0:
                    return False
            elif b > 0:
                s = -a / b
                lo = s if lo is None else max(lo, s)
            else:
                s = -a / b
                hi = s if hi is None else min(hi, s)
        if lo is not None and hi is not None and lo >= hi:
            return False
        if lo is not None and lo >= 1:
            return False
        if hi is not None and hi <= 0:
            return False
        return True

    def segment_meets_closed(self, p, q) -> bool:
        p, q = as_point(p), as_point(q)
        lo, hi = Fraction(0), Fraction(1)
        for i in range(len(self.vertices)):
            a = self.edge_value(i, p)
            b = self.edge_value(i, q) - a
            if b == 0:
                if a < 0:
                    return False
            elif b > 0:
                lo = max(lo, -a / b)
            else:
                hi = min(hi, -a / b)
        return lo <= hi

    def interior_disjoint(self, other: "ConvexPolygon") -> bool:
        """Separating-axis test: some edge line of either polygon weakly separates them."""
        for poly, rest in ((self, other), (other, self)):
            for i in range(len(poly.vertices)):
                if all(poly.edge_value(i, v) <= 0 for v in rest.vertices):
                    return True
        return False

    # --- transformations -----------------------------------------------------

    def apply(self, g: AffineMap) -> "ConvexPolygon":
        return ConvexPolygon([g(v) for v in self.vertices])

    def translate(self, v) -> "ConvexPolygon":
        return ConvexPolygon([add(p, v) for p in self.vertices])

    def scaled(self, s) -> "ConvexPolygon":
        s = Q(s)
        return ConvexPolygon([scale(s, p) for p in self.vertices])

    def split_by_line(self, point, direction):
        """Cut along the line ``point + t*direction``.

        Returns ``(left, right, segment)``: the closed pieces on the left and
        right of the oriented line (``None`` when a piece has empty interior)
        and the chord they share (``None`` when the line misses the interior).
        """
        point = as_point(point)
        side = [det(direction, sub(v, point)) for v in self.vertices]
        left_pts, right_pts, chord = [], [], []
        n = len(self.vertices)
        for i in range(n):
            v, w = self.vertices[i], self.vertices[(i + 1) % n]
            sv, sw = side[i], side[(i + 1) % n]
            if sv >= 0:
                left_pts.append(v)
            if sv <= 0:
                right_pts.append(v)
            if sv == 0:
                chord.append(v)
            if (sv > 0 and sw < 0) or (sv < 0 and sw > 0):
                x = lerp(v, w, sv / (sv - sw))
                left_pts.append(x)
                right_pts.append(x)
                chord.append(x)

        def build(pts):
            pts = _dedupe_collinear(pts)
            if len(pts) < 3 or _orient(pts) == 0:
                return None
            return ConvexPolygon(pts)

        left, right = build(left_pts), build(right_pts)
        seg = None
        if left is not None and right is not None and len(chord) == 2:
            seg = (chord[0], chord[1])
        return left, right, seg

    def to_json(self):
        return [[fmt_q(x), fmt_q(y)] for x, y in self.vertices]

    @classmethod
    def from_json(cls, obj):
        return cls([(parse_q(x), parse_q(y)) for x, y in obj])


def _dedupe_collinear(pts):
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            a, b, c = out[i - 1], out[i], out[(i + 1) % n]
            if det(sub(b, a), sub(c, b)) == 0:
                out.pop(i)
                changed = True
                break
    return out


def polygon_from_points(points) -> ConvexPolygon:
    """Convex hull-free constructor that also drops collinear middle points."""
    return ConvexPolygon(_dedupe_collinear([as_point(p) for p in points]))


# ---------------------------------------------------------------------------
# equivalence up to GL(2,Z) and translations


def _solve_linear(src, dst) -> Optional[Matrix]:
    """Integer unimodular M with M @ src[i] == dst[i] for two independent vectors."""
    (a, c), (b, d) = src  # columns of S
    s_det = a * d - b * c
    if s_det == 0:
        return None
    # M = D @ S^{-1}
    inv = ((Fraction(d) / s_det, Fraction(-b) / s_det), (Fraction(-c) / s_det, Fraction(a) / s_det))
    (p, r), (q, s) = dst
    D = ((p, q), (r, s))
    M = (
        (D[0][0] * inv[0][0] + D[0][1] * inv[1][0], D[0][0] * inv[0][1] + D[0][1] * inv[1][1]),
        (D[1][0] * inv[0][0] + D[1][1] * inv[1][0], D[1][0] * inv[0][1] + D[1][1] * inv[1][1]),
    )
    if any(Fraction(x).denominator != 1 for row in M for x in row):
        return None
    M = tuple(tuple(int(x) for x in row) for row in M)
    if mat_det(M) not in (1, -1):
        return None
    return M


def polygon_equiv(P: ConvexPolygon, R: ConvexPolygon, marks_p: Sequence = (), marks_r: Sequence = ()):
    """Find g in GL(2,Z) x R^2 with g(P) == R (and g(marks_p[i]) == marks_r[i]).

    Tries to match vertex 0 of P, with its two primitive edge directions,
    against every vertex of R in both orientations.  Returns ``None`` when no
    such map exists.
    """
    n = len(P)
    if n != len(R) or len(marks_p) != len(marks_r):
        return None
    if sorted(P.lattice_lengths()) != sorted(R.lattice_lengths()):
        return None
    if P.area() != R.area():
        return None
    e_prev, e_next = P.corner_directions(0)
    for j in range(n):
        f_prev, f_next = R.corner_directions(j)
        for dst in ((f_next, f_prev), (f_prev, f_next)):
            M = _solve_linear((e_next, e_prev), dst)
            if M is None:
                continue
            g = AffineMap(M, sub(R.vertices[j], mat_vec(M, P.vertices[0])))
            image = [g(v) for v in P.vertices]
            if set(image) != set(R.vertices):
                continue
            if all(g(m) == as_point(mr) for m, mr in zip(marks_p, marks_r)):
                return g
    return None


def canonical_form(P: ConvexPolygon, marks: Sequence = ()):
    """A complete invariant of (P, marks) under GL(2,Z) x R^2.

    For each vertex and orientation: move the vertex to the origin, send the
    outgoing edge to the positive x-axis, make the other edge point into the
    upper half plane, and reduce the remaining shear.  The lexicographically
    smallest coordinate list wins.
    """
    best = None
    n = len(P)
    for i in range(n):
        e_prev, e_next = P.corner_directions(i)
        for first, second in ((e_next, e_prev), (e_prev, e_next)):
            F = frame_from_direction(first)
            w = mat_vec(F, second)
            if w[1] < 0:
                F = mat_mul(((1, 0), (0, -1)), F)
                w = (w[0], -w[1])
            # shear (x, y) -> (x + j*y, y) bringing w[0] into [0, w[1])
            j = -(w[0] // w[1])
            F = mat_mul(((1, j), (0, 1)), F)
            g = AffineMap(F, (0, 0))
            origin = g(P.vertices[i])
            g = AffineMap(F, scale(-1, origin))
            img = sorted(g(v) for v in P.vertices)
            key = (tuple(img), tuple(g(m) for m in marks))
            if best is None or key < best:
                best = key
    return best
