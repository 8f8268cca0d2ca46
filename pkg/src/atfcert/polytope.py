"""Labelled moment polytope of the weighted projective plane CP(a^2, b^2, c^2).

For an ordered Markov triple (a, b, c) the polytope is the triangle

    L1 = -(b*l2 - 1) x - b^2 y + b^2 c^2 >= 0
    L2 = -(a*l1 - 1) x + a^2 y          >= 0
    L3 = x                               >= 0

with vertices (0, 0), (a^2 b^2, b^2 (a*l1 - 1)) and (0, c^2).  The corner
at the origin carries the orbifold group of order a^2, the one at (0, c^2)
order b^2 and the remaining one order c^2.  The integers l1, l2 come from
``a*l2 + b*l1 == 3c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .affine import (
    ConvexPolygon,
    GeometryError,
    add,
    det,
    dot,
    frame_from_direction,
    lattice_length,
    mat_vec,
    primitive,
    pt,
    scale,
)
from .markov import MarkovTriple


class ConsistencyError(RuntimeError):
    """An identity that must hold for Markov input failed."""


def solve_l(t: MarkovTriple) -> tuple[int, int, int]:
    """The auxiliary integers (l1, l2, l3) of the ordered triple ``t``.

    l1 is the representative in (0, a] of the residue with b*l1 = 3c mod a,
    l2 = (3c - b*l1)/a, and l3 is read off from the normal form of the third
    corner (see :func:`corner_label`).
    """
    a, b, c = t
    if a == 1:
        l1 = 1
    else:
        l1 = (3 * c * pow(b, -1, a)) % a or a
    num = 3 * c - b * l1
    if num <= 0 or num % a:
        raise ConsistencyError(f"l2 = (3c - b*l1)/a is not a positive integer for {t}")
    l2 = num // a
    poly = _triangle(t, l1)
    l3 = corner_label(poly, 1, c)
    failed = evans_smith_failures(t, l1, l2)
    if failed:
        raise ConsistencyError(f"congruences {failed} fail for {t} with l1={l1}, l2={l2}")
    if math.gcd(l1, a) != 1 or math.gcd(l2, b) != 1 or math.gcd(l3, c) != 1:
        raise ConsistencyError(f"l-values not coprime to their weights for {t}")
    return l1, l2, l3


def evans_smith_failures(t: MarkovTriple, l1: int, l2: int) -> list[str]:
    """Names of the six congruences that fail (``±`` accepts either sign)."""
    a, b, c = t

    def pm(lhs, rhs, m):
        return (lhs - rhs) % m == 0 or (lhs + rhs) % m == 0

    checks = {
        "l1^2=-9 (a)": (l1 * l1 + 9) % a == 0,
        "l2^2=-9 (b)": (l2 * l2 + 9) % b == 0,
        "b*l1=±3c (a)": pm(b * l1, 3 * c, a),
        "c*l1=±3b (a)": pm(c * l1, 3 * b, a),
        "a*l2=±3c (b)": pm(a * l2, 3 * c, b),
        "c*l2=±3a (b)": pm(c * l2, 3 * a, b),
    }
    return [name for name, ok in checks.items() if not ok]


def _triangle(t: MarkovTriple, l1: int) -> ConvexPolygon:
    a, b, c = t
    return ConvexPolygon([pt(0, 0), pt(a * a * b * b, b * b * (a * l1 - 1)), pt(0, c * c)])


def corner_label(poly: ConvexPolygon, i: int, k: int) -> int:
    """Lens-space parameter l in (0, k] of the weight-``k`` corner ``i``.

    An SL(2,Z) change of frame sends the direction toward the previous vertex
    to (0, 1) and the one toward the next vertex to (k^2, k*l - 1); the cut
    direction becomes (k, l).  Only l mod k is determined; we return the
    representative in (0, k].
    """
    e_prev, e_next = poly.corner_directions(i)
    if abs(det(e_prev, e_next)) != k * k:
        raise ConsistencyError(f"corner {i} has weight {abs(det(e_prev, e_next))}, expected {k * k}")
    F = frame_from_direction(e_prev)
    # F sends e_prev to (1, 0); rotate so it goes to (0, 1)
    rot = ((0, -1), (1, 0))
    F = tuple(
        tuple(sum(rot[r][m] * F[m][s] for m in range(2)) for s in range(2)) for r in range(2)
    )
    w = mat_vec(F, e_next)
    if w[0] != k * k:
        raise ConsistencyError(f"unexpected normal form {w} at corner {i}")
    m = w[1] % (k * k)
    if (m + 1) % k:
        raise ConsistencyError(f"corner {i}: {m} + 1 not divisible by {k}")
    l = ((m + 1) // k) % k
    return l if l else k


@dataclass(frozen=True)
class WeightedPolytopeData:
    """Exact data of P(a^2, b^2, c^2) for an ordered Markov triple.

    ``corner_weights[i]`` is the Markov entry k whose square is the orbifold
    order at ``polygon.vertices[i]``.
    """

    triple: MarkovTriple
    l1: int
    l2: int
    l3: int
    polygon: ConvexPolygon
    corner_weights: tuple[int, int, int]
    u: tuple  # edge vectors u1, u2, u3
    normals: tuple  # inward normals mu1, mu2, mu3
    offsets: tuple  # lambda1, lambda2, lambda3
    labels: tuple = (1, 1, 1)
    scale: Fraction = Fraction(1)
    fiber: tuple = field(default=None)

    @property
    def eigenrays(self):
        """Outward eigenray directions w1, w2, w3 (fiber toward each corner)."""
        a, b, c = self.triple
        w1 = (-a, -self.l1)
        w2 = (-b, self.l2)
        w3 = (Fraction(a * a + b * b, c), Fraction(a * self.l1 - b * self.l2, c))
        return w1, w2, w3

    @property
    def lens_labels(self):
        a, b, c = self.triple
        return ((a * a, a * self.l1 - 1), (b * b, b * self.l2 - 1), (c * c, c * self.l3 - 1))

    def facet_value(self, i: int, p) -> Fraction:
        """L_i(p) = <p, mu_i> - lambda_i, in the current (possibly scaled) frame."""
        return dot(p, self.normals[i]) - self.offsets[i]


def build(t: MarkovTriple) -> WeightedPolytopeData:
    a, b, c = t
    l1, l2, l3 = solve_l(t)
    poly = _triangle(t, l1)
    u1 = (b * b, -(b * l2 - 1))
    u2 = (-(a * a), -(a * l1 - 1))
    u3 = (0, 1)
    mu1 = (-(b * l2 - 1), -(b * b))
    mu2 = (-(a * l1 - 1), a * a)
    mu3 = (1, 0)
    offsets = (Fraction(-(b * b) * c * c), Fraction(0), Fraction(0))
    data = WeightedPolytopeData(
        triple=t,
        l1=l1,
        l2=l2,
        l3=l3,
        polygon=poly,
        corner_weights=(a, c, b),
        u=(u1, u2, u3),
        normals=(mu1, mu2, mu3),
        offsets=offsets,
        fiber=barycenter_point(t, l1),
    )
    failures = check_invariants(data)
    if failures:
        raise ConsistencyError(f"polytope invariants fail for {t}: {failures}")
    return data


def barycenter_point(t: MarkovTriple, l1: int):
    a, b, c = t
    return (Fraction(a * b * c, 3), Fraction(b * c * l1, 3))


def check_invariants(d: WeightedPolytopeData) -> list[str]:
    """Names of failed invariants of unscaled data (empty list when all hold)."""
    a, b, c = d.triple
    l1, l2, l3 = d.l1, d.l2, d.l3
    u1, u2, u3 = d.u
    out = []
    bal = add(add(scale(a * a, u1), scale(b * b, u2)), scale(c * c, u3))
    if bal != (0, 0):
        out.append("balancing")
    if a * l2 + b * l1 != 3 * c:
        out.append("a*l2 + b*l1 = 3c")
    if math.gcd(l1, a) != 1 or math.gcd(l2, b) != 1 or math.gcd(l3, c) != 1:
        out.append("coprime l")
    if d.labels != (1, 1, 1):
        out.append("labels")
    # half-planes cut out exactly the triangle: each vertex on two lines, inside the third
    verts = d.polygon.vertices
    zero_pattern = []
    for v in verts:
        vals = [d.facet_value(i, v) for i in range(3)]
        if any(x < 0 for x in vals):
            out.append("vertex outside half-plane")
        zero_pattern.append(tuple(x == 0 for x in vals))
    if sorted(sum(z) for z in zero_pattern) != [2, 2, 2]:
        out.append("vertex incidence")
    # facet i is the edge opposite the vertex where L_i > 0
    lengths = {}
    for i in range(3):
        on = [v for v in verts if d.facet_value(i, v) == 0]
        if len(on) == 2:
            lengths[i] = lattice_length(*on)
    if [lengths.get(i) for i in range(3)] != [a * a, b * b, c * c]:
        out.append("edge lattice lengths")
    # inward normals are primitive and normal to the edge vectors
    for mu, u in zip(d.normals, d.u):
        if primitive(mu) != tuple(mu) or dot(mu, u) != 0:
            out.append("normals")
    return out


def barycenter(d: WeightedPolytopeData):
    """(abc/3, b c l1 / 3) together with the check that the three eigenlines meet there."""
    a, b, c = d.triple
    p = barycenter_point(d.triple, d.l1)
    x, y = p
    lines = concurrency_lines(d)
    residuals = [line(x) - y for line in lines]
    if any(r != 0 for r in residuals):
        raise ConsistencyError(f"eigenlines are not concurrent at {p}: {residuals}")
    # the same check along the actual directions from the three vertices
    for v, w in zip(d.polygon.vertices, d.eigenrays_from_vertices()):
        if det(w, (p[0] - v[0], p[1] - v[1])) != 0:
            raise ConsistencyError("barycenter not on an eigenray")
    return p


def concurrency_lines(d: WeightedPolytopeData):
    """The three eigenlines as functions x -> y, one through each vertex."""
    a, b, c = d.triple
    l1, l2 = d.l1, d.l2
    s3 = Fraction(l1, a) - Fraction(3 * b * c, a * (a * a + b * b))
    return (
        lambda x: Fraction(l1, a) * x,
        lambda x: c * c - Fraction(l2, b) * x,
        lambda x: b * b * (a * l1 - 1) + s3 * (x - a * a * b * b),
    )


def _eigenrays_from_vertices(self):
    """Inward eigen-directions at each vertex, in polygon vertex order."""
    w1, w2, w3 = self.eigenrays
    by_role = {0: scale(-1, w1), 2: scale(-1, w2), 1: scale(-1, w3)}
    return [by_role[i] for i in range(3)]


WeightedPolytopeData.eigenrays_from_vertices = _eigenrays_from_vertices


def disc_sizes(d: WeightedPolytopeData, A) -> tuple[Fraction, Fraction, Fraction]:
    """Affine disc sizes <A, mu_i> - lambda_i; the symplectic areas are 2*pi times these."""
    A = (Fraction(A[0]), Fraction(A[1]))
    vals = tuple(d.facet_value(i, A) for i in range(3))
    if any(v < 0 for v in vals):
        raise GeometryError(f"{A} lies outside the polytope")
    return vals


def normalize(d: WeightedPolytopeData) -> WeightedPolytopeData:
    """Scale by 3/(abc): every disc at the fiber gets size 1 and the boundary totals 9."""
    a, b, c = d.triple
    s = Fraction(3, a * b * c) * d.scale
    k = Fraction(3, a * b * c)
    poly = d.polygon.scaled(k)
    out = WeightedPolytopeData(
        triple=d.triple,
        l1=d.l1,
        l2=d.l2,
        l3=d.l3,
        polygon=poly,
        corner_weights=d.corner_weights,
        u=d.u,
        normals=d.normals,
        offsets=tuple(k * o for o in d.offsets),
        labels=d.labels,
        scale=s,
        fiber=scale(k, d.fiber),
    )
    failures = check_normalized(out)
    if failures:
        raise ConsistencyError(f"normalization checks fail for {d.triple}: {failures}")
    return out


def check_normalized(d: WeightedPolytopeData) -> list[str]:
    a, b, c = d.triple
    out = []
    lengths = d.polygon.lattice_lengths()
    if sum(lengths) != 9:
        out.append("boundary != 9")
    if d.polygon.area() != Fraction(9, 2):
        out.append("area != 9/2")
    if max(lengths) != Fraction(3 * c, a * b):
        out.append("longest edge != 3c/(ab)")
    if max(lengths) < 3:
        out.append("longest edge < 3")
    if c >= 2 and max(lengths) < 6:
        out.append("longest edge < 6")
    if disc_sizes(d, d.fiber) != (1, 1, 1):
        out.append("disc sizes at fiber != 1")
    return out


def check_kernel(d: WeightedPolytopeData) -> bool:
    """beta @ (a^2, b^2, c^2) == 0 for beta with columns mu_1, mu_2, mu_3."""
    a, b, c = d.triple
    beta = (
        (-(b * d.l2 - 1), -(a * d.l1 - 1), 1),
        (-(b * b), a * a, 0),
    )
    w = (a * a, b * b, c * c)
    return all(sum(r[i] * w[i] for i in range(3)) == 0 for r in beta)


def check_w_relations(d: WeightedPolytopeData) -> dict[str, bool]:
    """The eigenray relations and the three expressions for the slope of w3."""
    a, b, c = d.triple
    l1, l2 = d.l1, d.l2
    w1, w2, w3 = d.eigenrays
    u1, u2, u3 = d.u

    def comb(*terms):
        x = Fraction(0)
        y = Fraction(0)
        for s, v in terms:
            x += s * v[0]
            y += s * v[1]
        return (x, y)

    third = Fraction(1, 3)
    res = {
        "integral w3": w3[0].denominator == 1 and w3[1].denominator == 1,
        "a w1 + b w2 + c w3 = 0": comb((a, w1), (b, w2), (c, w3)) == (0, 0),
        "(ac w2 - bc w1)/3 = c^2 u3": comb((third * a * c, w2), (-third * b * c, w1)) == scale(c * c, u3),
        "(bc w1 - ab w3)/3 = b^2 u2": comb((third * b * c, w1), (-third * a * b, w3)) == scale(b * b, u2),
        "(ab w3 - ac w2)/3 = a^2 u1": comb((third * a * b, w3), (-third * a * c, w2)) == scale(a * a, u1),
    }
    slopes = [
        Fraction(l1, a) - Fraction(3 * b * c, a * (a * a + b * b)),
        Fraction((c - 3 * a * b) * l2 + 3 * a, b * (3 * a * b - c)) if 3 * a * b != c else None,
        Fraction(a * l1 - b * l2, a * a + b * b),
        w3[1] / w3[0],
    ]
    res["slopes agree"] = len({s for s in slopes if s is not None}) == 1
    return res


def guillemin_potential(d: WeightedPolytopeData, x: float, y: float) -> float:
    """sum_i lambda_i log L_i(x, y) + L_inf(x, y) on the open (unscaled) triangle.

    Only the scalar potential; terms with lambda_i == 0 are dropped, so the
    function stays finite near facets 2 and 3.
    """
    a, b, c = d.triple
    vals = [float(d.normals[i][0]) * x + float(d.normals[i][1]) * y - float(d.offsets[i]) for i in range(3)]
    if any(v <= 0 for v in vals):
        raise GeometryError(f"({x}, {y}) is not in the open polytope")
    l_inf = (3 - (a * d.l1 + b * d.l2)) * x + (a * a - b * b) * y
    total = l_inf
    for lam, v in zip(d.offsets, vals):
        if lam:
            total += float(lam) * math.log(v)
    return total
