import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from atfcert.markov import ROOT, mutate  # noqa: E402

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
points = st.tuples(rationals, rationals)


@st.composite
def markov_triples(draw, max_len=6):
    """A random walk on the Markov tree; canonical result."""
    word = draw(st.lists(st.integers(0, 2), max_size=max_len))
    t = ROOT
    for s in word:
        t = mutate(t, s).canonical()
    return t


@st.composite
def sl2z(draw, steps=5):
    """Random product of elementary generators (det 1) with an optional reflection."""
    m = ((1, 0), (0, 1))
    gens = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)), ((0, -1), (1, 0))]
    for g in draw(st.lists(st.sampled_from(gens), max_size=steps)):
        m = tuple(tuple(sum(m[i][k] * g[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return m


@st.composite
def gl2z(draw, steps=5):
    m = draw(sl2z(steps))
    if draw(st.booleans()):
        m = ((m[0][1], m[0][0]), (m[1][1], m[1][0]))
    return m


def _hull(pts):
    pts = sorted(set(pts))

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1]) - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(pts[::-1])
    return lower[:-1] + upper[:-1]


@st.composite
def convex_polygons(draw, max_n=8):
    """Convex hull of random lattice points, scaled by 1/den; redrawn when flat."""
    from atfcert.affine import ConvexPolygon

    pts = draw(st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=3, max_size=max_n, unique=True))
    hull = _hull(pts)
    assume(len(hull) >= 3)
    den = draw(st.integers(1, 4))
    return ConvexPolygon([(Fraction(x, den), Fraction(y, den)) for x, y in hull])
