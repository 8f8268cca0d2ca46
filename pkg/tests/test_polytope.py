import math
from fractions import Fraction as F

import pytest
from hypothesis import given

from atfcert.affine import ConvexPolygon, GeometryError
from atfcert.markov import MarkovTriple, enumerate_triples
from atfcert.polytope import (
    barycenter,
    build,
    check_invariants,
    check_kernel,
    check_normalized,
    check_w_relations,
    disc_sizes,
    evans_smith_failures,
    guillemin_potential,
    normalize,
    solve_l,
)
from conftest import markov_triples
from oracles import inside, l1_by_search, lattice_len, meet, shoelace

T111, T112, T125 = MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2), MarkovTriple(1, 2, 5)


@pytest.mark.parametrize("t,l1,l2", [(T111, 1, 2), (T112, 1, 5), (T125, 1, 13)])
def test_solve_l_examples(t, l1, l2):
    got = solve_l(t)
    assert got[:2] == (l1, l2)
    assert t.a * l2 + t.b * l1 == 3 * t.c
    assert (l2 * l2 + 9) % t.b == 0


@pytest.mark.parametrize(
    "t,verts,lengths",
    [
        (T111, {(0, 0), (0, 1), (1, 0)}, [1, 1, 1]),
        (T112, {(0, 0), (0, 4), (1, 0)}, [1, 1, 4]),
        (T125, {(0, 0), (0, 25), (4, 0)}, [1, 4, 25]),
    ],
)
def test_build_examples(t, verts, lengths):
    d = build(t)
    assert set(d.polygon.vertices) == verts
    assert sorted(d.polygon.lattice_lengths()) == lengths
    assert check_invariants(d) == []


@pytest.mark.parametrize("t,p", [(T111, (F(1, 3), F(1, 3))), (T112, (F(2, 3), F(2, 3))), (T125, (F(10, 3), F(10, 3)))])
def test_barycenter_examples(t, p):
    assert barycenter(build(t)) == p


def test_barycenter_lines_for_125():
    # y = x, y = 25 - 13x/2, y = -5(x - 4): pairwise meetings agree
    p12 = meet((0, 0), (1, 1), (0, 25), (2, -13))
    p13 = meet((0, 0), (1, 1), (4, 0), (-1, 5))
    assert p12 == p13 == (F(10, 3), F(10, 3))


@pytest.mark.parametrize("t", [T111, T112, T125])
def test_disc_sizes_at_barycenter(t):
    d = build(t)
    abc = t.a * t.b * t.c
    assert disc_sizes(d, barycenter(d)) == (F(abc, 3),) * 3


def test_disc_sizes_outside_rejected():
    with pytest.raises(GeometryError):
        disc_sizes(build(T111), (2, 2))


@pytest.mark.parametrize(
    "t,verts,lengths",
    [
        (T111, {(0, 0), (0, 3), (3, 0)}, [3, 3, 3]),
        (T112, {(0, 0), (0, 6), (F(3, 2), 0)}, [F(3, 2), F(3, 2), 6]),
        (T125, None, [F(3, 10), F(6, 5), F(15, 2)]),
    ],
)
def test_normalize_examples(t, verts, lengths):
    n = normalize(build(t))
    if verts is not None:
        assert set(n.polygon.vertices) == verts
    assert sorted(n.polygon.lattice_lengths()) == lengths
    assert sum(lengths) == 9
    assert n.polygon.area() == F(9, 2)
    assert n.fiber == (1, 1)


@pytest.mark.parametrize("t", [T111, T112, T125])
def test_kernel(t):
    assert check_kernel(build(t))


@pytest.mark.parametrize("t,w3", [(T111, (2, -1)), (T112, (1, -2)), (T125, (1, -5))])
def test_w_relations(t, w3):
    d = build(t)
    assert tuple(d.eigenrays[2]) == w3
    assert all(check_w_relations(d).values())


def test_w3_sum_for_112():
    d = build(T112)
    w1, w2, w3 = d.eigenrays
    assert tuple(w1) == (-1, -1) and tuple(w2) == (-1, 5)
    assert tuple(1 * w1[i] + 1 * w2[i] + 2 * w3[i] for i in range(2)) == (0, 0)


def test_lens_labels():
    d = build(T125)
    assert d.lens_labels == ((1, 0), (4, 2 * d.l2 - 1), (25, 5 * d.l3 - 1))


def test_guillemin_potential_values():
    d = build(T111)
    # lambda = (-1, 0, 0) and L_inf vanishes at the barycenter
    assert guillemin_potential(d, 1 / 3, 1 / 3) == pytest.approx(-math.log(1 / 3), abs=1e-12)
    # finite limit near facet 2 (x = 0)
    assert math.isfinite(guillemin_potential(d, 1e-12, 0.5))
    with pytest.raises(GeometryError):
        guillemin_potential(d, 0.0, 0.5)


def test_guillemin_potential_smooth_on_grid():
    d = build(T125)
    P = d.polygon
    for i in range(1, 20):
        for j in range(1, 20):
            p = (F(i, 20) * 4, F(j, 20) * 25)
            if P.contains_point(p, strict=True):
                assert math.isfinite(guillemin_potential(d, float(p[0]), float(p[1])))


def test_evans_smith_sign_ambiguity_accepted():
    # both signs of the +-3c congruences are accepted; a broken l1 is caught
    assert evans_smith_failures(T125, 1, 13) == []
    assert evans_smith_failures(MarkovTriple(2, 5, 29), 2, 1) != []


# --- oracle sweeps ----------------------------------------------------------------


@pytest.mark.parametrize("t", sorted(enumerate_triples(200), key=lambda t: t.c))
def test_against_oracles(t):
    a, b, c = t
    d = build(t)
    assert d.l1 == l1_by_search(a, b, c)
    verts = list(d.polygon.vertices)
    assert shoelace(verts) == F(a * a * b * b * c * c, 2)
    assert sorted(lattice_len(p, q) for p, q in zip(verts, verts[1:] + verts[:1])) == sorted([a * a, b * b, c * c])
    # eigenlines from the vertices meet at the barycenter
    p = barycenter(d)
    rays = d.eigenrays_from_vertices()
    assert meet(verts[0], rays[0], verts[1], rays[1]) == p
    assert meet(verts[1], rays[1], verts[2], rays[2]) == p
    assert inside(verts, p, strict=True)
    n = normalize(d)
    assert check_normalized(n) == []
    assert shoelace(list(n.polygon.vertices)) == F(9, 2)


# --- properties ------------------------------------------------------------------


@given(markov_triples(max_len=7))
def test_polytope_invariants(t):
    d = build(t)
    a, b, c = t
    assert check_invariants(d) == []
    assert check_kernel(d)
    assert all(check_w_relations(d).values())
    assert (a * a + b * b) % c == 0 and (a * d.l1 - b * d.l2) % c == 0
    assert evans_smith_failures(t, d.l1, d.l2) == []
    assert (d.l3 * d.l3 + 9) % c == 0
    n = normalize(d)
    assert max(n.polygon.lattice_lengths()) >= (6 if c >= 2 else 3)
    assert ConvexPolygon(n.polygon.vertices).area() == F(9, 2)
