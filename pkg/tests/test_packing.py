from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from atfcert.affine import ConvexPolygon, GeometryError
from atfcert.atf import seed_diagram
from atfcert.markov import MarkovTriple, enumerate_triples
from atfcert.packing import (
    COMPLEMENT_E,
    MONOTONE,
    CertificateError,
    DiamondPlacement,
    GluingCertificate,
    TrianglePlacement,
    best_diamond,
    capacity_report,
    clustered_clifford,
    diamond_bounds,
    five_monotone_triangles,
    fs_capacity_over_pi,
    glued_corner_triangle,
    nine_ball_skeleton_packing,
    single_monotone_triangle,
    verify,
    verify_packing,
)
from conftest import markov_triples
from oracles import packing_problems

T111, T112, T125 = MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2), MarkovTriple(1, 2, 5)
D111 = seed_diagram(T111)
BOTTOM = D111.polygon.vertices.index((0, 0))  # edge (0,0) -> (3,0)


def assert_oracle_packing(packing, check_points=True):
    assert packing_problems(packing, check_points) == []


# --- verify -----------------------------------------------------------------------


def test_apex_touching_fiber_is_valid():
    t = TrianglePlacement(((1, 0), (2, 0), (1, 1)), 1, BOTTOM)
    assert verify(D111, t, MONOTONE)


def test_fiber_in_interior_is_rejected():
    moved = TrianglePlacement(((F(3, 4), F(1, 2)), (F(7, 4), F(1, 2)), (F(3, 4), F(3, 2))), 1, BOTTOM)
    v = verify(D111, moved, MONOTONE)
    assert not v
    assert any("fiber" in r for r in v.reasons)
    assert not v.malformed


def test_triangle_off_the_boundary_is_rejected():
    t = TrianglePlacement(((F(1, 2), F(1, 2)), (F(3, 2), F(1, 2)), (F(1, 2), F(3, 2))), 1, BOTTOM)
    assert not verify(D111, t, MONOTONE)


def test_strict_mode_rejects_apex_at_fiber():
    t = TrianglePlacement(((1, 0), (2, 0), (1, 1)), 1, BOTTOM)
    assert not verify(D111, t, MONOTONE, strict=True)


def test_wrong_side_is_malformed():
    t = TrianglePlacement(((1, 0), (2, 0), (1, 1)), 2, BOTTOM)
    v = verify(D111, t, MONOTONE)
    assert not v and v.malformed


def test_diamond_at_fiber_avoiding_boundary():
    dia = DiamondPlacement(((1, 0), (0, 1)), (1, 1), 1)
    assert verify(D111, dia, {"boundary"})
    assert not verify(D111, dia, COMPLEMENT_E)  # contains the fiber


def test_oversize_diamond_rejected():
    dia = DiamondPlacement(((1, 0), (0, 1)), (1, 1), 3)
    v = verify(D111, dia, {"boundary"})
    assert not v and any("inside" in r for r in v.reasons)


def test_unknown_excluded_set():
    with pytest.raises(CertificateError):
        verify(D111, DiamondPlacement(((1, 0), (0, 1)), (1, 1), F(1, 2)), {"moon"})


def test_region_crossing_a_cut_without_certificate():
    d = seed_diagram(T112)
    # the cut runs from (3/2, 0) toward (1, 1); at height 9/20 it passes x = 51/40
    dia = DiamondPlacement(((1, 0), (0, 1)), (F(6, 5), F(9, 20)), F(3, 10))
    v = verify(d, dia, {"fiber"})
    assert not v and any("cut" in r for r in v.reasons)
    away = DiamondPlacement(((1, 0), (0, 1)), (F(1, 2), F(1, 2)), F(1, 2))
    assert verify(d, away, {"fiber"})


def test_malformed_glued_certificate():
    p = glued_corner_triangle(seed_diagram(T125))
    cert = p.placements[0]
    bad = GluingCertificate(cert.pieces[:1] + cert.pieces[:1], cert.transitions, cert.model)
    v = verify(p.diagram, bad, MONOTONE)
    assert not v and v.malformed
    missing = GluingCertificate(cert.pieces[:1], (), cert.model)
    v = verify(p.diagram, missing, MONOTONE)
    assert not v and v.malformed
    wrong_power = GluingCertificate(cert.pieces, tuple((c, -pw) for c, pw in cert.transitions), cert.model)
    assert not verify(p.diagram, wrong_power, MONOTONE)


def test_glued_certificate_verifies_and_crosses():
    for t in (T112, T125, MarkovTriple(2, 5, 29)):
        p = glued_corner_triangle(seed_diagram(t))
        assert p.verdict(), p.verdict().reasons
        cert = p.placements[0]
        assert len(cert.pieces) == 2 and len(cert.transitions) == 1
        assert sum(Q.area() for Q in cert.pieces) == cert.model.region().area()
        assert_oracle_packing(p)


# --- constructors -----------------------------------------------------------------


def test_single_111():
    p = single_monotone_triangle(D111)
    assert p.verdict()
    assert fs_capacity_over_pi(p.placements[0].size) == F(2, 3)
    assert_oracle_packing(p)


@pytest.mark.parametrize("t", [T112, T125])
def test_single_on_longest_edge(t):
    d = seed_diagram(t)
    p = single_monotone_triangle(d)
    assert p.verdict()
    tri = p.placements[0]
    L = max(d.polygon.lattice_lengths())
    assert d.polygon.lattice_lengths()[tri.base_edge] == L
    assert_oracle_packing(p)


def test_five_112_on_the_long_edge():
    d = seed_diagram(T112)
    p = five_monotone_triangles(d)
    assert p.verdict() and len(p.placements) == 5
    edge = {tri.base_edge for tri in p.placements}
    assert edge == {d.polygon.lattice_lengths().index(6)}
    assert_oracle_packing(p)


def test_five_111_uses_two_traded_corners():
    p = five_monotone_triangles(D111)
    assert p.verdict() and len(p.placements) == 5
    assert len(p.diagram.nodes()) == 2
    assert_oracle_packing(p)


@pytest.mark.parametrize("s", [F(1, 2), F(9, 10), F(99, 100)])
def test_nine_ball(s):
    p = nine_ball_skeleton_packing(s)
    assert p.verdict() and len(p.placements) == 9
    assert sum(R.region().area() for R in p.placements) == 9 * s * s / 2 < F(9, 2)
    assert_oracle_packing(p)
    # the closed triangles miss the skeleton entirely
    for tri in p.placements:
        for a, b in p.diagram.skeleton():
            assert not tri.region().segment_meets_closed(a, b)


@pytest.mark.parametrize("s", [1, F(11, 10), 0])
def test_nine_ball_rejects_side(s):
    with pytest.raises(GeometryError):
        nine_ball_skeleton_packing(s)


def test_nine_ball_side_one_layout_fails_verification():
    from atfcert.packing import nine_ball_triangles

    D = clustered_clifford()
    tris = nine_ball_triangles(D, F(1))
    assert not verify_packing(D, tris, {"fiber", "nodes", "skeleton"}, strict=True)


def test_diamond_examples():
    p = diamond_bounds(D111, "clifford", F(1, 100))
    assert p.verdict() and p.placements[0].d == F(99, 100)
    assert fs_capacity_over_pi(p.placements[0].d) == F(2, 3) * F(99, 100)
    p = diamond_bounds(seed_diagram(T112), "c_ge_2", F(1, 100))
    assert p.verdict() and p.placements[0].d == F(6, 7) - F(1, 100)
    for t in (T111, T112, T125):
        p = diamond_bounds(seed_diagram(t), "general", F(1, 100))
        assert p.verdict() and p.placements[0].d == F(49, 100)
        assert_oracle_packing(p)


def test_diamond_target_errors():
    with pytest.raises(ValueError):
        diamond_bounds(D111, "c_ge_2")
    with pytest.raises(ValueError):
        diamond_bounds(seed_diagram(T112), "clifford")
    with pytest.raises(ValueError):
        diamond_bounds(D111, "general", 0)


def test_diamond_unit_scheme():
    tri = ConvexPolygon([(0, 0), (1, 0), (0, 1)])
    dia = DiamondPlacement(((1, 0), (0, 1)), (F(1, 3), F(1, 3)), F(2, 3))
    assert tri.contains_polygon(dia.region())
    assert fs_capacity_over_pi(1) == F(2, 3) > fs_capacity_over_pi(F(2, 3)) == F(4, 9)


def test_best_diamond_is_evidence_only():
    size, cand = best_diamond(seed_diagram(T125))
    assert cand is not None and verify(seed_diagram(T125), cand, COMPLEMENT_E)
    assert size >= F(6, 7) - F(1, 100)


def test_reports():
    r = capacity_report(T112)
    assert r.ok
    h = r.headline
    assert h["c_G(CP2;T) >= pi *"] == F(2, 3)
    assert h["limit of c_G(CP2 minus E;T) bound, pi *"] == F(4, 7)
    assert h["five monotone balls"] is True
    assert h["nine balls of side"] == F(9, 10)
    r = capacity_report(T111)
    assert r.external == {"c_G(CP2;T_Cl) = pi *": F(4, 3)}
    assert r.headline["limit of c_G(CP2 minus E;T) bound, pi *"] == F(2, 3)
    r = capacity_report(MarkovTriple(2, 5, 29))
    assert r.ok and r.headline["five monotone balls"]


# --- properties -------------------------------------------------------------------


@given(markov_triples(max_len=5), st.fractions(min_value=F(1, 100), max_value=1))
def test_diamond_monotone_in_size(t, frac):
    p = diamond_bounds(seed_diagram(t), "c_ge_2" if t.c >= 2 else "clifford", F(1, 100))
    dia = p.placements[0]
    assert verify(p.diagram, dia.shrunk(dia.d * frac), COMPLEMENT_E)


@given(markov_triples(max_len=5))
def test_constructors_pass_oracles(t):
    d = seed_diagram(t)
    for p in (single_monotone_triangle(d), five_monotone_triangles(d), diamond_bounds(d, "general")):
        assert p.verdict()
        assert_oracle_packing(p)


@given(st.fractions(min_value=F(1, 20), max_value=F(99, 100)))
def test_nine_ball_any_side(s):
    p = nine_ball_skeleton_packing(s)
    assert p.verdict()
    assert_oracle_packing(p)


@pytest.mark.parametrize("t", sorted(enumerate_triples(30), key=lambda t: t.c))
def test_report_sweep(t):
    r = capacity_report(t)
    assert r.ok, [(e.packing.name, e.reasons) for e in r.entries if not e.verified]
    for e in r.entries:
        assert_oracle_packing(e.packing)
