import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atfcert.markov import MarkovTriple
from atfcert.momentmap import (
    MomentMapError,
    guillemin_potential,
    invariance_suite,
    level_target,
    level_value,
    phi_P,
    rescale_to_level,
)
from atfcert.polytope import build
from conftest import markov_triples
from oracles import clifford_image

T111, T112, T125 = MarkovTriple(1, 1, 1), MarkovTriple(1, 1, 2), MarkovTriple(1, 2, 5)


def test_rescale_examples():
    z = rescale_to_level([1, 1, 1], T111)
    assert np.allclose(np.abs(z) ** 2, 2 / 3, rtol=0, atol=1e-14)
    a, b, c = T125
    z = rescale_to_level([1, 0, 0], T125)
    assert abs(abs(z[0]) ** 2 - 2 * b * b * c * c) < 1e-9
    z = rescale_to_level([0, 0, 1], T125)
    assert abs(abs(z[2]) ** 2 - 2 * a * a * b * b) < 1e-12


def test_rescale_rejects_zero():
    with pytest.raises(MomentMapError):
        rescale_to_level([0, 0, 0], T111)


def test_clifford_barycenter():
    img = phi_P(rescale_to_level([1, 1, 1], T111), T111)
    assert abs(img.x - 1 / 3) < 1e-12 and abs(img.y - 1 / 3) < 1e-12


def test_vertices():
    d = build(T125)
    a, b, c = T125
    img = phi_P(rescale_to_level([1, 0, 0], T125), T125)
    assert (img.x, img.y) == pytest.approx((0, 0), abs=1e-9)
    img = phi_P(rescale_to_level([0, 0, 1], T125), T125)
    assert (img.x, img.y) == pytest.approx((a * a * b * b, b * b * (a * d.l1 - 1)), abs=1e-9)
    assert img.charts == ("c2",)


def test_off_level_rejected():
    with pytest.raises(MomentMapError):
        phi_P(np.array([1, 1, 1], dtype=complex), T112)


def test_edge_claim_125():
    d = build(T125)
    rng = np.random.default_rng(1)
    for _ in range(200):
        z = rescale_to_level([0, *(rng.normal(size=2) + 1j * rng.normal(size=2))], T125)
        img = phi_P(z, T125, d)
        L1 = float(d.normals[0][0]) * img.x + float(d.normals[0][1]) * img.y - float(d.offsets[0])
        assert abs(L1) < 1e-9


def test_orbit_is_constant_112():
    z0 = rescale_to_level([0.3 + 0.1j, -1.2j, 0.7], T112)
    w = np.array([1, 1, 4])
    base = phi_P(z0, T112)
    for theta in np.linspace(0, 2 * np.pi, 50):
        img = phi_P(z0 * np.exp(1j * w * theta), T112)
        assert abs(img.x - base.x) < 1e-9 and abs(img.y - base.y) < 1e-9


@pytest.mark.parametrize("t", [T111, T112, T125, MarkovTriple(1, 5, 13)])
def test_suite_passes(t):
    rep = invariance_suite(t, 300, seed=7)
    assert rep.ok, rep.failures
    assert max(rep.max_errors.values()) < 1e-9


def test_suite_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        invariance_suite(T111, 0)


def test_guillemin_potential_at_barycenter():
    assert guillemin_potential(T111, 1 / 3, 1 / 3) == pytest.approx(np.log(3), abs=1e-12)


@given(st.lists(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
def test_clifford_matches_closed_form(z):
    z = np.array(z)
    if np.max(np.abs(z)) < 1e-3:
        return
    img = phi_P(rescale_to_level(z, T111), T111)
    x, y = clifford_image(z)
    assert abs(img.x - x) < 1e-9 and abs(img.y - y) < 1e-9


@given(markov_triples(max_len=4), st.integers(0, 2**32 - 1))
def test_level_and_scaling_invariance(t, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    on = rescale_to_level(z, t)
    assert abs(level_value(t, on) / level_target(t) - 1) < 1e-12
    w = np.array([t.a**2, t.b**2, t.c**2], dtype=float)
    s = rng.uniform(-1, 1) / w.max()
    again = rescale_to_level(z * np.exp(w * s), t)
    p, q = phi_P(on, t), phi_P(again, t)
    assert abs(p.x - q.x) < 1e-9 and abs(p.y - q.y) < 1e-9
