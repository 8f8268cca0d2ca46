"""Floating-point checks of the explicit moment map of CP(a^2, b^2, c^2).

A point [z1 : z2 : z3] is represented on the level set
a^2|z1|^2 + b^2|z2|^2 + c^2|z3|^2 = 2 a^2 b^2 c^2, reached from any nonzero
vector by the weighted scaling z_i -> t^(w_i) z_i with w = (a^2, b^2, c^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .markov import MarkovTriple
from .polytope import WeightedPolytopeData, build
from .polytope import guillemin_potential as _potential

LEVEL_RTOL = 1e-12
TOL = 1e-9


class MomentMapError(ValueError):
    pass


def weights(t: MarkovTriple) -> np.ndarray:
    a, b, c = t
    return np.array([a * a, b * b, c * c], dtype=float)


def level_value(t: MarkovTriple, z) -> float:
    z = np.asarray(z, dtype=complex)
    return float(np.dot(weights(t), np.abs(z) ** 2))


def level_target(t: MarkovTriple) -> float:
    a, b, c = t
    return 2.0 * (a * b * c) ** 2


def rescale_to_level(z, t: MarkovTriple) -> np.ndarray:
    """Weighted positive rescaling of ``z`` onto the level set.

    With t = exp(s) the level value is sum_i w_i |z_i|^2 exp(2 w_i s),
    strictly increasing in s; its logarithm is solved with brentq.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (3,) or not np.any(np.abs(z) > 0):
        raise MomentMapError("need three homogeneous coordinates, not all zero")
    w = weights(t)
    mask = np.abs(z) > 0
    logc = np.log(w[mask]) + 2 * np.log(np.abs(z[mask]))
    wm = w[mask]
    target = math.log(level_target(t))

    def g(s):
        return np.logaddexp.reduce(logc + 2 * wm * s) - target

    lo, hi = -1.0, 1.0
    while g(lo) > 0:
        lo *= 2
    while g(hi) < 0:
        hi *= 2
    s = brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    out = np.where(mask, z * np.exp(np.where(mask, w * s, 0.0)), 0)
    rel = abs(level_value(t, out) / level_target(t) - 1)
    if rel > LEVEL_RTOL:
        raise MomentMapError(f"level solve missed by relative {rel:.3e}")
    return out


@dataclass(frozen=True)
class MomentImage:
    x: float
    y: float
    charts: tuple  # subset of ("a2", "b2", "c2"): the charts U containing the point


def _charts(z) -> tuple:
    names = ("a2", "b2", "c2")
    return tuple(n for n, zi in zip(names, z) if abs(zi) > 0)


def phi_P(z, t: MarkovTriple, data: WeightedPolytopeData | None = None) -> MomentImage:
    """Closed-form moment map; also compares the two expressions for y."""
    z = np.asarray(z, dtype=complex)
    data = data or build(t)
    a, b, c = t
    rel = abs(level_value(t, z) / level_target(t) - 1)
    if rel > 1e-10:
        raise MomentMapError(f"point is off the level set (relative {rel:.3e})")
    r = np.abs(z) ** 2
    D = a * a * r[0] + b * b * r[1] + c * c * r[2]
    x = r[2] * (a * b * c) ** 2 / D
    y = (r[1] + (a * data.l1 - 1) * r[2]) * (b * c) ** 2 / D
    y_alt = c * c - (r[0] + (b * data.l2 - 1) * r[2]) * (a * c) ** 2 / D
    if abs(y - y_alt) > TOL:
        raise MomentMapError(f"the two expressions for y disagree: {y} vs {y_alt}")
    return MomentImage(float(x), float(y), _charts(z))


def phi_P_batch(Z: np.ndarray, t: MarkovTriple, data: WeightedPolytopeData) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (x, y, y_alt) for rows of on-level points."""
    a, b, c = t
    r = np.abs(Z) ** 2
    D = a * a * r[:, 0] + b * b * r[:, 1] + c * c * r[:, 2]
    x = r[:, 2] * (a * b * c) ** 2 / D
    y = (r[:, 1] + (a * data.l1 - 1) * r[:, 2]) * (b * c) ** 2 / D
    y_alt = c * c - (r[:, 0] + (b * data.l2 - 1) * r[:, 2]) * (a * c) ** 2 / D
    return x, y, y_alt


def facet_values(data: WeightedPolytopeData, x, y):
    """(L1, L2, L3) as float arrays."""
    return [
        float(data.normals[i][0]) * x + float(data.normals[i][1]) * y - float(data.offsets[i]) for i in range(3)
    ]


@dataclass
class SuiteReport:
    triple: MarkovTriple
    samples: int
    max_errors: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, err: float, tol: float, witness=None):
        self.max_errors[name] = max(self.max_errors.get(name, 0.0), float(err))
        if err > tol and len(self.failures) < 20:
            self.failures.append((name, float(err), witness))


def _random_points(rng: np.random.Generator, n: int) -> np.ndarray:
    mag = np.exp(rng.uniform(-3, 3, size=(n, 3)))
    ang = rng.uniform(0, 2 * np.pi, size=(n, 3))
    return mag * np.exp(1j * ang)


def invariance_suite(t: MarkovTriple, n_samples: int = 1000, seed: int = 0) -> SuiteReport:
    """Image containment, chart signs, S^1 and orbifold invariance, and edge claims.

    All comparisons use the absolute tolerance 1e-9.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    data = build(t)
    a, b, c = t
    w = weights(t)
    tol = TOL
    rep = SuiteReport(t, n_samples)

    Z = np.array([rescale_to_level(z, t) for z in _random_points(rng, n_samples)])
    x, y, y_alt = phi_P_batch(Z, t, data)
    rep.record("y expressions", float(np.max(np.abs(y - y_alt))), tol)
    L = facet_values(data, x, y)
    # generic points lie in every chart: all three facet values strictly positive
    for i in range(3):
        worst = int(np.argmin(L[i]))
        rep.record(f"L{i + 1} >= 0", max(0.0, -float(L[i][worst])), tol, Z[worst])
        # on the level, L_i equals |z_i|^2 / 2; positivity in its chart follows
        err = np.abs(L[i] - np.abs(Z[:, i]) ** 2 / 2)
        rep.record(f"L{i + 1} = |z{i + 1}|^2/2", float(np.max(err)), tol)
        if np.any(L[i] <= 0):
            rep.failures.append((f"strict sign of L{i + 1} in its chart", 0.0, Z[int(np.argmin(L[i]))]))

    # S^1 action z_i -> exp(i w_i theta) z_i
    theta = rng.uniform(0, 2 * np.pi, size=(n_samples, 1))
    x2, y2, _ = phi_P_batch(Z * np.exp(1j * w * theta), t, data)
    rep.record("S1 invariance", float(max(np.max(np.abs(x2 - x)), np.max(np.abs(y2 - y)))), tol)

    # orbifold charts: a root of unity of order w_k acting on the other two coordinates
    for k in range(3):
        m = int(w[k])
        j = rng.integers(0, m, size=(n_samples, 1))
        zeta = np.exp(2j * np.pi * j / m)
        factor = np.ones((n_samples, 3), dtype=complex)
        for i in range(3):
            if i != k:
                factor[:, i] = zeta[:, 0] ** int(w[i])
        x3, y3, _ = phi_P_batch(Z * factor, t, data)
        rep.record(f"orbifold U_{k + 1}", float(max(np.max(np.abs(x3 - x)), np.max(np.abs(y3 - y)))), tol)

    # positive weighted scaling before projecting to the level set
    s = rng.uniform(-2, 2, size=min(n_samples, 200)) / w.max()
    worst = 0.0
    for j, si in enumerate(s):
        zz = rescale_to_level(Z[j] * np.exp(w * si), t)
        xx, yy, _ = phi_P_batch(zz[None, :], t, data)
        worst = max(worst, abs(xx[0] - x[j]), abs(yy[0] - y[j]))
    rep.record("weighted scaling", worst, tol)

    # edges: a vanishing coordinate lands on the matching facet, the others stay positive
    for k in range(3):
        P = _random_points(rng, n_samples)
        P[:, k] = 0
        Zk = np.array([rescale_to_level(z, t) for z in P])
        xk, yk, yk_alt = phi_P_batch(Zk, t, data)
        Lk = facet_values(data, xk, yk)
        rep.record(f"edge z{k + 1}=0 on L{k + 1}=0", float(np.max(np.abs(Lk[k]))), tol)
        rep.record("y expressions", float(np.max(np.abs(yk - yk_alt))), tol)
        for i in range(3):
            if i != k and np.any(Lk[i] <= 0):
                rep.failures.append((f"L{i + 1} > 0 on the chart of z{i + 1}", 0.0, None))

    # vertices
    verts = {0: (0.0, 0.0), 2: (float(a * a * b * b), float(b * b * (a * data.l1 - 1))), 1: (0.0, float(c * c))}
    for k, target in verts.items():
        e = np.zeros(3, dtype=complex)
        e[k] = 1
        img = phi_P(rescale_to_level(e, t), t, data)
        rep.record(f"vertex of U_{k + 1}", max(abs(img.x - target[0]), abs(img.y - target[1])), tol)
    return rep


def guillemin_potential(t: MarkovTriple, x: float, y: float) -> float:
    """Scalar Guillemin potential sum lambda_i log L_i + L_inf at (x, y) in the open triangle."""
    return _potential(build(t), x, y)


__all__ = [
    "MomentImage",
    "MomentMapError",
    "SuiteReport",
    "guillemin_potential",
    "invariance_suite",
    "level_target",
    "level_value",
    "phi_P",
    "phi_P_batch",
    "rescale_to_level",
]
