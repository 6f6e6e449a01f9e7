"""Numeric self-intersection oracle from a Schottky uniformization.

The 2r generators act on the Poincare disc.  Letter ``t`` has a half-plane
D_t cut off by a geodesic; the generator for ``t`` maps the outside of
D_{t^-1} onto D_t, and the half-planes sit around the circle in the
counterclockwise order of the ribbon graph.  The complement F of the open
half-planes is a fundamental domain; the quotient's convex core is a compact
hyperbolic surface with geodesic boundary.

The closed geodesic of a primitive cyclically reduced word u of length n
meets F in n arcs, one on the axis of each cyclic rotation of u.  Its
self-intersection number is the number of pairs of those arcs that cross
inside F.  Crossings are computed in the Klein model, where geodesics are
chords.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .surfaces import (IntersectionResult, SurfaceCurve, SurfaceWithBoundary, cyclic_order,
                       power_self_intersection)
from .words import TrivialWordError, primitive_root

mp.mp.dps = 40

# irregular placement so no crossing lands on a side of F
_JITTER = (0.113, -0.071, 0.052, -0.097, 0.088, -0.031, 0.067, -0.119, 0.023, 0.101)
_WIDTH = (0.61, 0.47, 0.55, 0.69, 0.43, 0.58, 0.51, 0.64, 0.49, 0.57)


@dataclass(frozen=True)
class SchottkyGroup:
    order: tuple[int, ...]
    centers: dict
    halfwidths: dict
    matrices: dict


def _rot(phi):
    return mp.matrix([[mp.expjpi(phi / mp.pi / 2), 0], [0, mp.expjpi(-phi / mp.pi / 2)]])


def _translate(L):
    ch, sh = mp.cosh(L / 2), mp.sinh(L / 2)
    return mp.matrix([[ch, sh], [sh, ch]])


def _boundary_distance(delta):
    # geodesic with ends at angles +-delta lies at distance d with cosh d = 1/sin delta
    return mp.acosh(1 / mp.sin(delta))


@lru_cache(maxsize=None)
def schottky_group(surface: SurfaceWithBoundary) -> SchottkyGroup:
    order = cyclic_order(surface)
    N = len(order)
    centers, halfwidths = {}, {}
    for k, t in enumerate(order):
        centers[t] = 2 * mp.pi * (k + _JITTER[k % len(_JITTER)]) / N
        halfwidths[t] = _WIDTH[k % len(_WIDTH)] * mp.pi / N
    mats = {}
    for t in order:
        if t < 0:
            continue
        d_src = _boundary_distance(halfwidths[-t])
        d_dst = _boundary_distance(halfwidths[t])
        m = _rot(centers[t]) * _translate(d_src + d_dst) * _rot(mp.pi - centers[-t])
        mats[t] = m
        mats[-t] = mp.inverse(m)
    return SchottkyGroup(order, centers, halfwidths, mats)


def _word_matrix(G: SchottkyGroup, letters) -> mp.matrix:
    m = mp.eye(2)
    for x in letters:
        m = m * G.matrices[x]
    return m


def axis_endpoints(G: SchottkyGroup, letters) -> tuple:
    """(repelling, attracting) fixed points on the unit circle."""
    m = _word_matrix(G, letters)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    disc = mp.sqrt((a - d) ** 2 + 4 * b * c)
    roots = [((a - d) + disc) / (2 * c), ((a - d) - disc) / (2 * c)]
    # attracting fixed point has |derivative| = 1/|cz + d|^2 < 1
    roots.sort(key=lambda z: abs(c * z + d))
    return roots[0], roots[1]


def _chord_intersection(p1, q1, p2, q2):
    # Klein model: straight chords; solve p1 + s (q1 - p1) = p2 + t (q2 - p2)
    d1, d2, r = q1 - p1, q2 - p2, p2 - p1
    det = d1.real * (-d2.imag) - d1.imag * (-d2.real)
    if abs(det) < mp.mpf(10) ** (-30):
        return None
    s = (r.real * (-d2.imag) - r.imag * (-d2.real)) / det
    t = (d1.real * r.imag - d1.imag * r.real) / det
    if not (0 < s < 1 and 0 < t < 1):
        return None
    return p1 + s * d1


def _in_fundamental_domain(G: SchottkyGroup, k) -> bool:
    for t in G.order:
        direction = mp.expjpi(-G.centers[t] / mp.pi)
        if (k * direction).real >= mp.cos(G.halfwidths[t]):
            return False
    return True


def primitive_crossings(G: SchottkyGroup, u: tuple[int, ...]) -> list[tuple[int, int]]:
    n = len(u)
    ends = [axis_endpoints(G, u[k:] + u[:k]) for k in range(n)]
    out = []
    for k in range(n):
        for l in range(k + 1, n):
            p = _chord_intersection(ends[k][0], ends[k][1], ends[l][0], ends[l][1])
            if p is not None and _in_fundamental_domain(G, p):
                out.append((k, l))
    return out


def geodesic_self_intersection(c: SurfaceCurve) -> IntersectionResult:
    if c.cls.is_identity():
        raise TrivialWordError("trivial class")
    G = schottky_group(c.surface)
    root, m = primitive_root(c.cls.letters)
    pairs = primitive_crossings(G, root)
    return IntersectionResult(power_self_intersection(len(pairs), m), "oracle", tuple(pairs))
