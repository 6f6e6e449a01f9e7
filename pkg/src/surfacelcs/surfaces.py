"""Surfaces with boundary and minimal self-intersection of free homotopy classes.

Sigma_{g,b} (b >= 1) deformation retracts onto a rose with one petal per
free generator.  The surface is recovered from the cyclic order of the 2r
petal ends at the vertex.  In that order a letter ``t`` names the end a curve
leaves along when it reads ``t``; reading ``t`` it arrives back through the end
``t^-1``.  Each boundary component reads the word t_1 t_2 ... with
``t_{k+1} = succ(t_k^-1)`` where ``succ`` is the next end counterclockwise,
so the cyclic order is determined by the boundary words

    d_j = x_j                                   (j < b)
    d_b = (x_1 ... x_{b-1})^-1 [a_1, b_1] ... [a_g, b_g]

and :func:`cyclic_order` is the single table every crossing decision reads.

The universal cover of the rose is a planar tree whose ends sit on the
circle at infinity in the same cyclic order as in the hyperbolic plane, so
two lifts of a closed geodesic cross exactly when their ends interleave.  Two
lifts that meet share one segment (possibly a single vertex); whether they
cross is decided by which side the second lift leaves the first at each end
of that segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .words import (CyclicWord, GeneratorSet, TrivialWordError, Word, cyclic_reduce,
                    invert, primitive_root)


class ClosedSurfaceError(ValueError):
    """Closed surfaces have non-free fundamental group and are not handled."""


@dataclass(frozen=True)
class SurfaceWithBoundary:
    genus: int
    boundary: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if self.boundary < 1:
            raise ClosedSurfaceError("only surfaces with at least one boundary component are supported")

    @property
    def rank(self) -> int:
        return 2 * self.genus + self.boundary - 1

    @property
    def nonabelian(self) -> bool:
        return self.rank >= 2

    @property
    def lcs_constant(self) -> int:
        """4g + b - 1, the denominator in the boundary-case lower bound."""
        return 4 * self.genus + self.boundary - 1

    def label(self) -> str:
        return f"{self.genus},{self.boundary}"

    @classmethod
    def parse(cls, text: str) -> SurfaceWithBoundary:
        g, b = (int(x) for x in text.split(","))
        return cls(g, b)


@dataclass(frozen=True)
class SurfaceGenerators:
    surface: SurfaceWithBoundary
    gens: GeneratorSet
    boundary_words: tuple[Word, ...]


@lru_cache(maxsize=None)
def standard_generators(s: SurfaceWithBoundary) -> SurfaceGenerators:
    names = []
    for i in range(1, s.genus + 1):
        names += [f"a{i}", f"b{i}"]
    names += [f"x{j}" for j in range(1, s.boundary)]
    if not names:
        # the disc: pi_1 is trivial, keep a placeholder so the type is usable
        raise ValueError("the disc has trivial fundamental group")
    gens = GeneratorSet(len(names), tuple(names))
    xs = [gens.letter(f"x{j}") for j in range(1, s.boundary)]
    last: list[int] = [-x for x in reversed(xs)]
    for i in range(1, s.genus + 1):
        a, b = gens.letter(f"a{i}"), gens.letter(f"b{i}")
        last += [a, b, -a, -b]
    bwords = tuple(Word(gens, (x,)) for x in xs) + (Word(gens, tuple(last)),)
    return SurfaceGenerators(s, gens, bwords)


@lru_cache(maxsize=None)
def cyclic_order(s: SurfaceWithBoundary) -> tuple[int, ...]:
    """Counterclockwise order of petal ends at the vertex, starting at letter 1."""
    sg = standard_generators(s)
    succ: dict[int, int] = {}
    for bw in sg.boundary_words:
        t = bw.letters
        for k in range(len(t)):
            succ[-t[k]] = t[(k + 1) % len(t)]
    order = [1]
    while len(order) < 2 * s.rank:
        order.append(succ[order[-1]])
    if succ[order[-1]] != 1 or len(set(order)) != 2 * s.rank:
        raise AssertionError(f"boundary words of {s} do not give a one-vertex ribbon graph")
    return tuple(order)


@dataclass(frozen=True)
class SurfaceCurve:
    surface: SurfaceWithBoundary
    cls: CyclicWord

    @classmethod
    def from_word(cls, s: SurfaceWithBoundary, w: Word) -> SurfaceCurve:
        return cls(s, cyclic_reduce(w)[0])

    @classmethod
    def parse(cls, s: SurfaceWithBoundary, text: str) -> SurfaceCurve:
        return cls.from_word(s, standard_generators(s).gens.parse(text))


@dataclass(frozen=True)
class IntersectionResult:
    value: int
    method: str = "combinatorial"
    certificate: tuple = field(default=(), compare=False)


def is_boundary_parallel(c: SurfaceCurve) -> bool:
    if c.cls.is_identity():
        raise TrivialWordError("trivial class")
    root, _ = primitive_root(c.cls.letters)
    sg = standard_generators(c.surface)
    target = CyclicWord(sg.gens, root)
    for bw in sg.boundary_words:
        cw = cyclic_reduce(bw)[0]
        if target == cw or target == cw.inverse():
            return True
    return False


def word_length_bound(c: SurfaceCurve | Word | int) -> int:
    """binomial(length, 2): an upper bound for the self-intersection number."""
    n = c if isinstance(c, int) else len(c.cls) if isinstance(c, SurfaceCurve) else len(c)
    return comb(n, 2)


def _ccw_between(pos: dict[int, int], n: int, x: int, start: int, end: int) -> bool:
    """Whether ``x`` lies strictly inside the counterclockwise arc start -> end."""
    dx = (pos[x] - pos[start]) % n
    de = (pos[end] - pos[start]) % n
    return 0 < dx < de


def linked_pairs(u: tuple[int, ...], order: tuple[int, ...]) -> list[tuple[int, int, int]]:
    """Crossing configurations for a primitive cyclically reduced word.

    Returns (family, a, c): L0 at vertex a meets the lift read by ``u``
    (family 0) or by ``u^-1`` (family 1) at position c, at the start of their
    maximal common segment, and the two lifts cross.  Every double point of
    the closed geodesic appears exactly twice.
    """
    n = len(u)
    N = len(order)
    pos = {t: i for i, t in enumerate(order)}
    inv = tuple(-x for x in reversed(u))
    out = []
    for family, v in ((0, u), (1, inv)):
        for a in range(n):
            for c in range(n):
                if family == 0 and a == c:
                    continue
                if u[a - 1] == v[c - 1]:
                    continue  # common segment extends backwards
                m = 0
                while u[(a + m) % n] == v[(c + m) % n]:
                    m += 1
                    if m > 2 * n:
                        raise AssertionError(f"periodic words agree too long; {u} not primitive?")
                x0, x1 = -u[a - 1], -v[c - 1]
                y0, y1 = u[(a + m) % n], v[(c + m) % n]
                if m == 0:
                    # a single shared vertex: both orientations of the other lift
                    # see it, so only count the one read by u itself
                    if family == 1 or len({x0, x1, y0, y1}) < 4:
                        continue
                    s, t = y0, x0
                else:
                    s, t = u[a % n], -u[(a + m - 1) % n]
                left_start = _ccw_between(pos, N, x1, s, x0)
                left_end = _ccw_between(pos, N, y1, y0, t)
                if left_start != left_end:
                    out.append((family, a, c))
    return out


def primitive_self_intersection(u: tuple[int, ...], order: tuple[int, ...]) -> int:
    pairs = linked_pairs(u, order)
    if len(pairs) % 2:
        raise AssertionError(f"odd linked-pair count {len(pairs)} for {u}")
    return len(pairs) // 2


def power_self_intersection(i_root: int, m: int) -> int:
    """Self-intersection of the m-th power of a primitive class with i_root."""
    return m * m * i_root + m - 1


def self_intersection(c: SurfaceCurve, certificate: bool = False) -> IntersectionResult:
    if c.cls.is_identity():
        raise TrivialWordError("trivial class has no self-intersection number")
    s = c.surface
    if s.boundary < 1:
        raise ClosedSurfaceError("closed surfaces are not supported")
    order = cyclic_order(s)
    root, m = primitive_root(c.cls.letters)
    if m == 1 and is_boundary_parallel(c):
        return IntersectionResult(0, "combinatorial", ())
    pairs = linked_pairs(root, order)
    if len(pairs) % 2:
        raise AssertionError(f"odd linked-pair count {len(pairs)} for {c.cls}")
    value = power_self_intersection(len(pairs) // 2, m)
    if value > comb(len(c.cls), 2):
        raise AssertionError(f"i={value} exceeds the word-length envelope for {c.cls}")
    return IntersectionResult(value, "combinatorial", tuple(pairs) if certificate else ())


def curve(s: SurfaceWithBoundary, text: str) -> SurfaceCurve:
    return SurfaceCurve.parse(s, text)


def generator_words(s: SurfaceWithBoundary) -> list[Word]:
    return standard_generators(s).gens.gens()


def inverse_curve(c: SurfaceCurve) -> SurfaceCurve:
    return SurfaceCurve(c.surface, cyclic_reduce(invert(c.cls.word()))[0])
