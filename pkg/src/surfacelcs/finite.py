"""Finite groups as multiplication tables, homomorphisms from free groups,
degree-8 detection, nilpotency class and normal cores."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .words import GeneratorSet, Word, exponent_sums

Subgroup = frozenset


class InvalidGroupError(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


class CoreBoundViolation(AssertionError):
    pass


class FiniteGroup:
    """A group given by its full multiplication table (validated on construction)."""

    def __init__(self, table, names: Sequence[str] | None = None, name: str = "G"):
        t = np.asarray(table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n < 1:
            raise InvalidGroupError("table must be square and nonempty")
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroupError("table entries out of range")
        self.table = t
        self.order = n
        self.name = name
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        if len(self.names) != n:
            raise InvalidGroupError("one name per element required")
        self._validate()

    def _validate(self):
        t, n = self.table, self.order
        ident = [e for e in range(n) if (t[e] == np.arange(n)).all() and (t[:, e] == np.arange(n)).all()]
        if len(ident) != 1:
            raise InvalidGroupError(f"{self.name}: no two-sided identity")
        self.identity = ident[0]
        for row in t:
            if len(set(row.tolist())) != n:
                raise InvalidGroupError(f"{self.name}: a row is not a permutation")
        inv = np.full(n, -1)
        for a in range(n):
            (b,) = np.nonzero(t[a] == self.identity)[0]
            if t[b, a] != self.identity:
                raise InvalidGroupError(f"{self.name}: element {a} has no two-sided inverse")
            inv[a] = b
        self.inverses = inv
        # (ab)c == a(bc) for all triples at once
        left = t[t][:, :, :]          # left[a, b, c] = (ab)c
        right = t[np.arange(n)[:, None, None], t[None, :, :]]  # right[a, b, c] = a(bc)
        if not np.array_equal(left, right):
            raise InvalidGroupError(f"{self.name}: not associative")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for e in elems:
            out = int(self.table[out, e])
        return out

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a^-1 b^-1."""
        return self.prod([a, b, self.inv(a), self.inv(b)])

    def element(self, name: str) -> int:
        return self.names.index(name)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    # -- subgroups -----------------------------------------------------------

    @cached_property
    def whole(self) -> Subgroup:
        return frozenset(range(self.order))

    @cached_property
    def trivial(self) -> Subgroup:
        return frozenset([self.identity])

    def closure(self, gens: Iterable[int]) -> Subgroup:
        elems = {self.identity}
        frontier = list(set(gens))
        gens = list(frontier)
        elems.update(frontier)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    def is_subgroup(self, S: Iterable[int]) -> bool:
        S = set(S)
        if self.identity not in S:
            return False
        return all(int(self.table[a, self.inverses[b]]) in S for a in S for b in S)

    @cached_property
    def _conj(self) -> np.ndarray:
        # _conj[a, s] = a^-1 s a
        t = self.table
        return t[t[self.inverses][:, :], np.arange(self.order)[:, None]]

    def conjugate(self, S: Subgroup, a: int) -> Subgroup:
        """a^-1 S a."""
        return frozenset(self._conj[a, sorted(S)].tolist())

    def is_normal(self, S: Subgroup, within: Subgroup | None = None) -> bool:
        within = self.whole if within is None else within
        mask = np.zeros(self.order, dtype=bool)
        mask[list(S)] = True
        return bool(mask[self._conj[np.ix_(sorted(within), sorted(S))]].all())

    def commutator_subgroup(self, H: Subgroup, K: Subgroup) -> Subgroup:
        return self.closure({self.commutator(h, k) for h in H for k in K})

    def index(self, H: Subgroup, K: Subgroup | None = None) -> int:
        K = self.whole if K is None else K
        return len(K) // len(H)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, [str(i) for i in range(n)], f"Z{n}")


def from_mult(elements: Sequence[Hashable], mult: Callable, name: str,
              names: Sequence[str] | None = None) -> FiniteGroup:
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = idx[mult(x, y)]
    names = names or ["".join(str(e).split()) for e in elements]
    return FiniteGroup(table, names, name)


def metacyclic(N: int, M: int, a: int, t: int, name: str, names=None) -> FiniteGroup:
    """<x, y | x^N, y^M = x^t, y x y^-1 = x^a>, elements x^k y^f ordered by (f, k)."""
    elements = [(k, f) for f in range(M) for k in range(N)]

    def mult(p, q):
        k1, f1 = p
        k2, f2 = q
        k = k1 + k2 * pow(a, f1, N)
        f = f1 + f2
        if f >= M:
            f -= M
            k += t
        return (k % N, f)

    names = names or [f"x{k}y{f}" for k, f in elements]
    return from_mult(elements, mult, name, names)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: r^n = s^2 = 1, s r s = r^-1."""
    names = []
    for f in range(2):
        for k in range(n):
            r = "" if k == 0 else ("r" if k == 1 else f"r{k}")
            s = "s" if f else ""
            names.append((r + s) or "1")
    return metacyclic(n, 2, -1 % n, 0, f"D{2 * n}", names)


def dihedral8() -> FiniteGroup:
    """Elements 1, r, r2, r3, s, rs, r2s, r3s (index order); s r s = r^-1."""
    return dihedral(4)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    elements = [(g, h) for g in range(G.order) for h in range(H.order)]
    return from_mult(elements, lambda p, q: (G.mul(p[0], q[0]), H.mul(p[1], q[1])),
                     name or f"{G.name}x{H.name}",
                     [f"({G.names[g]},{H.names[h]})" for g, h in elements])


def wreath_cyclic(n: int, m: int, name: str | None = None) -> FiniteGroup:
    """Z_n wr Z_m: (Z_n)^m with Z_m shifting coordinates."""
    elements = [(v, s) for s in range(m) for v in itertools.product(range(n), repeat=m)]

    def mult(p, q):
        v, s = p
        w, t = q
        shifted = tuple(w[(i - s) % m] for i in range(m))
        return (tuple((x + y) % n for x, y in zip(v, shifted)), (s + t) % m)

    return from_mult(elements, mult, name or f"Z{n}wrZ{m}",
                     ["".join(map(str, v)) + f"|{s}" for v, s in elements])


def elementary_abelian(p: int, d: int) -> FiniteGroup:
    elements = list(itertools.product(range(p), repeat=d))
    return from_mult(elements, lambda x, y: tuple((a + b) % p for a, b in zip(x, y)),
                     f"Z{p}^{d}", ["".join(map(str, e)) for e in elements])


# -- group catalog -------------------------------------------------------------

def _catalog_builders() -> list[Callable[[], FiniteGroup]]:
    Q8 = lambda: metacyclic(4, 2, 3, 2, "Q8")
    return [
        lambda: cyclic(2),
        lambda: cyclic(4),
        lambda: elementary_abelian(2, 2),
        # the five groups of order 8
        lambda: cyclic(8),
        lambda: direct_product(cyclic(4), cyclic(2), "Z4xZ2"),
        lambda: elementary_abelian(2, 3),
        dihedral8,
        Q8,
        # order 16
        lambda: cyclic(16),
        lambda: elementary_abelian(2, 4),
        lambda: direct_product(cyclic(4), cyclic(4), "Z4xZ4"),
        lambda: dihedral(8),
        lambda: metacyclic(8, 2, 7, 4, "Q16"),
        lambda: metacyclic(8, 2, 3, 0, "SD16"),
        lambda: metacyclic(8, 2, 5, 0, "M16"),
        lambda: metacyclic(4, 4, 3, 0, "Z4:Z4"),
        lambda: direct_product(dihedral8(), cyclic(2), "D8xZ2"),
        lambda: direct_product(Q8(), cyclic(2), "Q8xZ2"),
        # order 32
        lambda: elementary_abelian(2, 5),
        lambda: dihedral(16),
        lambda: metacyclic(16, 2, 15, 8, "Q32"),
        lambda: wreath_cyclic(4, 2, "Z4wrZ2"),
        lambda: direct_product(dihedral8(), cyclic(4), "D8xZ4"),
        # order 64
        lambda: elementary_abelian(2, 6),
        lambda: dihedral(32),
        lambda: wreath_cyclic(2, 4, "Z2wrZ4"),
        lambda: direct_product(dihedral8(), dihedral8(), "D8xD8"),
        lambda: metacyclic(8, 8, 7, 0, "Z8:Z8"),
    ]


def build_catalog() -> list[FiniteGroup]:
    return [b() for b in _catalog_builders()]


CATALOG_PATH = Path(__file__).with_name("data") / "catalog.txt"


def dump_catalog(groups: Iterable[FiniteGroup]) -> str:
    lines = []
    for G in groups:
        lines.append(f"group {G.name}")
        lines.append(f"order {G.order}")
        lines.append("elements " + " ".join(G.names))
        lines.append("table")
        lines.extend(" ".join(str(int(x)) for x in row) for row in G.table)
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_catalog(text: str) -> list[FiniteGroup]:
    groups = []
    lines = iter(l.strip() for l in text.splitlines())
    for line in lines:
        if not line or line.startswith("#"):
            continue
        key, _, name = line.partition(" ")
        if key != "group":
            raise InvalidGroupError(f"expected 'group', got {line!r}")
        order = int(next(lines).split()[1])
        names = next(lines).split()[1:]
        if next(lines) != "table":
            raise InvalidGroupError("expected 'table'")
        rows = [[int(x) for x in next(lines).split()] for _ in range(order)]
        if next(lines) != "end":
            raise InvalidGroupError("expected 'end'")
        groups.append(FiniteGroup(rows, names, name))
    return groups


def load_catalog(path: Path | str | None = None) -> list[FiniteGroup]:
    return parse_catalog(Path(path or CATALOG_PATH).read_text())


# -- homomorphisms from free groups -------------------------------------------

@dataclass(frozen=True)
class FiniteHom:
    source: GeneratorSet
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.rank:
            raise ValueError("one image per generator required")
        if any(not 0 <= i < self.target.order for i in self.images):
            raise ValueError("image index out of range")

    def is_surjective(self) -> bool:
        return len(self.target.closure(self.images)) == self.target.order

    def describe(self) -> str:
        return ", ".join(f"{g}->{self.target.names[i]}" for g, i in zip(self.source.names, self.images))


def evaluate(h: FiniteHom, w: Word) -> int:
    if w.gens != h.source:
        raise ValueError("word and homomorphism have different generating sets")
    G = h.target
    out = G.identity
    for x in w.letters:
        img = h.images[abs(x) - 1]
        out = G.mul(out, img if x > 0 else G.inv(img))
    return out


def all_homs(source: GeneratorSet, target: FiniteGroup) -> Iterable[FiniteHom]:
    for images in itertools.product(range(target.order), repeat=source.rank):
        yield FiniteHom(source, target, images)


def commutator_detector(gens: GeneratorSet) -> FiniteHom:
    """First pair a -> s, b -> rs into D8, every other generator -> 1; sends [a, b] to r^2."""
    D = dihedral8()
    images = [D.identity] * gens.rank
    images[0], images[1] = D.element("s"), D.element("rs")
    return FiniteHom(gens, D, tuple(images))


_DETECTION_TARGETS = (lambda: cyclic(8), dihedral8)


def detect(w: Word, rank: int | None = None) -> FiniteHom | None:
    """First homomorphism (to Z8, then to D8; image tuples in lex order)
    that does not kill ``w``, or None."""
    if rank is not None and rank != w.gens.rank:
        raise ValueError("rank does not match the word's generating set")
    for build in _DETECTION_TARGETS:
        G = build()
        for h in all_homs(w.gens, G):
            if evaluate(h, w) != G.identity:
                return h
        if G.order == 8 and G.name == "Z8" and any(e % 8 for e in exponent_sums(w)):
            raise AssertionError("Z8 stage missed a word with an exponent sum nonzero mod 8")
    return None


# -- lower central series and nilpotency --------------------------------------

def lower_central_series(G: FiniteGroup, H: Subgroup | None = None) -> list[Subgroup]:
    """[gamma_1, gamma_2, ...] of H (default G) until it stabilises."""
    cur = G.whole if H is None else H
    series = [cur]
    while True:
        nxt = G.commutator_subgroup(cur, series[0])
        if nxt == cur:
            return series
        series.append(nxt)
        cur = nxt


def nilpotency_class(G: FiniteGroup, H: Subgroup | None = None) -> int:
    series = lower_central_series(G, H)
    if series[-1] != G.trivial:
        raise NotNilpotentError(f"{G.name}: lower central series stops at order {len(series[-1])}")
    return len(series) - 1


def quotient(G: FiniteGroup, N: Subgroup, within: Subgroup | None = None) -> FiniteGroup:
    """within / N for N normal in ``within`` (default G)."""
    A = sorted(G.whole if within is None else within)
    cosets, label = [], {}
    for a in A:
        if a in label:
            continue
        c = frozenset(G.mul(a, x) for x in N)
        for y in c:
            label[y] = len(cosets)
        cosets.append(min(c))
    table = [[label[G.mul(x, y)] for y in cosets] for x in cosets]
    return FiniteGroup(table, [G.names[c] + "N" for c in cosets], f"{G.name}/N")


# -- cores ---------------------------------------------------------------------

def normal_core(G: FiniteGroup, C: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Intersection of a^-1 C a over a in ``within`` (default all of G)."""
    C = frozenset(C)
    if not G.is_subgroup(C):
        raise InvalidGroupError("C is not closed under the group law")
    out = C
    for a in (G.whole if within is None else within):
        out = out & G.conjugate(C, a)
    return out


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    cyclics = {G.closure([g]) for g in range(G.order)}
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        new = set()
        for H in frontier:
            for Z in cyclics:
                if not Z <= H:
                    J = G.closure(H | Z)
                    if J not in found:
                        new.add(J)
        found |= new
        frontier = new
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def _log_p(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def index_two_subgroups(G: FiniteGroup, H: Subgroup) -> list[Subgroup]:
    """Maximal subgroups of the 2-group H: preimages of hyperplanes of H/Phi(H)."""
    memo = G.__dict__.setdefault("_index_two", {})
    if H not in memo:
        memo[H] = _index_two_subgroups(G, H)
    return memo[H]


def _index_two_subgroups(G: FiniteGroup, H: Subgroup) -> list[Subgroup]:
    phi = G.closure({G.mul(h, h) for h in H})
    basis, span = [], phi
    for h in sorted(H):
        if h not in span:
            basis.append(h)
            span = G.closure(span | {h})
    d = len(basis)
    # label each coset of phi by its coordinates over the basis
    coords = {}
    for bits in itertools.product((0, 1), repeat=d):
        rep = G.prod(b for b, e in zip(basis, bits) if e)
        for x in phi:
            coords[G.mul(rep, x)] = bits
    out = []
    for f in itertools.product((0, 1), repeat=d):
        if not any(f):
            continue
        out.append(frozenset(h for h in H if sum(a * b for a, b in zip(f, coords[h])) % 2 == 0))
    return sorted(out, key=sorted)


@dataclass(frozen=True)
class CoreCase:
    group: str
    kind: str              # "pair" (A > B > C) or "chain" (G_0 > ... > G_n)
    subgroups: tuple       # the nested subgroups, outermost first
    p: int = 2


def _random_chain(G: FiniteGroup, rng: random.Random, steps: int, m: int) -> list[Subgroup] | None:
    chain = [G.whole]
    for _ in range(steps):
        H = chain[-1]
        cands = [H]
        for _ in range(m):
            cands = sorted({K for J in cands for K in index_two_subgroups(G, J)}, key=sorted)
        cands = [K for K in cands if len(K) * 2 ** m == len(H) and (m == 1 or G.is_normal(K, H))]
        if not cands:
            return None
        chain.append(rng.choice(cands))
    return chain


def core_case_catalog(groups: Sequence[FiniteGroup] | None = None, seed: int = 20240801,
                      per_shape: int = 3) -> list[CoreCase]:
    """Deterministic catalog of subnormal chains inside the 2-groups."""
    groups = list(groups if groups is not None else load_catalog())
    rng = random.Random(seed)
    cases = []
    for G in groups:
        n = _log_p(G.order, 2)
        # A = B = C and A > B = C degenerate cases
        cases.append(CoreCase(G.name, "pair", (G.whole, G.whole, G.whole)))
        for r in (1, 2):
            for s in (1, 2, 3):
                if r + s > n:
                    continue
                for _ in range(per_shape):
                    ch = _random_chain(G, rng, r + s, 1)
                    if ch is None:
                        continue
                    A, B, C = ch[0], ch[r], ch[r + s]
                    if G.is_normal(B, A) and G.is_normal(C, B):
                        cases.append(CoreCase(G.name, "pair", (A, B, C)))
        for m in (1, 2):
            for steps in range(1, n // m + 1):
                for _ in range(per_shape):
                    ch = _random_chain(G, rng, steps, m)
                    if ch is not None:
                        cases.append(CoreCase(G.name, "chain", tuple(ch)))
    return cases


def pair_core_bound(p: int, r: int, s: int) -> int:
    return p ** r * s + r


def chain_core_bound(p: int, m: int, n: int) -> int:
    return m * (p ** (m * n) - 1) // (p ** m - 1)


def verify_core_bounds(cases: Sequence[CoreCase], groups: Sequence[FiniteGroup] | None = None) -> list[dict]:
    by_name = {G.name: G for G in (groups if groups is not None else load_catalog())}
    report = []
    for i, case in enumerate(cases):
        G = by_name[case.group]
        p = case.p
        top, bottom = case.subgroups[0], case.subgroups[-1]
        for outer, inner in zip(case.subgroups, case.subgroups[1:]):
            if not (inner <= outer and G.is_normal(inner, outer)):
                raise InvalidGroupError(f"case {i}: chain is not subnormal")
        D = normal_core(G, bottom, within=top)
        if not (D <= bottom and G.is_normal(D, top)):
            raise CoreBoundViolation(f"case {i}: core is not a normal subgroup of the top inside the bottom")
        N = _log_p(len(top) // len(D), p)
        if case.kind == "pair":
            A, B, C = case.subgroups
            r, s = _log_p(len(A) // len(B), p), _log_p(len(B) // len(C), p)
            bound = pair_core_bound(p, r, s)
            params = {"r": r, "s": s}
            lower_ok = N >= 1 or r + s == 0
        else:
            steps = len(case.subgroups) - 1
            idx = {len(a) // len(b) for a, b in zip(case.subgroups, case.subgroups[1:])}
            if len(idx) != 1:
                raise InvalidGroupError(f"case {i}: chain indices are not constant")
            m = _log_p(idx.pop(), p)
            bound = chain_core_bound(p, m, steps)
            params = {"m": m, "n": steps}
            lower_ok = N >= 1
        row = {"case": i, "group": case.group, "kind": case.kind, "p": p, **params,
               "core_index": len(top) // len(D), "N": N, "bound": bound,
               "holds": lower_ok and N <= bound}
        if not row["holds"]:
            raise CoreBoundViolation(f"case {i} ({case.group}, {case.kind} {params}): N={N}, bound={bound}")
        report.append(row)
    return report


def tower_core(G: FiniteGroup, chain: Sequence[Subgroup]) -> dict:
    """Core of the bottom of a subnormal 2-power chain, and the resulting
    containment gamma_{N+1}(G) <= core where [G : core] = 2^N."""
    core = normal_core(G, chain[-1])
    N = _log_p(G.order // len(core), 2)
    Q = quotient(G, core)
    c = nilpotency_class(Q)
    series = lower_central_series(G)
    gamma = series[N] if N < len(series) else series[-1]
    if not gamma <= core:
        raise CoreBoundViolation("lower central series term escapes the core")
    return {"core_order": len(core), "N": N, "quotient_class": c, "gamma_contained": True}
