"""Fox free differential calculus, truncated Magnus expansion, LCS weight."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from .words import GeneratorSet, TrivialWordError, Word, exponent_sums, syllables


class GroupRingElement:
    """A finite integer combination of reduced words in the integral group ring."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Word, int] | Iterable = ()):
        self.gens = gens
        acc: dict[Word, int] = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            if w.gens != gens:
                raise ValueError("word over a different generating set")
            acc[w] += c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def of(cls, w: Word, coeff: int = 1) -> GroupRingElement:
        return cls(w.gens, {w: coeff})

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.gens == other.gens and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(self.gens, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.gens, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def __mul__(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return GroupRingElement(self.gens, {w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            other = GroupRingElement.of(other)
        out = []
        for u, c in self.terms.items():
            for v, d in other.terms.items():
                out.append((u * v, c * d))
        return GroupRingElement(self.gens, out)

    def __rmul__(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return GroupRingElement.of(other) * self
        return NotImplemented

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = sorted(self.terms.items(), key=lambda wc: wc[0].sort_key())
        return " + ".join(f"{c}*({w})" for w, c in parts)


def augmentation(x: GroupRingElement) -> int:
    return sum(x.terms.values())


def _derive_word(s: int, w: Word) -> list[tuple[Word, int]]:
    # D_s(l_1...l_n) = sum_i (l_1...l_{i-1}) D_s(l_i), with D_s(s) = 1, D_s(s^-1) = -s^-1
    out = []
    letters = w.letters
    for i, x in enumerate(letters):
        if x == s + 1:
            out.append((Word(w.gens, letters[:i]), 1))
        elif x == -(s + 1):
            out.append((Word(w.gens, letters[:i + 1]), -1))
    return out


def fox_derivative(s: int, x: GroupRingElement | Word) -> GroupRingElement:
    """The free derivative D_s (generator index ``s``) applied to ``x``."""
    if isinstance(x, Word):
        x = GroupRingElement.of(x)
    out = []
    for w, c in x.terms.items():
        out.extend((v, c * d) for v, d in _derive_word(s, w))
    return GroupRingElement(x.gens, out)


def iterated_derivative(seq: Sequence[int], w: Word | GroupRingElement) -> GroupRingElement:
    """D_{s_1} D_{s_2} ... D_{s_n}(w); the last derivative is applied first."""
    if not seq:
        raise ValueError("derivative sequence must be nonempty")
    x = w if isinstance(w, GroupRingElement) else GroupRingElement.of(w)
    for s in reversed(seq):
        x = fox_derivative(s, x)
    return x


def iterated_derivative_augmentation(seq: Sequence[int], w: Word) -> int:
    return augmentation(iterated_derivative(seq, w))


def syllable_augmentation(w: Word) -> int:
    """Product of the syllable exponents of ``w``."""
    prod = 1
    for _, m in syllables(w):
        prod *= m
    return prod


def syllable_sequence(w: Word) -> list[int]:
    return [g for g, _ in syllables(w)]


# -- truncated noncommutative series ----------------------------------------

class TruncatedSeries:
    """Integer noncommutative polynomial in X_0..X_{r-1}, truncated above ``cap``.

    Monomials are tuples of generator indices; ``()`` is the constant term.
    """

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap: int, coeffs: Mapping[tuple[int, ...], int] = ()):
        if cap < 0:
            raise ValueError("degree cap must be >= 0")
        self.cap = cap
        self.coeffs = {m: c for m, c in dict(coeffs).items() if c and len(m) <= cap}

    @classmethod
    def one(cls, cap: int) -> TruncatedSeries:
        return cls(cap, {(): 1})

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        cap = min(self.cap, other.cap)
        acc: dict[tuple[int, ...], int] = defaultdict(int)
        right = sorted(other.coeffs.items(), key=lambda mc: len(mc[0]))
        for m, c in self.coeffs.items():
            room = cap - len(m)
            if room < 0:
                continue
            for n, d in right:
                if len(n) > room:
                    break
                acc[m + n] += c * d
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.cap = cap
        out.coeffs = {m: c for m, c in acc.items() if c}
        return out

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.cap == other.cap and self.coeffs == other.coeffs

    def __getitem__(self, monomial: tuple[int, ...]) -> int:
        return self.coeffs.get(tuple(monomial), 0)

    def degree_part(self, d: int) -> dict[tuple[int, ...], int]:
        return {m: c for m, c in self.coeffs.items() if len(m) == d}

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in (degree, lex index sequence) order."""
        return sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def lowest_nonconstant_degree(self) -> int | None:
        degs = [len(m) for m in self.coeffs if m]
        return min(degs) if degs else None

    def format(self, gens: GeneratorSet | None = None) -> str:
        parts = []
        for m, c in self.items():
            mono = "".join(f"X_{gens.names[i] if gens else i}" for i in m) or "1"
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def __repr__(self):
        return f"TruncatedSeries(cap={self.cap}, {self.format()})"


def _letter_series(x: int, cap: int) -> TruncatedSeries:
    g = abs(x) - 1
    if x > 0:
        return TruncatedSeries(cap, {(): 1, (g,): 1})
    # s^-1 -> 1 - X + X^2 - ...
    return TruncatedSeries(cap, {(g,) * j: (-1) ** j for j in range(cap + 1)})


def magnus_expand(w: Word, cap: int) -> TruncatedSeries:
    """Image of ``w`` under s -> 1 + X_s, truncated at total degree ``cap``."""
    if cap < 0:
        raise ValueError("degree cap must be >= 0")
    out = TruncatedSeries.one(cap)
    cache: dict[int, TruncatedSeries] = {}
    for x in w.letters:
        if x not in cache:
            cache[x] = _letter_series(x, cap)
        out = out * cache[x]
    return out


def lcs_weight(w: Word) -> int:
    """Largest k with w in the k-th lower central series term of the free group.

    The identity has no finite weight and raises TrivialWordError.
    """
    if w.is_identity():
        raise TrivialWordError("identity lies in every term of the lower central series")
    if any(exponent_sums(w)):
        return 1
    # weight never exceeds the word length, so a cap of len(w) is exact
    for d in range(2, len(w) + 1):
        if magnus_expand(w, d).degree_part(d):
            return d
    raise AssertionError(f"no nonzero Magnus term up to degree {len(w)} for {w}")


def in_commutator_subgroup(w: Word) -> bool:
    return not any(exponent_sums(w))
