"""Free group words over a ranked generating set.

A letter is a nonzero int: generator ``i`` (0-based) is ``i + 1`` and its
inverse is ``-(i + 1)``.  Letters are ordered by generator index first and
then by sign, with the positive letter first, so ``a < A < b < B < ...``.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class TrivialWordError(ValueError):
    """Raised when an operation needs a nontrivial word."""


class GeneratorMismatchError(ValueError):
    pass


def letter_key(letter: int) -> tuple[int, int]:
    return (abs(letter) - 1, 0 if letter > 0 else 1)


def letters_in_order(rank: int) -> list[int]:
    out = []
    for i in range(1, rank + 1):
        out += [i, -i]
    return out


@dataclass(frozen=True)
class GeneratorSet:
    rank: int
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if not self.names:
            object.__setattr__(self, "names", default_names(self.rank))
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(names) != self.rank:
            raise ValueError(f"expected {self.rank} names, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        for n in names:
            if not n or any(ch.isspace() for ch in n) or "'" in n or "^" in n:
                raise ValueError(f"bad generator name {n!r}")

    def letter(self, name: str, sign: int = 1) -> int:
        return sign * (self.names.index(name) + 1)

    def letter_name(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name + "'"

    def word(self, letters: Iterable[int]) -> Word:
        return Word(self, tuple(letters))

    def identity(self) -> Word:
        return Word(self, ())

    def generator(self, i: int) -> Word:
        return Word(self, (i + 1,))

    def gens(self) -> list[Word]:
        return [self.generator(i) for i in range(self.rank)]

    def parse(self, text: str) -> Word:
        return parse_word(text, self)


def default_names(rank: int) -> tuple[str, ...]:
    if rank <= 26:
        return tuple(string.ascii_lowercase[:rank])
    return tuple(f"g{i + 1}" for i in range(rank))


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Construction always reduces."""

    gens: GeneratorSet
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        rank = self.gens.rank
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise ValueError(f"letter {x} out of range for rank {rank}")
        object.__setattr__(self, "letters", _free_reduce(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        return multiply(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return Word(self.gens, invert(self).letters * -n)
        return Word(self.gens, self.letters * n)

    def to_text(self) -> str:
        return " ".join(self.gens.letter_name(x) for x in self.letters)

    def __str__(self) -> str:
        return self.to_text() or "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))


def reduce(raw: Sequence[int], gens: GeneratorSet | int) -> Word:
    if isinstance(gens, int):
        gens = GeneratorSet(gens)
    return Word(gens, tuple(raw))


def _check_same(u: Word, v: Word) -> None:
    if u.gens != v.gens:
        raise GeneratorMismatchError(f"{u.gens.names} vs {v.gens.names}")


def multiply(u: Word, v: Word) -> Word:
    _check_same(u, v)
    return Word(u.gens, u.letters + v.letters)


def invert(u: Word) -> Word:
    return Word(u.gens, tuple(-x for x in reversed(u.letters)))


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    _check_same(u, v)
    return Word(u.gens, u.letters + v.letters + invert(u).letters + invert(v).letters)


def conjugate(u: Word, c: Word) -> Word:
    """c u c^-1."""
    _check_same(u, c)
    return Word(u.gens, c.letters + u.letters + invert(c).letters)


def least_rotation(letters: Sequence[int]) -> tuple[int, ...]:
    n = len(letters)
    if n == 0:
        return ()
    keyed = [letter_key(x) for x in letters]
    best = min(range(n), key=lambda i: keyed[i:] + keyed[:i])
    return tuple(letters[best:]) + tuple(letters[:best])


@dataclass(frozen=True)
class CyclicWord:
    """A conjugacy class, stored as its lexicographically least cyclic rotation."""

    gens: GeneratorSet
    letters: tuple[int, ...] = field(default=())

    def __post_init__(self):
        w = Word(self.gens, self.letters)
        core, _ = _cyclic_core(w.letters)
        object.__setattr__(self, "letters", least_rotation(core))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def word(self) -> Word:
        return Word(self.gens, self.letters)

    def inverse(self) -> CyclicWord:
        return CyclicWord(self.gens, tuple(-x for x in reversed(self.letters)))

    def to_text(self) -> str:
        return self.word().to_text()

    def __str__(self) -> str:
        return str(self.word())

    def __repr__(self) -> str:
        return f"CyclicWord({str(self)!r})"

    def sort_key(self) -> tuple:
        return self.word().sort_key()


def _cyclic_core(letters: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # letters is freely reduced; strip x ... x^-1 from both ends
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return letters[i:j + 1], letters[:i]


def cyclic_reduce(u: Word) -> tuple[CyclicWord, Word]:
    """Return the conjugacy class of ``u`` and a conjugator ``c`` with
    ``u == c * cw.word() * c^-1``."""
    core, head = _cyclic_core(u.letters)
    cw = CyclicWord(u.gens, core)
    n = len(core)
    # cw is core rotated left by some r: core = P Q, cw = Q P, so core = P (Q P) P^-1
    r = 0
    for r in range(max(n, 1)):
        if core[r:] + core[:r] == cw.letters:
            break
    conj = Word(u.gens, head + core[:r])
    return cw, conj


def is_conjugate(u: Word, v: Word) -> bool:
    _check_same(u, v)
    return cyclic_reduce(u)[0] == cyclic_reduce(v)[0]


def syllables(u: Word) -> list[tuple[int, int]]:
    """Maximal runs ``[(generator index, exponent), ...]``."""
    if u.is_identity():
        raise TrivialWordError("the identity has no syllables")
    out: list[list[int]] = []
    for x in u.letters:
        g, s = abs(x) - 1, (1 if x > 0 else -1)
        if out and out[-1][0] == g:
            out[-1][1] += s
        else:
            out.append([g, s])
    return [(g, m) for g, m in out]


def exponent_sums(u: Word) -> list[int]:
    sums = [0] * u.gens.rank
    for x in u.letters:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return sums


def primitive_root(letters: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """For a cyclic word return (root, m) with letters == root * m."""
    letters = tuple(letters)
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return letters[:d], n // d
    return letters, 1


# -- enumeration -------------------------------------------------------------

def _extend(rank: int, prefix: tuple[int, ...], length: int) -> Iterator[tuple[int, ...]]:
    if len(prefix) == length:
        yield prefix
        return
    order = letters_in_order(rank)
    last = prefix[-1] if prefix else 0
    for x in order:
        if x != -last:
            yield from _extend(rank, prefix + (x,), length)


def reduced_tuples(rank: int, length: int, prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    """Reduced letter tuples of exactly ``length`` extending ``prefix``, in lex order."""
    if len(_free_reduce(prefix)) != len(prefix) or len(prefix) > length:
        return
    yield from _extend(rank, tuple(prefix), length)


def enumerate_words(rank: int, max_len: int, gens: GeneratorSet | None = None,
                    prefix: tuple[int, ...] = ()) -> Iterator[Word]:
    """Every reduced word of length <= max_len, length first then lex.

    With a nonempty ``prefix`` only the words starting with it are produced;
    the prefix-indexed sub-streams for a fixed prefix length partition the
    words at least that long.
    """
    if rank < 1 or max_len < 0:
        raise ValueError("need rank >= 1 and max_len >= 0")
    gens = gens or GeneratorSet(rank)
    for n in range(len(prefix), max_len + 1):
        for t in reduced_tuples(rank, n, prefix):
            yield Word(gens, t)


def count_reduced(rank: int, n: int) -> int:
    return 1 if n == 0 else 2 * rank * (2 * rank - 1) ** (n - 1)


def prefixes(rank: int, depth: int) -> list[tuple[int, ...]]:
    return list(reduced_tuples(rank, depth))


def is_cyclic_canonical(t: tuple[int, ...]) -> bool:
    if not t:
        return False
    if t[0] == -t[-1] and len(t) > 1:
        return False
    if len(t) == 1:
        return True
    return least_rotation(t) == t


def enumerate_classes(rank: int, max_len: int, gens: GeneratorSet | None = None,
                      prefix: tuple[int, ...] = ()) -> Iterator[CyclicWord]:
    """Every nontrivial conjugacy class with cyclic length <= max_len, each once."""
    gens = gens or GeneratorSet(rank)
    for n in range(max(1, len(prefix)), max_len + 1):
        for t in reduced_tuples(rank, n, prefix):
            if is_cyclic_canonical(t):
                cw = CyclicWord.__new__(CyclicWord)
                object.__setattr__(cw, "gens", gens)
                object.__setattr__(cw, "letters", t)
                yield cw


# -- text syntax -------------------------------------------------------------

_TOKEN = re.compile(r"^(?P<name>[^\s'^]+)(?P<inv>\^-1|')?$")


def parse_word(text: str, gens: GeneratorSet) -> Word:
    """Parse ``"a b a' b^-1"``; the empty string is the identity."""
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or m.group("name") not in gens.names:
            raise ValueError(f"unknown symbol {tok!r} (generators: {' '.join(gens.names)})")
        sign = -1 if m.group("inv") else 1
        letters.append(gens.letter(m.group("name"), sign))
    return Word(gens, tuple(letters))
