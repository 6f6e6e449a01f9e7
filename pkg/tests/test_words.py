import pytest
from hypothesis import given, settings, strategies as st

from surfacelcs.words import (CyclicWord, GeneratorSet, TrivialWordError, Word, commutator, conjugate,
                              count_reduced, cyclic_reduce, enumerate_classes, enumerate_words, invert,
                              is_conjugate, multiply, prefixes, primitive_root, reduce, syllables)

F2 = GeneratorSet(2)
a, b = F2.gens()
A, B = ~a, ~b


def w(text, gens=F2):
    return gens.parse(text)


def letters(rank=2, max_size=12):
    return st.lists(st.integers(1, rank).flatmap(lambda g: st.sampled_from([g, -g])), max_size=max_size)


def test_reduce_examples():
    assert reduce([1, -1], 2).is_identity()
    assert reduce([1, 2, -2, 1], 2) == a * a
    x2, y2 = a * b * A * B, a * B * A * b
    raw = x2.letters + y2.letters + invert(x2).letters + invert(y2).letters
    assert len(reduce(raw, 2)) == 16


def test_multiply_invert_commutator():
    assert (a * A).is_identity()
    assert multiply(a * b, B * a) == a * a
    u, v = w("a b a' b'"), w("a b' a' b")
    assert multiply(u, v) == w("a b a' b' a b' a' b")
    assert invert(a) == A
    assert invert(u) == w("b a b' a'")
    assert invert(F2.identity()).is_identity()
    assert commutator(a, b) == u and len(commutator(a, b)) == 4
    assert commutator(a, a).is_identity()
    assert len(commutator(u, v)) == 16


def test_generator_mismatch():
    with pytest.raises(ValueError):
        multiply(a, GeneratorSet(3).generator(0))


def test_cyclic_reduce_examples():
    cls, c = cyclic_reduce(b * a * B)
    assert cls == CyclicWord(F2, (1,)) and c == b
    comm = a * b * A * B
    cls, c = cyclic_reduce(comm)
    assert cls.word() == comm and c.is_identity()
    cls, _ = cyclic_reduce(A * (b * a) * a)
    assert cls.word() == a * b


def test_is_conjugate_examples():
    assert is_conjugate(b * a * B, a)
    assert not is_conjugate(a, b)
    assert not is_conjugate(a * b * A * B, b * a * B * A)


def test_syllables():
    assert syllables(w("a a b b b a'")) == [(0, 2), (1, 3), (0, -1)]
    assert syllables(a ** 5) == [(0, 5)]
    assert syllables(commutator(a, b)) == [(0, 1), (1, 1), (0, -1), (1, -1)]
    with pytest.raises(TrivialWordError):
        syllables(F2.identity())


def test_enumeration_counts():
    by_len = {}
    seen = set()
    for x in enumerate_words(2, 8):
        assert x not in seen
        seen.add(x)
        by_len[len(x)] = by_len.get(len(x), 0) + 1
    assert by_len[1] == 4 and by_len[3] == 36
    assert len(seen) == 13121
    assert all(by_len[n] == count_reduced(2, n) for n in range(9))


def test_enumeration_order_and_prefix_partition():
    words = list(enumerate_words(2, 5))
    keys = [x.sort_key() for x in words]
    assert keys == sorted(keys)
    long = [x for x in words if len(x) >= 2]
    parts = [x for p in prefixes(2, 2) for x in enumerate_words(2, 5, prefix=p)]
    assert sorted(parts, key=Word.sort_key) == long


def test_enumerate_classes_is_a_transversal():
    classes = list(enumerate_classes(2, 6))
    assert len(set(classes)) == len(classes)
    expected = {cyclic_reduce(x)[0] for x in enumerate_words(2, 6) if not x.is_identity()}
    expected = {c for c in expected if len(c) <= 6}
    assert set(classes) == expected


def test_parse_errors_and_names():
    assert w("a b^-1") == a * B
    assert str(a * B) == "a b'"
    assert str(F2.identity()) == "1"
    with pytest.raises(ValueError):
        w("a c")
    S = GeneratorSet(2, ("a1", "b1"))
    assert S.parse("a1 b1'").letters == (1, -2)


def test_primitive_root():
    assert primitive_root((1, 2, 1, 2)) == ((1, 2), 2)
    assert primitive_root((1, 2, -1)) == ((1, 2, -1), 1)


def _power_roots(max_len):
    # word -> set of words r (length <= max_len) of which it is a nonzero power
    roots = {}
    for r in enumerate_words(2, max_len):
        if r.is_identity():
            continue
        for m in range(-max_len, max_len + 1):
            if m:
                roots.setdefault(r ** m, set()).add(r)
    return roots


def test_commutator_trivial_iff_cyclic_subgroup():
    roots = _power_roots(4)
    small = list(enumerate_words(2, 4))
    for u in small:
        for v in small:
            # in a free group u, v commute iff both are powers of one word
            brute = u.is_identity() or v.is_identity() or bool(roots[u] & roots[v])
            assert commutator(u, v).is_identity() == brute, (u, v)


@given(letters())
def test_reduce_idempotent(t):
    r = reduce(t, 2)
    assert reduce(r.letters, 2) == r
    assert all(x != -y for x, y in zip(r.letters, r.letters[1:]))


@given(letters(), letters(), letters())
def test_associative(x, y, z):
    u, v, t = (Word(F2, q) for q in (x, y, z))
    assert (u * v) * t == u * (v * t)


@given(letters(), letters())
def test_commutator_length(x, y):
    u, v = Word(F2, x), Word(F2, y)
    assert len(commutator(u, v)) <= 2 * len(u) + 2 * len(v)


@given(letters(rank=3), letters(rank=3))
@settings(max_examples=200)
def test_conjugation_invariance(x, c):
    G = GeneratorSet(3)
    u, cw = Word(G, x), Word(G, c)
    assert cyclic_reduce(conjugate(u, cw))[0] == cyclic_reduce(u)[0]
    cls, conj = cyclic_reduce(u)
    assert conj * cls.word() * invert(conj) == u
