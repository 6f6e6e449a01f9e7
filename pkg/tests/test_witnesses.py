import pytest

from surfacelcs.fox import lcs_weight
from surfacelcs.words import GeneratorSet, commutator, is_conjugate
from surfacelcs.witnesses import (MAX_LEVEL, CertificationError, WitnessLevelError, WitnessPair, certify_witness,
                                  derived_witness, lcs_witness, lcs_witness_level)

F2 = GeneratorSet(2)
a, b = F2.gens()


def test_low_levels():
    p = derived_witness(1)
    assert (p.x, p.y) == (a, b)
    p = derived_witness(2)
    assert p.x == F2.parse("a b a' b'") and p.y == F2.parse("a b' a' b")
    assert len(derived_witness(3).x) == 16


def test_lcs_witness():
    assert lcs_witness(1) == a
    assert lcs_witness(2) == F2.parse("a b a' b'")
    assert lcs_witness(4) == derived_witness(3).x
    assert [lcs_witness_level(k) for k in (1, 2, 3, 4, 5, 8, 9)] == [1, 2, 3, 3, 4, 4, 5]


def test_lengths_and_nontriviality():
    for k in range(1, 8):
        p = derived_witness(k)
        assert 0 < len(p.x) <= 4 ** (k - 1)
        assert 0 < len(p.y) <= 4 ** (k - 1)
        assert not commutator(p.x, p.y).is_identity()


def test_weights_reach_the_lower_bound():
    for k in range(1, 5):
        assert lcs_weight(derived_witness(k).x) >= 2 ** (k - 1)
    # computed values, reported without any claim of optimality
    assert [lcs_weight(derived_witness(k).x) for k in range(1, 5)] == [1, 2, 5, 12]


def test_certificates():
    c = certify_witness(derived_witness(2))
    assert c["lcs_weight_x"] == 2 and c["length_bound"] == 4
    assert certify_witness(derived_witness(1))["lcs_weight_x"] == 1
    assert certify_witness(derived_witness(3))["lcs_weight_x"] >= 4
    big = certify_witness(derived_witness(5))
    assert big["lcs_weight_x"] is None and big["len_x"] <= 256


def test_certification_rejects_bad_pairs():
    with pytest.raises(CertificationError) as e:
        certify_witness(WitnessPair(2, a, a))
    assert e.value.clause == "commutator"
    with pytest.raises(CertificationError) as e:
        certify_witness(WitnessPair(1, a * b, b))
    assert e.value.clause == "length"


def test_level_guard():
    with pytest.raises(WitnessLevelError):
        derived_witness(0)
    with pytest.raises(WitnessLevelError):
        derived_witness(MAX_LEVEL + 1)


def test_higher_rank_embedding():
    G = GeneratorSet(4)
    p = derived_witness(2, G)
    assert p.x.letters == (1, 2, -1, -2) and p.x.gens == G


def test_x_and_y_are_not_conjugate():
    for k in range(2, 5):
        p = derived_witness(k)
        assert not is_conjugate(p.x, p.y)
