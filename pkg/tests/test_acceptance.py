"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction
from pathlib import Path

from surfacelcs import cli
from surfacelcs.finite import (core_case_catalog, dihedral8, load_catalog, nilpotency_class,
                               verify_core_bounds)
from surfacelcs.fox import iterated_derivative_augmentation, lcs_weight, syllable_augmentation
from surfacelcs.geodesics import geodesic_self_intersection
from surfacelcs.surfaces import SurfaceCurve, SurfaceWithBoundary, self_intersection, standard_generators
from surfacelcs.survey import classify_classes
from surfacelcs.witnesses import certify_witness, derived_witness
from surfacelcs.words import CyclicWord, GeneratorSet, Word, enumerate_words, syllables

S11 = SurfaceWithBoundary(1, 1)
S03 = SurfaceWithBoundary(0, 3)
ORACLE = json.loads((Path(__file__).parent / "data" / "oracle_selfint.json").read_text())

RESULTS: list[str] = []


def report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_weight_at_most_length():
    t0 = time.perf_counter()
    n = bad = 0
    for w in enumerate_words(2, 8):
        if w.is_identity():
            continue
        n += 1
        bad += lcs_weight(w) > len(w)
    dt = time.perf_counter() - t0
    report("weight <= length, rank 2, |w| <= 8", n == 13120 and bad == 0 and dt < 60,
           f"{n} words, {bad} violations, {dt:.2f}s")


def _random_word(rng, rank, n):
    letters = []
    while len(letters) < n:
        x = rng.choice([g for i in range(1, rank + 1) for g in (i, -i)])
        if not letters or letters[-1] != -x:
            letters.append(x)
    return Word(GeneratorSet(rank), letters)


def test_syllable_formula():
    rng = random.Random(1234)
    bad = 0
    for _ in range(10_000):
        rank = rng.choice((2, 3))
        w = _random_word(rng, rank, rng.randint(1, 10))
        prod = math.prod(m for _, m in syllables(w))
        seq = [g for g, _ in syllables(w)]
        fox = iterated_derivative_augmentation(seq, w)
        if not (prod != 0 and syllable_augmentation(w) == prod == fox):
            bad += 1
    report("syllable product = Fox augmentation", bad == 0, f"10000 random words, {bad} mismatches")


def test_chen_fox_lyndon():
    bad = 0
    words = [w for w in enumerate_words(2, 6) if not w.is_identity()]
    for w in words:
        k = lcs_weight(w)
        shorter = all(iterated_derivative_augmentation(seq, w) == 0
                      for n in range(1, k) for seq in itertools.product(range(2), repeat=n))
        exact = any(iterated_derivative_augmentation(seq, w) != 0
                    for seq in itertools.product(range(2), repeat=k))
        bad += not (shorter and exact)
    report("derivative sequences detect the weight, |w| <= 6", bad == 0,
           f"{len(words)} words, {bad} failures")


def test_witness_certification():
    details, ok = [], True
    for k in range(1, 6):
        p = derived_witness(k)
        cert = certify_witness(p)
        ok &= len(p.x) <= 4 ** (k - 1) and len(p.y) <= 4 ** (k - 1)
        if k <= 4:
            ok &= cert["lcs_weight_x"] is not None and cert["lcs_weight_x"] >= 2 ** (k - 1)
        details.append(f"k={k}:|x|={len(p.x)},wt={cert['lcs_weight_x']}")
    report("witness certification k <= 5", ok, " ".join(details))


_ROWS = {}


def rows(s, n=8):
    if (s, n) not in _ROWS:
        _ROWS[s, n] = classify_classes(s, n)
    return _ROWS[s, n]


def test_word_length_envelope():
    counts, bad = [], 0
    for s in (S11, S03):
        r = rows(s)
        bad += sum(x.i > math.comb(x.length, 2) for x in r)
        counts.append(f"{s.label()}:{len(r)}")
    report("i <= binomial(length, 2), length <= 8", bad == 0, f"classes {' '.join(counts)}, {bad} violations")


def test_oracle_agreement():
    gens = standard_generators(S11).gens
    r = [x for x in rows(S11) if x.length <= 6]
    frozen = ORACLE["1,1"]
    bad = 0
    for x in r:
        c = SurfaceCurve(S11, CyclicWord(gens, x.letters))
        live = geodesic_self_intersection(c).value
        bad += not (x.i == live == frozen[str(c.cls)])
    report("combinatorial i = geodesic oracle on Sigma_1,1, length <= 6",
           bad == 0 and len(r) == len(frozen), f"{len(r)} classes, {bad} disagreements")


def test_boundary_lower_bound():
    C = S11.lcs_constant
    bad, checked = 0, 0
    for x in rows(S11):
        for k in range(1, min(x.weight, 8) + 1):
            checked += 1
            bad += x.i < Fraction(k, C) - 1
    report("i >= k/4 - 1 on Sigma_1,1, length <= 8, k <= 8", bad == 0,
           f"{checked} (class, k) pairs, {bad} violations")


def test_simple_classes_not_deep():
    bad, simple = [], 0
    for s in (S11, S03):
        for x in rows(s):
            if x.i == 0:
                simple += 1
                if x.weight >= 3:
                    bad.append((s.label(), x.letters))
    report("no simple class of weight >= 3, length <= 8", not bad, f"{simple} simple classes, {len(bad)} deep")


def test_derived_upper_bound():
    ok, details = True, []
    for k in range(1, 6):
        x = derived_witness(k).x
        env = math.comb(len(x), 2)
        ok &= env <= math.comb(4 ** (k - 1), 2) <= Fraction(2) ** (4 * k - 5)
        if len(x) <= 16:
            for s in (S11, S03):
                i = self_intersection(SurfaceCurve.from_word(s, standard_generators(s).gens.word(x.letters))).value
                ok &= i <= env
                details.append(f"k={k} {s.label()} i={i}<={env}")
        else:
            details.append(f"k={k} env={env}<={2 ** (4 * k - 5)}")
    report("i(x_k) <= binomial(4^(k-1), 2) <= 2^(4k-5), k <= 5", ok, "; ".join(details))


def test_finite_quotient_suite():
    D8 = dihedral8()
    s, rs = D8.element("s"), D8.element("rs")
    ok = D8.names[D8.commutator(s, rs)] == "r2"
    groups = load_catalog()
    ok &= all(nilpotency_class(G) <= G.order.bit_length() - 1 for G in groups)
    cases = core_case_catalog(groups)
    rep = verify_core_bounds(cases, groups)
    ok &= all(r["holds"] for r in rep)
    report("finite quotients: [s, rs] = r2, class <= n, core bounds", ok,
           f"{len(groups)} groups, {len(rep)} core cases")


def test_determinism(tmp_path):
    outs = []
    for jobs in (1, 8):
        for rep in range(2):
            d = tmp_path / f"j{jobs}r{rep}"
            assert cli.main(["reproduce", "--jobs", str(jobs), "--out", str(d)]) == 0
            assert cli.main(["export", str(d / "records.json"), "--format", "csv", "--out", str(d / "records.csv")]) == 0
            outs.append(((d / "records.json").read_bytes(), (d / "records.csv").read_bytes()))
    same = all(o == outs[0] for o in outs)
    report("reproduce twice with 1 and 8 workers: byte-identical exports", same,
           f"{len(outs)} runs, json {len(outs[0][0])} bytes, csv {len(outs[0][1])} bytes")


if __name__ == "__main__":
    import inspect
    import sys
    import tempfile

    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and inspect.isfunction(fn):
            try:
                if "tmp_path" in inspect.signature(fn).parameters:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
