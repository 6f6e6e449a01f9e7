"""Exhaustive surveys of short classes: weight, self-intersection, minima."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .fox import lcs_weight
from .surfaces import (SurfaceCurve, SurfaceWithBoundary, is_boundary_parallel, self_intersection,
                       standard_generators)
from .words import CyclicWord, enumerate_classes, letter_key, prefixes

SERIES = ("lcs", "derived2")


class UnsupportedSeriesError(ValueError):
    pass


@dataclass(frozen=True)
class ClassRow:
    letters: tuple[int, ...]
    weight: int
    i: int
    peripheral: bool

    @property
    def length(self) -> int:
        return len(self.letters)

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))


def _classify(s: SurfaceWithBoundary, cls: CyclicWord) -> ClassRow:
    c = SurfaceCurve(s, cls)
    return ClassRow(cls.letters, lcs_weight(cls.word()), self_intersection(c).value,
                    is_boundary_parallel(c))


def _classify_chunk(args) -> list[ClassRow]:
    genus, boundary, max_len, prefix, exact_len = args
    s = SurfaceWithBoundary(genus, boundary)
    gens = standard_generators(s).gens
    out = []
    for cls in enumerate_classes(s.rank, max_len, gens, prefix):
        if exact_len is not None and len(cls) != exact_len:
            continue
        out.append(_classify(s, cls))
    return out


def _partition(s: SurfaceWithBoundary, max_len: int, depth: int) -> list[tuple]:
    # classes shorter than the prefix depth are handled one length at a time
    tasks = [(s.genus, s.boundary, n, (), n) for n in range(1, min(depth, max_len + 1))]
    if max_len >= depth:
        tasks += [(s.genus, s.boundary, max_len, p, None) for p in prefixes(s.rank, depth)]
    return tasks


def classify_classes(s: SurfaceWithBoundary, max_len: int, jobs: int = 1,
                     depth: int = 2) -> tuple[ClassRow, ...]:
    """One row per nontrivial class of length <= max_len, in enumeration order.

    Work is split by enumeration prefix; the merged table does not depend on
    ``jobs``.
    """
    if not s.nonabelian:
        raise ValueError("surveys need a nonabelian fundamental group")
    tasks = _partition(s, max_len, depth)
    if jobs <= 1:
        chunks = [_classify_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_classify_chunk, tasks))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=ClassRow.sort_key)
    return tuple(rows)


@lru_cache(maxsize=16)
def _cached_rows(s: SurfaceWithBoundary, max_len: int) -> tuple[ClassRow, ...]:
    return classify_classes(s, max_len)


def class_text(s: SurfaceWithBoundary, letters: tuple[int, ...]) -> str:
    gens = standard_generators(s).gens
    return " ".join(gens.letter_name(x) for x in letters)


def in_series(row: ClassRow, series: str, k: int) -> bool:
    if series == "lcs":
        return row.weight >= k
    if series == "derived2":
        # the second derived term is the commutator subgroup: weight >= 2
        return row.weight >= 2
    raise UnsupportedSeriesError(series)


def summarize(s: SurfaceWithBoundary, rows, k: int, max_len: int, series: str = "lcs") -> dict:
    if series not in SERIES:
        raise UnsupportedSeriesError(f"series must be one of {SERIES}, got {series!r}")
    if series == "derived2" and k != 2:
        raise UnsupportedSeriesError("derived2 is only defined for k = 2")
    if k < 1:
        raise UnsupportedSeriesError("k must be >= 1")
    best = None
    hist: dict[int, int] = {}
    cells: dict[tuple[int, int], list[int]] = {}
    count = 0
    for r in rows:
        if r.length > max_len or not in_series(r, series, k):
            continue
        count += 1
        hist[r.i] = hist.get(r.i, 0) + 1
        cell = cells.setdefault((r.length, r.weight), [0, r.i])
        cell[0] += 1
        cell[1] = min(cell[1], r.i)
        key = (r.i, r.sort_key(), r.letters)
        if best is None or key < best:
            best = key
    return {
        "surface": s.label(),
        "series": series,
        "k": k,
        "max_len": max_len,
        "classes": count,
        "min_i": None if best is None else best[0],
        "witness": None if best is None else class_text(s, best[2]),
        "histogram": {str(i): hist[i] for i in sorted(hist)},
        "cells": [{"length": n, "weight": w, "count": c, "min_i": m}
                  for (n, w), (c, m) in sorted(cells.items())],
    }


def survey_minimum(s: SurfaceWithBoundary, k: int, max_len: int, series: str = "lcs",
                   jobs: int = 1) -> dict:
    """Smallest i over classes of length <= max_len in the chosen series term.

    An upper estimate of the true minimum, restricted to short words.
    """
    if series not in SERIES:
        raise UnsupportedSeriesError(f"series must be one of {SERIES}, got {series!r}")
    t0 = time.perf_counter()
    rows = classify_classes(s, max_len, jobs) if jobs > 1 else _cached_rows(s, max_len)
    rec = summarize(s, rows, k, max_len, series)
    rec["elapsed"] = round(time.perf_counter() - t0, 6)
    return rec
