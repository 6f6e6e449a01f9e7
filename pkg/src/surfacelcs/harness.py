"""Reproduction driver: bound reports, run records, export, cache, config."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .fox import lcs_weight
from .geodesics import geodesic_self_intersection
from .surfaces import SurfaceCurve, SurfaceWithBoundary, self_intersection, standard_generators, word_length_bound
from .survey import ClassRow, class_text, classify_classes, summarize, survey_minimum
from .witnesses import certify_witness, derived_witness, lcs_witness, lcs_witness_level
from .words import CyclicWord, enumerate_words

OUT_ENV = "SURFACELCS_OUT"

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_ORACLE = 3

TAGS = ("1.1", "1.2", "1.3-lower", "1.3-upper", "1.6-lower", "1.6-upper", "2.4", "3.1")


class BoundViolation(AssertionError):
    pass


class OracleDisagreement(AssertionError):
    pass


@dataclass
class RunRecord:
    command: str
    parameters: dict
    payload: dict
    elapsed: float = 0.0
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def as_dict(self, timing: bool = False) -> dict:
        payload = self.payload if timing else {k: v for k, v in self.payload.items() if k != "elapsed"}
        d = {"command": self.command, "parameters": self.parameters, "payload": payload,
             "version": self.version}
        if timing:
            d["elapsed"] = self.elapsed
            d["timestamp"] = self.timestamp
        return d


@dataclass
class BoundReport:
    tag: str
    scope: dict
    cases: list = field(default_factory=list)

    def add(self, holds: bool, **case):
        self.cases.append({**case, "verdict": "holds" if holds else "violated"})

    @property
    def holds(self) -> bool:
        return all(c["verdict"] == "holds" for c in self.cases)

    def to_record(self) -> RunRecord:
        return RunRecord("bound", {"tag": self.tag, **self.scope},
                         {"verdict": "holds" if self.holds else "violated", "cases": self.cases})


# -- config ------------------------------------------------------------------

@dataclass
class Config:
    surfaces: tuple = ("1,1", "0,3")
    max_len: int = 8          # class length cap for exhaustive surveys
    k_max: int = 8
    weight_len: int = 8       # word length cap for the weight/length check
    weight_rank: int = 2
    witness_levels: int = 5
    oracle_surface: str = "1,1"
    oracle_len: int = 6
    jobs: int = 1
    out: str = ""
    format: str = "json"
    cache: str = ""

    def surface_list(self) -> list[SurfaceWithBoundary]:
        return [SurfaceWithBoundary.parse(s) for s in self.surfaces]

    def output_dir(self) -> Path:
        return Path(self.out or os.environ.get(OUT_ENV) or "surfacelcs-out")


def _coerce(name: str, raw: str):
    if name == "surfaces":
        return tuple(s.strip() for s in raw.replace(";", " ").split() if s.strip())
    default = getattr(Config, name)
    return int(raw) if isinstance(default, int) else raw.strip()


def parse_config(text: str) -> dict:
    known = {f.name for f in fields(Config)}
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise ValueError(f"config line {n}: expected key=value with a known key, got {line!r}")
        out[key] = _coerce(key, value.strip())
    return out


def load_config(path: str | Path | None = None, **overrides) -> Config:
    values = parse_config(Path(path).read_text()) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**values)


# -- cache -------------------------------------------------------------------

class SurveyCache:
    """Append-only JSON-lines store keyed by (surface, series, k, max_len)."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.entries: dict[tuple, dict] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self.entries[self.key(rec)] = rec

    @staticmethod
    def key(rec: dict) -> tuple:
        return (rec["surface"], rec["series"], int(rec["k"]), int(rec["max_len"]))

    def get(self, surface: str, series: str, k: int, max_len: int) -> dict | None:
        return self.entries.get((surface, series, k, max_len))

    def put(self, rec: dict) -> None:
        key = self.key(rec)
        if key in self.entries:
            return
        self.entries[key] = rec
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def cached_survey(s: SurfaceWithBoundary, k: int, max_len: int, series: str = "lcs",
                  jobs: int = 1, cache: SurveyCache | None = None) -> tuple[dict, bool]:
    if cache is not None:
        hit = cache.get(s.label(), series, k, max_len)
        if hit is not None:
            return hit, True
    rec = survey_minimum(s, k, max_len, series, jobs)
    if cache is not None:
        cache.put(rec)
    return rec, False


# -- export ------------------------------------------------------------------

CSV_COLUMNS = ("command", "surface", "series", "k", "max_len", "min_i", "verdict", "detail")


def _csv_row(rec: dict) -> dict:
    params, payload = rec["parameters"], rec["payload"]
    flat = {**params, **payload}
    row = {c: flat.get(c, "") for c in CSV_COLUMNS[1:-1]}
    row = {k: ("" if v is None else v) for k, v in row.items()}
    row["command"] = rec["command"]
    rest = {k: v for k, v in flat.items() if k not in CSV_COLUMNS}
    rest["version"] = rec["version"]
    for t in ("elapsed", "timestamp"):
        if t in rec:
            rest[t] = rec[t]
    row["detail"] = json.dumps(rest, sort_keys=True, separators=(",", ":"))
    return row


def render(records: Sequence[RunRecord], fmt: str = "json", timing: bool = False) -> str:
    dicts = [r.as_dict(timing) for r in records]
    if fmt == "json":
        return json.dumps(dicts, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for d in dicts:
            w.writerow(_csv_row(d))
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def export(records: Sequence[RunRecord], fmt: str, path: str | Path, timing: bool = False) -> Path:
    """Write records deterministically; timing fields only on request."""
    path = Path(path)
    text = render(records, fmt, timing)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def cells_csv(rec: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["surface", "series", "k", "length", "weight", "count", "min_i"])
    for c in rec["cells"]:
        w.writerow([rec["surface"], rec["series"], rec["k"], c["length"], c["weight"], c["count"], c["min_i"]])
    return buf.getvalue()


# -- the checks ----------------------------------------------------------------

def check_weight_length(rank: int, max_len: int) -> BoundReport:
    rep = BoundReport("1.2", {"rank": rank, "max_len": max_len})
    worst: dict[int, int] = {}
    count: dict[int, int] = {}
    for w in enumerate_words(rank, max_len):
        if w.is_identity():
            continue
        n = len(w)
        count[n] = count.get(n, 0) + 1
        worst[n] = max(worst.get(n, 0), lcs_weight(w))
    for n in sorted(count):
        rep.add(worst[n] <= n, length=n, words=count[n], bound=n, observed=worst[n])
    return rep


def check_lcs_bounds(s: SurfaceWithBoundary, rows: Sequence[ClassRow], k_max: int, max_len: int):
    """Boundary-case and uniform lower bounds against exhaustive minima."""
    scope = {"surface": s.label(), "k_max": k_max, "max_len": max_len}
    r11, r13 = BoundReport("1.1", dict(scope)), BoundReport("1.3-lower", dict(scope))
    C = s.lcs_constant
    for k in range(1, k_max + 1):
        rec = summarize(s, rows, k, max_len)
        m = rec["min_i"]
        b11 = Fraction(k, C) - 1
        r11.add(m is None or m >= b11, k=k, bound=str(b11), observed=m, classes=rec["classes"])
        # log_8(k) - 1 <= i  <=>  k <= 8^(i+1)
        r13.add(m is None or k <= 8 ** (m + 1), k=k, bound=f"log8({k})-1", observed=m,
                classes=rec["classes"])
    return r11, r13


def check_simple_classes(s: SurfaceWithBoundary, rows: Sequence[ClassRow], max_len: int) -> BoundReport:
    rep = BoundReport("2.4", {"surface": s.label(), "max_len": max_len})
    simple = [r for r in rows if r.i == 0 and r.length <= max_len]
    deep = [class_text(s, r.letters) for r in simple if r.weight >= 3]
    rep.add(not deep, simple_classes=len(simple), bound=2,
            observed=max((r.weight for r in simple), default=None), offenders=deep[:5])
    return rep


def check_envelope(s: SurfaceWithBoundary, rows: Sequence[ClassRow], max_len: int) -> BoundReport:
    rep = BoundReport("3.1", {"surface": s.label(), "max_len": max_len})
    for n in range(1, max_len + 1):
        at = [r for r in rows if r.length == n]
        worst = max((r.i for r in at), default=None)
        rep.add(worst is None or worst <= math.comb(n, 2), length=n, classes=len(at),
                bound=math.comb(n, 2), observed=worst)
    return rep


def _witness_curve(s: SurfaceWithBoundary, w) -> SurfaceCurve:
    gens = standard_generators(s).gens
    return SurfaceCurve.from_word(s, gens.word(w.letters))


def check_derived_witnesses(surfaces: Sequence[SurfaceWithBoundary], levels: int,
                            full_i_len: int = 16, lower_i_len: int = 64):
    upper = BoundReport("1.6-upper", {"levels": levels, "full_i_len": full_i_len})
    lower = BoundReport("1.6-lower", {"levels": levels, "max_witness_len": lower_i_len})
    for k in range(1, levels + 1):
        p = derived_witness(k)
        cert = certify_witness(p)
        env = math.comb(len(p.x), 2)
        bound = Fraction(2) ** (4 * k - 5)
        ok = len(p.x) <= 4 ** (k - 1) and env <= math.comb(4 ** (k - 1), 2) <= bound
        observed = {}
        for s in surfaces:
            if len(p.x) <= max(full_i_len, lower_i_len):
                i = self_intersection(_witness_curve(s, p.x)).value
                observed[s.label()] = i
                if len(p.x) <= full_i_len:
                    ok = ok and i <= env
                if k >= 3:
                    lb = 2 ** (math.ceil(k / 2) - 2)
                    lower.add(i >= lb, k=k, surface=s.label(), bound=lb, observed=i, length=len(p.x))
        upper.add(ok, k=k, length=len(p.x), envelope=env, bound=str(bound),
                  lcs_weight=cert["lcs_weight_x"], observed=observed)
    return upper, lower


def check_lcs_witnesses(surfaces: Sequence[SurfaceWithBoundary], k_max: int) -> BoundReport:
    rep = BoundReport("1.3-upper", {"k_max": k_max})
    for k in range(1, k_max + 1):
        l = lcs_witness_level(k)
        x = lcs_witness(k)
        env = word_length_bound(len(x))
        wt = lcs_weight(x) if len(x) <= 64 else None
        ok = env <= Fraction(2) ** (4 * l - 5) <= 8 * k ** 4 and (wt is None or wt >= k)
        observed = {}
        if len(x) <= 16:
            for s in surfaces:
                i = self_intersection(_witness_curve(s, x)).value
                observed[s.label()] = i
                ok = ok and i <= env
        rep.add(ok, k=k, level=l, length=len(x), lcs_weight=wt, envelope=env, bound=8 * k ** 4,
                observed=observed)
    return rep


def oracle_agreement(s: SurfaceWithBoundary, max_len: int, rows: Sequence[ClassRow] | None = None) -> dict:
    rows = rows if rows is not None else classify_classes(s, max_len)
    gens = standard_generators(s).gens
    bad = []
    n = 0
    for r in rows:
        if r.length > max_len:
            continue
        n += 1
        c = SurfaceCurve(s, CyclicWord(gens, r.letters))
        o = geodesic_self_intersection(c).value
        if o != r.i:
            bad.append({"class": class_text(s, r.letters), "combinatorial": r.i, "oracle": o})
    return {"surface": s.label(), "max_len": max_len, "classes": n, "disagreements": bad}


# -- driver --------------------------------------------------------------------

@dataclass
class Reproduction:
    reports: list
    records: list
    exit_code: int

    def summary(self) -> str:
        lines = []
        for r in self.reports:
            scope = ", ".join(f"{k}={v}" for k, v in r.scope.items())
            status = "holds" if r.holds else "VIOLATED"
            lines.append(f"[{r.tag:>9}] {status:8} cases={len(r.cases):3d}  {scope}")
        for rec in self.records:
            if rec.command == "oracle":
                p = rec.payload
                lines.append(f"[   oracle] {'agrees' if not p['disagreements'] else 'DISAGREES':8} "
                             f"classes={p['classes']}  surface={p['surface']}, max_len={p['max_len']}")
        lines.append(f"exit status {self.exit_code}")
        return "\n".join(lines) + "\n"


def run_reproduction(config: Config) -> Reproduction:
    reports: list[BoundReport] = []
    records: list[RunRecord] = []
    surfaces = config.surface_list()
    cache = SurveyCache(config.cache) if config.cache else None

    t0 = time.perf_counter()
    reports.append(check_weight_length(config.weight_rank, config.weight_len))
    for s in surfaces:
        rows = classify_classes(s, config.max_len, config.jobs)
        reports.extend(check_lcs_bounds(s, rows, config.k_max, config.max_len))
        reports.append(check_simple_classes(s, rows, config.max_len))
        reports.append(check_envelope(s, rows, config.max_len))
        for k in range(1, config.k_max + 1):
            rec = summarize(s, rows, k, config.max_len)
            if cache is not None:
                hit = cache.get(s.label(), "lcs", k, config.max_len)
                if hit is not None and {**hit, "elapsed": 0} != {**rec, "elapsed": 0}:
                    raise AssertionError(f"cached survey differs from recomputation: {s.label()} k={k}")
                cache.put({**rec, "elapsed": 0.0})
            records.append(RunRecord("survey", {"surface": s.label(), "series": "lcs", "k": k,
                                                "max_len": config.max_len}, rec))
    reports.extend(check_derived_witnesses(surfaces, config.witness_levels))
    reports.append(check_lcs_witnesses(surfaces, config.k_max))

    oracle_s = SurfaceWithBoundary.parse(config.oracle_surface)
    agree = oracle_agreement(oracle_s, config.oracle_len)
    records.append(RunRecord("oracle", {"surface": agree["surface"], "max_len": agree["max_len"]}, agree))

    records = [r.to_record() for r in reports] + records
    elapsed = time.perf_counter() - t0
    for r in records:
        r.elapsed = round(elapsed, 3)
    if agree["disagreements"]:
        code = EXIT_ORACLE
    elif not all(r.holds for r in reports):
        code = EXIT_VIOLATION
    else:
        code = EXIT_OK
    return Reproduction(reports, records, code)
