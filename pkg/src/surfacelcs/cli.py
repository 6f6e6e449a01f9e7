"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .finite import core_case_catalog, detect, evaluate, load_catalog, verify_core_bounds
from .fox import augmentation, iterated_derivative, lcs_weight, magnus_expand
from .geodesics import geodesic_self_intersection
from .harness import (EXIT_OK, EXIT_ORACLE, EXIT_VIOLATION, RunRecord, SurveyCache, cached_survey,
                      cells_csv, export, load_config, render, run_reproduction)
from .surfaces import SurfaceCurve, SurfaceWithBoundary, self_intersection, standard_generators, word_length_bound
from .witnesses import certify_witness, derived_witness, lcs_witness, lcs_witness_level
from .words import GeneratorSet, cyclic_reduce, exponent_sums


def _gens(args) -> GeneratorSet:
    if getattr(args, "surface", None):
        return standard_generators(SurfaceWithBoundary.parse(args.surface)).gens
    if getattr(args, "gens", None):
        names = tuple(n.strip() for n in args.gens.split(","))
        return GeneratorSet(len(names), names)
    return GeneratorSet(args.rank)


def _word_args(p: argparse.ArgumentParser, surface: bool = True) -> None:
    p.add_argument("word", help="whitespace-separated letters, inverse as x' or x^-1; '1' for the identity")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--gens", help="comma-separated generator names")
    if surface:
        p.add_argument("--surface", help="use the standard generators of the surface g,b")


def _parse(args):
    gens = _gens(args)
    text = args.word.strip()
    return gens.identity() if text in ("", "1") else gens.parse(text)


def cmd_reduce(args) -> int:
    w = _parse(args)
    cls, conj = cyclic_reduce(w)
    print(f"reduced: {w}")
    print(f"length: {len(w)}")
    print(f"cyclic: {cls}")
    print(f"exponent sums: {exponent_sums(w)}")
    return EXIT_OK


def cmd_lcs_weight(args) -> int:
    print(lcs_weight(_parse(args)))
    return EXIT_OK


def cmd_fox(args) -> int:
    w = _parse(args)
    seq = [w.gens.names.index(n.strip()) for n in args.wrt.split(",")]
    d = iterated_derivative(seq, w)
    print(d)
    print(f"augmentation: {augmentation(d)}")
    return EXIT_OK


def cmd_magnus(args) -> int:
    w = _parse(args)
    print(magnus_expand(w, args.degree).format(w.gens))
    return EXIT_OK


def cmd_witness(args) -> int:
    if args.lcs:
        l = lcs_witness_level(args.k)
        x = lcs_witness(args.k)
        out = {"k": args.k, "level": l, "x": str(x), "length": len(x),
               "word_length_bound": word_length_bound(len(x))}
    else:
        p = derived_witness(args.k)
        out = {"x": str(p.x), "y": str(p.y), **certify_witness(p)}
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_selfint(args) -> int:
    s = SurfaceWithBoundary.parse(args.surface)
    c = SurfaceCurve.from_word(s, _parse(args))
    r = self_intersection(c, certificate=args.certificate)
    print(f"class: {c.cls}")
    print(f"i: {r.value}")
    print(f"envelope: {word_length_bound(c)}")
    if args.certificate:
        print(f"linked pairs: {list(r.certificate)}")
    if args.oracle:
        o = geodesic_self_intersection(c)
        print(f"oracle: {o.value}")
        if o.value != r.value:
            print("oracle disagrees", file=sys.stderr)
            return EXIT_ORACLE
    return EXIT_OK


def cmd_survey(args) -> int:
    s = SurfaceWithBoundary.parse(args.surface)
    cache = SurveyCache(args.cache) if args.cache else None
    rec, hit = cached_survey(s, args.k, args.max_len, args.series, args.jobs, cache)
    record = RunRecord("survey", {"surface": s.label(), "series": args.series, "k": args.k,
                                  "max_len": args.max_len}, rec, elapsed=rec.get("elapsed", 0.0))
    if args.out:
        export([record], args.format, args.out)
        if args.cells:
            Path(args.cells).write_text(cells_csv(rec))
    else:
        print(render([record], args.format), end="")
    if hit:
        print("(from cache)", file=sys.stderr)
    return EXIT_OK


def cmd_detect(args) -> int:
    w = _parse(args)
    h = detect(w)
    if h is None:
        print("none")
    else:
        val = h.target.names[evaluate(h, w)]
        print(f"{h.target.name}: {h.describe()}  value={val}  surjective={h.is_surjective()}")
    return EXIT_OK


def cmd_verify_cores(args) -> int:
    groups = load_catalog()
    cases = core_case_catalog(groups, seed=args.seed)
    report = verify_core_bounds(cases, groups)
    print(f"{'case':>4} {'group':>8} {'kind':>5} {'params':>10} {'N':>3} {'bound':>5}")
    for r in report:
        params = f"r={r['r']},s={r['s']}" if r["kind"] == "pair" else f"m={r['m']},n={r['n']}"
        print(f"{r['case']:4d} {r['group']:>8} {r['kind']:>5} {params:>10} {r['N']:3d} {r['bound']:5d}")
    print(f"{len(report)} cases, all within bounds")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    cfg = load_config(args.config, jobs=args.jobs, out=args.out, format=args.format,
                      max_len=args.max_len, cache=args.cache)
    rep = run_reproduction(cfg)
    out = cfg.output_dir()
    export(rep.records, cfg.format, out / f"records.{cfg.format}", timing=args.timing)
    (out / "summary.txt").write_text(rep.summary())
    print(rep.summary(), end="")
    return rep.exit_code


def cmd_export(args) -> int:
    data = json.loads(Path(args.input).read_text())
    records = [RunRecord(d["command"], d["parameters"], d["payload"], d.get("elapsed", 0.0),
                         d.get("version", __version__), d.get("timestamp", "")) for d in data]
    export(records, args.format, args.out, timing=args.timing)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surfacelcs", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="free and cyclic reduction")
    _word_args(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lcs-weight", help="lower central series weight")
    _word_args(p)
    p.set_defaults(func=cmd_lcs_weight)

    p = sub.add_parser("fox-derive", help="iterated free derivative and its augmentation")
    _word_args(p)
    p.add_argument("--wrt", required=True, help="comma-separated generator names, outermost first")
    p.set_defaults(func=cmd_fox)

    p = sub.add_parser("magnus", help="truncated Magnus expansion")
    _word_args(p)
    p.add_argument("--degree", type=int, default=4)
    p.set_defaults(func=cmd_magnus)

    p = sub.add_parser("witness", help="derived-series witness x_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lcs", action="store_true", help="witness for the k-th lower central term")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("selfint", help="self-intersection number of a class")
    _word_args(p, surface=False)
    p.add_argument("--surface", required=True)
    p.add_argument("--oracle", action="store_true", help="also run the hyperbolic geodesic oracle")
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_selfint)

    p = sub.add_parser("survey", help="minimal i over short classes in a series term")
    p.add_argument("--surface", required=True)
    p.add_argument("--series", choices=("lcs", "derived2"), default="lcs")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cells", help="also write the per (length, weight) table as CSV")
    p.add_argument("--cache")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("detect", help="find a map to Z8 or D8 not killing the word")
    _word_args(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("verify-cores", help="check normal-core index bounds on the group catalog")
    p.add_argument("--seed", type=int, default=20240801)
    p.set_defaults(func=cmd_verify_cores)

    p = sub.add_parser("reproduce", help="run every bound check and write records")
    p.add_argument("--config")
    p.add_argument("--jobs", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--cache")
    p.add_argument("--timing", action="store_true", help="include elapsed and timestamp fields")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("export", help="convert a JSON record file")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except AssertionError as e:
        print(f"violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
