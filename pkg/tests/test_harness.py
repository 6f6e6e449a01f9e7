import json

import pytest

from surfacelcs import cli
from surfacelcs.harness import (CSV_COLUMNS, EXIT_ORACLE, EXIT_VIOLATION, BoundReport, Config, RunRecord,
                                SurveyCache, cached_survey, check_envelope, export, load_config,
                                parse_config, render, run_reproduction)
from surfacelcs.surfaces import SurfaceWithBoundary
from surfacelcs.survey import ClassRow, survey_minimum

S11 = SurfaceWithBoundary(1, 1)
SMALL = dict(surfaces=("1,1",), max_len=5, k_max=4, weight_len=5, witness_levels=3, oracle_len=4)


def _survey_record():
    rec = survey_minimum(S11, 2, 4)
    return RunRecord("survey", {"surface": "1,1", "series": "lcs", "k": 2, "max_len": 4}, rec)


def test_empty_csv_is_header_only(tmp_path):
    p = export([], "csv", tmp_path / "e.csv")
    assert p.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_one_survey_row(tmp_path):
    p = export([_survey_record()], "csv", tmp_path / "s.csv")
    lines = p.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith('survey,"1,1",lcs,2,4,0,')


def test_export_is_byte_stable(tmp_path):
    r1, r2 = _survey_record(), _survey_record()
    for fmt in ("json", "csv"):
        a = export([r1], fmt, tmp_path / f"a.{fmt}").read_bytes()
        b = export([r2], fmt, tmp_path / f"b.{fmt}").read_bytes()
        assert a == b and a.endswith(b"\n")
    data = json.loads((tmp_path / "a.json").read_text())
    assert "elapsed" not in data[0] and "elapsed" not in data[0]["payload"]


def test_timing_fields_on_request():
    d = json.loads(render([_survey_record()], "json", timing=True))[0]
    assert "elapsed" in d and "timestamp" in d


def test_export_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        export([], "json", blocker / "sub" / "out.json")


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "cache.jsonl"
    cache = SurveyCache(path)
    rec, hit = cached_survey(S11, 2, 5, cache=cache)
    assert not hit
    again, hit = cached_survey(S11, 2, 5, cache=SurveyCache(path))
    assert hit
    fresh = survey_minimum(S11, 2, 5)
    strip = lambda r: {k: v for k, v in r.items() if k != "elapsed"}
    assert strip(again) == strip(fresh) == strip(rec)
    assert len(path.read_text().splitlines()) == 1


def test_config_parsing(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nsurfaces = 1,1; 0,3\nmax_len = 6\njobs=2\n")
    cfg = load_config(p, jobs=3)
    assert cfg.surfaces == ("1,1", "0,3") and cfg.max_len == 6 and cfg.jobs == 3
    with pytest.raises(ValueError):
        parse_config("nonsense = 1")
    with pytest.raises(ValueError):
        parse_config("max_len 6")


def test_output_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv("SURFACELCS_OUT", str(tmp_path / "envout"))
    assert Config().output_dir() == tmp_path / "envout"
    assert Config(out=str(tmp_path / "x")).output_dir() == tmp_path / "x"


def test_violation_verdict():
    rows = [ClassRow((1, 2), 1, 5, False)]
    rep = check_envelope(S11, rows, 2)
    assert not rep.holds
    rep = BoundReport("1.1", {})
    rep.add(True, k=1)
    assert rep.holds and rep.to_record().payload["verdict"] == "holds"


def test_small_reproduction():
    rep = run_reproduction(Config(**SMALL))
    assert rep.exit_code == 0
    tags = {r.tag for r in rep.reports}
    assert {"1.1", "1.2", "1.3-lower", "1.3-upper", "1.6-lower", "1.6-upper", "2.4", "3.1"} <= tags
    assert "exit status 0" in rep.summary()


def test_reproduction_exit_codes(monkeypatch):
    import surfacelcs.harness as h

    monkeypatch.setattr(h, "oracle_agreement", lambda s, n: {"surface": "1,1", "max_len": n, "classes": 1,
                                                              "disagreements": [{"class": "a1"}]})
    assert run_reproduction(Config(**SMALL)).exit_code == EXIT_ORACLE

    monkeypatch.undo()
    monkeypatch.setattr(h, "check_weight_length", lambda r, n: _failing("1.2"))
    assert run_reproduction(Config(**SMALL)).exit_code == EXIT_VIOLATION


def _failing(tag):
    rep = BoundReport(tag, {})
    rep.add(False, observed=1, bound=0)
    return rep


def test_cli_commands(capsys, tmp_path):
    assert cli.main(["reduce", "a b b' a"]) == 0
    assert "reduced: a a" in capsys.readouterr().out
    assert cli.main(["lcs-weight", "a b a' b'"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert cli.main(["fox-derive", "a a b b b a'", "--wrt", "a,b,a"]) == 0
    assert "augmentation: -6" in capsys.readouterr().out
    assert cli.main(["magnus", "a b a' b'", "--degree", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1 + X_aX_b - X_bX_a"
    assert cli.main(["witness", "--k", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["len_x"] == 16
    assert cli.main(["selfint", "--surface", "1,1", "a1 a1 a1", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "i: 2" in out and "oracle: 2" in out
    assert cli.main(["detect", "a b a' b'"]) == 0
    assert "value=r2" in capsys.readouterr().out
    assert cli.main(["detect", "a a a a a a a a"]) == 0
    assert capsys.readouterr().out.strip() == "none"
    assert cli.main(["selfint", "--surface", "1,1", "a1 q"]) == 1


def test_cli_survey_and_export(capsys, tmp_path):
    out = tmp_path / "s.json"
    cells = tmp_path / "cells.csv"
    cache = tmp_path / "c.jsonl"
    args = ["survey", "--surface", "1,1", "--k", "2", "--max-len", "4", "--out", str(out),
            "--cells", str(cells), "--cache", str(cache)]
    assert cli.main(args) == 0
    assert json.loads(out.read_text())[0]["payload"]["min_i"] == 0
    assert cells.read_text().splitlines()[1] == "\"1,1\",lcs,2,4,2,2,0"
    assert cli.main(args) == 0
    assert "(from cache)" in capsys.readouterr().err
    csv_out = tmp_path / "s.csv"
    assert cli.main(["export", str(out), "--format", "csv", "--out", str(csv_out)]) == 0
    assert csv_out.read_text().count("\n") == 2


def test_cli_reproduce_writes_records(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("\n".join(f"{k} = {';'.join(v) if isinstance(v, tuple) else v}" for k, v in SMALL.items()))
    code = cli.main(["reproduce", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 0
    assert (tmp_path / "o" / "records.json").exists()
    assert "exit status 0" in (tmp_path / "o" / "summary.txt").read_text()
