import io

import pytest

from pgap.cache import load_cycle
from pgap.cli import RunConfig, build_parser, main, read_config_file, resolve_config
from reference_tables import G7


def run(argv, capsys=None):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_cycle_build(tmp_path):
    code, out = run(["cycle", "build", "--k", "4", "--cache-dir", str(tmp_path)])
    assert code == 0
    assert tuple(load_cycle(tmp_path / "gapcycle.4.pgc").gaps) == G7


def test_cycle_build_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PGAP_CACHE_DIR", str(tmp_path))
    assert run(["cycle", "build", "--k", "3"])[0] == 0
    assert (tmp_path / "gapcycle.3.pgc").exists()


def test_cycle_build_needs_dir(monkeypatch, capsys):
    monkeypatch.delenv("PGAP_CACHE_DIR", raising=False)
    assert run(["cycle", "build", "--k", "3"])[0] == 1
    assert "cache directory" in capsys.readouterr().err


def test_cycle_verify():
    code, out = run(["cycle", "verify", "--k", "3"])
    assert code == 0 and "ok" in out


def test_cycle_verify_corrupt_cache(tmp_path, capsys):
    run(["cycle", "build", "--k", "4", "--cache-dir", str(tmp_path)])
    p = tmp_path / "gapcycle.4.pgc"
    raw = bytearray(p.read_bytes())
    raw[60] ^= 4
    p.write_bytes(bytes(raw))
    assert run(["cycle", "verify", "--k", "4", "--cache-dir", str(tmp_path)])[0] == 1
    assert "checksum" in capsys.readouterr().err


def test_cycle_info():
    code, out = run(["cycle", "info", "--k", "9"])
    assert code == 0
    assert "Phi: 36495360" in out and "Pi: 223092870" in out


def test_stage_ceiling(capsys):
    assert run(["cycle", "info", "--k", "11"])[0] == 1
    assert "stage" in capsys.readouterr().err


def census_column(out):
    return [int(line.split(",")[-2]) for line in out.splitlines()[1:]]


def test_census_both():
    code, out = run(["census", "--s", "2,10,2", "--to-p", "17"])
    assert code == 0
    assert census_column(out) == [0, 2, 20, 216, 3096]


def test_census_methods():
    assert census_column(run(["census", "--s", "2", "--to-p", "17", "--recurrence"])[1]) == [3, 15, 135, 1485, 22275]
    assert census_column(run(["census", "--s", "2,2", "--to-p", "13", "--scan"])[1]) == [0, 0, 0, 0]


def test_census_recurrence_beyond_scan():
    code, out = run(["census", "--s", "2,4,2", "--from-p", "29", "--to-p", "31", "--max-stage", "9"])
    assert code == 0
    assert out.splitlines()[-1].endswith("recurrence")


def test_census_bad_constellation(capsys):
    with pytest.raises(SystemExit) as e:
        run(["census", "--s", "2,3", "--to-p", "13"])
    assert e.value.code == 2


def test_report_csv():
    code, out = run(["report", "--s", "2", "--rows", "11,13"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,constellation,C_actual,E_sieve,HL,relerr_E,relerr_HL"
    assert lines[1].startswith("11,2,8,8,4,")
    assert lines[2].startswith("13,2,9,9,6,")


def test_report_markdown_and_counts():
    code, out = run(["report", "--s", "6", "--rows", "11", "--format", "markdown"])
    assert code == 0 and out.splitlines()[2] == "| 11 | 7 | 7 |"
    code, out = run(["report", "--s", "6", "--rows", "11", "--counts"])
    assert out.splitlines()[1] == "11,6,7,11,121"


def test_report_rejects_composite_row(capsys):
    assert run(["report", "--s", "2", "--rows", "15"])[0] == 1
    assert "not prime" in capsys.readouterr().err


def test_report_sieve_ceiling(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sieve_ceiling = 1000\n")
    assert run(["report", "--s", "2", "--rows", "101", "--config", str(cfg)])[0] == 1
    assert "sieve ceiling" in capsys.readouterr().err


def test_analysis_admissible():
    code, out = run(["analysis", "admissible", "--tuple", "0,2,6,12,20,22"])
    assert code == 0 and out.strip() == "inadmissible, blocking prime 3"
    assert run(["analysis", "admissible", "--tuple", "0,2,6,8"])[1].strip() == "admissible"


def test_analysis_spikes():
    code, out = run(["analysis", "erdos-turan", "--question", "spikes", "--to-k", "8"])
    g = [int(line.split(",")[2]) for line in out.splitlines()[1:]]
    assert code == 0 and g[:2] == [6, 10]
    assert all(a < b for a, b in zip(g, g[1:]))


def test_analysis_oscillation_and_superlinear():
    out = run(["analysis", "erdos-turan", "--question", "oscillation", "--to-k", "5"])[1]
    assert "absent" in out and "blocking prime 3" in out
    out = run(["analysis", "erdos-turan", "--question", "superlinear", "--k", "4", "--m", "3"])[1]
    assert 'run="4,6,8" index=19' in out


def test_analysis_uniformity():
    code, out = run(["analysis", "uniformity", "--s", "2", "--k", "8", "--bins", "64"])
    assert code == 0
    body, summary = out.split("\n\n")
    rows = body.splitlines()[1:]
    assert len(rows) == 64
    assert sum(int(r.split(",")[1]) for r in rows) == 378675
    assert "occurrences: 378675" in summary


def test_analysis_uniformity_no_occurrence(capsys):
    assert run(["analysis", "uniformity", "--s", "2,2", "--k", "4"])[0] == 1
    assert "occurrence" in capsys.readouterr().err


def test_composite_runs():
    code, out = run(["analysis", "composite-runs", "--k", "4"])
    assert out.splitlines() == ["start,length", "200,9", "212,9"]


def test_config_file(tmp_path):
    p = tmp_path / "pgap.cfg"
    p.write_text("# settings\nmem_budget = 1_000_000  # bytes\n\nformat = markdown\ncache_dir = /tmp/x\n")
    vals = read_config_file(p)
    assert vals["mem_budget"] == 1_000_000 and vals["format"] == "markdown"
    args = build_parser().parse_args(["report", "--config", str(p), "--format", "csv"])
    cfg = resolve_config(args, environ={})
    assert cfg.format == "csv" and cfg.mem_budget == 1_000_000


def test_config_rejects_bad(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("colour = blue\n")
    assert run(["cycle", "info", "--k", "3", "--config", str(p)])[0] == 1
    assert "unknown key" in capsys.readouterr().err
    p.write_text("rounding = banker\n")
    assert run(["cycle", "info", "--k", "3", "--config", str(p)])[0] == 1


def test_flag_order_with_nested_subcommand(tmp_path):
    args = build_parser().parse_args(["analysis", "--cache-dir", str(tmp_path), "composite-runs", "--k", "3"])
    assert resolve_config(args, environ={}).cache_dir == tmp_path


def test_deterministic_output():
    a = run(["census", "--s", "6", "--to-p", "19"])[1]
    b = run(["census", "--s", "6", "--to-p", "19"])[1]
    assert a == b


def test_default_config_valid():
    assert RunConfig().check().format == "csv"
