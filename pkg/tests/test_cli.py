"""CLI subcommands: generation, verification, replay, benchmarks."""

import json

import pytest

from dynmatch.cli import main, strip_timing
from dynmatch.core import parse_stream


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def stream_file(tmp_path):
    path = tmp_path / "s.stream"
    assert run_cli("gen", "--n", "40", "--events", "300", "--seed", "1", "--out", str(path)) == 0
    return path


def test_gen_writes_valid_stream(stream_file):
    stream = parse_stream(stream_file.read_text())
    assert stream.n == 40
    assert len(stream.events) == 300


def test_gen_to_stdout(capsys):
    assert run_cli("gen", "--n", "10", "--events", "20") == 0
    out = capsys.readouterr().out
    assert out.startswith("dynmatch-stream v1")
    parse_stream(out)


def test_verify_accepts_and_rejects(tmp_path, stream_file, capsys):
    assert run_cli("verify", str(stream_file)) == 0
    bad = tmp_path / "bad.stream"
    bad.write_text("dynmatch-stream v1\nn 3 general\n- 0 1\n")
    assert run_cli("verify", str(bad)) == 1
    assert "invalid stream" in capsys.readouterr().err
    assert run_cli("verify", str(tmp_path / "missing.stream")) == 1


def test_run_produces_report(tmp_path, stream_file):
    out = tmp_path / "report.json"
    code = run_cli(
        "run", "--stream", str(stream_file),
        "--audit-every", "100", "--oracle-every", "50",
        "--stats-out", str(out),
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["algo"] == "general"
    assert report["audit_failures"] == 0
    assert report["seed"] == 0
    assert report["checkpoints"][-1]["event_index"] == 299


def test_run_kernel_with_overrides(tmp_path):
    sp = tmp_path / "b.stream"
    assert run_cli(
        "gen", "--kind", "bipartite-random", "--n", "30", "--events", "200",
        "--seed", "2", "--out", str(sp),
    ) == 0
    out = tmp_path / "report.json"
    code = run_cli(
        "run", "--stream", str(sp), "--algo", "kernel",
        "--eps-k", "1/10", "--stats-out", str(out),
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert "eps-k-override" in report["deviation_flags"]


def test_run_missing_stream_exits_1(tmp_path, capsys):
    assert run_cli("run", "--stream", str(tmp_path / "nope")) == 1
    assert "error" in capsys.readouterr().err


def test_run_kernel_on_general_stream_exits_1(stream_file, capsys):
    assert run_cli("run", "--stream", str(stream_file), "--algo", "kernel") == 1
    assert "bipartite" in capsys.readouterr().err


def test_bad_fraction_argument(stream_file):
    with pytest.raises(SystemExit):
        run_cli("run", "--stream", str(stream_file), "--eps", "nope")


def test_bench_reports_wall_times(tmp_path, stream_file):
    out = tmp_path / "bench.json"
    code = run_cli(
        "bench", "--stream", str(stream_file), "--repeats", "2",
        "--stats-out", str(out),
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["repeats"] == 2
    assert len(report["wall_times_s"]) == 2
    assert "event_time_percentiles" in report
    # bench runs skip audits and oracle calls
    assert all(c["audit"] is None for c in report["checkpoints"])


def test_strip_timing_removes_only_timing_fields():
    report = {
        "algo": "general",
        "wall_time_s": 1.0,
        "wall_times_s": [1.0],
        "event_time_percentiles": {"p50": 0.1},
        "audit_failures": 0,
    }
    assert strip_timing(report) == {"algo": "general", "audit_failures": 0}
