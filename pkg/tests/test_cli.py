"""Command-line surface: subcommands, output formats, exit codes."""

import json
import math

import pytest

from graphkms.cli import main


@pytest.fixture()
def loop_sink_file(tmp_path):
    path = tmp_path / "graph.txt"
    path.write_text("1 1\n1 2\n")
    return str(path)


def test_analyze_text(loop_sink_file, capsys):
    assert main(["analyze", loop_sink_file]) == 0
    out = capsys.readouterr().out
    assert "sinks: [2]" in out
    assert "lambda0: 1" in out
    assert "correspondence degree: 1" in out


def test_analyze_deterministic(loop_sink_file, capsys):
    outputs = []
    for _ in range(3):
        assert main(["analyze", loop_sink_file, "--format", "json"]) == 0
        outputs.append(capsys.readouterr().out)
    assert len(set(outputs)) == 1


def test_classify_json(loop_sink_file, capsys):
    beta = str(math.log(2.0))
    assert main(["classify", loop_sink_file, "--beta", beta, "--oracle",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime"] == "above_transition"
    assert data["extreme_states"][0]["weights"] == [0.5, 0.5]
    assert data["oracle"]["agrees"] is True


def test_phase_scan_csv(loop_sink_file, capsys):
    assert main(["phase-scan", loop_sink_file, "--beta-min", "0.5",
                 "--beta-max", "1.5", "--steps", "3", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4


def test_verify_subcommand(loop_sink_file, tmp_path, capsys):
    beta = 0.8
    state = tmp_path / "state.json"
    state.write_text(json.dumps({"weights": [math.exp(-beta), 1 - math.exp(-beta)]}))
    assert main(["verify", loop_sink_file, "--beta", str(beta),
                 "--state", str(state), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["satisfied"] is True


def test_tower_subcommand(loop_sink_file, tmp_path, capsys):
    beta = 0.8
    state = tmp_path / "state.json"
    state.write_text(json.dumps([math.exp(-beta), 1 - math.exp(-beta)]))
    assert main(["tower", loop_sink_file, "--beta", str(beta), "--state", str(state),
                 "--max-level", "3", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [row["level"] for row in rows] == [0, 1, 2, 3]
    assert all(row["consistency_residual"] <= 1e-12 for row in rows)
    assert all(row["monotone"] for row in rows)


def test_stdin_input(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("1 2\n"))
    assert main(["analyze", "-"]) == 0
    assert "sinks: [2]" in capsys.readouterr().out


def test_exit_code_input_error(loop_sink_file, capsys):
    assert main(["classify", loop_sink_file, "--beta", "-1"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["analyze", "/nonexistent/file"]) == 2
    assert main(["classify", loop_sink_file.replace("graph.txt", "missing"),
                 "--beta", "1"]) == 2


def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a graph at all\n")
    assert main(["analyze", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_exit_code_strict_mode(tmp_path):
    doc = tmp_path / "multi.txt"
    doc.write_text("1 1 2\n")
    assert main(["analyze", str(doc), "--strict"]) == 2
    assert main(["analyze", str(doc)]) == 0


def test_exit_code_precondition_error(tmp_path, capsys):
    # 13 vertices exceed the oracle enumeration guard
    n = 13
    edges = [[i + 1, i + 2] for i in range(n - 1)]
    doc = tmp_path / "big.json"
    doc.write_text(json.dumps({"vertices": n, "edges": edges}))
    assert main(["classify", str(doc), "--beta", "1.0", "--oracle"]) == 3
    capsys.readouterr()


def test_state_length_mismatch(loop_sink_file, tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps([1.0]))
    assert main(["verify", loop_sink_file, "--beta", "1.0",
                 "--state", str(state)]) == 2


def test_bad_state_file(loop_sink_file, tmp_path):
    bad = tmp_path / "state.json"
    bad.write_text("{\"nope\": 1}")
    assert main(["verify", loop_sink_file, "--beta", "1.0", "--state", str(bad)]) == 2


def test_scan_grid_validation(loop_sink_file):
    assert main(["phase-scan", loop_sink_file, "--beta-min", "2.0",
                 "--beta-max", "1.0", "--steps", "3"]) == 2
    assert main(["phase-scan", loop_sink_file, "--beta-min", "0.5",
                 "--beta-max", "1.0", "--steps", "0"]) == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
