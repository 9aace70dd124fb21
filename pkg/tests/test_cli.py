from __future__ import annotations

import json

import pytest

from minmax_consensus.cli import main
from minmax_consensus.digraph import Digraph
from minmax_consensus.dynamic_graph import Schedule, format_schedule

CHAIN = "prefix 0\ncycle 1\n3\n0 1\n1 2\n"
TWO_CYCLES = "prefix 0\ncycle 1\n4\n0 1\n1 0\n2 3\n3 2\n"


@pytest.fixture
def sched(tmp_path):
    def write(text, name="s.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_analyze_chain(sched, capsys):
    assert main(["analyze", sched(CHAIN)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "kernel: {0}, delay T=1"


def test_analyze_empty_kernel(sched, capsys):
    assert main(["analyze", sched(TWO_CYCLES), "--max-delay", "5"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "kernel: {}"
    assert "none up to 5" in out


def test_analyze_complete_jsonl(sched, capsys):
    text = format_schedule(Schedule.constant(Digraph.complete(3)))
    assert main(["analyze", sched(text), "--format", "jsonl"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["kernel"] == [0, 1, 2] and report["delay"] == 1


def test_analyze_errors(sched, tmp_path, capsys):
    assert main(["analyze", sched("prefix 0\ncycle 1\n3\n0 9\n")]) == 2
    assert "line 4" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.txt")]) == 2


def test_usage_errors():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["suite", "nonexistent"]) == 2


def write_config(tmp_path, text):
    p = tmp_path / "run.yaml"
    p.write_text(text)
    return str(p)


def test_run_stabilizes(tmp_path, sched, capsys):
    sched("prefix 0\ncycle 1\n3\n0 1\n1 0\n1 2\n2 1\n", "c.txt")
    cfg = write_config(
        tmp_path,
        "schedule_file: c.txt\nm: 3\ninputs: [0, 2, 2]\nstarts: [3, 1, 1]\nhorizon: 60\nexpect: stabilize\n",
    )
    out_path = tmp_path / "trace.jsonl"
    assert main(["run", cfg, "--format", "jsonl", "--out", str(out_path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["stabilized"] and report["value"] == report["m_star"] == 0
    assert len(out_path.read_text().splitlines()) == 62


def test_run_expectation_mismatch(tmp_path):
    cfg = write_config(tmp_path, f"schedule: |\n  {TWO_CYCLES.replace(chr(10), chr(10) + '  ')}\ninputs: [0, 0, 1, 1]\nexpect: stabilize\n")
    assert main(["run", cfg]) == 1


def test_run_empty_kernel_scenario_disagrees(tmp_path, capsys):
    cfg = write_config(tmp_path, "scenario: {kind: empty_kernel, n: 4}\nalgorithm: min\nhorizon: 30\nexpect: disagree\n")
    assert main(["run", cfg]) == 0
    assert "status: disagreement" in capsys.readouterr().out


def test_run_random_inputs_use_seed(tmp_path, capsys, monkeypatch):
    cfg = write_config(tmp_path, "scenario: {kind: fixed_rooted, n: 5}\nm: 3\ninputs: random\nhorizon: 40\n")
    assert main(["run", cfg, "--seed", "3", "--format", "jsonl"]) == 0
    first = capsys.readouterr().out
    monkeypatch.setenv("MINMAX_SEED", "3")
    assert main(["run", cfg, "--format", "jsonl"]) == 0
    assert capsys.readouterr().out == first
    monkeypatch.setenv("MINMAX_SEED", "abc")
    assert main(["run", cfg]) == 2


@pytest.mark.parametrize(
    "text",
    [
        "m: 2\n",
        "schedule: 'x'\nscenario: {kind: empty_kernel, n: 2}\n",
        "scenario: {kind: spiral, n: 3}\n",
        "scenario: {kind: fixed_rooted}\n",
        "scenario: {kind: empty_kernel, n: 4}\nexpect: maybe\n",
        "scenario: {kind: empty_kernel, n: 4}\ninputs: [0, 1, 2, 9]\n",
        "- a list\n",
        "scenario: {kind: empty_kernel, n: 4}\ncutoff: sqrt\n",
    ],
)
def test_run_config_errors(tmp_path, text):
    assert main(["run", write_config(tmp_path, text)]) == 2


def test_adversary(capsys, tmp_path):
    assert main(["adversary", "--n", "3", "--format", "jsonl", "--out", str(tmp_path / "adv.txt")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["phase_ends"] == [2, 3, 4, 5] and report["y_v1"] == [1, 0, 1, 0]
    assert report["kernel"] == [0, 1, 2]
    assert main(["adversary", "--n", "3", "--phases", "5", "--phase-budget", "100"]) == 1
    assert "did not bring" in capsys.readouterr().out


def test_suite_graph_calculus(capsys):
    assert main(["suite", "graph-calculus"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] criterion  1 " in out and "criteria passed" in out
