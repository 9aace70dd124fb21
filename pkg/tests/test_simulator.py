from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from minmax_consensus.digraph import Digraph
from minmax_consensus.dynamic_graph import Schedule, restrict_to_active
from minmax_consensus.minmax import CutoffFamily, Oracle, ValueDomain
from minmax_consensus.simulator import (
    ConfigError,
    RunConfig,
    Simulation,
    check_stabilization,
    parse_trace_jsonl,
    run,
)

from conftest import schedules

D3 = ValueDomain.range(3)


def config(schedule, inputs, **kw):
    return RunConfig(domain=D3, inputs=inputs, schedule=schedule, **kw)


def test_single_agent():
    trace = run(config(Schedule.constant(Digraph(1)), [2], horizon=5))
    assert trace.ys(5) == (2,)
    rep = check_stabilization(trace)
    assert rep.stabilized and rep.margin == 2 and rep.round == 1 and rep.value == 2


def test_all_equal_inputs_stabilize_at_round_one():
    trace = run(config(Schedule.constant(Digraph.chain(range(3))), [1, 1, 1], horizon=20))
    rep = check_stabilization(trace)
    assert rep.stabilized and rep.round == 1 and rep.value == 1 and rep.validity_ok


def test_short_horizon_is_undetermined():
    trace = run(config(Schedule.constant(Digraph.complete(3)), [0, 1, 2], horizon=3))
    rep = check_stabilization(trace)
    assert rep.status == "undetermined" and not rep.stabilized and rep.margin == 6


def test_disagreement():
    s = Schedule.constant(Digraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)]))
    trace = run(config(s, [0, 0, 1, 1], horizon=30))
    rep = check_stabilization(trace)
    assert rep.status == "disagreement" and rep.round is None and rep.value is None


def test_margin_uses_cycle_length():
    trace = run(config(Schedule.constant(Digraph.complete(2)), [0, 1], horizon=40))
    assert check_stabilization(trace, cycle_length=9).margin == 9


def test_staggered_starts_match_oracle():
    s = Schedule.constant(Digraph.complete(3))
    cfg = config(s, [0, 2, 2], starts=[5, 1, 1], horizon=60)
    trace = run(cfg)
    # agent 0 is frozen until it starts
    assert all(trace.records[t].states[0].counter == 0 for t in range(5))
    assert trace.records[3].active == Digraph(3, [(1, 2), (2, 1)])
    rep = check_stabilization(trace)
    assert rep.stabilized
    assert rep.value == Oracle(restrict_to_active(s, cfg.starts), cfg.inputs).m_star()


def test_never_starting_agent_is_passive():
    s = Schedule.constant(Digraph.complete(3))
    trace = run(config(s, [0, 1, 2], starts=[math.inf, 1, 1], horizon=20))
    assert trace.records[20].states[0] == trace.records[0].states[0]
    assert trace.ys(20)[1:] == (1, 1)


@given(schedules(max_n=4), st.data())
@settings(max_examples=40, deadline=None)
def test_outputs_are_inputs_and_runs_are_deterministic(s, data):
    inputs = data.draw(st.lists(st.integers(0, 2), min_size=s.n, max_size=s.n))
    starts = data.draw(st.lists(st.integers(1, 4), min_size=s.n, max_size=s.n))
    cfg = config(s, inputs, starts=starts, horizon=15, cutoff=CutoffFamily.log())
    a, b = run(cfg), run(cfg)
    assert a.dumps() == b.dumps()
    assert check_stabilization(a).validity_ok


def test_trace_jsonl_roundtrip():
    cfg = config(Schedule.constant(Digraph.chain(range(3))), [2, 0, 1], starts=[1, 2, "inf"], horizon=4, seed=7)
    trace = run(cfg)
    meta, records = parse_trace_jsonl(trace.dumps("jsonl"))
    assert meta == {"config": cfg.digest(), "seed": 7}
    assert len(records) == 5
    assert records[0]["agents"][0]["age"] == [math.inf, math.inf, 0]
    for rec, orig in zip(records, trace.records):
        assert [a["age"] for a in rec["agents"]] == [list(s.age) for s in orig.states]
        assert rec["edges"] == [list(e) for e in orig.active.extra_edges()]


def test_text_trace_format():
    trace = run(config(Schedule.constant(Digraph.chain(range(2))), [1, 0], horizon=2))
    text = trace.dumps("text")
    assert "round 1 edges 0>1" in text
    assert "age=[inf,0,inf]" in text
    with pytest.raises(ValueError):
        trace.dumps("xml")


def test_digest_depends_on_config():
    s = Schedule.constant(Digraph.chain(range(2)))
    assert config(s, [0, 1]).digest() == config(s, [0, 1]).digest()
    assert config(s, [0, 1]).digest() != config(s, [1, 0]).digest()


@pytest.mark.parametrize(
    "kw",
    [
        {"inputs": [0, 1]},
        {"inputs": [0, 1, 5]},
        {"inputs": [0, 1, 2], "starts": [1, 1]},
        {"inputs": [0, 1, 2], "starts": [0, 1, 1]},
        {"inputs": [0, 1, 2], "horizon": 0},
        {"inputs": [0, 1, 2], "algorithm": "max"},
    ],
)
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        config(Schedule.constant(Digraph(3)), **kw)


def test_step_rejects_wrong_size():
    sim = Simulation(D3, [0, 1])
    with pytest.raises(ConfigError):
        sim.step(Digraph(3))
