from __future__ import annotations

import numpy as np
import pytest

from minmax_consensus.digraph import is_non_split, is_rooted
from minmax_consensus.dynamic_graph import Schedule, is_rooted_with_delay, kernel
from minmax_consensus.minmax import CutoffFamily, ValueDomain
from minmax_consensus.scenarios import (
    AdversaryStall,
    GenerationError,
    adversary_alternating_chains,
    chain_pair,
    random_inputs_and_starts,
    random_schedule,
    scenario_bounded_delay,
    scenario_empty_kernel,
    scenario_fixed_rooted,
    scenario_non_split,
)
from minmax_consensus.simulator import RunConfig, check_stabilization, run


@pytest.mark.parametrize("seed", range(5))
def test_fixed_rooted(seed):
    s = scenario_fixed_rooted(6, seed)
    assert s.period == 1 and not s.prefix and is_rooted(s.cycle[0])
    assert scenario_fixed_rooted(6, seed) == s


@pytest.mark.parametrize("T, L", [(1, 1), (2, 3), (3, 2)])
def test_bounded_delay(T, L):
    s = scenario_bounded_delay(5, T, L, seed=11)
    assert s.period == L and is_rooted_with_delay(s, T)


def test_non_split():
    s = scenario_non_split(5, 3, seed=4)
    assert s.period == 3 and all(is_non_split(g) for g in s.cycle)


def test_generation_budget():
    with pytest.raises(GenerationError):
        scenario_fixed_rooted(6, 0, p=0.0, budget=5)
    with pytest.raises(GenerationError):
        scenario_non_split(4, 1, 0, p=0.0, budget=5)


def test_random_schedule_and_inputs_are_seeded():
    a = random_schedule(4, 2, 3, np.random.default_rng(3))
    assert a == random_schedule(4, 2, 3, np.random.default_rng(3))
    assert a.prefix_length == 2 and a.period == 3
    inputs, starts = random_inputs_and_starts(6, 3, 4, np.random.default_rng(0))
    assert all(0 <= v < 3 for v in inputs) and all(1 <= s <= 4 for s in starts)


@pytest.mark.parametrize("n", [2, 3, 7])
def test_empty_kernel(n):
    s, inputs = scenario_empty_kernel(n)
    assert kernel(s) == frozenset()
    assert set(inputs) == {0, 1}
    cfg = RunConfig(ValueDomain.range(2), inputs, s, horizon=40)
    assert check_stabilization(run(cfg)).status == "disagreement"
    with pytest.raises(ValueError):
        scenario_empty_kernel(1)


def test_non_split_minmax_stabilizes():
    s = scenario_non_split(5, 2, seed=9)
    cfg = RunConfig(ValueDomain.range(3), [2, 0, 1, 2, 1], s, horizon=200)
    assert check_stabilization(run(cfg), s.period).stabilized


def test_chain_pair():
    g, h = chain_pair(4)
    assert g.extra_edges() == [(0, 1), (1, 2), (2, 3)]
    assert set(h.extra_edges()) == {(1, 2), (2, 3), (3, 0)}


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("cutoff", ["half", "log"])
def test_adversary_first_four_phases(n, cutoff):
    res = adversary_alternating_chains(n, CutoffFamily.parse(cutoff))
    assert res.phases == 4
    assert res.phase_values == [1, 0, 1, 0]
    assert [res.trace.records[t].states[1].y for t in res.phase_ends] == [1, 0, 1, 0]
    assert res.phase_ends == [2, 3, 4, 5]
    assert len(res.prefix) == res.phase_ends[-1]
    assert isinstance(res.schedule, Schedule)


def test_adversary_fifth_phase_stalls():
    with pytest.raises(AdversaryStall) as info:
        adversary_alternating_chains(3, max_phases=5, horizon_per_phase=200)
    partial = info.value.partial
    assert partial.phases == 4
    # u has held 0 since round 3 and v1's cut-off never reaches back before it
    assert all(r.states[0].x == 0 for r in partial.trace.records[3:])
    assert all(r.states[1].y == 0 for r in partial.trace.records[5:])
    assert partial.trace.horizon == 205


def test_first_phase_alone_stabilizes_to_one():
    g, _ = chain_pair(3)
    cfg = RunConfig(ValueDomain.range(2), [1, 0, 0], Schedule.constant(g), horizon=50)
    rep = check_stabilization(run(cfg))
    assert rep.stabilized and rep.value == 1


def test_adversary_needs_two_nodes():
    with pytest.raises(ValueError):
        adversary_alternating_chains(1)
