"""Schedule generators and the alternating-chains adversary.

Every random generator owns a single ``numpy.random.Generator`` seeded from
its ``seed`` argument.  Digraphs are drawn one at a time; each draw consumes
one ``rng.random((n, n))`` matrix, and a rejected candidate is simply
followed by the next draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import Digraph, is_non_split, is_rooted
from .dynamic_graph import Schedule, is_rooted_with_delay, kernel
from .minmax import CutoffFamily, ValueDomain
from .simulator import Simulation, Trace

DEFAULT_BUDGET = 10_000


class GenerationError(RuntimeError):
    """Rejection sampling ran out of attempts."""


def random_digraph(n: int, p: float, rng: np.random.Generator) -> Digraph:
    """Each non-loop edge present independently with probability ``p``."""
    return Digraph.from_array(rng.random((n, n)) < p)


def random_schedule(n: int, prefix: int, cycle: int, rng: np.random.Generator, p: float | None = None) -> Schedule:
    """Unconstrained random schedule; edge density drawn uniformly from ``[0.05, 0.6]`` if not given."""
    if p is None:
        p = float(rng.uniform(0.05, 0.6))
    graphs = [random_digraph(n, p, rng) for _ in range(prefix + cycle)]
    return Schedule(graphs[:prefix], graphs[prefix:])


def scenario_fixed_rooted(n: int, seed: int, p: float | None = None, budget: int = DEFAULT_BUDGET) -> Schedule:
    """Constant schedule on a random rooted digraph."""
    rng = np.random.default_rng(seed)
    p = 1.5 / n if p is None else p
    for _ in range(budget):
        g = random_digraph(n, p, rng)
        if is_rooted(g):
            return Schedule.constant(g)
    raise GenerationError(f"no rooted digraph on {n} nodes after {budget} draws")


def scenario_bounded_delay(
    n: int, T: int, L: int, seed: int, p: float | None = None, budget: int = DEFAULT_BUDGET
) -> Schedule:
    """Random cycle of ``L`` digraphs, resampled until rooted with delay ``T``.

    The default edge density ``3/(n*T)`` thins the digraphs as ``T`` grows, so
    for ``T > 1`` single digraphs are usually not rooted.
    """
    rng = np.random.default_rng(seed)
    p = min(1.0, 3.0 / (n * T)) if p is None else p
    for _ in range(budget):
        s = Schedule((), [random_digraph(n, p, rng) for _ in range(L)])
        if is_rooted_with_delay(s, T):
            return s
    raise GenerationError(f"no cycle rooted with delay {T} (n={n}, L={L}) after {budget} draws")


def scenario_non_split(n: int, L: int, seed: int, p: float | None = None, budget: int = DEFAULT_BUDGET) -> Schedule:
    """Random cycle in which every digraph is non-split."""
    rng = np.random.default_rng(seed)
    p = 0.6 if p is None else p
    cycle = []
    tries = 0
    while len(cycle) < L:
        if tries >= budget:
            raise GenerationError(f"no non-split digraph on {n} nodes after {budget} draws")
        tries += 1
        g = random_digraph(n, p, rng)
        if is_non_split(g):
            cycle.append(g)
    return Schedule((), cycle)


def scenario_empty_kernel(n: int) -> tuple[Schedule, list[int]]:
    """Two disjoint directed cycles, inputs 0 on the first and 1 on the second."""
    if n < 2:
        raise ValueError("need at least two nodes for two source components")
    half = n // 2
    left, right = list(range(half)), list(range(half, n))
    edges = []
    for comp in (left, right):
        if len(comp) > 1:
            edges += list(zip(comp, comp[1:] + comp[:1]))
    s = Schedule.constant(Digraph(n, edges))
    assert not kernel(s)
    inputs = [0] * half + [1] * (n - half)
    return s, inputs


def random_inputs_and_starts(
    n: int, m: int, max_start: int, rng: np.random.Generator
) -> tuple[list[int], list[int]]:
    """Inputs uniform on ``0..m-1`` then starts uniform on ``1..max_start``."""
    inputs = [int(v) for v in rng.integers(0, m, size=n)]
    starts = [int(s) for s in rng.integers(1, max_start + 1, size=n)]
    return inputs, starts


def chain_pair(n: int) -> tuple[Digraph, Digraph]:
    """``G``: chain ``0 -> 1 -> ... -> n-1``; ``H``: chain ``1 -> ... -> n-1 -> 0``.

    Node 0 plays ``u`` and node 1 plays ``v1``.
    """
    g = Digraph.chain(range(n))
    h = Digraph.chain(list(range(1, n)) + [0])
    return g, h


@dataclass
class AdversaryResult:
    trace: Trace
    prefix: list[Digraph]
    phase_ends: list[int]
    phase_values: list[int]

    @property
    def schedule(self) -> Schedule:
        """Realized prefix followed by the ``[G, H]`` cycle."""
        g, h = chain_pair(self.trace.n)
        return Schedule(self.prefix, (g, h))

    @property
    def phases(self) -> int:
        return len(self.phase_ends)


class AdversaryStall(RuntimeError):
    """A phase did not reach its target output within its round budget."""

    def __init__(self, message: str, partial: AdversaryResult):
        super().__init__(message)
        self.partial = partial


def adversary_alternating_chains(
    n: int,
    cutoff: CutoffFamily | None = None,
    max_phases: int = 4,
    horizon_per_phase: int | None = None,
) -> AdversaryResult:
    """Play ``G`` until ``y_v1 = 1``, then ``H`` until ``y_v1 = 0``, and so on.

    Inputs are 1 at ``u`` and 0 elsewhere; all agents start at round 1.  The
    phase budget is ``horizon_per_phase`` or, by default,
    ``10 * n * (previous phase length + 1)`` rounds.
    """
    if n < 2:
        raise ValueError("adversary needs n >= 2")
    cutoff = cutoff or CutoffFamily.half()
    g, h = chain_pair(n)
    inputs = [1] + [0] * (n - 1)
    sim = Simulation(ValueDomain((0, 1)), inputs, cutoff=cutoff, meta={"adversary": "alternating_chains", "n": n, "cutoff": str(cutoff)})
    result = AdversaryResult(sim.trace, [], [], [])
    prev_len = 0
    for phase in range(max_phases):
        graph, target = (g, 1) if phase % 2 == 0 else (h, 0)
        budget = horizon_per_phase if horizon_per_phase is not None else 10 * n * (prev_len + 1)
        begin = sim.t
        while True:
            if sim.t - begin >= budget:
                raise AdversaryStall(
                    f"phase {phase + 1} ({'G' if target else 'H'}) did not bring y_v1 to {target} "
                    f"within {budget} rounds (rounds {begin + 1}..{sim.t})",
                    result,
                )
            sim.step(graph)
            result.prefix.append(graph)
            if sim.states[1].y == target:
                break
        result.phase_ends.append(sim.t)
        result.phase_values.append(target)
        prev_len = sim.t - begin
    return result
