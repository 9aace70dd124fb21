"""Deterministic round engine, traces, and the stabilization checker."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .digraph import Digraph, _bits
from .dynamic_graph import Schedule, format_schedule
from .minmax import (
    AgentState,
    CutoffFamily,
    ValueDomain,
    agent_init,
    agent_round,
    min_agent_round,
)

ALGORITHMS = ("minmax", "min")


class ConfigError(ValueError):
    pass


def _norm_start(s) -> float:
    if s is None or s == math.inf or s == "inf":
        return math.inf
    s = int(s)
    if s < 1:
        raise ConfigError(f"start rounds must be >= 1, got {s}")
    return s


@dataclass(frozen=True)
class RunConfig:
    domain: ValueDomain
    inputs: tuple
    schedule: Schedule
    starts: tuple = ()
    cutoff: CutoffFamily = field(default_factory=CutoffFamily.half)
    algorithm: str = "minmax"
    horizon: int = 100
    seed: int | None = None

    def __post_init__(self):
        n = self.schedule.n
        object.__setattr__(self, "inputs", tuple(self.inputs))
        starts = tuple(self.starts) or (1,) * n
        object.__setattr__(self, "starts", tuple(_norm_start(s) for s in starts))
        if len(self.inputs) != n:
            raise ConfigError(f"{len(self.inputs)} inputs for {n} nodes")
        if len(self.starts) != n:
            raise ConfigError(f"{len(self.starts)} starts for {n} nodes")
        bad = [v for v in self.inputs if v not in self.domain]
        if bad:
            raise ConfigError(f"inputs {bad} not in value domain")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")

    @property
    def n(self) -> int:
        return self.schedule.n

    @property
    def is_active_run(self) -> bool:
        return all(s != math.inf for s in self.starts)

    def describe(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "cutoff": str(self.cutoff),
            "domain": list(self.domain.values),
            "horizon": self.horizon,
            "inputs": list(self.inputs),
            "schedule": format_schedule(self.schedule),
            "seed": self.seed,
            "starts": ["inf" if s == math.inf else s for s in self.starts],
        }

    def digest(self) -> str:
        blob = json.dumps(self.describe(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RoundRecord:
    round: int
    active: Digraph
    states: tuple[AgentState, ...]


@dataclass
class Trace:
    n: int
    records: list[RoundRecord]
    meta: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return self.records[-1].round

    def ys(self, t: int) -> tuple:
        return tuple(s.y for s in self.records[t].states)

    def xs(self, t: int) -> tuple:
        return tuple(s.x for s in self.records[t].states)

    def active_graphs(self) -> list[Digraph]:
        """``G^a(1..horizon)``."""
        return [r.active for r in self.records[1:]]

    def lines(self, fmt: str = "jsonl") -> list[str]:
        if fmt == "jsonl":
            out = [json.dumps({"meta": self.meta}, sort_keys=True, separators=(",", ":"))]
            out += [json.dumps(_record_dict(r), sort_keys=True, separators=(",", ":")) for r in self.records]
            return out
        if fmt == "text":
            out = [f"# {k}={self.meta[k]}" for k in sorted(self.meta)]
            for r in self.records:
                edges = " ".join(f"{u}>{v}" for u, v in r.active.extra_edges()) or "-"
                out.append(f"round {r.round} edges {edges}")
                for u, s in enumerate(r.states):
                    age = ",".join(str(_age_token(a)) for a in s.age)
                    out.append(f"  {u}: x={s.x} y={s.y} delta={s.delta} counter={s.counter} age=[{age}]")
            return out
        raise ValueError(f"unknown trace format {fmt!r}")

    def dumps(self, fmt: str = "jsonl") -> str:
        return "\n".join(self.lines(fmt)) + "\n"

    def write(self, path: str | Path, fmt: str = "jsonl") -> None:
        Path(path).write_text(self.dumps(fmt), encoding="utf-8")


def _age_token(a):
    return "inf" if a == math.inf else a


def _record_dict(r: RoundRecord) -> dict:
    return {
        "round": r.round,
        "edges": [list(e) for e in r.active.extra_edges()],
        "agents": [
            {
                "x": s.x,
                "y": s.y,
                "delta": s.delta,
                "counter": s.counter,
                "age": [_age_token(a) for a in s.age],
            }
            for s in r.states
        ],
    }


def parse_trace_jsonl(text: str) -> tuple[dict, list[dict]]:
    """Inverse of ``Trace.dumps('jsonl')`` at the record level."""
    lines = [json.loads(line) for line in text.splitlines() if line.strip()]
    meta = lines[0]["meta"]
    records = lines[1:]
    for rec in records:
        for a in rec["agents"]:
            a["age"] = [math.inf if v == "inf" else v for v in a["age"]]
    return meta, records


class Simulation:
    """Round-by-round engine; the graph of each round is supplied by the caller.

    Used directly by adaptive adversaries, and through :func:`run` for fixed
    schedules.
    """

    def __init__(
        self,
        domain: ValueDomain,
        inputs: Sequence,
        starts: Sequence | None = None,
        cutoff: CutoffFamily | None = None,
        algorithm: str = "minmax",
        meta: dict | None = None,
    ):
        n = len(inputs)
        starts = tuple(_norm_start(s) for s in (starts or (1,) * n))
        self.domain = domain
        self.n = n
        self.starts = starts
        self.cutoff = cutoff or CutoffFamily.half()
        self.algorithm = algorithm
        self.t = 0
        states = tuple(agent_init(v, domain, s) for v, s in zip(inputs, starts))
        self.trace = Trace(n, [RoundRecord(0, Digraph.identity(n), states)], dict(meta or {}))

    @property
    def states(self) -> tuple[AgentState, ...]:
        return self.trace.records[-1].states

    def step(self, g: Digraph) -> RoundRecord:
        if g.n != self.n:
            raise ConfigError(f"round digraph has {g.n} nodes, expected {self.n}")
        t = self.t + 1
        mask = sum(1 << u for u, s in enumerate(self.starts) if s <= t)
        active = g.restrict(mask)
        prev = self.states
        new = []
        for u, st in enumerate(prev):
            if not mask >> u & 1:
                new.append(st)
                continue
            senders = list(_bits(active.in_mask(u)))
            if self.algorithm == "minmax":
                new.append(agent_round(st, [prev[v].age for v in senders], self.domain, self.cutoff))
            else:
                new.append(min_agent_round(st, [prev[v].x for v in senders]))
        rec = RoundRecord(t, active, tuple(new))
        self.trace.records.append(rec)
        self.t = t
        return rec


def run(config: RunConfig) -> Trace:
    meta = {"config": config.digest(), "seed": config.seed}
    sim = Simulation(config.domain, config.inputs, config.starts, config.cutoff, config.algorithm, meta)
    for t in range(1, config.horizon + 1):
        sim.step(config.schedule.graph_at(t))
    return sim.trace


@dataclass(frozen=True)
class StabilizationReport:
    """Outcome of a finite-horizon agreement check.

    ``status`` is ``"stabilized"`` (certified to the horizon),
    ``"undetermined"`` (agreement at the end, but for too few rounds) or
    ``"disagreement"`` (outputs differ at the horizon).
    """

    stabilized: bool
    status: str
    round: int | None
    value: object
    validity_ok: bool
    margin: int
    horizon: int

    def to_dict(self) -> dict:
        return {
            "stabilized": self.stabilized,
            "status": self.status,
            "round": self.round,
            "value": self.value,
            "validity_ok": self.validity_ok,
            "margin": self.margin,
            "horizon": self.horizon,
        }


def check_stabilization(trace: Trace, cycle_length: int = 1) -> StabilizationReport:
    n, horizon = trace.n, trace.horizon
    inputs = {s.input for s in trace.records[0].states}
    validity_ok = all(s.y in inputs for r in trace.records for s in r.states)
    margin = max(2 * n, cycle_length)
    final = trace.ys(horizon)
    if horizon < 1 or len(set(final)) != 1:
        return StabilizationReport(False, "disagreement", None, None, validity_ok, margin, horizon)
    s = horizon
    while s > 1 and trace.ys(s - 1) == final:
        s -= 1
    stabilized = horizon - s >= margin
    status = "stabilized" if stabilized else "undetermined"
    return StabilizationReport(stabilized, status, s, final[0], validity_ok, margin, horizon)
