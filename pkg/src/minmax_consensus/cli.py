"""Command-line front end.

Exit codes: 0 success or expected outcome, 1 property failure or expectation
mismatch, 2 usage, parse or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from .digraph import ParseError, is_non_split
from .dynamic_graph import (
    Schedule,
    integral_limit,
    is_rooted_with_delay,
    kernel,
    limit_superior,
    min_delay,
    parse_schedule,
    restrict_to_active,
)
from .minmax import CutoffFamily, DomainError, Oracle, ValueDomain
from .scenarios import (
    AdversaryStall,
    GenerationError,
    adversary_alternating_chains,
    scenario_bounded_delay,
    scenario_empty_kernel,
    scenario_fixed_rooted,
    scenario_non_split,
)
from .simulator import ConfigError, RunConfig, check_stabilization, run
from .suites import MASTER_SEED, SUITES, run_suite

EXPECTATIONS = ("stabilize", "disagree", "oscillate")


class UsageError(Exception):
    pass


def _seed(args, fallback: int | None = None) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MINMAX_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"MINMAX_SEED must be an integer, got {env!r}") from None
    return fallback


def _fmt_set(nodes, n: int) -> str:
    if len(nodes) == n:
        return "all"
    return "{" + ", ".join(str(u) for u in sorted(nodes)) + "}"


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "jsonl":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for key, value in payload.items():
            if isinstance(value, bool):
                value = str(value).lower()
            out.write(f"{key}: {value}\n")


def cmd_analyze(args) -> int:
    try:
        s = parse_schedule(Path(args.schedule).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(str(exc)) from None
    ker = kernel(s)
    delay = min_delay(s, args.max_delay)
    report = {
        "nodes": s.n,
        "prefix": s.prefix_length,
        "cycle": s.period,
        "kernel": _fmt_set(ker, s.n),
        "limit_superior": limit_superior(s).extra_edges(),
        "integral_limit": integral_limit(s).extra_edges(),
        "delay": f"T={delay}" if delay is not None else f"none up to {args.max_delay or 'default cap'}",
        "non_split": [is_non_split(g) for g in s.cycle],
    }
    if args.format == "jsonl":
        report["kernel"] = sorted(ker)
        report["delay"] = delay
        report["limit_superior"] = [list(e) for e in report["limit_superior"]]
        report["integral_limit"] = [list(e) for e in report["integral_limit"]]
    else:
        head = f"kernel: {report['kernel']}"
        if delay is not None:
            head += f", delay T={delay}"
        sys.stdout.write(head + "\n")
        report["limit_superior"] = " ".join(f"{u}>{v}" for u, v in report["limit_superior"]) or "-"
        report["integral_limit"] = " ".join(f"{u}>{v}" for u, v in report["integral_limit"]) or "-"
        report["non_split"] = " ".join("yes" if f else "no" for f in report["non_split"])
    _emit(report, args.format, sys.stdout)
    return 0


def _schedule_from_config(cfg: dict, base: Path, seed: int) -> tuple[Schedule, list | None]:
    given = [k for k in ("schedule", "schedule_file", "scenario") if k in cfg]
    if len(given) != 1:
        raise ConfigError("config needs exactly one of 'schedule', 'schedule_file', 'scenario'")
    if "schedule" in cfg:
        return parse_schedule(str(cfg["schedule"])), None
    if "schedule_file" in cfg:
        path = base / str(cfg["schedule_file"])
        try:
            return parse_schedule(path.read_text(encoding="utf-8")), None
        except OSError as exc:
            raise ConfigError(str(exc)) from None
    sc = dict(cfg["scenario"])
    kind = sc.pop("kind", None)
    try:
        if kind == "fixed_rooted":
            return scenario_fixed_rooted(int(sc["n"]), seed), None
        if kind == "bounded_delay":
            return scenario_bounded_delay(int(sc["n"]), int(sc.get("T", 1)), int(sc.get("L", 1)), seed), None
        if kind == "non_split":
            return scenario_non_split(int(sc["n"]), int(sc.get("L", 1)), seed), None
        if kind == "empty_kernel":
            return scenario_empty_kernel(int(sc["n"]))
    except KeyError as exc:
        raise ConfigError(f"scenario missing field {exc}") from None
    raise ConfigError(f"unknown scenario kind {kind!r}")


def load_run_config(path: Path, seed: int | None, horizon: int | None) -> tuple[RunConfig, str | None]:
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    seed = raw.get("seed", 0) if seed is None else seed
    schedule, scenario_inputs = _schedule_from_config(raw, path.parent, seed)
    n = schedule.n

    if "domain" in raw:
        domain = ValueDomain(raw["domain"])
    else:
        domain = ValueDomain.range(int(raw.get("m", 2)))

    inputs = raw.get("inputs", scenario_inputs)
    if inputs == "random" or inputs is None and scenario_inputs is None:
        rng = np.random.default_rng(seed)
        inputs = [domain.values[int(i)] for i in rng.integers(0, len(domain), size=n)]
    starts = raw.get("starts") or [1] * n
    expect = raw.get("expect")
    if expect is not None and expect not in EXPECTATIONS:
        raise ConfigError(f"expect must be one of {EXPECTATIONS}, got {expect!r}")
    try:
        config = RunConfig(
            domain=domain,
            inputs=inputs,
            schedule=schedule,
            starts=starts,
            cutoff=CutoffFamily.parse(str(raw.get("cutoff", "half"))),
            algorithm=str(raw.get("algorithm", "minmax")),
            horizon=int(horizon if horizon is not None else raw.get("horizon", 100)),
            seed=seed,
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return config, expect


def cmd_run(args) -> int:
    config, expect = load_run_config(Path(args.config), _seed(args), args.horizon)
    trace = run(config)
    rep = check_stabilization(trace, config.schedule.period)
    payload = rep.to_dict()
    if config.is_active_run and config.algorithm == "minmax":
        payload["m_star"] = Oracle(restrict_to_active(config.schedule, config.starts), config.inputs).m_star()
    payload["expect"] = expect
    if expect == "stabilize":
        met = rep.stabilized and payload.get("m_star", rep.value) == rep.value
    elif expect == "disagree":
        met = rep.status == "disagreement"
    elif expect == "oscillate":
        met = not rep.stabilized
    else:
        met = True
    payload["expectation_met"] = met
    if args.out:
        trace.write(args.out, args.format)
    _emit(payload, args.format, sys.stdout)
    return 0 if met else 1


def cmd_adversary(args) -> int:
    try:
        res = adversary_alternating_chains(
            args.n, CutoffFamily.parse(args.cutoff), args.phases, args.phase_budget
        )
        stalled = None
    except AdversaryStall as exc:
        res, stalled = exc.partial, str(exc)
    payload = {
        "n": args.n,
        "cutoff": args.cutoff,
        "phases": res.phases,
        "phase_ends": res.phase_ends,
        "y_v1": [res.trace.records[t].states[1].y for t in res.phase_ends],
        "kernel": sorted(kernel(res.schedule)),
        "stalled": stalled,
    }
    if args.out:
        res.trace.write(args.out, args.format)
    _emit(payload, args.format, sys.stdout)
    return 0 if stalled is None else 1


def cmd_suite(args) -> int:
    if args.name != "all" and args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(SUITES)} or all")
    results = run_suite(args.name, _seed(args, MASTER_SEED))
    for r in results:
        if args.format == "jsonl":
            print(json.dumps({"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}))
        else:
            print(r.line())
    failed = sum(not r.passed for r in results)
    if args.format == "text":
        print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (falls back to $MINMAX_SEED)")
    common.add_argument("--format", choices=("text", "jsonl"), default="text")
    common.add_argument("--out", help="write the trace to this path")

    parser = argparse.ArgumentParser(prog="minmax-consensus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="report kernel, limits and delay of a schedule file")
    p.add_argument("schedule")
    p.add_argument("--max-delay", type=int, default=None, help="cap on the delay search")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("run", parents=[common], help="simulate a run described by a YAML config")
    p.add_argument("config")
    p.add_argument("--horizon", type=int, help="override the config horizon")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("adversary", parents=[common], help="alternating-chains adversary")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--cutoff", default="half")
    p.add_argument("--phases", type=int, default=4)
    p.add_argument("--phase-budget", type=int, default=None)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("suite", parents=[common], help="run an acceptance block")
    p.add_argument("name", help=f"one of {', '.join(SUITES)}, all")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, ParseError, ConfigError, GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
