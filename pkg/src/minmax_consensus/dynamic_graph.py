"""Eventually periodic dynamic graphs and their limit objects.

A :class:`Schedule` is a finite prefix followed by a cycle repeated forever.
Because of this, the limit superior, the integral and the kernel are exactly
computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .digraph import (
    Digraph,
    ParseError,
    SizeMismatchError,
    central_roots,
    format_digraph,
    is_rooted,
    parse_digraph_lines,
    product,
    roots,
    transitive_closure,
)


@dataclass(frozen=True)
class Schedule:
    """Rounds ``1..P`` follow ``prefix``; round ``t > P`` uses ``cycle[(t-P-1) % L]``."""

    prefix: tuple[Digraph, ...]
    cycle: tuple[Digraph, ...]

    def __init__(self, prefix: Iterable[Digraph] = (), cycle: Iterable[Digraph] = ()):
        prefix, cycle = tuple(prefix), tuple(cycle)
        if not cycle:
            raise ValueError("cycle must contain at least one digraph")
        sizes = {g.n for g in prefix + cycle}
        if len(sizes) != 1:
            raise SizeMismatchError(f"schedule mixes node counts {sorted(sizes)}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def constant(cls, g: Digraph) -> Schedule:
        return cls((), (g,))

    @classmethod
    def from_sequence(cls, graphs: Sequence[Digraph]) -> Schedule:
        """Finite trace convention: the last digraph repeats forever."""
        graphs = list(graphs)
        if not graphs:
            raise ValueError("need at least one digraph")
        return cls(graphs[:-1], graphs[-1:])

    @property
    def n(self) -> int:
        return self.cycle[0].n

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def graph_at(self, t: int) -> Digraph:
        if t < 1:
            raise ValueError(f"rounds start at 1, got {t}")
        p = len(self.prefix)
        if t <= p:
            return self.prefix[t - 1]
        return self.cycle[(t - p - 1) % len(self.cycle)]

    def rounds(self, start: int, stop: int) -> list[Digraph]:
        """Digraphs for rounds ``start..stop`` inclusive."""
        return [self.graph_at(t) for t in range(start, stop + 1)]


def graph_at(s: Schedule, t: int) -> Digraph:
    return s.graph_at(t)


def cumulative(s: Schedule, t: int, t2: int) -> Digraph:
    """The product ``G(t) o ... o G(t2)``; self-loops only when ``t2 < t``."""
    if t < 1 or t2 < 0:
        raise ValueError(f"invalid interval [{t}, {t2}]")
    acc = Digraph.identity(s.n)
    for r in range(t, t2 + 1):
        acc = product(acc, s.graph_at(r))
    return acc


def limit_superior(s: Schedule) -> Digraph:
    """Edges occurring in infinitely many rounds: the union of the cycle."""
    acc = s.cycle[0]
    for g in s.cycle[1:]:
        acc = acc.union(g)
    return acc


def integral_limit(s: Schedule) -> Digraph:
    return transitive_closure(limit_superior(s))


def integral_at(s: Schedule, t: int) -> Digraph:
    """Union over ``t' >= t`` of ``G(t:t')``.

    The accumulated product only grows.  Once every round being multiplied in
    comes from the cycle, ``L`` consecutive steps without growth mean the
    accumulated digraph is a fixed point of every cycle digraph, so it is final.
    """
    if t < 1:
        raise ValueError(f"rounds start at 1, got {t}")
    acc = s.graph_at(t)
    p, period = s.prefix_length, s.period
    still = 0
    r = t
    while still < period:
        r += 1
        nxt = product(acc, s.graph_at(r))
        if r > p and nxt == acc:
            still += 1
        else:
            still = 0
        acc = nxt
    return acc


def kernel(s: Schedule) -> frozenset[int]:
    """Nodes that, from any round onward, eventually reach every node."""
    ker = roots(limit_superior(s))
    check = central_roots(integral_limit(s))
    assert ker == check, f"kernel formulas disagree: {sorted(ker)} vs {sorted(check)}"
    return ker


def is_infinitely_connected(s: Schedule) -> bool:
    return len(kernel(s)) == s.n


def is_rooted_with_delay(s: Schedule, T: int) -> bool:
    """Whether every window ``G(t : t+T-1)`` is rooted.

    Windows starting after the prefix repeat with the cycle period, so
    ``t`` in ``[1, P + L]`` covers all of them.
    """
    if T < 1:
        raise ValueError(f"delay must be positive, got {T}")
    return all(is_rooted(cumulative(s, t, t + T - 1)) for t in range(1, s.prefix_length + s.period + 1))


def min_delay(s: Schedule, cap: int | None = None) -> int | None:
    """Smallest ``T <= cap`` for which ``s`` is rooted with delay ``T``, else ``None``.

    Extending a window keeps it rooted (self-loops), so for each start round
    we grow the window until it becomes rooted.  The window product over whole
    cycles can grow at most ``n*n`` times before it is a fixed point, which
    gives the default cap ``P + L*(n*n + 1)``.
    """
    if cap is None:
        cap = s.prefix_length + s.period * (s.n * s.n + 1)
    best = 1
    for t in range(1, s.prefix_length + s.period + 1):
        acc = s.graph_at(t)
        length = 1
        while not is_rooted(acc):
            if length >= cap:
                return None
            acc = product(acc, s.graph_at(t + length))
            length += 1
        best = max(best, length)
    return best


def reach_window(s: Schedule, T: int) -> int:
    """Window length ``T * (n - |Ker|)`` of the bounded-reach property."""
    return T * (s.n - len(kernel(s)))


def window_hits_kernel(s: Schedule, t: int, T: int, ker: frozenset[int] | None = None) -> bool:
    """Whether every node has a kernel in-neighbour in ``G(t : t + T(n-|Ker|))``."""
    ker = kernel(s) if ker is None else ker
    w = cumulative(s, t, t + T * (s.n - len(ker)))
    covered = 0
    for k in ker:
        covered |= w.rows[k]
    return covered == w.full_mask


def bounded_reach_check(s: Schedule, horizon: int, T: int | None = None) -> int | None:
    """Least ``s0 <= horizon`` with the kernel-reach window property on ``[s0, horizon]``.

    ``T`` defaults to the minimal delay of ``s``.  Returns ``None`` when no
    such round exists, including when ``s`` has no bounded delay or an empty
    kernel.
    """
    if T is None:
        T = min_delay(s)
        if T is None:
            return None
    ker = kernel(s)
    if not ker:
        return None
    s0 = None
    for t in range(horizon, 0, -1):
        if not window_hits_kernel(s, t, T, ker):
            break
        s0 = t
    return s0


def restrict_to_active(s: Schedule, starts: Sequence[float]) -> Schedule:
    """The active dynamic graph: at round ``t`` keep only edges between agents with ``start <= t``.

    ``starts`` may contain ``math.inf`` for agents that never start.  The result
    is again eventually periodic: once every finite start has passed, the
    active digraphs follow the (rotated) cycle.
    """
    if len(starts) != s.n:
        raise SizeMismatchError(f"{len(starts)} starts for {s.n} nodes")
    finite = [int(x) for x in starts if x != math.inf]
    last = max(finite, default=1)
    p = max(s.prefix_length, last - 1)

    def active_mask(t: int) -> int:
        return sum(1 << u for u, x in enumerate(starts) if x <= t)

    prefix = [s.graph_at(t).restrict(active_mask(t)) for t in range(1, p + 1)]
    cycle = [s.graph_at(t).restrict(active_mask(t)) for t in range(p + 1, p + s.period + 1)]
    return Schedule(prefix, cycle)


def format_schedule(s: Schedule) -> str:
    parts = [f"prefix {len(s.prefix)}\n"]
    parts += [format_digraph(g) for g in s.prefix]
    parts.append(f"cycle {len(s.cycle)}\n")
    parts += [format_digraph(g) for g in s.cycle]
    return "".join(parts)


def parse_schedule(text: str) -> Schedule:
    """Parse ``prefix K`` + K digraph blocks, then ``cycle L`` + L blocks."""
    lines = []
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((i, stripped))

    pos = 0
    sections: dict[str, list[Digraph]] = {}
    for name in ("prefix", "cycle"):
        if pos >= len(lines):
            raise ParseError(f"missing '{name}' section", lines[-1][0] if lines else None)
        lineno, text_line = lines[pos]
        parts = text_line.split()
        if len(parts) != 2 or parts[0] != name:
            raise ParseError(f"expected '{name} <count>', got {text_line!r}", lineno)
        try:
            count = int(parts[1])
        except ValueError:
            raise ParseError(f"bad {name} count {parts[1]!r}", lineno) from None
        if count < 0 or (name == "cycle" and count < 1):
            raise ParseError(f"invalid {name} count {count}", lineno)
        pos += 1
        blocks = []
        for _ in range(count):
            if pos >= len(lines) or len(lines[pos][1].split()) != 1:
                where = lines[pos][0] if pos < len(lines) else lineno
                raise ParseError(f"expected digraph header in '{name}' section", where)
            start = pos
            pos += 1
            while pos < len(lines) and len(lines[pos][1].split()) == 2 and lines[pos][1].split()[0] not in ("prefix", "cycle"):
                pos += 1
            blocks.append(parse_digraph_lines(lines[start:pos]))
        sections[name] = blocks
    if pos != len(lines):
        raise ParseError(f"unexpected trailing content {lines[pos][1]!r}", lines[pos][0])
    try:
        return Schedule(sections["prefix"], sections["cycle"])
    except ValueError as exc:
        raise ParseError(str(exc)) from None
