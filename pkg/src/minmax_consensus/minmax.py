"""MinMax agents (AGE-vector form), the Min baseline, and a graph-level oracle.

The agent side only ever sees AGE vectors from in-neighbours.  The
:class:`Oracle` recomputes the same quantities from the active dynamic graph
by temporal reachability, so the two can be compared round by round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .digraph import Digraph, _bits, product
from .dynamic_graph import Schedule, integral_at

INF = math.inf


class DomainError(ValueError):
    pass


class UnsaturatedError(RuntimeError):
    """The requested horizon ends before every ``m_u`` has reached its limit."""


@dataclass(frozen=True)
class ValueDomain:
    """Finite, strictly increasing list of admissible values."""

    values: tuple

    def __init__(self, values):
        values = tuple(values)
        if not values:
            raise DomainError("value domain must be non-empty")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise DomainError("values must be strictly increasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def range(cls, m: int) -> ValueDomain:
        return cls(range(m))

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, value) -> bool:
        return value in self.values

    def index(self, value) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise DomainError(f"{value!r} is not in the value domain") from None


@dataclass(frozen=True)
class AgentState:
    x: object
    y: object
    delta: int
    age: tuple
    counter: int
    input: object
    start: float = 1


def _log_floor(k: int) -> int:
    return k.bit_length() - 1 if k >= 1 else 0


@dataclass(frozen=True)
class CutoffFamily:
    """Difference function ``delta = f(counter)`` with ``0 <= f(k) <= k``.

    ``half`` and ``log`` give safe MinMax algorithms.  ``constant(c)`` is not
    safe: delta stays bounded, so the Max phase window never grows.
    """

    kind: str
    param: int = 0
    func: Callable[[int], int] | None = None

    @classmethod
    def half(cls) -> CutoffFamily:
        return cls("half")

    @classmethod
    def log(cls) -> CutoffFamily:
        return cls("log")

    @classmethod
    def constant(cls, c: int) -> CutoffFamily:
        if c < 0:
            raise ValueError("constant cut-off must be >= 0")
        return cls("constant", c)

    @classmethod
    def custom(cls, func: Callable[[int], int]) -> CutoffFamily:
        return cls("custom", func=func)

    @classmethod
    def parse(cls, text: str) -> CutoffFamily:
        """``half``, ``log`` or ``constant:<c>``."""
        if text in ("half", "log"):
            return cls(text)
        if text.startswith("constant"):
            _, _, c = text.partition(":")
            return cls.constant(int(c or 0))
        raise ValueError(f"unknown cut-off family {text!r}")

    @property
    def safe(self) -> bool:
        return self.kind in ("half", "log")

    def __call__(self, k: int) -> int:
        if self.kind == "half":
            d = k // 2
        elif self.kind == "log":
            d = _log_floor(k)
        elif self.kind == "constant":
            d = self.param
        else:
            d = self.func(k)
        # never look back past the agent's own start
        return max(0, min(d, k))

    def __str__(self) -> str:
        return f"constant:{self.param}" if self.kind == "constant" else self.kind


def agent_init(value, domain: ValueDomain, start: float = 1) -> AgentState:
    i = domain.index(value)
    age = [INF] * len(domain)
    age[i] = 0
    return AgentState(x=value, y=value, delta=0, age=tuple(age), counter=0, input=value, start=start)


def agent_round(
    state: AgentState,
    received: Sequence[Sequence[float]],
    domain: ValueDomain,
    cutoff: CutoffFamily,
) -> AgentState:
    """One round of the AGE-vector scheme.

    ``received`` must contain the agent's own previous vector alongside those
    of its active in-neighbours.
    """
    if not received:
        raise ValueError("received must include the agent's own AGE vector")
    m = len(domain)
    age = [1 + min(vec[i] for vec in received) for i in range(m)]
    xi = next(i for i, a in enumerate(age) if a < INF)
    age[xi] = 0
    counter = state.counter + 1
    delta = cutoff(counter)
    yi = max(i for i, a in enumerate(age) if a <= delta)
    return replace(
        state,
        x=domain.values[xi],
        y=domain.values[yi],
        delta=delta,
        age=tuple(age),
        counter=counter,
    )


def min_agent_round(state: AgentState, received_x: Sequence) -> AgentState:
    """Min baseline: keep the smallest value heard so far (output ``y = x``)."""
    x = min([state.x, *received_x])
    return replace(state, x=x, y=x, counter=state.counter + 1)


class Oracle:
    """Ground truth for ``m_u(t)``, the MinMax output, and their limits.

    ``active`` is the active dynamic graph of a run (see
    :func:`~minmax_consensus.dynamic_graph.restrict_to_active`) and ``inputs``
    the input values indexed by node.
    """

    def __init__(self, active: Schedule, inputs: Sequence):
        if len(inputs) != active.n:
            raise ValueError(f"{len(inputs)} inputs for {active.n} nodes")
        self.active = active
        self.inputs = list(inputs)
        self.n = active.n
        self._cum: dict[int, list[Digraph]] = {}
        self._limits: tuple[list, int] | None = None

    def _product(self, a: int, b: int) -> Digraph:
        # cumulative products G(a:b) cached per starting round
        row = self._cum.setdefault(a, [Digraph.identity(self.n)])
        while len(row) <= b - a + 1:
            row.append(product(row[-1], self.active.graph_at(a + len(row) - 1)))
        return row[b - a + 1]

    def in_set(self, u: int, a: int, b: int) -> frozenset[int]:
        """``In_u(a:b)`` in the active graph; ``{u}`` when ``b < a``."""
        if b < a:
            return frozenset((u,))
        return frozenset(_bits(self._product(a, b).in_mask(u)))

    def m(self, u: int, t: int) -> object:
        """Minimum input heard by ``u`` within rounds ``1..t``."""
        if t < 0:
            raise DomainError(f"round must be >= 0, got {t}")
        return min(self.inputs[v] for v in self.in_set(u, 1, t))

    def y(self, u: int, t: int, theta: int) -> object:
        """MinMax output for cut-off ``theta``: max of ``m_v(theta)`` over ``In_u(theta+1 : t)``."""
        if not 0 <= theta <= t:
            raise DomainError(f"cut-off {theta} outside [0, {t}]")
        return max(self.m(v, theta) for v in self.in_set(u, theta + 1, t))

    def heard_all(self, u: int) -> frozenset[int]:
        """``In_u(1:inf)``."""
        return frozenset(_bits(integral_at(self.active, 1).in_mask(u)))

    def _compute_limits(self) -> tuple[list, int]:
        if self._limits is None:
            total = integral_at(self.active, 1)
            limits = [min(self.inputs[v] for v in _bits(total.in_mask(u))) for u in range(self.n)]
            t = 0
            while any(self.m(u, t) != limits[u] for u in range(self.n)):
                t += 1
            self._limits = (limits, t)
        return self._limits

    def m_star_u(self, u: int) -> object:
        return self._compute_limits()[0][u]

    def m_star(self) -> object:
        return max(self._compute_limits()[0])

    def t_star(self) -> int:
        """First round from which every ``m_u`` equals its limit."""
        return self._compute_limits()[1]

    def certify(self, horizon: int) -> int:
        """Return ``t*``, raising :class:`UnsaturatedError` if it exceeds ``horizon``."""
        t = self.t_star()
        if t > horizon:
            raise UnsaturatedError(f"m values settle at round {t}, beyond horizon {horizon}")
        return t
