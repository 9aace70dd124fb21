"""Static digraphs over a fixed node set, with mandatory self-loops.

Adjacency is held as one Python int per node (bit ``v`` of ``rows[u]`` is set
iff ``(u, v)`` is an edge), so products and closures are bitwise boolean
matrix operations.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

#: Default cap on the node count.
MAX_NODES = 64


class SizeMismatchError(ValueError):
    """Raised when two digraphs over different node counts are combined."""


class ParseError(ValueError):
    """Raised for malformed digraph or schedule text, carrying the line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Digraph:
    """Immutable digraph on nodes ``0..n-1``; every node carries a self-loop."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), *, max_nodes: int = MAX_NODES):
        if n < 1:
            raise ValueError(f"node count must be >= 1, got {n}")
        if n > max_nodes:
            raise ValueError(f"node count {n} exceeds cap {max_nodes}")
        rows = [1 << u for u in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
        self.n = n
        self.rows: tuple[int, ...] = tuple(rows)
        self._hash = hash((n, self.rows))

    @classmethod
    def from_rows(cls, rows: Iterable[int]) -> Digraph:
        rows = list(rows)
        g = cls.__new__(cls)
        n = len(rows)
        if n < 1:
            raise ValueError("node count must be >= 1")
        full = (1 << n) - 1
        g.n = n
        g.rows = tuple((r & full) | (1 << u) for u, r in enumerate(rows))
        g._hash = hash((n, g.rows))
        return g

    @classmethod
    def from_array(cls, adjacency) -> Digraph:
        a = np.asarray(adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {a.shape}")
        return cls.from_rows(sum(1 << int(v) for v in np.flatnonzero(row)) for row in a)

    @classmethod
    def identity(cls, n: int) -> Digraph:
        """Self-loops only."""
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> Digraph:
        full = (1 << n) - 1
        return cls.from_rows([full] * n)

    @classmethod
    def chain(cls, order: Iterable[int], n: int | None = None) -> Digraph:
        """Directed path visiting ``order`` left to right."""
        order = list(order)
        n = len(order) if n is None else n
        return cls(n, zip(order, order[1:]))

    @classmethod
    def out_star(cls, n: int, center: int = 0) -> Digraph:
        return cls(n, ((center, v) for v in range(n)))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def out_neighbors(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def in_mask(self, v: int) -> int:
        bit = 1 << v
        return sum(1 << u for u, r in enumerate(self.rows) if r & bit)

    def in_neighbors(self, v: int) -> list[int]:
        return list(_bits(self.in_mask(v)))

    def edges(self) -> list[tuple[int, int]]:
        """All edges, self-loops included, in lexicographic order."""
        return [(u, v) for u, r in enumerate(self.rows) for v in _bits(r)]

    def extra_edges(self) -> list[tuple[int, int]]:
        """Non-loop edges in lexicographic order."""
        return [(u, v) for u, v in self.edges() if u != v]

    def transpose(self) -> Digraph:
        return Digraph.from_rows(self.in_mask(v) for v in range(self.n))

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> Digraph:
        return Digraph(self.n, self.extra_edges() + list(edges))

    def without_edge(self, u: int, v: int) -> Digraph:
        if u == v:
            raise ValueError(f"self-loop ({u}, {u}) cannot be removed")
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        return Digraph.from_rows(rows)

    def restrict(self, keep: int) -> Digraph:
        """Drop every non-loop edge with an endpoint outside the ``keep`` mask."""
        rows = [(r & keep) if keep >> u & 1 else 0 for u, r in enumerate(self.rows)]
        return Digraph.from_rows(rows)

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            a[u, v] = True
        return a

    def issubgraph(self, other: Digraph) -> bool:
        _check_sizes(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def union(self, other: Digraph) -> Digraph:
        _check_sizes(self, other)
        return Digraph.from_rows(a | b for a, b in zip(self.rows, other.rows))

    def __matmul__(self, other: Digraph) -> Digraph:
        return product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={self.extra_edges()})"


def _check_sizes(g1: Digraph, g2: Digraph) -> None:
    if g1.n != g2.n:
        raise SizeMismatchError(f"node counts differ: {g1.n} != {g2.n}")


def product(g1: Digraph, g2: Digraph) -> Digraph:
    """Edge ``(u, v)`` iff some ``w`` has ``(u, w)`` in ``g1`` and ``(w, v)`` in ``g2``."""
    _check_sizes(g1, g2)
    rows2 = g2.rows
    out = []
    for r in g1.rows:
        acc = 0
        for w in _bits(r):
            acc |= rows2[w]
        out.append(acc)
    return Digraph.from_rows(out)


def transitive_closure(g: Digraph) -> Digraph:
    rows = list(g.rows)
    for k in range(g.n):
        bit = 1 << k
        rk = rows[k]
        for i in range(g.n):
            if rows[i] & bit:
                rows[i] |= rk
    return Digraph.from_rows(rows)


def roots(g: Digraph) -> frozenset[int]:
    """Nodes from which every node is reachable."""
    full = g.full_mask
    return frozenset(u for u, r in enumerate(transitive_closure(g).rows) if r == full)


def central_roots(g: Digraph) -> frozenset[int]:
    """Nodes with a direct edge to every node."""
    full = g.full_mask
    return frozenset(u for u, r in enumerate(g.rows) if r == full)


def is_rooted(g: Digraph) -> bool:
    return bool(roots(g))


def strongly_connected_components(g: Digraph) -> list[list[int]]:
    """SCCs as sorted node lists, ordered by their smallest member."""
    a = csr_matrix(g.to_array())
    _, labels = connected_components(a, directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for u, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(u)
    return sorted(groups.values())


def condensation_sources(g: Digraph) -> list[list[int]]:
    """SCCs with no incoming edge from another SCC.

    Exactly one source exists iff ``g`` is rooted; the source is then the set
    of roots.
    """
    comps = strongly_connected_components(g)
    sources = []
    for comp in comps:
        mask = sum(1 << u for u in comp)
        entering = any(g.rows[w] & mask for w in range(g.n) if not mask >> w & 1)
        if not entering:
            sources.append(comp)
    return sources


def is_non_split(g: Digraph) -> bool:
    """Every pair of nodes shares a common in-neighbour."""
    ins = [g.in_mask(v) for v in range(g.n)]
    return all(ins[u] & ins[v] for u in range(g.n) for v in range(u + 1, g.n))


def format_digraph(g: Digraph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.extra_edges()]
    return "\n".join(lines) + "\n"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_digraph_lines(lines: list[tuple[int, str]]) -> Digraph:
    """Parse ``(lineno, text)`` pairs: a header ``n`` then ``u v`` edge lines."""
    if not lines:
        raise ParseError("empty digraph block")
    lineno, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise ParseError(f"expected node count, got {header!r}", lineno) from None
    edges = []
    for lineno, text in lines[1:]:
        parts = text.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {text!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node in {text!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) out of range for n={n}", lineno)
        edges.append((u, v))
    try:
        return Digraph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc), lines[0][0]) from None


def parse_digraph(text: str) -> Digraph:
    lines = [(i, _strip(raw)) for i, raw in enumerate(text.splitlines(), start=1)]
    return parse_digraph_lines([(i, s) for i, s in lines if s])
