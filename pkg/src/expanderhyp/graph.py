"""Immutable multigraph type, edge-list I/O and vertex-deletion surgery.

Loop convention: a loop at ``v`` contributes exactly one entry ``v`` to
``adjacency[v]`` and counts 1 toward the degree of ``v``.  Parallel edges
show up as repeated entries.  Neither affects hop distances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_VERTICES = 65535


class GraphFormatError(ValueError):
    """Malformed edge-list document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(GraphFormatError):
    """A vertex id outside ``0..n-1``."""


@dataclass(frozen=True)
class Graph:
    """Finite undirected graph; loops and repeated edges allowed."""

    n: int
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency length must equal n")
        if self.n > MAX_VERTICES:
            raise ValueError(f"n={self.n} exceeds the {MAX_VERTICES} vertex cap")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]]) -> "Graph":
        """Build from explicit (possibly unsorted) neighbor lists, checking symmetry."""
        n = len(adjacency)
        adj = tuple(tuple(sorted(a)) for a in adjacency)
        counts: dict[tuple[int, int], int] = {}
        for u, nbrs in enumerate(adj):
            for v in nbrs:
                if not 0 <= v < n:
                    raise VertexRangeError(f"neighbor {v} of {u} out of range for n={n}")
                counts[(u, v)] = counts.get((u, v), 0) + 1
        for (u, v), c in counts.items():
            if u != v and counts.get((v, u), 0) != c:
                raise ValueError(f"adjacency is not symmetric at ({u}, {v})")
        return cls(n, adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def simple_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Distinct non-loop neighbors; what the metric actually sees."""
        return tuple(
            tuple(sorted({w for w in nbrs if w != v})) for v, nbrs in enumerate(self.adjacency)
        )

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)
        deg.setflags(write=False)
        return deg

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    @property
    def num_edges(self) -> int:
        return len(self.edges())

    def edges(self) -> list[tuple[int, int]]:
        """Edge multiset as (u, v) with u <= v, sorted."""
        out = []
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v >= u:
                    out.append((u, v))
        return out

    @cached_property
    def padded_neighbors(self) -> np.ndarray:
        """``n x k`` array of simple neighbors padded with -1 (k = max simple degree)."""
        width = max((len(a) for a in self.simple_neighbors), default=0)
        out = np.full((self.n, max(width, 1)), -1, dtype=np.int64)
        for v, nbrs in enumerate(self.simple_neighbors):
            out[v, : len(nbrs)] = nbrs
        out.setflags(write=False)
        return out

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        """Dense adjacency with multiplicities; a loop adds 1 on the diagonal."""
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                a[u, v] += 1.0
        a.setflags(write=False)
        return a

    def sparse_adjacency(self):
        from scipy.sparse import csr_matrix

        rows = np.repeat(np.arange(self.n), self.degrees)
        cols = np.fromiter((v for a in self.adjacency for v in a), dtype=np.int64,
                           count=int(self.degrees.sum()))
        data = np.ones(len(cols), dtype=np.float64)
        # duplicate (row, col) entries are summed by csr_matrix
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def load_graph(text: str) -> Graph:
    """Parse an edge-list document (``p <n> <m>`` header, then ``e <u> <v>`` lines)."""
    n: int | None = None
    m = 0
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(parts) != 3:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("non-integer header field", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("negative header field", lineno)
            if n > MAX_VERTICES:
                raise GraphFormatError(f"n={n} exceeds the {MAX_VERTICES} vertex cap", lineno)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge before header", lineno)
            if len(parts) != 3:
                raise GraphFormatError("edge must be 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("non-integer vertex id", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"vertex id out of range for n={n}", lineno)
            edges.append((u, v))
        else:
            raise GraphFormatError(f"unknown line tag {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing header")
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def emit(g: Graph) -> str:
    """Canonical edge-list document: edges sorted by (min, max) endpoint."""
    edges = g.edges()
    lines = [f"p {g.n} {len(edges)}"]
    lines.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


@dataclass(frozen=True)
class VertexMap:
    """Id correspondence between a graph and an induced subgraph."""

    new_to_old: np.ndarray
    old_to_new: np.ndarray  # -1 for removed vertices

    def to_old(self, v: int) -> int:
        return int(self.new_to_old[v])

    def to_new(self, v: int) -> int | None:
        w = int(self.old_to_new[v])
        return None if w < 0 else w


def remove_vertices(g: Graph, cut: Iterable[int]) -> tuple[Graph, VertexMap]:
    """Induced subgraph on the complement of ``cut``, plus the id mapping."""
    removed = np.zeros(g.n, dtype=bool)
    for v in cut:
        if not 0 <= v < g.n:
            raise VertexRangeError(f"vertex {v} out of range for n={g.n}")
        removed[v] = True
    if g.n and removed.all():
        raise ValueError("cannot remove every vertex")
    keep = np.flatnonzero(~removed)
    old_to_new = np.full(g.n, -1, dtype=np.int64)
    old_to_new[keep] = np.arange(len(keep))
    adj = tuple(
        tuple(int(old_to_new[w]) for w in g.adjacency[v] if not removed[w]) for v in keep
    )
    keep.setflags(write=False)
    old_to_new.setflags(write=False)
    return Graph(len(keep), adj), VertexMap(keep, old_to_new)
