"""Hop metric of a graph: BFS, all-pairs distances, intervals, geodesics, balls."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph

UNREACHABLE = 0xFFFF


class UnreachableError(ValueError):
    """Operation needs a connected pair (or graph) and did not get one."""


class GeodesicBudgetExceeded(RuntimeError):
    def __init__(self, cap: int, pair: tuple[int, int] | None = None):
        self.cap = cap
        self.pair = pair
        where = f" for pair {pair}" if pair is not None else ""
        super().__init__(f"more than {cap} geodesics{where}")


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop distances; disconnected pairs hold ``UNREACHABLE``."""

    dist: np.ndarray

    def __post_init__(self) -> None:
        self.dist.setflags(write=False)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __getitem__(self, key):
        return self.dist[key]

    def reachable(self, u: int, v: int) -> bool:
        return self.dist[u, v] != UNREACHABLE

    @property
    def connected(self) -> bool:
        return self.n == 0 or not bool((self.dist == UNREACHABLE).any())

    @property
    def diameter(self) -> int:
        """Largest finite distance."""
        finite = self.dist[self.dist != UNREACHABLE]
        return int(finite.max()) if finite.size else 0


@dataclass(frozen=True)
class GeodesicSegment:
    vertices: tuple[int, ...]

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int32)
    dist[source] = 0
    nbrs = g.simple_neighbors
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in nbrs[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = du
                queue.append(w)
    return dist


def multi_source_distances(g: Graph, sources: Iterable[int]) -> np.ndarray:
    """Distance from every vertex to the nearest source."""
    dist = np.full(g.n, UNREACHABLE, dtype=np.int32)
    queue = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    nbrs = g.simple_neighbors
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in nbrs[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = du
                queue.append(w)
    return dist


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """n BFS runs, delegated to scipy's unweighted shortest-path routine."""
    from scipy.sparse.csgraph import shortest_path

    if g.n == 0:
        return DistanceMatrix(np.zeros((0, 0), dtype=np.int32))
    raw = shortest_path(g.sparse_adjacency(), method="D", directed=False, unweighted=True)
    dist = np.full(raw.shape, UNREACHABLE, dtype=np.int32)
    finite = np.isfinite(raw)
    dist[finite] = raw[finite].astype(np.int32)
    return DistanceMatrix(dist)


def _require_reachable(dm: DistanceMatrix, u: int, v: int) -> int:
    d = int(dm.dist[u, v])
    if d == UNREACHABLE:
        raise UnreachableError(f"{u} and {v} are in different components")
    return d


def interval_mask(dm: DistanceMatrix, u: int, v: int) -> np.ndarray:
    d = _require_reachable(dm, u, v)
    du = dm.dist[u].astype(np.int64)
    dv = dm.dist[v].astype(np.int64)
    return (du != UNREACHABLE) & (du + dv == d)


def interval(g: Graph, dm: DistanceMatrix, u: int, v: int) -> frozenset[int]:
    """Union of all shortest u-v paths: ``{w : d(u,w) + d(w,v) = d(u,v)}``."""
    return frozenset(np.flatnonzero(interval_mask(dm, u, v)).tolist())


def extract_geodesic(g: Graph, dm: DistanceMatrix, u: int, v: int) -> GeodesicSegment:
    """Canonical shortest path: greedy descent taking the smallest-id closer neighbor."""
    d = _require_reachable(dm, u, v)
    to_v = dm.dist[:, v]
    path = [u]
    cur = u
    for remaining in range(d - 1, -1, -1):
        cur = next(w for w in g.simple_neighbors[cur] if to_v[w] == remaining)
        path.append(cur)
    return GeodesicSegment(tuple(path))


def enumerate_geodesics(
    g: Graph, dm: DistanceMatrix, u: int, v: int, cap: int = 10_000
) -> list[GeodesicSegment]:
    """Every shortest u-v vertex sequence, in lexicographic order."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    d = _require_reachable(dm, u, v)
    to_v = dm.dist[:, v]
    nbrs = g.simple_neighbors
    out: list[GeodesicSegment] = []
    path = [u]

    def walk(cur: int, remaining: int) -> None:
        if remaining == 0:
            if len(out) >= cap:
                raise GeodesicBudgetExceeded(cap, (u, v))
            out.append(GeodesicSegment(tuple(path)))
            return
        for w in nbrs[cur]:
            if to_v[w] == remaining - 1:
                path.append(w)
                walk(w, remaining - 1)
                path.pop()

    walk(u, d)
    return out


def count_geodesics(g: Graph, dm: DistanceMatrix) -> np.ndarray:
    """``counts[u, v]`` = number of shortest u-v paths (0 when unreachable)."""
    n = g.n
    dist = dm.dist
    counts = np.zeros((n, n), dtype=object)
    for u in range(n):
        order = np.argsort(dist[u], kind="stable")
        row = counts[u]
        row[u] = 1
        for w in order:
            dw = dist[u, w]
            if dw == UNREACHABLE or w == u:
                continue
            row[w] = sum(row[x] for x in g.simple_neighbors[w] if dist[u, x] == dw - 1)
    return counts


def ball_mask(dist_row: np.ndarray, r: int) -> np.ndarray:
    return dist_row <= r


def ball(g: Graph, distances, p: int, r: int) -> frozenset[int]:
    """``{v : d(p, v) <= r}``; ``distances`` is a DistanceMatrix or p's distance row."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    row = distances.dist[p] if isinstance(distances, DistanceMatrix) else np.asarray(distances)
    return frozenset(np.flatnonzero(row <= r).tolist())


def neighborhood(g: Graph, base: Iterable[int], r: int) -> frozenset[int]:
    """All vertices within hop distance ``r`` of ``base``."""
    base = list(base)
    if not base:
        raise ValueError("neighborhood of an empty set")
    if r < 0:
        raise ValueError("radius must be non-negative")
    dist = multi_source_distances(g, base)
    return frozenset(np.flatnonzero(dist <= r).tolist())


def diameter_pair(g: Graph, dm: DistanceMatrix) -> tuple[int, int, int]:
    """Lexicographically smallest pair attaining the diameter."""
    if not dm.connected:
        raise UnreachableError("graph is disconnected")
    if g.n == 0:
        raise ValueError("empty graph")
    D = int(dm.dist.max())
    flat = int(np.argmax(dm.dist == D))
    p, q = divmod(flat, g.n)
    return p, q, D


def geodesic_bottleneck(g: Graph, dm: DistanceMatrix, weights: np.ndarray) -> np.ndarray:
    """Max over shortest a-b paths of the min vertex weight along the path.

    ``weights`` has shape ``(n,)`` or ``(k, n)`` with non-negative integer
    entries; the result has shape ``(n, n)`` or ``(k, n, n)``, indexed
    ``[..., a, b]``, and holds -1 on unreachable pairs.  Computed by dynamic
    programming over the shortest-path DAG, so no path is enumerated.
    """
    w = np.asarray(weights, dtype=np.int64)
    squeeze = w.ndim == 1
    if squeeze:
        w = w[None, :]
    n = g.n
    dist = dm.dist
    out = np.full((w.shape[0], n, n), -1, dtype=np.int64)
    idx = np.arange(n)
    out[:, idx, idx] = w
    finite = dist != UNREACHABLE
    top = int(dist[finite].max()) if n else 0
    nbr = g.padded_neighbors
    for t in range(1, top + 1):
        A, V = np.nonzero(dist == t)
        if A.size == 0:
            continue
        best = np.full((w.shape[0], A.size), -1, dtype=np.int64)
        for j in range(nbr.shape[1]):
            U = nbr[V, j]
            ok = U >= 0
            Uc = np.where(ok, U, 0)
            ok &= dist[A, Uc] == t - 1
            cand = np.where(ok[None, :], out[:, A, Uc], -1)
            np.maximum(best, cand, out=best)
        out[:, A, V] = np.minimum(w[:, V], best)
    return out[0] if squeeze else out
