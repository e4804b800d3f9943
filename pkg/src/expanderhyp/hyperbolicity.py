"""Gromov hyperbolicity of graphs: four-point, interval-slimness and thin-triangle measures.

Four-point values are half-integers and are carried doubled (``*_x2``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .metric import (
    DistanceMatrix,
    GeodesicBudgetExceeded,
    UnreachableError,
    all_pairs_distances,
    count_geodesics,
    geodesic_bottleneck,
)

EXACT_FOURPOINT_CAP = 150
THIN_EXACT_CAP = 64
SAMPLE_CHUNK = 1 << 20


class SizeCapError(ValueError):
    pass


def _require_connected(dm: DistanceMatrix) -> None:
    if not dm.connected:
        raise UnreachableError("graph is disconnected")


def _quad_x2(dxy, dzw, dxz, dyw, dxw, dyz):
    """Doubled four-point value: largest pair sum minus the middle one."""
    s1 = dxy + dzw
    s2 = dxz + dyw
    s3 = dxw + dyz
    hi = np.maximum(np.maximum(s1, s2), s3)
    lo = np.minimum(np.minimum(s1, s2), s3)
    mid = s1 + s2 + s3 - hi - lo
    return hi - mid


def delta_fourpoint_exact(
    dm: DistanceMatrix, *, prune: bool = True, allow_large: bool = False
) -> tuple[int, tuple[int, int, int, int]]:
    """Exact doubled four-point delta and the lexicographically smallest witness.

    Scans quadruples x < y < z < w; the (z, w) block for each (x, y) is
    handled as one array.  With ``prune`` a block is skipped when no
    distance inside it exceeds the current doubled best, which is safe
    because a quadruple's doubled value never exceeds its largest distance.
    """
    _require_connected(dm)
    n = dm.n
    if n > EXACT_FOURPOINT_CAP and not allow_large:
        raise SizeCapError(f"exact four-point scan capped at n={EXACT_FOURPOINT_CAP} (got {n})")
    if n < 4:
        # repeated vertices always give 0
        return 0, tuple(min(i, n - 1) for i in range(4))
    d = dm.dist.astype(np.int32)
    # tail_max[k] = max distance among vertices >= k; row_tail[x, y] = max d[x, y:]
    tail_max = np.zeros(n + 1, dtype=np.int32)
    for k in range(n - 1, -1, -1):
        tail_max[k] = max(tail_max[k + 1], int(d[k, k:].max()))
    row_tail = np.maximum.accumulate(d[:, ::-1], axis=1)[:, ::-1]
    triu_cache: dict[int, np.ndarray] = {}

    best = -1
    witness = (0, 1, 2, 3)
    for x in range(n - 3):
        for y in range(x + 1, n - 2):
            lo = y + 1
            if prune and max(int(row_tail[x, x + 1]), int(tail_max[y])) <= best:
                continue
            k = n - lo
            mask = triu_cache.get(k)
            if mask is None:
                mask = triu_cache[k] = np.triu(np.ones((k, k), dtype=bool), 1)
            dx = d[x, lo:]
            dy = d[y, lo:]
            vals = _quad_x2(
                d[x, y], d[lo:, lo:],
                dx[:, None], dy[None, :],
                dx[None, :], dy[:, None],
            )
            vals = np.where(mask, vals, -1)
            flat = int(np.argmax(vals))
            v = int(vals.flat[flat])
            if v > best:
                best = v
                i, j = divmod(flat, k)
                witness = (x, y, lo + i, lo + j)
    return best, witness


def delta_fourpoint_sampled(
    dm: DistanceMatrix, count: int, seed: int
) -> tuple[int, tuple[int, int, int, int]]:
    """Doubled four-point value maximized over ``count`` seeded random quadruples.

    A lower bound on the exact value.
    """
    _require_connected(dm)
    n = dm.n
    if n == 0 or count <= 0:
        return 0, (0, 0, 0, 0)
    d = dm.dist.astype(np.int32)
    rng = np.random.default_rng(seed)
    best = -1
    witness = (0, 0, 0, 0)
    done = 0
    while done < count:
        size = min(SAMPLE_CHUNK, count - done)
        q = rng.integers(0, n, size=(4, size))
        x, y, z, w = q
        vals = _quad_x2(d[x, y], d[z, w], d[x, z], d[y, w], d[x, w], d[y, z])
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = int(vals[i])
            witness = tuple(sorted(int(t) for t in q[:, i]))
        done += size
    return best, witness


def _interval_masks(dm: DistanceMatrix) -> np.ndarray:
    """``I[u, v, w]`` is True when w lies on some shortest u-v path."""
    d = dm.dist.astype(np.int64)
    return d[:, None, :] + d.T[None, :, :] == d[:, :, None]


def _max_over_triples(near: np.ndarray, member: np.ndarray):
    """max over u <= v, w, x with member[u, v, x] of min(near[x, u, w], near[x, v, w]).

    ``near`` is symmetric in its last two axes.  Returns the value and the
    lexicographically smallest maximizing (u, v, w, x).
    """
    n = member.shape[0]
    best = -1
    witness = (0, 0, 0, 0)
    for u in range(n):
        nu = near[:, u, :]  # (x, w)
        for v in range(u, n):
            xs = member[u, v]
            vals = np.minimum(nu, near[:, v, :])  # (x, w)
            vals = np.where(xs[:, None], vals, -1).T  # (w, x)
            flat = int(np.argmax(vals))
            val = int(vals.flat[flat])
            if val > best:
                best = val
                w, x = divmod(flat, n)
                witness = (u, v, w, x)
    return best, witness


def delta_interval_lower(dm: DistanceMatrix):
    """max over triples (u, v, w) and x in I(u, v) of d(x, I(u, w) ∪ I(w, v)).

    Returns ``(value, ((u, v, w), x))``.
    """
    _require_connected(dm)
    n = dm.n
    if n == 0:
        return 0, ((0, 0, 0), 0)
    I = _interval_masks(dm)
    d = dm.dist.astype(np.int64)
    big = np.iinfo(np.int64).max
    # near[x, a, b] = d(x, I(a, b))
    near = np.empty((n, n, n), dtype=np.int64)
    for a in range(n):
        near[:, a, :] = np.where(I[a][None, :, :], d[:, None, :], big).min(axis=2)
    value, (u, v, w, x) = _max_over_triples(near, I)
    return value, ((u, v, w), x)


def delta_thin_exact(g: Graph, dm: DistanceMatrix, geodesic_cap: int | None = None,
                     *, allow_large: bool = False):
    """Vertex-resolution thin-triangle delta over every choice of geodesic sides.

    For a triangle (u, v, w) with sides chosen independently, the worst
    vertex x on side uv sits at distance min(max_g d(x, g) over u-w
    geodesics g, same over w-v geodesics) from the other two sides, so the
    maximum is a bottleneck-path quantity that needs no enumeration.
    ``geodesic_cap`` optionally rejects graphs with a pair having more
    shortest paths than the cap.

    Returns ``(value, ((u, v, w), side, x))`` with side 0 meaning uv.
    """
    _require_connected(dm)
    n = dm.n
    if n > THIN_EXACT_CAP and not allow_large:
        raise SizeCapError(f"exact thin delta capped at n={THIN_EXACT_CAP} (got {n})")
    if n == 0:
        return 0, ((0, 0, 0), 0, 0)
    if geodesic_cap is not None:
        counts = count_geodesics(g, dm)
        for u in range(n):
            for v in range(u, n):
                if counts[u, v] > geodesic_cap:
                    raise GeodesicBudgetExceeded(geodesic_cap, (u, v))
    # far[x, a, b] = max over a-b geodesics of d(x, geodesic)
    far = geodesic_bottleneck(g, dm, dm.dist)
    value, (u, v, w, x) = _max_over_triples(far, _interval_masks(dm))
    return value, ((u, v, w), 0, x)


@dataclass
class HyperbolicityReport:
    n: int
    diameter: int
    delta_fourpoint_x2: int
    delta_interval_lower: int | None
    delta_thin_exact: int | None
    witnesses: dict = field(default_factory=dict)
    mode: str = "exact"

    @property
    def delta_fourpoint(self) -> float:
        return self.delta_fourpoint_x2 / 2

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "diameter": self.diameter,
            "delta_fourpoint_x2": self.delta_fourpoint_x2,
            "delta_interval_lower": self.delta_interval_lower,
            "delta_thin_exact": self.delta_thin_exact,
            "witnesses": self.witnesses,
            "mode": self.mode,
        }


def hyperbolicity_report(
    g: Graph,
    dm: DistanceMatrix | None = None,
    *,
    mode: str = "exact",
    samples: int = 10_000_000,
    seed: int = 0,
    geodesic_cap: int | None = None,
) -> HyperbolicityReport:
    """All three measures; the slower two only where the graph is small enough."""
    dm = dm if dm is not None else all_pairs_distances(g)
    _require_connected(dm)
    if mode == "exact":
        fp, fp_w = delta_fourpoint_exact(dm)
    elif mode == "sampled":
        fp, fp_w = delta_fourpoint_sampled(dm, samples, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    witnesses = {"fourpoint": list(fp_w)}
    lower = thin = None
    if g.n <= EXACT_FOURPOINT_CAP:
        lower, (tri, x) = delta_interval_lower(dm)
        witnesses["interval_lower"] = {"triple": list(tri), "vertex": x}
    if g.n <= THIN_EXACT_CAP:
        thin, (tri, side, x) = delta_thin_exact(g, dm, geodesic_cap)
        witnesses["thin_exact"] = {"triple": list(tri), "side": side, "vertex": x}
    return HyperbolicityReport(g.n, dm.diameter, fp, lower, thin, witnesses, mode)
