"""Cylinder removal along a diametral geodesic, with ball-growth audits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..expansion import expansion_lower_bound, spectral_lambda2
from ..graph import Graph, remove_vertices
from ..metric import (
    UNREACHABLE,
    DistanceMatrix,
    UnreachableError,
    all_pairs_distances,
    bfs_distances,
    diameter_pair,
    extract_geodesic,
    multi_source_distances,
)
from .constants import choose_alpha, longpath_bound

CYLINDER_COLUMNS = ("n", "D", "alpha", "h_used", "cyl_size", "d_before", "d_after",
                    "disconnected", "degenerate", "growth_all_ok")


@dataclass
class GrowthRow:
    r: int
    ball: int
    prev: int
    below_half: bool  # |B(r-1)| < n/2
    small_cylinder: bool  # |C| < |B(r-1)| * h/2
    grows: bool  # |B(r)| >= |B(r-1)| * (1 + h/2)
    pre_regime: bool  # r < D/3 - radius and below_half
    pre_grows: bool  # |B(r)| >= |B(r-1)| * (1 + h)

    @property
    def ok(self) -> bool:
        if self.below_half and self.small_cylinder and not self.grows:
            return False
        return not (self.pre_regime and not self.pre_grows)


@dataclass
class CylinderRecord:
    n: int
    D: int
    p: int
    q: int
    p_third: int
    q_third: int
    alpha: float
    radius: int
    h_used: float
    max_degree: int
    cyl_size: int
    removed_n: int
    d_before: int
    d_after: int  # UNREACHABLE when removal separates p from q
    degenerate: bool
    growth_trace: list[GrowthRow] = field(default_factory=list)
    predicted_detour: float | None = None

    @property
    def disconnected(self) -> bool:
        return self.d_after == UNREACHABLE

    @property
    def cyl_bound(self) -> int:
        return (self.D // 3 + 1) * self.max_degree ** self.radius

    @property
    def cyl_bound_ok(self) -> bool:
        return self.cyl_size <= self.cyl_bound

    @property
    def growth_all_ok(self) -> bool:
        return all(row.ok for row in self.growth_trace)

    def row(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "alpha": repr(self.alpha),
            "h_used": repr(self.h_used),
            "cyl_size": self.cyl_size,
            "d_before": self.d_before,
            "d_after": "" if self.disconnected else self.d_after,
            "disconnected": int(self.disconnected),
            "degenerate": int(self.degenerate),
            "growth_all_ok": int(self.growth_all_ok),
        }


def growth_trace(
    dist_p: np.ndarray, n: int, cyl_size: int, h: float, pre_limit: float
) -> list[GrowthRow]:
    """Ball sizes around p in the surgered graph, radius by radius, until they stop growing."""
    finite = dist_p[dist_p != UNREACHABLE]
    counts = np.bincount(finite) if finite.size else np.zeros(1, dtype=np.int64)
    sizes = np.cumsum(counts)
    rows = []
    for r in range(1, len(sizes) + 1):
        cur = int(sizes[min(r, len(sizes) - 1)])
        prev = int(sizes[r - 1])
        below_half = prev < n / 2
        rows.append(GrowthRow(
            r=r,
            ball=cur,
            prev=prev,
            below_half=below_half,
            small_cylinder=cyl_size < prev * h / 2,
            grows=cur >= prev * (1 + h / 2),
            pre_regime=below_half and r < pre_limit,
            pre_grows=cur >= prev * (1 + h),
        ))
    return rows


def run_cylinder_experiment(
    g: Graph,
    alpha: float | None = None,
    h: float | None = None,
    *,
    dm: DistanceMatrix | None = None,
    delta: float | None = None,
) -> CylinderRecord:
    """Cut the (alpha*D)-neighborhood of the middle third of a diametral geodesic.

    ``alpha``/``h`` of None mean automatic: h is the spectral certificate and
    alpha comes from :func:`choose_alpha`.  ``delta``, if given, adds the
    predicted detour length for comparison with ``d_after``.
    """
    dm = dm if dm is not None else all_pairs_distances(g)
    if not dm.connected:
        raise UnreachableError("cylinder experiment needs a connected graph")
    if h is None:
        h = expansion_lower_bound(g, spectral_lambda2(g))
    if alpha is None:
        alpha = choose_alpha(g.max_degree, h)
    p, q_far, D_full = diameter_pair(g, dm)
    geo = extract_geodesic(g, dm, p, q_far)
    # slide q back along the geodesic so that D is a multiple of 3
    D = 3 * (D_full // 3)
    q = geo[D]
    third = D // 3
    p_third, q_third = geo[third], geo[2 * third]
    radius = math.ceil(alpha * D)
    segment = geo.vertices[third : 2 * third + 1]
    cyl_dist = multi_source_distances(g, segment)
    cylinder = np.flatnonzero(cyl_dist <= radius)
    degenerate = D < 6 or bool(cyl_dist[p] <= radius) or bool(cyl_dist[q] <= radius)
    cut = [int(v) for v in cylinder if v != p and v != q]
    sub, vmap = remove_vertices(g, cut)
    sp, sq = vmap.to_new(p), vmap.to_new(q)
    dist_sub = bfs_distances(sub, sp)
    d_after = int(dist_sub[sq])
    record = CylinderRecord(
        n=g.n, D=D, p=p, q=q, p_third=p_third, q_third=q_third,
        alpha=float(alpha), radius=radius, h_used=float(h), max_degree=g.max_degree,
        cyl_size=len(cylinder), removed_n=sub.n, d_before=int(dm.dist[p, q]),
        d_after=d_after, degenerate=degenerate,
    )
    record.growth_trace = growth_trace(dist_sub, g.n, len(cylinder), float(h), D / 3 - radius)
    if delta is not None and delta > 0 and D > 0:
        record.predicted_detour = longpath_bound(D, radius, delta)[0]
    return record
