"""Empirical checks of the four elementary hyperbolic-space lemmas on finite graphs.

Every audit compares a measured vertex-resolution quantity against the
lemma's bound with its explicit constant, plus an additive ``slack``
absorbing the gap between vertex paths and continuous geodesics.  Margins
are ``bound - measured`` (for the detour audit ``measured - bound``), so a
negative margin is a counterexample.

Quantifiers over "every geodesic" are evaluated with the bottleneck dynamic
program of :func:`expanderhyp.metric.geodesic_bottleneck` instead of
enumerating paths, so the audits have no geodesic budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..graph import Graph, remove_vertices
from ..metric import (
    DistanceMatrix,
    UnreachableError,
    all_pairs_distances,
    bfs_distances,
    extract_geodesic,
    geodesic_bottleneck,
    multi_source_distances,
    UNREACHABLE,
)
from .constants import LEDGER

LEMMAS = ("isoc", "skeleton", "balldetour", "segment")
AUDIT_COLUMNS = ("lemma", "n", "family", "delta", "slack", "cases_checked", "worst_margin",
                 "counterexample")

ALL_PAIRS_LIMIT = 32
DETOUR_ALL_PAIRS_LIMIT = 64
WALK_ATTEMPTS = 200


@dataclass
class LemmaAuditReport:
    lemma: str
    delta_used: int
    slack: int
    n: int = 0
    cases_checked: int = 0
    worst_margin: float | None = None
    counterexample: tuple | None = None
    skipped: int = 0
    partial: bool = False
    detail: dict = field(default_factory=dict)

    def _see(self, margin: float, config: tuple) -> None:
        self.cases_checked += 1
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
            if margin < 0:
                self.counterexample = config

    def _see_many(self, margins: np.ndarray, configs: np.ndarray) -> None:
        """Vectorized :meth:`_see`; ``configs`` rows are in lexicographic order."""
        if margins.size == 0:
            return
        i = int(np.argmin(margins))
        self.cases_checked += int(margins.size) - 1
        self._see(float(margins[i]), tuple(int(v) for v in configs[i]))

    @property
    def failed(self) -> bool:
        return self.counterexample is not None

    def row(self, family: str = "") -> dict:
        wm = self.worst_margin
        if wm is not None and float(wm).is_integer():
            wm = int(wm)
        return {
            "lemma": self.lemma,
            "n": self.n,
            "family": family,
            "delta": self.delta_used,
            "slack": self.slack,
            "cases_checked": self.cases_checked,
            "worst_margin": "" if wm is None else repr(wm),
            "counterexample": "" if self.counterexample is None
            else " ".join(str(v) for v in self.counterexample),
        }


def _pairs(n: int, limit: int, samples: int, rng: np.random.Generator):
    if n <= limit:
        return list(combinations(range(n), 2))
    out = []
    for _ in range(samples):
        p, q = rng.choice(n, size=2, replace=False)
        out.append((int(min(p, q)), int(max(p, q))))
    return sorted(set(out))


def audit_lemma_isoc(g: Graph, dm: DistanceMatrix, delta: int, slack: int = 2) -> LemmaAuditReport:
    """Both endpoints of a geodesic nearest to z  =>  they are within K*delta (+slack)."""
    report = LemmaAuditReport("isoc", delta, slack, n=g.n)
    bound = LEDGER.K * delta + slack
    d = dm.dist.astype(np.int64)
    far = geodesic_bottleneck(g, dm, dm.dist)  # far[z, a, b]
    for a in range(g.n):
        b = np.arange(a, g.n)
        # (z, b) grid: z equidistant from a and b, and no geodesic vertex strictly closer
        hit = (d[:, a][:, None] == d[:, b]) & (far[:, a, b] == d[:, a][:, None])
        bidx, zs = np.nonzero(hit.T)  # ordered by b, then z
        if zs.size == 0:
            continue
        bs = b[bidx]
        margins = bound - d[a, bs]
        configs = np.stack([np.full_like(bs, a), bs, zs], axis=1)
        report._see_many(margins, configs)
    return report


def _self_avoiding_walk(g: Graph, p: int, q: int, rng: np.random.Generator) -> list[int] | None:
    nbrs = g.simple_neighbors
    for _ in range(WALK_ATTEMPTS):
        walk = [p]
        seen = {p}
        cur = p
        while cur != q:
            options = [w for w in nbrs[cur] if w not in seen]
            if not options:
                break
            cur = options[int(rng.integers(len(options)))]
            walk.append(cur)
            seen.add(cur)
        else:
            return walk
    return None


def projection_gap(dm: DistanceMatrix, geodesic, path) -> int:
    """Largest gap between consecutive geodesic positions that are nearest points of path vertices."""
    sub = dm.dist[np.asarray(path)][:, np.asarray(geodesic)]
    nearest = sub == sub.min(axis=1, keepdims=True)
    positions = np.flatnonzero(nearest.any(axis=0))
    if len(positions) < 2:
        return 0
    return int(np.diff(positions).max())


def audit_lemma_skeleton(
    g: Graph,
    dm: DistanceMatrix,
    delta: int,
    slack: int = 2,
    path_samples: int = 4,
    seed: int = 0,
    pair_samples: int = 256,
) -> LemmaAuditReport:
    """Nearest-point projections of any p-q path leave no window longer than C*delta (+slack)."""
    if path_samples < 1:
        raise ValueError("path_samples must be >= 1")
    report = LemmaAuditReport("skeleton", delta, slack, n=g.n)
    bound = LEDGER.C_skeleton * delta + slack
    rng = np.random.default_rng(seed)
    for p, q in _pairs(g.n, ALL_PAIRS_LIMIT, pair_samples, rng):
        geo = extract_geodesic(g, dm, p, q).vertices
        paths = [geo]
        for _ in range(path_samples):
            walk = _self_avoiding_walk(g, p, q, rng)
            if walk is None:
                report.skipped += 1
            else:
                paths.append(tuple(walk))
        for k, beta in enumerate(paths):
            report._see(bound - projection_gap(dm, geo, beta), (p, q, k))
    return report


def audit_lemma_balldetour(
    g: Graph,
    dm: DistanceMatrix,
    delta: int,
    slack: int = 2,
    seed: int = 0,
    pair_samples: int = 256,
) -> LemmaAuditReport:
    """A p-q path staying R away from a point of a p-q geodesic has length >= delta*2^(R/delta).

    For every point r of the canonical geodesic and R = 1..d(r, {p, q}) the
    shortest p-q path outside the open ball of radius R around r is
    measured.  ``delta == 0`` records lengths without checking.
    """
    report = LemmaAuditReport("balldetour", delta, slack, n=g.n)
    rng = np.random.default_rng(seed)
    blocked = 0
    min_detour = None
    violations = {False: 0, True: 0}
    cache: dict[tuple[int, int], tuple] = {}

    def detour(r: int, R: int, p: int, q: int) -> int:
        # the path must stay at distance >= R from r
        if dm.dist[r, p] < R or dm.dist[r, q] < R:
            return UNREACHABLE
        if (r, R) not in cache:
            sub, vmap = remove_vertices(g, np.flatnonzero(dm.dist[r] < R).tolist())
            cache[(r, R)] = (sub, vmap, {})
        sub, vmap, rows = cache[(r, R)]
        sp, sq = vmap.to_new(p), vmap.to_new(q)
        if sp not in rows:
            rows[sp] = bfs_distances(sub, sp)
        return int(rows[sp][sq])

    for p, q in _pairs(g.n, DETOUR_ALL_PAIRS_LIMIT, pair_samples, rng):
        geo = extract_geodesic(g, dm, p, q).vertices
        for r in geo:
            reach = min(int(dm.dist[r, p]), int(dm.dist[r, q]))
            for R in range(1, reach + 1):
                L = detour(r, R, p, q)
                if L == UNREACHABLE:
                    blocked += 1
                    continue
                min_detour = L if min_detour is None else min(min_detour, L)
                if delta > 0:
                    margin = L - delta * 2.0 ** ((R - slack) / delta)
                    report._see(margin, (p, q, r, R))
                    if margin < 0:
                        violations[R >= delta] += 1
                else:
                    report.cases_checked += 1
    # the inequality is only sharp once R >= delta; split violations by regime
    report.detail = {"blocked": blocked, "min_detour": min_detour,
                     "violations_r_below_delta": violations[False],
                     "violations_r_at_least_delta": violations[True]}
    return report


def audit_lemma_segment(g: Graph, dm: DistanceMatrix, delta: int, slack: int = 2) -> LemmaAuditReport:
    """Far-apart endpoints: geodesics between their shadows pass within K1*delta (+slack)."""
    report = LemmaAuditReport("segment", delta, slack, n=g.n)
    bound = LEDGER.K1 * delta + slack
    threshold = LEDGER.K0 * delta
    for p, q in combinations(range(g.n), 2):
        if dm.dist[p, q] <= threshold:
            continue
        geo = np.asarray(extract_geodesic(g, dm, p, q).vertices)
        sub = dm.dist[:, geo]
        nearest = sub == sub.min(axis=1, keepdims=True)
        unique = nearest.sum(axis=1) == 1
        shadow_p = np.flatnonzero(unique & nearest[:, 0])
        shadow_q = np.flatnonzero(unique & nearest[:, -1])
        if shadow_p.size == 0 or shadow_q.size == 0:
            continue
        to_geo = multi_source_distances(g, geo.tolist())
        # worst[x, y]: max over x-y geodesics of the distance from that geodesic to geo
        worst = geodesic_bottleneck(g, dm, to_geo)
        block = worst[np.ix_(shadow_p, shadow_q)]
        margins = (bound - block).ravel()
        xs, ys = np.meshgrid(shadow_p, shadow_q, indexing="ij")
        configs = np.stack([np.full(xs.size, p), np.full(xs.size, q), xs.ravel(), ys.ravel()],
                           axis=1)
        report._see_many(margins, configs)
    return report


def run_audit(g: Graph, lemma: str, slack: int = 2, delta: int | None = None,
              dm: DistanceMatrix | None = None, seed: int = 0) -> LemmaAuditReport:
    from ..hyperbolicity import delta_thin_exact

    dm = dm if dm is not None else all_pairs_distances(g)
    if not dm.connected:
        raise UnreachableError("audits need a connected graph")
    if delta is None:
        delta = delta_thin_exact(g, dm)[0]
    if lemma == "isoc":
        return audit_lemma_isoc(g, dm, delta, slack)
    if lemma == "skeleton":
        return audit_lemma_skeleton(g, dm, delta, slack, seed=seed)
    if lemma == "balldetour":
        return audit_lemma_balldetour(g, dm, delta, slack, seed=seed)
    if lemma == "segment":
        return audit_lemma_segment(g, dm, delta, slack)
    raise ValueError(f"unknown lemma {lemma!r}")
