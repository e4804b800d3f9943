"""Vertex expansion: exact subset scan at toy scale and spectral certificates.

Sets S range over 1 <= |S| <= floor(n/2).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import Graph

EXACT_CAP = 24
JACOBI_MAX_N = 2048
JACOBI_TOL = 1e-9
POWER_TOL = 1e-6
MAX_ITER = 100_000


class ConvergenceError(RuntimeError):
    pass


def boundary(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Vertices outside ``s`` with at least one neighbor in ``s``."""
    s = frozenset(s)
    if not s or len(s) >= g.n:
        raise ValueError("boundary needs a nonempty proper subset")
    return frozenset(w for v in s for w in g.adjacency[v] if w not in s)


def _lex_smallest(masks: np.ndarray) -> int:
    """Mask whose sorted member list is lexicographically smallest."""
    remaining = masks.astype(np.uint64)
    chosen = np.zeros_like(remaining)
    while True:
        rest = remaining & ~chosen
        if (rest == 0).any():
            return int(remaining[np.flatnonzero(rest == 0)[0]])
        low = rest & (~rest + np.uint64(1))
        pick = low.min()
        keep = low == pick
        remaining = remaining[keep]
        chosen = chosen[keep] | pick


def vertex_expansion_exact(g: Graph) -> tuple[Fraction, frozenset[int]]:
    """min |∂S|/|S| over 1 <= |S| <= n/2, with the lexicographically smallest minimizer."""
    n = g.n
    if n > EXACT_CAP:
        raise ValueError(f"exact expansion capped at n={EXACT_CAP} (got {n})")
    if n < 2:
        raise ValueError("expansion needs at least 2 vertices")
    nbr = np.zeros(n, dtype=np.uint32)
    for v, nbrs in enumerate(g.adjacency):
        for w in nbrs:
            nbr[v] |= np.uint32(1 << w)
    # closed-under-union neighborhood table built by doubling on the top bit
    reach = np.zeros(1 << n, dtype=np.uint32)
    for k in range(n):
        lo, hi = 1 << k, 1 << (k + 1)
        reach[lo:hi] = reach[:lo] | nbr[k]
    masks = np.arange(1 << n, dtype=np.uint32)
    size = np.bitwise_count(masks)
    bsize = np.bitwise_count(reach & ~masks)
    valid = (size >= 1) & (size <= n // 2)
    size, bsize, masks = size[valid].astype(np.int64), bsize[valid].astype(np.int64), masks[valid]
    del reach
    # compare ratios exactly by cross-multiplication
    best = Fraction(int(bsize[0]), int(size[0]))
    for s in range(1, n // 2 + 1):
        sel = size == s
        b = int(bsize[sel].min())
        if Fraction(b, s) < best:
            best = Fraction(b, s)
    hits = masks[bsize * best.denominator == size * best.numerator]
    win = _lex_smallest(hits)
    return best, frozenset(v for v in range(n) if win >> v & 1)


def normalized_adjacency(g: Graph) -> np.ndarray:
    """D^{-1/2} A D^{-1/2}; loops add 1 to A's diagonal and 1 to the degree."""
    deg = g.degrees.astype(np.float64)
    if (deg == 0).any():
        raise ValueError("isolated vertex: normalized Laplacian undefined")
    inv = 1.0 / np.sqrt(deg)
    return inv[:, None] * g.adjacency_matrix * inv[None, :]


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi in parallel (round-robin) order.

    Each round rotates n/2 disjoint (p, q) planes at once, so the n-1
    rounds of a sweep visit every pair exactly once.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    m = n + (n % 2)
    if m != n:
        a = np.pad(a, ((0, 1), (0, 1)))
    players = list(range(m))
    scale = max(float(np.abs(a).max()), 1.0)
    offdiag = ~np.eye(m, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.sqrt((a[offdiag] ** 2).sum()))
        if off <= tol * scale:
            break
        for _ in range(m - 1):
            p = np.array(players[: m // 2])
            q = np.array(players[m // 2 :][::-1])
            app, aqq, apq = a[p, p], a[q, q], a[p, q]
            rot = np.abs(apq) > 1e-18 * scale
            theta = np.where(rot, (aqq - app) / (2.0 * np.where(rot, apq, 1.0)), 0.0)
            t = np.where(rot, np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            t = np.where(rot & (theta == 0), 1.0, t)
            c = 1.0 / np.sqrt(t**2 + 1.0)
            s = t * c
            rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cols_p * c[None, :] - cols_q * s[None, :]
            a[:, q] = cols_p * s[None, :] + cols_q * c[None, :]
            players = [players[0]] + [players[-1]] + players[1:-1]
    else:
        raise ConvergenceError("Jacobi sweeps did not converge")
    return np.sort(a.diagonal()[:n])


def _lambda2_dense(g: Graph, method: str) -> float:
    m = normalized_adjacency(g)
    if method == "jacobi":
        mu = jacobi_eigenvalues(m)
    else:
        mu = np.linalg.eigvalsh(m)
    # normalized Laplacian eigenvalues are 1 - mu; second smallest <- second largest mu
    return float(1.0 - np.sort(mu)[-2])


def _lambda2_power(g: Graph, tol: float, max_iter: int = MAX_ITER) -> float:
    """Power iteration on (I + M)/2 with the known top eigenvector projected out."""
    from scipy.sparse import diags

    deg = g.degrees.astype(np.float64)
    if (deg == 0).any():
        raise ValueError("isolated vertex: normalized Laplacian undefined")
    inv = diags(1.0 / np.sqrt(deg))
    m = (inv @ g.sparse_adjacency() @ inv).tocsr()
    top = np.sqrt(deg)
    top /= np.linalg.norm(top)
    x = np.cos(np.arange(g.n) * 1.618033988749895 + 0.5)
    x -= top * (top @ x)
    x /= np.linalg.norm(x)
    mu = 0.0
    for _ in range(max_iter):
        y = 0.5 * (x + m @ x)
        y -= top * (top @ y)
        mu = float(x @ y)
        res = float(np.linalg.norm(y - mu * x))
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 1.0
        x = y / norm
        if res < tol:
            break
    else:
        raise ConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps")
    # mu is an eigenvalue of (I + M)/2
    return float(1.0 - (2.0 * mu - 1.0))


def spectral_lambda2(g: Graph, tol: float | None = None, method: str = "auto") -> float:
    """Second-smallest eigenvalue of the normalized Laplacian I - D^{-1/2} A D^{-1/2}.

    ``method`` is ``"dense"`` (LAPACK), ``"jacobi"``, ``"power"`` or
    ``"auto"`` (dense up to n = 2048, power iteration above).
    """
    if g.n < 2:
        raise ValueError("lambda2 needs at least 2 vertices")
    if method == "auto":
        method = "dense" if g.n <= JACOBI_MAX_N else "power"
    if method == "power":
        lam = _lambda2_power(g, tol if tol is not None else POWER_TOL)
    elif method in ("dense", "jacobi"):
        lam = _lambda2_dense(g, method)
    else:
        raise ValueError(f"unknown method {method!r}")
    return min(max(lam, 0.0), 2.0)


def expansion_lower_bound(g: Graph, lambda2: float) -> float:
    """Certified vertex-expansion floor lambda2 * d_min / (2 * d_max)."""
    if not 0.0 <= lambda2 <= 2.0 + 1e-12:
        raise ValueError("lambda2 must lie in [0, 2]")
    if g.max_degree == 0:
        return 0.0
    return lambda2 * g.min_degree / (2.0 * g.max_degree)


@dataclass
class ExpansionReport:
    lambda2: float
    h_lb: float
    d_min: int
    d_max: int
    h_exact: Fraction | None = None
    h_witness: frozenset[int] | None = None
    disconnected: bool = False

    def to_dict(self) -> dict:
        return {
            "lambda2": self.lambda2,
            "h_lb": self.h_lb,
            "h_exact": None if self.h_exact is None else str(self.h_exact),
            "h_witness": None if self.h_witness is None else sorted(self.h_witness),
            "d_min": self.d_min,
            "d_max": self.d_max,
            "disconnected": self.disconnected,
        }


def expansion_report(g: Graph, tol: float | None = None, method: str = "auto") -> ExpansionReport:
    lam = spectral_lambda2(g, tol, method)
    cutoff = tol if tol is not None else JACOBI_TOL
    disconnected = lam < cutoff
    if disconnected:
        lam = 0.0
    report = ExpansionReport(lam, expansion_lower_bound(g, lam), g.min_degree, g.max_degree,
                             disconnected=disconnected)
    if g.n <= 20:
        report.h_exact, report.h_witness = vertex_expansion_exact(g)
    return report
