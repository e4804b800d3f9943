"""Explicit constants of the hyperbolic-space lemmas and the arithmetic built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class ConstantsLedger:
    K: int = 4  # nearest-point sets on a geodesic have diameter < K*delta
    C_skeleton: int = 8  # projections of any path hit every window of length C*delta
    K0: int = 12  # separation threshold for the segment lemma
    K1: int = 2  # ... and how close the connecting geodesic passes

    @property
    def B(self) -> Fraction:
        return Fraction(1, 4 * (self.C_skeleton + self.K0))

    def check(self) -> None:
        assert self.C_skeleton == 2 * self.K
        assert self.B == Fraction(1, 80)


LEDGER = ConstantsLedger()

ALPHA_EPS = 0.05
ALPHA_CEIL = 1 / 3 - 1e-6


def alpha_threshold(d: int, h: float) -> float:
    """Infimum of the alpha with (1+h)^(1/3 - alpha) < d^alpha."""
    lh = math.log1p(h)
    return lh / (3.0 * (math.log(d) + lh))


def alpha_ok(alpha: float, d: int, h: float) -> bool:
    return (1.0 / 3.0 - alpha) * math.log1p(h) < alpha * math.log(d)


def choose_alpha(d: int, h: float) -> float:
    """Cylinder radius fraction: 5% above the threshold, kept below 1/3."""
    if d < 3:
        raise ValueError("choose_alpha needs d >= 3")
    if not h > 0:
        raise ValueError("choose_alpha needs h > 0")
    alpha = min((1.0 + ALPHA_EPS) * alpha_threshold(d, h), ALPHA_CEIL)
    if not alpha_ok(alpha, d, h):
        raise ArithmeticError(f"alpha={alpha} fails the growth inequality for d={d}, h={h}")
    return alpha


def longpath_bound(D: int, R: int, delta: float) -> tuple[float, int]:
    """Predicted minimum length of a path avoiding the R-neighborhood of the middle third.

    Returns ``(D * B * 2**(R/delta), N)`` with
    ``N = floor((D/3) / ((C + K0) * delta))``; meaningful only once D/delta
    and R/delta are large, so callers use it for annotation.
    """
    if D <= 0 or R < 0 or not delta > 0:
        raise ValueError("longpath_bound needs D > 0, R >= 0, delta > 0")
    bound = D * float(LEDGER.B) * 2.0 ** (R / delta)
    N = math.floor(Fraction(D, 3) / (Fraction(LEDGER.C_skeleton + LEDGER.K0) * Fraction(delta)))
    return bound, N
