"""Closed-form bound and parameter formulas.

``log n`` with no explicit base means natural log throughout; the
acceptance constants are calibrated to that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegenerateP, PBelowThreshold, ZeroEdges


def trivial_lower(n: int, m: int) -> Fraction:
    """C(n,2)/m - 1, exact: m pairs are acquainted for free and each
    round acquaints at most m new ones."""
    if n < 1:
        raise ValueError("n must be positive")
    if m < 1:
        raise ZeroEdges("lower bound undefined without edges")
    return Fraction(n * (n - 1) // 2, m) - 1


def log_one_over_q(n: int, p: float) -> float:
    """log base 1/(1-p) of n, i.e. ln n / (-ln(1-p)).

    For p -> 0 this is (1+o(1)) * ln(n)/p, the scale on which the
    acquaintance time of G(n,p) lives.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < p < 1.0):
        raise DegenerateP(f"p={p} must be strictly inside (0,1)")
    return math.log(n) / -math.log1p(-p)


def gnp_lower_threshold(n: int, p: float, eps: float) -> float:
    """(eps/2) * log_{1/(1-p)} n: below this many rounds, no placement
    strategy can acquaint everyone on a typical dense G(n,p)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return 0.0
    return (eps / 2.0) * log_one_over_q(n, p)


def team_k(n: int, p: float) -> float:
    """Team size 2.5 * log_{1/(1-p)} n used by the G(n,p) strategy."""
    return 2.5 * log_one_over_q(n, p)


def exposure_split(n: int, p: float, eps: float) -> tuple[float, float]:
    """Split p into (p1, p2) with p = p1 + p2 - p1*p2, where p1 sits just
    above the connectivity scale.

    Requires p >= (1+eps) ln n / n; then p2 >= (eps/2)/(1+eps) * p.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < p < 1.0):
        raise DegenerateP(f"p={p} must be strictly inside (0,1)")
    if eps <= 0:
        raise ValueError("eps must be positive")
    floor_p = (1.0 + eps) * math.log(n) / n
    if p < floor_p:
        raise PBelowThreshold(f"need p >= (1+eps)*ln(n)/n = {floor_p:.6g}, got {p:.6g}")
    p1 = (1.0 + eps / 2.0) * math.log(n) / n
    p2 = (p - p1) / (1.0 - p1)
    recombined = p1 + p2 - p1 * p2
    if abs(recombined - p) > 1e-12:
        raise AssertionError("exposure split identity drifted")
    return p1, p2


def reference_uppers(n: int) -> tuple[float, float]:
    """Reference curves for plots: worst-case rounds over all n-vertex
    graphs scale as n^2/log2(n); the older bound has an extra log2 log2 n."""
    if n < 4:
        raise ValueError("n must be at least 4")
    l2 = math.log2(n)
    return n * n / l2, n * n / (l2 / math.log2(l2))


@dataclass(frozen=True)
class BoundsReport:
    """All bound formulas evaluated for one (n, p, eps)."""

    n: int
    p: float
    eps: float
    trivial_lower: Fraction
    k_lower: float
    team_k: float
    p1: float
    p2: float
    reference_upper_n2_logn: Optional[float]
    reference_upper_bst: Optional[float]

    def __post_init__(self):
        if abs(self.p1 + self.p2 - self.p1 * self.p2 - self.p) > 1e-12:
            raise AssertionError("p1/p2 do not recombine to p")

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "eps": self.eps,
            "trivial_lower": str(self.trivial_lower),
            "k_lower": self.k_lower,
            "team_k": self.team_k,
            "p1": self.p1,
            "p2": self.p2,
            "reference_upper_n2_logn": self.reference_upper_n2_logn,
            "reference_upper_bst": self.reference_upper_bst,
        }


def compute_bounds_report(n: int, p: float, eps: float) -> BoundsReport:
    """Evaluate every formula; the trivial lower bound uses the expected
    edge count C(n,2)*p, which reduces to the exact rational 1/p - 1."""
    p1, p2 = exposure_split(n, p, eps)
    refs = reference_uppers(n) if n >= 4 else (None, None)
    return BoundsReport(
        n=n,
        p=p,
        eps=eps,
        trivial_lower=Fraction(1) / Fraction(p) - 1,
        k_lower=gnp_lower_threshold(n, p, eps),
        team_k=team_k(n, p),
        p1=p1,
        p2=p2,
        reference_upper_n2_logn=refs[0],
        reference_upper_bst=refs[1],
    )
