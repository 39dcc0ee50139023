"""Coupon-collector bounds for move-to-front mixing.

The upper bound is the first time the expected number of still-unseen
cards (excluding the least likely one) drops to 1/4.  The lower-bound
side tracks two competing times: one from a second-moment count of
unseen cards, one from the single hardest card, and picks whichever
regime applies.  Everything reduces to sums of (1 - p)^t, evaluated with
compensated summation; terms underflow to zero harmlessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MtfBoundReport",
    "coupon_tail_sum",
    "tau_u",
    "mtf_lower_bound_time",
    "example_weights",
]


def _sorted_weights(p) -> np.ndarray:
    w = np.asarray(p, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise ValueError("weights must be a nonempty 1-d vector")
    if np.any(w <= 0.0):
        raise ValueError("card weights must be strictly positive")
    if abs(math.fsum(w.tolist()) - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1 within 1e-12")
    return np.sort(w)[::-1]


def coupon_tail_sum(sorted_desc: np.ndarray, t: int) -> float:
    """sum over the n-1 largest weights of (1 - p)^t.

    The smallest weight's term is dropped: mixing only requires touching
    all cards but one.
    """
    comp = 1.0 - sorted_desc[:-1]
    return math.fsum(np.power(comp, t).tolist())


def tau_u(p, threshold: float = 0.25) -> int:
    """Smallest t with the dropped-smallest coupon sum <= threshold."""
    w = _sorted_weights(p)
    if w.size == 1 or coupon_tail_sum(w, 0) <= threshold:
        return 0
    # exponential bracket, then bisection; the sum is strictly decreasing
    hi = 1
    while coupon_tail_sum(w, hi) > threshold:
        hi *= 2
        if hi > 2**62:
            raise OverflowError("coupon sum does not drop below threshold")
    lo = hi // 2  # sum(lo) > threshold, sum(hi) <= threshold
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if coupon_tail_sum(w, mid) <= threshold:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class MtfBoundReport:
    """Upper and lower mixing-time bounds for one move-to-front weight vector.

    tau_0 is the largest t at which the squared count of unseen cards still
    dominates (none when even t = 0 fails); tau_1 is the last t at which the
    second-least-likely card is still unseen with probability above 3/4;
    lower_bound selects between them.  sandwich_floor is ceil(tau_u/25) - 1,
    the guaranteed floor under the max-weight-at-most-1/3 rule, whose truth
    is reported in third_rule_ok.
    """

    n: int
    tau_u: int
    tau_0: int | None
    tau_1: int
    lower_bound: int
    sandwich_floor: int
    third_rule_ok: bool


def mtf_lower_bound_time(p) -> MtfBoundReport:
    """Compute the lower-bound report for a move-to-front weight vector."""
    w = _sorted_weights(p)
    n = w.size
    upper = tau_u(w)
    floor = (upper + 24) // 25 - 1
    third_ok = bool(w[0] <= 1.0 / 3.0 + 1e-12)
    if n == 1:
        return MtfBoundReport(1, upper, None, 0, 0, floor, third_ok)

    # tau_0: largest t with sum_{j<n} (1-p_j)^{6t} >= 48
    if coupon_tail_sum(w, 0) < 48.0:
        tau_0 = None
    else:
        hi = 1
        while coupon_tail_sum(w, 6 * hi) >= 48.0:
            hi *= 2
        lo = hi // 2  # holds at 6*lo, fails at 6*hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if coupon_tail_sum(w, 6 * mid) >= 48.0:
                lo = mid
            else:
                hi = mid
        tau_0 = lo

    # tau_1: largest t with (1 - p_{n-1})^t > 3/4, second-smallest weight
    q = 1.0 - float(w[n - 2])
    crossing = math.log(0.75) / math.log(q)
    tau_1 = max(int(math.floor(crossing)), 0)
    while q ** (tau_1 + 1) > 0.75:
        tau_1 += 1
    while tau_1 > 0 and q**tau_1 <= 0.75:
        tau_1 -= 1

    if tau_0 is None or tau_0 < crossing:
        lower = tau_1
    else:
        lower = tau_0
    return MtfBoundReport(n, upper, tau_0, tau_1, lower, floor, third_ok)


def example_weights(family: str, n: int) -> np.ndarray:
    """Named weight families with known mixing-time orders.

    a: uniform.  b: half the cards carry almost all the mass (even n
    only).  c: Zipf weights, harmonic normalization.  d: linearly
    decreasing weights.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    j = np.arange(1, n + 1, dtype=np.float64)
    if family == "a":
        w = np.full(n, 1.0 / n)
    elif family == "b":
        if n % 2:
            raise ValueError("family b needs an even card count")
        w = np.where(j <= n / 2, 2.0 / (n + 1), 2.0 / (n * (n + 1.0)))
    elif family == "c":
        w = 1.0 / j
    elif family == "d":
        w = 2.0 * (n + 1 - j) / (n * (n + 1.0))
    else:
        raise ValueError(f"unknown weight family {family!r}; expected one of a, b, c, d")
    return w / math.fsum(w.tolist())
