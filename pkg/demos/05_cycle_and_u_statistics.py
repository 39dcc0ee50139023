"""
Cycle drift and a mean-zero position statistic
==============================================

Two microscopic views of why these shuffles are slow.  First: a tracked
card cycles through the deck, gaining a displacement with variance
k(k-1) per lap, so position information diffuses instead of vanishing.
Second: for the two-point half-deck shuffle, a running statistic of one
card's position is a martingale, so its variance grows at most linearly.
"""

import numpy as np

from shufflemix import (
    RngStream,
    cycle_stats,
    u_stat_final_values,
    ustat_conditional_means,
)

print("per-cycle moments of a tracked card (n = 30, 100000 cycles)")
print(" k   disp mean   disp var   k(k-1)   dur mean   dur var")
for k in (2, 3, 5):
    cs = cycle_stats(30, k, 100_000, RngStream(7))
    print(
        f"{k:2d}   {cs.displacement_mean:9.4f}  {cs.displacement_var:9.4f}"
        f"   {k * (k - 1):6d}   {cs.duration_mean:8.4f}  {cs.duration_var:8.4f}"
    )

# the half-deck statistic: increments have conditional mean zero...
n = 100
means = ustat_conditional_means(n)
print(f"\nhalf-deck statistic at n = {n}")
print(f"largest |conditional mean increment| over all positions: {np.abs(means).max()}")

# ... so the sampled variance stays below the step count
print("\n     t   sample Var U_t   bound t")
for t in (100, 1_000, 10_000):
    finals = u_stat_final_values(n, 1, t, 4_000, RngStream(11))
    print(f"{t:6d}   {finals.var(ddof=1):14.1f}   {t:7d}")
