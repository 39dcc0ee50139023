"""
Coupon-collector bounds for biased move-to-top shuffles
=======================================================

The time to touch every card but one controls how long these shuffles
take to mix.  This demo tabulates the upper bound tau_u and the matching
lower bound across the four canonical weight families, then shows how
tau_u scales when the deck grows.
"""

import math

from shufflemix import example_weights, mtf_lower_bound_time, tau_u

# a: uniform; b: half the cards carry almost all the mass; c: Zipf 1/j;
# d: linearly decreasing weights
n = 96
print(f"bounds at n = {n}")
print("family  tau_0  tau_1  tau_u  lower  floor  max_w<=1/3")
for fam in "abcd":
    rep = mtf_lower_bound_time(example_weights(fam, n))
    print(
        f"   {fam}    {rep.tau_0!s:>5}  {rep.tau_1!s:>5}  {rep.tau_u:5d}"
        f"  {rep.lower_bound:5d}  {rep.sandwich_floor:5d}  {rep.third_rule_ok}"
    )

# growth of tau_u along each family
print("\nscaling of tau_u  (ratio columns should flatten out)")
print("     n   a: /n log n   c: /n log^2 n   d: /n^2")
for n in (100, 1_000, 10_000):
    ra = tau_u(example_weights("a", n)) / (n * math.log(n))
    rc = tau_u(example_weights("c", n)) / (n * math.log(n) ** 2)
    rd = tau_u(example_weights("d", n)) / n**2
    print(f"{n:6d}   {ra:11.4f}   {rc:13.4f}   {rd:7.4f}")
