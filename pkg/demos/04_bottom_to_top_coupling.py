"""
Coupling two bottom-k-to-top shuffles until they merge
======================================================

Two decks driven by one stream of moves coalesce; the time this takes
upper-bounds the mixing time.  This demo samples coalescence times,
prints the survival curve against the drift time scale, and checks a
recorded trace step by step.
"""

import math

import numpy as np

from shufflemix import RngStream, check_b2t_trace, couple_b2t, coupling_quantiles

n, k, samples = 32, 2, 300
master = RngStream(31)
results = [couple_b2t(n, k, master.stream(i)) for i in range(samples)]
summary = coupling_quantiles(results)

scale = n**3 * math.log(n) / (math.pi**2 * k * (k - 1))
print(f"n = {n}, k = {k}, {samples} coupled pairs")
print(f"mean T   {summary.mean:9.1f}")
print(f"median T {summary.median:9.1f}")
print(f"q95 T    {summary.q95:9.1f}")
print(f"drift scale n^3 log n / (pi^2 k(k-1)) = {scale:.1f}")

times = np.array([r.T for r in results])
print("\n multiple of scale   P(T > t)")
for mult in (0.5, 0.75, 1.0, 1.5, 2.0, 3.0):
    frac = float(np.mean(times > mult * scale))
    print(f"      {mult:4.2f}          {frac:8.3f}")

# replay one recorded run move by move and re-verify every merge
traced = couple_b2t(n, k, RngStream(7), record_trace=True)
print(f"\ntraced run: T = {traced.T}, replay ok = {check_b2t_trace(traced.trace)}")
