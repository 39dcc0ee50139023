"""
A certified complex eigenvalue and the lower bound it buys
==========================================================

For the bottom-k-to-top shuffle the single-card chain has a complex
eigenvalue just inside the unit circle.  This demo locates it from a
closed-form predictor, polishes it with Newton steps, certifies a disc
that provably contains a true root, and turns the pair (gap, rotation)
into a mixing-time lower bound.
"""

import math

from shufflemix import (
    b2t_lower_bound,
    char_poly,
    leading_term_bottom_to_top,
    newton_refine,
    predicted_eigenvalue,
)

n, k = 100, 3
cp = char_poly("bottom_to_top", n, k)
pred = predicted_eigenvalue("bottom_to_top", n, k)
root = newton_refine(cp, pred)

print(f"bottom-{k}-to-top on n = {n} cards")
print(f"predictor        {pred:.15f}")
print(f"refined root     {root:.15f}")
print(f"|g(root)|        {abs(cp.g(root)):.2e}")
print(f"moved by         {abs(root - pred):.2e}  (scale k^3/n^4 = {k**3 / n**4:.2e})")

rep = b2t_lower_bound(n, k)
cert = rep.certificate
print(f"\ncertificate      accepted={cert.accepted}, radius {cert.radius:.2e},"
      f" error bound {cert.error_bound:.2e}")
print(f"gap gamma        {rep.gamma:.6e}")
print(f"rotation theta   {rep.theta:.6e}")
print(f"second moment R  {rep.R:.3e}")
print(f"lower bound T    {rep.T:.0f} steps")
print(f"leading term     {leading_term_bottom_to_top(n, k):.1f}"
      f"  = n^3 log n / (pi^2 k(k-1))")
print(f"T / leading      {rep.T / leading_term_bottom_to_top(n, k):.3f}")
print(f"\nfor comparison, n^3 log n / (8 pi^2) = "
      f"{n**3 * math.log(n) / (8 * math.pi**2):.1f} at k = 2")
