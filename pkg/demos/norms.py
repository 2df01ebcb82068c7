"""
Operator norms of S_{alpha,beta}
================================

Two independent routes to the norm of ``S = alpha P + beta Q``: the largest
singular value of a square truncation, and a sup-norm minimization over
analytic polynomials whose infimum is the *squared* norm.
"""

import math

import numpy as np

from circleop import ONE, ZBAR, Z
from circleop.norm import norm_bounds, norm_case_classifier, ny_norm_estimate, operator_norm

# The sup-norms of the symbols bracket the norm from both sides.  The two
# closed-form cases sit on the endpoints of that bracket.
for name, beta in [("zbar", ZBAR), ("z", Z)]:
    est = operator_norm(ONE, beta, 64)
    lo, hi = norm_bounds(ONE, beta)
    case = norm_case_classifier(ONE, beta).value
    print(f"S(1, {name:4s}): |S| = {est.value:.8f}  bracket [{lo:.4f}, {hi:.4f}]  {case}")

# Interpolating beta_c = c z + (1 - c) zbar moves the norm continuously between
# the endpoints, strictly inside the bracket for 0 < c < 1.
print("\n   c     |S(1, beta_c)|")
for c in np.linspace(0, 1, 11):
    v = operator_norm(ONE, c * Z + (1 - c) * ZBAR, 128).value
    print(f"{c:5.2f}   {v:.6f}")

# The sup-norm objective.  Its minimum over k matches |S|^2, not |S|: on the
# case (1, z) the two readings differ by a factor of sqrt(2).
middle = (Z + ZBAR) / 2
ny = ny_norm_estimate(ONE, middle, deg=8)
svd = operator_norm(ONE, middle, 256).value
print(f"\nS(1, (z+zbar)/2): NY infimum {ny.value:.5f}, SVD^2 {svd ** 2:.5f}, sqrt(NY) {ny.norm:.5f}")
print(f"strictly between 1 and sqrt(2) = {math.sqrt(2):.5f}")

# Truncation converges from below.  When the symbol attains its sup at a single
# point the gap closes like 1/M^2.
print("\n   M    1 - |S_M(2+z, zbar)|/3")
for M in (16, 32, 64, 128, 256):
    print(f"{M:4d}   {1 - operator_norm(2 + Z, ZBAR, M).value / 3:.3e}")
