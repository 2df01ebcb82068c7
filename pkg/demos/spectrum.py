"""
Spectra from winding numbers
============================

For continuous symbols the spectrum of ``S_{alpha,beta}`` is the union of the
two ranges together with every point around which the two curves wind a
different number of times.  Truncated singular values give an independent,
but noisier, picture.
"""

import numpy as np

from circleop import ONE, ZBAR, Z
from circleop.spectral import (
    GridSpec, essential_range_in_approx_spectrum, half_spectrum, invertible_by_index, resolvent_lower_bound,
    spectrum_continuous,
)


def ascii_map(report, n):
    """``#`` in the spectrum, ``.`` outside, ``o`` on a curve (no index)."""
    rows = []
    for i in range(n - 1, -1, -1):
        row = ""
        for j in range(n):
            k = i * n + j
            if report.ind_a[k] is None or report.ind_b[k] is None:
                row += "o"
            else:
                row += "#" if report.in_spectrum[k] else "."
        rows.append(row)
    return "\n".join(rows)


grid = GridSpec(-2, 2, -2, 2, 25)

# S(z, zbar): winding numbers 1 and -1 inside the circle, so the whole closed
# disk is spectrum.
print("S(z, zbar)")
print(ascii_map(spectrum_continuous(Z, ZBAR, grid), grid.n))

# S(z, z) is multiplication by z: the indices agree everywhere and only the
# circle remains.
print("\nS(z, z)")
print(ascii_map(spectrum_continuous(Z, Z, grid), grid.n))

# Two shifted circles traced in opposite directions: the indices are +1 and -1
# and never cancel, so both closed disks belong to the spectrum.
alpha, beta = 0.6 + Z, -0.6 + ZBAR
print("\nS(0.6+z, -0.6+zbar)")
print(ascii_map(spectrum_continuous(alpha, beta, grid), grid.n))

# The half symbol S(z, 0) has the Toeplitz spectrum with 0 adjoined.
rep = half_spectrum(2 + Z, "alpha-zero-beta", [0, 2, 3.5])
print("\nS(2+z, 0) at 0, 2, 3.5:", list(map(bool, rep.in_spectrum)))

# Invertibility is an index comparison at 0; the exact two-sided singular
# value bound confirms each verdict.
for a, b in [(Z, Z), (Z, ONE), (2 + Z, 3 + ZBAR)]:
    verdict = invertible_by_index(a, b).value
    print(f"{verdict:14s} resolvent floor at 0: {resolvent_lower_bound(a, b, 0, 64):.3e}")

# Points of the range are approximate eigenvalues: localized analytic vectors
# drive the residual down as the window grows.
print("\n   M    min |(S(z,zbar) - 1) f|")
for M in (16, 32, 64, 128, 256):
    print(f"{M:4d}   {essential_range_in_approx_spectrum(Z, ZBAR, 1, M=M):.4f}")
