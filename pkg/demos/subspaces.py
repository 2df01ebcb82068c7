"""
Invariant and reducing subspaces of the shift
=============================================

The subspaces ``phi H^2 + conj(psi) H^2-perp`` with inner ``phi``, ``psi`` are
invariant under ``S_{z,zbar}``.  Only four of them are also invariant under
the adjoint.
"""

from circleop.acceptance import subspace_suite
from circleop.operators import CoeffVector
from circleop.structure import (
    BlaschkeProduct, basis_from_vectors, blaschke_coeffs, invariance_residual, invariant_subspace_basis,
    reducing_check,
)

# Finite Blaschke products enter through truncated Taylor series.  The
# expansion is refused when the tail would spoil unimodularity.
b = BlaschkeProduct(zeros=[0.5])
print("b(z) = (z - 0.5)/(1 - 0.5 z):", blaschke_coeffs(b, 60).dense(0, 4).real.round(6))
try:
    blaschke_coeffs(BlaschkeProduct(zeros=[0.7]), 40)
except Exception as exc:
    print("zero at 0.7, degree 40:", exc)

# Invariance and the reducing test on the six-subspace suite.
print(f"\n{'subspace':24s} {'dim':>4s} {'S residual':>11s} {'S* residual':>12s}  verdict")
for name, B in subspace_suite(128).items():
    v = reducing_check(B)
    print(f"{name:24s} {B.dim:4d} {v.residual:11.1e} {v.adjoint_residual:12.1e}  {v.label}")

# Adding one vector outside the subspace breaks invariance.
M = 128
B = invariant_subspace_basis(b, BlaschkeProduct(power=1), M)
bad = basis_from_vectors(B.vectors + [CoeffVector.from_dict({0: 1, -1: 1}, (-M, M))], (-M, M))
print(f"\nperturbed by 1 + zbar: residual {invariance_residual(bad):.3f}")
