"""Products, commutativity and shift commutants of ``S_{alpha,beta}`` operators.

All operator-level identities are decided on exact rectangular truncations:
compositions of exact matrices lose nothing for polynomial symbols, so the
checks are exact up to rounding on the chosen input window.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import WindowTooSmall
from .operators import (
    CoeffVector, OperatorMatrix, apply, build_matrix, interior_commutator, multiply,
    operator_matrix, random_vector, riesz_p, riesz_q, verify_structure,
)
from .symbol import TAU_EQ, ZBAR, ZERO, Z, Symbol, is_analytic, is_coanalytic

__all__ = [
    "ProductVerdict", "ZeroProduct", "ZeroProductVerdict", "Commute", "CommuteVerdict",
    "TwoShiftVerdict",
    "product_matrix", "product_form", "zero_product_class", "commute_check", "commutator_residual",
    "riesz_identity_residual", "lemma64_residual", "shift_commutant_check", "two_shift_commutant_check",
]


def product_matrix(alpha1, beta1, alpha2, beta2, M: int = 16) -> OperatorMatrix:
    """Exact matrix of ``S_{alpha1,beta1} S_{alpha2,beta2}`` on the input modes ``[-M, M]``."""
    right = operator_matrix(alpha2, beta2, (-M, M))
    left = operator_matrix(alpha1, beta1, right.out_window)
    return left @ right


@dataclass
class ProductVerdict:
    is_product: bool
    alpha: Symbol | None = None
    beta: Symbol | None = None


def product_form(alpha1: Symbol, beta1: Symbol, alpha2: Symbol, beta2: Symbol) -> ProductVerdict:
    """Is ``S_{alpha1,beta1} S_{alpha2,beta2}`` again an ``S_{alpha,beta}``?

    Yes iff ``alpha1 = beta1``, or ``alpha2`` is analytic and ``beta2``
    co-analytic; then the product is ``S_{alpha1 alpha2, beta1 beta2}``.
    """
    if alpha1.isclose(beta1) or (is_analytic(alpha2) and is_coanalytic(beta2)):
        return ProductVerdict(True, alpha1 * alpha2, beta1 * beta2)
    return ProductVerdict(False)


class ZeroProduct(enum.Enum):
    ZERO_BY_I = "ZeroByI"
    ZERO_BY_II = "ZeroByII"
    ZERO_BY_III = "ZeroByIII"
    ZERO_BY_IV = "ZeroByIV"
    NONZERO = "NonZero"


@dataclass
class ZeroProductVerdict:
    kind: ZeroProduct
    residual: float | None = None


def zero_product_class(alpha1, beta1, alpha2, beta2, M: int = 16, seed: int = 42) -> ZeroProductVerdict:
    """Which clause makes ``S_{alpha1,beta1} S_{alpha2,beta2} = 0`` (lowest index wins).

    ``NONZERO`` is certified by a random vector with ``|S1 S2 f| > 1e-8``.
    """
    zero = lambda s: s.isclose(ZERO)  # noqa: E731
    if alpha1.isclose(beta1) and zero(alpha1 * alpha2) and zero(beta1 * beta2):
        return ZeroProductVerdict(ZeroProduct.ZERO_BY_I)
    if zero(alpha1) and zero(beta2) and is_analytic(alpha2):
        return ZeroProductVerdict(ZeroProduct.ZERO_BY_II)
    if zero(alpha2) and zero(beta1) and is_coanalytic(beta2):
        return ZeroProductVerdict(ZeroProduct.ZERO_BY_III)
    if zero(alpha2) and zero(beta2):
        return ZeroProductVerdict(ZeroProduct.ZERO_BY_IV)
    f = random_vector(np.random.default_rng(seed), (-M, M))
    g = apply(alpha1, beta1, apply(alpha2, beta2, f))
    return ZeroProductVerdict(ZeroProduct.NONZERO, g.norm() / f.norm())


class Commute(enum.Enum):
    BY_I = "ByI"
    BY_II = "ByII"
    BY_III = "ByIII"
    NON_COMMUTING = "NonCommuting"
    UNCLASSIFIED = "Unclassified"


@dataclass
class CommuteVerdict:
    kind: Commute
    residual: float
    a: complex | None = None
    b: complex | None = None
    c: complex | None = None

    @property
    def commutes(self) -> bool:
        return self.kind in (Commute.BY_I, Commute.BY_II, Commute.BY_III)


def commutator_residual(alpha1, beta1, alpha2, beta2, M: int = 32) -> float:
    """Largest singular value of ``S1 S2 - S2 S1`` restricted to the input modes ``[-M/2, M/2]``.

    Both products are formed from exact rectangular matrices, so the result is
    the norm of the true commutator restricted to that span.
    """
    r = max(s.radius for s in (alpha1, beta1, alpha2, beta2))
    if M < 4 * r:
        raise WindowTooSmall(f"M={M} must be at least 4 x support radius {r}")
    h = M // 2
    s12 = product_matrix(alpha1, beta1, alpha2, beta2, h)
    s21 = product_matrix(alpha2, beta2, alpha1, beta1, h)
    return (s12 - s21).norm()


def _solve_case_iii(alpha1, beta1, alpha2, beta2, tol_sv=1e-8):
    lo = min(s.lo for s in (alpha1, beta1, alpha2, beta2) if not s.is_zero)
    hi = max(s.hi for s in (alpha1, beta1, alpha2, beta2) if not s.is_zero)
    nonconst = np.arange(lo, hi + 1) != 0
    cols = []
    for al, be in ((alpha1, beta1), (alpha2, beta2)):
        cols.append(np.concatenate([(al - be).dense(lo, hi), al.dense(lo, hi)[nonconst]]))
    A = np.column_stack(cols)
    _, s, vh = np.linalg.svd(A)
    if s[-1] >= tol_sv:
        return None
    a, b = np.conj(vh[-1])
    scale = a if abs(a) >= abs(b) else b
    a, b = a / scale, b / scale
    lhs = a * alpha1 + b * alpha2
    rhs = a * beta1 + b * beta2
    c = lhs[0]
    if lhs.isclose(c, 1e-8) and rhs.isclose(c, 1e-8):
        return complex(a), complex(b), complex(c)
    return None


def commute_check(alpha1, beta1, alpha2, beta2, M: int | None = None) -> CommuteVerdict:
    """Classify commutativity of ``S_{alpha1,beta1}`` and ``S_{alpha2,beta2}``.

    Branches, reported in the priority order II, I, III:

    * II: ``alpha1 = beta1`` and ``alpha2 = beta2``;
    * I: ``alpha1, alpha2`` analytic and ``beta1, beta2`` co-analytic;
    * III: ``a alpha1 + b alpha2 = a beta1 + b beta2 = c`` with ``(a, b) != 0``,
      found as the null vector of the stacked coefficient system.

    The commutator residual is always reported; a negative verdict needs it to
    exceed ``1e-3``, otherwise the result is ``UNCLASSIFIED``.
    """
    r = max(s.radius for s in (alpha1, beta1, alpha2, beta2))
    M = M or max(32, 4 * r)
    res = commutator_residual(alpha1, beta1, alpha2, beta2, M)
    if alpha1.isclose(beta1) and alpha2.isclose(beta2):
        return CommuteVerdict(Commute.BY_II, res)
    if is_analytic(alpha1) and is_analytic(alpha2) and is_coanalytic(beta1) and is_coanalytic(beta2):
        return CommuteVerdict(Commute.BY_I, res)
    abc = _solve_case_iii(alpha1, beta1, alpha2, beta2)
    if abc is not None:
        return CommuteVerdict(Commute.BY_III, res, *abc)
    if res > 1e-3:
        return CommuteVerdict(Commute.NON_COMMUTING, res)
    return CommuteVerdict(Commute.UNCLASSIFIED, res)


def riesz_identity_residual(phi1, psi1, phi2, psi2, side: str = "Q", trials: int = 8,
                            degree: int = 8, seed: int = 42) -> float:
    """Max relative residual of ``psi1 Q(phi2 f) - psi2 Q(phi1 f)`` over random ``f`` in H^2.

    With ``side="P"`` the identity ``psi1 P(phi2 g) = psi2 P(phi1 g)`` is tested
    over random ``g`` in H^2-perp instead.
    """
    rng = np.random.default_rng(seed)
    proj, window, analytic = (riesz_q, (0, degree), True) if side == "Q" else (riesz_p, (-degree - 1, -1), False)
    worst = 0.0
    for _ in range(trials):
        f = random_vector(rng, window, analytic=analytic)
        lhs = multiply(psi1, proj(multiply(phi2, f)))
        rhs = multiply(psi2, proj(multiply(phi1, f)))
        worst = max(worst, (lhs - rhs).norm() / f.norm())
    return worst


def lemma64_residual(alpha1, beta1, alpha2, beta2, trials: int = 8, seed: int = 42) -> float:
    """Residual of the two identities equivalent to commutativity.

    ``(alpha1-beta1) Q(alpha2 f) = (alpha2-beta2) Q(alpha1 f)`` for ``f`` in H^2
    and ``(alpha1-beta1) P(beta2 g) = (alpha2-beta2) P(beta1 g)`` for ``g`` in
    H^2-perp; returns the larger of the two maxima over random trials.
    """
    d1, d2 = alpha1 - beta1, alpha2 - beta2
    q = riesz_identity_residual(alpha1, d1, alpha2, d2, "Q", trials, seed=seed)
    p = riesz_identity_residual(beta1, d1, beta2, d2, "P", trials, seed=seed + 1)
    return max(q, p)


def shift_commutant_check(alpha: Symbol, beta: Symbol) -> bool:
    """``S_{alpha,beta}`` commutes with ``S_{z,zbar}`` iff alpha analytic and beta co-analytic."""
    return is_analytic(alpha) and is_coanalytic(beta)


@dataclass
class TwoShiftVerdict:
    """``alpha``/``beta`` are set iff T commutes with both half shifts and has the right form."""

    accepted: bool
    residual_z0: float
    residual_0zbar: float
    alpha: Symbol | None = None
    beta: Symbol | None = None
    reason: str = ""


def two_shift_commutant_check(T: OperatorMatrix, tol: float = 1e-10) -> TwoShiftVerdict:
    """Test whether ``T`` commutes with ``S_{z,0}`` and ``S_{0,zbar}`` (hence is an analytic/co-analytic S).

    ``T`` is a square truncation on ``[-M, M]``; commutators are measured on
    the interior input columns ``|n| <= M/2``.
    """
    lo, hi = T.in_window
    if T.in_window != T.out_window or lo != -hi:
        raise WindowTooSmall("two_shift_commutant_check needs a symmetric square window")
    M = hi
    if M < 4:
        raise WindowTooSmall("window radius must be at least 4")
    r1 = interior_commutator(T, build_matrix(Z, ZERO, M, "square"), M // 2)
    r2 = interior_commutator(T, build_matrix(ZERO, ZBAR, M, "square"), M // 2)
    if r1 > tol or r2 > tol:
        return TwoShiftVerdict(False, r1, r2, reason="does not commute with both half shifts")
    sv = verify_structure(T, tol)
    if not sv.is_s_alpha_beta:
        return TwoShiftVerdict(False, r1, r2, reason=f"structure violated at {sv.witness}")
    if not (is_analytic(sv.alpha) and is_coanalytic(sv.beta)):
        return TwoShiftVerdict(False, r1, r2, reason="reconstructed symbols have wrong analyticity")
    return TwoShiftVerdict(True, r1, r2, sv.alpha, sv.beta)
