"""Operator norms of ``S_{alpha,beta}``.

Two independent routes are provided:

* :func:`operator_norm` -- largest singular value of the square truncation
  (an SVD oracle, nondecreasing in the truncation radius);
* :func:`ny_norm_estimate` -- derivative-free minimization over analytic
  polynomials ``k`` of the sup-norm objective :func:`ny_objective`.  The
  infimum of that objective equals the *squared* operator norm.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import CircleOpError, WindowTooSmall
from .operators import build_matrix
from .symbol import TAU_EQ, Symbol, is_analytic, sample, sup_norm

__all__ = [
    "NormEstimate", "NYEstimate", "NormCase",
    "operator_norm", "norm_bounds", "ny_objective", "ny_norm_estimate", "norm_case_classifier",
]

logger = logging.getLogger(__name__)

TOL_CONV = 1e-4
TOL_NY = 1e-2


@dataclass
class NormEstimate:
    value: float
    M: int
    converged: bool
    previous: float | None = None

    def __float__(self):
        return self.value


def _square_norm(alpha, beta, M):
    return build_matrix(alpha, beta, M, mode="square").norm()


def operator_norm(alpha: Symbol, beta: Symbol, M: int = 64, tol_conv: float = TOL_CONV) -> NormEstimate:
    """Largest singular value of the square truncation of ``S_{alpha,beta}`` to ``[-M, M]``.

    Convergence is judged against the value at ``M // 2``; a non-converged
    estimate is flagged, not raised.
    """
    r = max(alpha.radius, beta.radius)
    if M < 4 * r:
        raise WindowTooSmall(f"M={M} must be at least 4 x support radius {r}")
    value = _square_norm(alpha, beta, M)
    prev = _square_norm(alpha, beta, M // 2) if M >= 2 else None
    converged = prev is not None and abs(value - prev) < tol_conv
    if not converged:
        logger.info("operator_norm not converged at M=%d: %s vs %s", M, value, prev)
    return NormEstimate(value, M, converged, prev)


def norm_bounds(alpha: Symbol, beta: Symbol, N: int = 1024) -> tuple[float, float]:
    """``(max(|alpha|_inf, |beta|_inf), sqrt(|alpha|_inf^2 + |beta|_inf^2))``."""
    a, b = sup_norm(alpha, N), sup_norm(beta, N)
    return max(a, b), math.hypot(a, b)


def _ny_parts(alpha, beta, N):
    a = sample(alpha, N).values
    b = sample(beta, N).values
    mean = (np.abs(a) ** 2 + np.abs(b) ** 2) / 2
    half_diff2 = ((np.abs(a) ** 2 - np.abs(b) ** 2) / 2) ** 2
    return a * np.conj(b), mean, half_diff2


def ny_objective(alpha: Symbol, beta: Symbol, k: Symbol, N: int = 512) -> float:
    """Grid maximum of ``(|a|^2+|b|^2)/2 + sqrt(|a conj(b) - k|^2 + ((|a|^2-|b|^2)/2)^2)``."""
    if not is_analytic(k):
        raise CircleOpError("k must be analytic")
    cross, mean, half_diff2 = _ny_parts(alpha, beta, max(N, _min_grid(alpha, beta, k)))
    kv = sample(k, cross.size).values
    return float(np.max(mean + np.sqrt(np.abs(cross - kv) ** 2 + half_diff2)))


def _min_grid(*symbols):
    r = max(s.radius for s in symbols)
    N = 16
    while N <= 4 * r:
        N *= 2
    return N


@dataclass
class NYEstimate:
    """Result of :func:`ny_norm_estimate`; ``value`` approximates the squared norm."""

    value: float
    k: Symbol
    initial: float
    converged: bool

    @property
    def norm(self) -> float:
        return math.sqrt(self.value)

    def __float__(self):
        return self.value


def ny_norm_estimate(alpha: Symbol, beta: Symbol, deg: int = 8, N: int = 256, iters: int = 4000,
                     restarts: int = 5, seed: int = 42) -> NYEstimate:
    """Minimize :func:`ny_objective` over analytic polynomials ``k`` of degree ``<= deg``.

    Nelder-Mead on the ``2 (deg + 1)`` real coefficients, started from the
    truncation of ``P(alpha conj(beta))`` and from ``restarts`` random
    perturbations of it; each start is polished by repeated simplex rebuilds.
    ``converged`` is False when some run hit its evaluation budget.
    """
    if deg < 0:
        raise CircleOpError("deg must be non-negative")
    N = max(N, _min_grid(alpha, beta, Symbol(deg, [1.0])))
    cross, mean, half_diff2 = _ny_parts(alpha, beta, N)
    theta = 2 * np.pi * np.arange(N) / N
    basis = np.exp(1j * np.outer(np.arange(deg + 1), theta))

    def objective(x):
        k = (x[:deg + 1] + 1j * x[deg + 1:]) @ basis
        return float(np.max(mean + np.sqrt(np.abs(cross - k) ** 2 + half_diff2)))

    c0 = (alpha * beta.conj()).dense(0, deg)
    x0 = np.concatenate([c0.real, c0.imag])
    initial = objective(x0)
    rng = np.random.default_rng(seed)
    best_x, best = x0, initial
    converged = True
    for r in range(restarts + 1):
        x = x0 if r == 0 else x0 + 0.3 * rng.standard_normal(x0.size)
        for _ in range(4):
            res = minimize(objective, x, method="Nelder-Mead",
                           options=dict(maxfev=iters, xatol=1e-10, fatol=1e-12, adaptive=True))
            x = res.x
        if res.nfev >= iters:
            converged = False
        if res.fun < best:
            best, best_x = float(res.fun), res.x
    k = Symbol(0, best_x[:deg + 1] + 1j * best_x[deg + 1:])
    return NYEstimate(best, k, initial, converged)


class NormCase(enum.Enum):
    """Closed-form norm cases: III gives ``max`` of sup-norms, IV gives their root-sum-square."""

    CASE_III = "CaseIII"
    CASE_IV = "CaseIV"
    UNCLASSIFIED = "Unclassified"


def norm_case_classifier(alpha: Symbol, beta: Symbol, N: int = 1024) -> NormCase:
    """Detect the closed-form norm cases.

    ``CASE_III`` when ``alpha conj(beta)`` is analytic.  ``CASE_IV`` when
    ``|alpha| = |beta|`` is constant on the grid and ``alpha conj(beta)`` is a
    nonzero element of H^2-perp (a sufficient witness for the quotient
    condition, which is not decidable from finitely many coefficients).
    """
    cross = alpha * beta.conj()
    if is_analytic(cross):
        return NormCase.CASE_III
    N = max(N, _min_grid(alpha, beta))
    a = np.abs(sample(alpha, N).values)
    b = np.abs(sample(beta, N).values)
    constant = np.var(a) < 1e-10 and np.var(b) < 1e-10 and abs(a.mean() - b.mean()) < 1e-8
    if constant and np.all(np.abs(cross.dense(0, max(cross.hi, 0))) <= TAU_EQ):
        return NormCase.CASE_IV
    return NormCase.UNCLASSIFIED
