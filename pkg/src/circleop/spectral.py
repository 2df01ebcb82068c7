"""Spectra of ``S_{alpha,beta}`` for continuous (band-limited) symbols.

Membership is decided by the winding-number formula

    sigma(S) = range(alpha) u range(beta) u {lam : ind_lam alpha != ind_lam beta}.

Truncation-based singular values (:func:`resolvent_min_sv`) are cross-check
oracles only.  Square truncations of non-normal operators show spectral
pollution (e.g. the compression of multiplication by ``z`` is nilpotent), so
:func:`resolvent_lower_bound` offers a pollution-free two-sided alternative
built from exact rectangular truncations of ``S - lam`` and its adjoint.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import CircleOpError, CurveTouchesPoint, GridTooCoarse, WindowTooSmall
from .operators import (
    CoeffVector, apply, apply_adjoint, build_matrix, multiply, operator_matrix,
    riesz_p, riesz_q,
)
from .symbol import DELTA_WIND, ZERO, Symbol, sample, winding_number

__all__ = [
    "GridSpec", "SpectrumReport", "Invertibility", "ShiftedAdjointSolution",
    "resolvent_min_sv", "resolvent_lower_bound", "spectrum_continuous", "half_spectrum",
    "essential_range_in_approx_spectrum", "invertible_by_index", "index_via_roots",
    "robust_index", "solve_shifted_adjoint",
]

TOL_SOLVE = 1e-8
ROOT_GUARD = 1e-6
N_MAX = 2 ** 16


@dataclass(frozen=True)
class GridSpec:
    """``n x n`` grid of spectral parameters over ``[re0, re1] x [im0, im1]``."""

    re0: float = -2.0
    re1: float = 2.0
    im0: float = -2.0
    im1: float = 2.0
    n: int = 41

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(",")
        if len(parts) != 5:
            raise CircleOpError(f"grid spec must be 're0,re1,im0,im1,n', got {text!r}")
        *box, n = parts
        return cls(*map(float, box), int(n))

    def points(self) -> np.ndarray:
        re = np.linspace(self.re0, self.re1, self.n)
        im = np.linspace(self.im0, self.im1, self.n)
        return (re[None, :] + 1j * im[:, None]).ravel()


def resolvent_min_sv(alpha: Symbol, beta: Symbol, lam: complex, M: int = 64) -> float:
    """Smallest singular value of the square truncation of ``S_{alpha-lam, beta-lam}``."""
    r = max(alpha.radius, beta.radius)
    if M < 4 * r:
        raise WindowTooSmall(f"M={M} must be at least 4 x support radius {r}")
    T = build_matrix(alpha - lam, beta - lam, M, "square")
    return float(T.svdvals()[-1])


def resolvent_lower_bound(alpha: Symbol, beta: Symbol, lam: complex, M: int = 64) -> float:
    """``min`` of the smallest singular values of exact truncations of ``S - lam`` and ``S* - conj(lam)``.

    Each factor is at least ``1 / |(S - lam)^{-1}|`` when ``lam`` is outside
    the spectrum, so no spurious small values appear there.
    """
    a, b = alpha - lam, beta - lam
    r = max(a.radius, b.radius)
    fwd = operator_matrix(a, b, (-M, M))
    # (S*)[m, n] = conj(S[n, m]); inputs of S* on [-M, M] reach outputs within r of the window
    adj = operator_matrix(a, b, (-M - r, M + r), (-M, M)).H
    return float(min(fwd.svdvals()[-1], adj.svdvals()[-1]))


def index_via_roots(s: Symbol) -> int:
    """Winding number around 0 by counting roots of ``z^{-lo} s(z)`` inside the unit disk.

    Roots come from companion-matrix eigenvalues (``numpy.roots``); a root within
    ``1e-6`` of the circle is rejected.
    """
    if s.is_zero:
        raise CurveTouchesPoint("zero symbol has no index")
    roots = np.roots(s.data[::-1])
    if roots.size and np.min(np.abs(np.abs(roots) - 1)) <= ROOT_GUARD:
        raise CurveTouchesPoint("root within guard band of the unit circle")
    return int(np.count_nonzero(np.abs(roots) < 1)) + s.lo


def robust_index(s, lam: complex = 0.0, N: int = 1024) -> tuple[int, bool]:
    """Winding number around ``lam`` with automatic grid refinement.

    Returns ``(index, fallback)``; ``fallback`` is True when the grid could not
    be refined enough and the root count of the Laurent polynomial was used.
    """
    while True:
        try:
            return winding_number(s, lam, N), False
        except GridTooCoarse:
            if N >= N_MAX or not isinstance(s, Symbol):
                break
            N *= 2
    if isinstance(s, Symbol):
        return index_via_roots(s - lam), True
    raise GridTooCoarse(f"could not resolve winding around {lam}")


@dataclass
class SpectrumReport:
    """Per-point spectral classification; ``ind_*`` is ``None`` on the curve guard band."""

    points: np.ndarray
    in_range_a: np.ndarray
    in_range_b: np.ndarray
    ind_a: list
    ind_b: list
    in_spectrum: np.ndarray
    min_sv: np.ndarray
    flagged: np.ndarray = field(default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "in_range_a", "in_range_b", "ind_a", "ind_b", "in_spectrum", "min_sv"])
        for i, lam in enumerate(self.points):
            w.writerow([
                repr(float(lam.real)), repr(float(lam.imag)),
                int(self.in_range_a[i]), int(self.in_range_b[i]),
                "" if self.ind_a[i] is None else self.ind_a[i],
                "" if self.ind_b[i] is None else self.ind_b[i],
                int(self.in_spectrum[i]),
                "" if np.isnan(self.min_sv[i]) else repr(float(self.min_sv[i])),
            ])
        return buf.getvalue()


def _classify_side(values, s, lam, eps, N):
    dist = np.min(np.abs(values - lam))
    in_range = bool(dist < eps)
    if dist <= max(0.1 * eps, DELTA_WIND):
        return in_range, None, not in_range
    try:
        ind, fallback = robust_index(s, lam, N)
    except CurveTouchesPoint:
        # the root count puts lam on the curve although no sample came that close
        return True, None, True
    return in_range, ind, fallback


def _range_values(s, N, eps):
    """Samples dense enough that the chord error along the curve stays below ``eps / 10``."""
    if not isinstance(s, Symbol):
        return s.values
    modes = np.arange(s.lo, s.hi + 1)
    speed = float(np.sum(np.abs(modes * s.data)))
    while speed * np.pi / N > 0.1 * eps and N < 2 ** 20:
        N *= 2
    return sample(s, N).values


def _grid_points(grid):
    if isinstance(grid, GridSpec):
        return grid.points()
    return np.atleast_1d(np.asarray(grid, dtype=complex)).ravel()


def spectrum_continuous(alpha, beta, grid, N: int = 1024, eps: float = 1e-3,
                        M: int | None = None) -> SpectrumReport:
    """Classify each grid point by the winding-number spectrum formula.

    Parameters
    ----------
    alpha, beta : Symbol or GridSampling
        Band-limited representatives of continuous symbols.
    grid : GridSpec or array_like of complex
    eps : float
        Range-membership radius; points within ``0.1 eps`` of a curve skip the
        winding computation and are reported on-curve.
    M : int, optional
        If given, :func:`resolvent_min_sv` at radius ``M`` is attached to each
        point as a cross-check (never used to decide membership).
    """
    pts = _grid_points(grid)
    va, vb = _range_values(alpha, N, eps), _range_values(beta, N, eps)
    n = pts.size
    ra, rb = np.zeros(n, bool), np.zeros(n, bool)
    ia, ib = [None] * n, [None] * n
    spec, flag = np.zeros(n, bool), np.zeros(n, bool)
    for i, lam in enumerate(pts):
        ra[i], ia[i], fa = _classify_side(va, alpha, lam, eps, N)
        rb[i], ib[i], fb = _classify_side(vb, beta, lam, eps, N)
        flag[i] = fa or fb
        spec[i] = ra[i] or rb[i] or (ia[i] is not None and ib[i] is not None and ia[i] != ib[i])
    if M is not None:
        min_sv = np.array(pmap(lambda lam: resolvent_min_sv(alpha, beta, lam, M), pts))
    else:
        min_sv = np.full(n, np.nan)
    return SpectrumReport(pts, ra, rb, ia, ib, spec, min_sv, flag)


def half_spectrum(alpha: Symbol, side: str, grid, N: int = 1024, eps: float = 1e-3) -> SpectrumReport:
    """Spectrum of ``S_{alpha,0}`` (``side="alpha-zero-beta"``) or ``S_{0,alpha}`` (``"beta-zero-alpha"``).

    Both equal the Toeplitz-type spectrum ``range u {ind != 0}`` with ``0``
    adjoined; the compression to H^2-perp has the reflected symbol, whose index
    is the negative, so the same formula serves both sides.
    """
    if side not in ("alpha-zero-beta", "beta-zero-alpha"):
        raise CircleOpError(f"unknown side {side!r}")
    pts = _grid_points(grid)
    va = _range_values(alpha, N, eps)
    n = pts.size
    rng_, ind = np.zeros(n, bool), [None] * n
    spec, flag = np.zeros(n, bool), np.zeros(n, bool)
    at_zero = np.abs(pts) < eps
    for i, lam in enumerate(pts):
        rng_[i], ind[i], flag[i] = _classify_side(va, alpha, lam, eps, N)
        spec[i] = rng_[i] or at_zero[i] or (ind[i] is not None and ind[i] != 0)
    zero_ind = [None if z else 0 for z in at_zero]
    if side == "alpha-zero-beta":
        return SpectrumReport(pts, rng_, at_zero, ind, zero_ind, spec, np.full(n, np.nan), flag)
    return SpectrumReport(pts, at_zero, rng_, zero_ind, ind, spec, np.full(n, np.nan), flag)


def _window(M):
    n = np.arange(M + 1)
    return np.sin(np.pi * (n + 1) / (M + 2))


def essential_range_in_approx_spectrum(alpha: Symbol, beta: Symbol, lam: complex, M: int = 128,
                                       trials: int = 4, eps: float = 0.05, N: int = 1024) -> float:
    """Approximate-eigenvector witness for a point of the essential range.

    Builds unit vectors peaked at angles where ``alpha`` (analytic vectors) or
    ``beta`` (co-analytic vectors) is within ``eps`` of ``lam``: sine-windowed
    polynomials and Poisson-type kernels truncated to ``M + 1`` modes.  Returns
    the smallest ``|(S - lam) f|`` found.
    """
    theta = 2 * np.pi * np.arange(N) / N
    windows = [_window(M)] + [(1 - 2 ** k / M) ** np.arange(M + 1) for k in (1, 2, 3)]
    n = np.arange(M + 1)
    best = math.inf
    found = False
    for s, analytic in ((alpha, True), (beta, False)):
        dist = np.abs(sample(s, N).values - lam)
        hits = np.flatnonzero(dist < eps)
        if hits.size == 0:
            continue
        found = True
        for j in hits[np.argsort(dist[hits])][:trials]:
            t0 = theta[j]
            for w in windows:
                if analytic:
                    f = CoeffVector(0, w * np.exp(-1j * n * t0))
                else:
                    f = CoeffVector(-M - 1, (w * np.exp(1j * (n + 1) * t0))[::-1])
                f = f * (1 / f.norm())
                r = (apply(alpha, beta, f) - lam * f).norm()
                best = min(best, r)
    if not found:
        raise CircleOpError(f"{lam} is not within {eps} of the range of alpha or beta")
    return best


class Invertibility(enum.Enum):
    INVERTIBLE = "Invertible"
    NOT_INVERTIBLE = "NotInvertible"
    CURVE_THROUGH_ZERO = "CurveThroughZero"


def invertible_by_index(alpha, beta, N: int = 1024, delta: float = DELTA_WIND) -> Invertibility:
    """``S_{alpha,beta}`` is invertible iff neither symbol vanishes and their indices at 0 agree."""
    for s in (alpha, beta):
        v = sample(s, N).values if isinstance(s, Symbol) else s.values
        if np.min(np.abs(v)) <= delta:
            return Invertibility.CURVE_THROUGH_ZERO
    if robust_index(alpha, 0, N)[0] == robust_index(beta, 0, N)[0]:
        return Invertibility.INVERTIBLE
    return Invertibility.NOT_INVERTIBLE


@dataclass
class ShiftedAdjointSolution:
    f: CoeffVector
    residual: float
    condition: float
    flagged: bool


def solve_shifted_adjoint(alpha: Symbol, lam: complex, g: CoeffVector, M: int = 256,
                          tol: float = TOL_SOLVE) -> ShiftedAdjointSolution:
    """Solve ``(S*_{alpha,0} - lam) f = g`` for ``lam != 0``.

    The H^2-perp part is explicit, ``Q f = -Q g / lam``; the H^2 part solves the
    Toeplitz system ``(T_{conj alpha} - lam) P f = P g + P(conj(alpha) Q g) / lam``
    truncated to the modes ``[0, M]``.  The relative residual is measured on the
    modes ``<= M // 2`` (the negative modes are exact); the solution is flagged
    when it exceeds ``tol`` or the system is ill conditioned.
    """
    if lam == 0:
        raise CircleOpError("lam must be nonzero")
    if g.hi > M // 2:
        raise WindowTooSmall(f"g reaches mode {g.hi}; need M >= {2 * g.hi}")
    qf = riesz_q(g) * (-1 / lam)
    rhs = riesz_p(g) + riesz_p(multiply(alpha.conj(), riesz_q(g))) * (1 / lam)
    T = operator_matrix(alpha.conj(), ZERO, (0, M), (0, M)).entries - lam * np.eye(M + 1)
    cond = float(np.linalg.cond(T))
    pf = CoeffVector(0, np.linalg.solve(T, rhs.embed((0, M)).entries))
    f = pf + qf
    res = apply_adjoint(alpha, ZERO, f) - lam * f - g
    lo = min(res.lo, g.lo, 0)
    res = res.embed((lo, M // 2))
    rel = res.norm() / max(g.norm(), np.finfo(float).tiny)
    return ShiftedAdjointSolution(f, rel, cond, bool(rel > tol or cond > 1e12))
