"""Invariant and reducing subspaces of ``S_{z,zbar}``, compactness and injectivity.

Inner functions are finite Blaschke products; they enter computations only
through truncated Taylor expansions whose accuracy is checked on the circle.
Subspaces live on a symmetric mode window ``[-M, M]`` and residuals are read
on the interior modes ``|m| <= M/2`` where window edges cannot leak in.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CircleOpError, WindowTooSmall
from .operators import (
    CoeffVector, OperatorMatrix, apply, apply_adjoint, build_matrix, matrix_from_map, operator_matrix,
)
from .symbol import (
    ZBAR, Z, GridSampling, Symbol, from_samples, sample, zero_set_measure,
)

__all__ = [
    "BlaschkeProduct", "SubspaceBasis", "ReducingVerdict", "Injectivity", "InjectivityVerdict",
    "blaschke_coeffs", "invariant_subspace_basis", "canonical_subspace", "basis_from_vectors",
    "invariance_residual", "reducing_check", "noncompactness_witness", "compact_distance_ratio",
    "kernel_basis", "injectivity_classifier",
]

TOL_BLASCHKE = 1e-8


@dataclass(frozen=True)
class BlaschkeProduct:
    """``constant * z**power * prod (z - z_j) / (1 - conj(z_j) z)``."""

    constant: complex = 1.0
    power: int = 0
    zeros: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))
        if abs(abs(self.constant) - 1) > 1e-12:
            raise CircleOpError(f"constant {self.constant} is not unimodular")
        if self.power < 0:
            raise CircleOpError("power must be non-negative")
        for a in self.zeros:
            if abs(a) >= 1 - 1e-9:
                raise CircleOpError(f"zero {a} is not inside the unit disk")

    @property
    def degree(self) -> int:
        return self.power + len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.constant * z ** self.power
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out


def _required_degree(b: BlaschkeProduct, tol: float) -> int:
    # tail of each factor beyond z^d is bounded by (1 + |a|) |a|^d on the circle
    extra = 0
    m = max(len(b.zeros), 1)
    for a in b.zeros:
        r = abs(a)
        if r > 0:
            extra = max(extra, math.ceil(math.log(tol / (m * (1 + r))) / math.log(r)))
    return b.degree + extra


def blaschke_coeffs(b: BlaschkeProduct, degree: int, tol: float = TOL_BLASCHKE) -> Symbol:
    """Taylor coefficients of ``b`` up to ``z**degree``.

    Each factor expands as ``-a + (1 - |a|^2) sum_k conj(a)^(k-1) z^k``; the
    truncated series are multiplied and cut at ``degree``.  The result is
    rejected (with the degree that would suffice) when its boundary values
    deviate from modulus one by more than ``tol``.
    """
    if degree < b.degree:
        raise WindowTooSmall(f"degree {degree} below the Blaschke degree {b.degree}")
    c = np.zeros(degree + 1, dtype=complex)
    c[b.power] = b.constant
    k = np.arange(1, degree + 1)
    for a in b.zeros:
        f = np.empty(degree + 1, dtype=complex)
        f[0] = -a
        f[1:] = (1 - abs(a) ** 2) * np.conj(a) ** (k - 1)
        c = np.convolve(c, f)[:degree + 1]
    s = Symbol(0, c)
    N = 1024
    while N <= 4 * degree:
        N *= 2
    err = float(np.max(np.abs(np.abs(sample(s, N).values) - 1)))
    if err > tol:
        raise CircleOpError(
            f"degree {degree} gives boundary modulus error {err:.2e} > {tol:.0e}; "
            f"use degree >= {_required_degree(b, tol)}")
    return s


@dataclass
class SubspaceBasis:
    """Orthonormal columns ``matrix`` (modes ``window[0]..window[1]`` by vectors)."""

    matrix: np.ndarray
    window: tuple

    def __post_init__(self):
        lo, hi = self.window
        self.matrix = np.asarray(self.matrix, dtype=complex).reshape(hi - lo + 1, -1)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def vectors(self) -> list:
        return [CoeffVector(self.window[0], self.matrix[:, j]) for j in range(self.dim)]

    def gram_error(self) -> float:
        G = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(G - np.eye(self.dim)))) if self.dim else 0.0

    def project(self, v: CoeffVector) -> CoeffVector:
        x = v.embed(self.window).entries
        return CoeffVector(self.window[0], self.matrix @ (self.matrix.conj().T @ x))


def basis_from_vectors(vectors, window, rank_tol: float = 1e-10) -> SubspaceBasis:
    """Orthonormal basis of the span of ``vectors`` restricted to ``window`` (SVD, rank-revealing)."""
    lo, hi = window
    if not vectors:
        return SubspaceBasis(np.zeros((hi - lo + 1, 0)), window)
    A = np.column_stack([v.embed(window).entries for v in vectors])
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    return SubspaceBasis(U[:, :rank], window)


def invariant_subspace_basis(phi: BlaschkeProduct | None, psi: BlaschkeProduct | None,
                             M: int) -> SubspaceBasis:
    """Basis of ``phi H^2 + conj(psi) H^2-perp`` cut to ``K = M/2`` generators per side.

    Generators are ``phi z^k`` and ``conj(psi) zbar^(k+1)``, ``0 <= k <= K``, on
    the window ``[-M, M]``.  ``None`` stands for the zero function, dropping
    that half.
    """
    degs = [b.degree for b in (phi, psi) if b is not None]
    if M < 2 or M < 4 * max(degs, default=0):
        raise WindowTooSmall(f"M={M} must be at least 4 x the Blaschke degrees {degs}")
    K = M // 2
    window = (-M, M)
    gens = []
    if phi is not None:
        p = blaschke_coeffs(phi, M - K)
        gens += [CoeffVector(k, p.dense(0, M - K)) for k in range(K + 1)]
    if psi is not None:
        q = blaschke_coeffs(psi, M - K - 1).conj()
        gens += [CoeffVector(-(k + 1) - (M - K - 1), q.dense(-(M - K - 1), 0)) for k in range(K + 1)]
    return basis_from_vectors(gens, window)


def canonical_subspace(name: str, M: int) -> SubspaceBasis:
    """Window bases of ``{0}``, ``H^2``, ``H^2-perp`` and ``L^2`` (names ``0, H2, H2perp, L2``)."""
    trivial = BlaschkeProduct()
    table = {"0": (None, None), "H2": (trivial, None), "H2perp": (None, trivial), "L2": (trivial, trivial)}
    if name not in table:
        raise CircleOpError(f"unknown canonical subspace {name!r}")
    if name == "0":
        return SubspaceBasis(np.zeros((2 * M + 1, 0)), (-M, M))
    return invariant_subspace_basis(*table[name], M)


def invariance_residual(B: SubspaceBasis, alpha: Symbol = Z, beta: Symbol = ZBAR,
                        adjoint: bool = False, interior: int | None = None) -> float:
    """``max_v |(I - Pi_B) S v|`` over basis vectors, read on the modes ``|m| <= interior``.

    ``interior`` defaults to half the window radius.  With ``adjoint=True`` the
    adjoint ``S*_{alpha,beta}`` is applied instead.
    """
    lo, hi = B.window
    interior = min(-lo, hi) // 2 if interior is None else interior
    op = apply_adjoint if adjoint else apply
    worst = 0.0
    for v in B.vectors:
        w = op(alpha, beta, v)
        r = w.embed(B.window) - B.project(w)
        worst = max(worst, r.embed((-interior, interior)).norm())
    return worst


@dataclass
class ReducingVerdict:
    reducing: bool
    residual: float
    adjoint_residual: float

    @property
    def label(self) -> str:
        return "Reducing" if self.reducing else "NotReducing"


def reducing_check(B: SubspaceBasis, tol: float = 1e-8) -> ReducingVerdict:
    """Is the window subspace invariant under both ``S_{z,zbar}`` and its adjoint?"""
    r = invariance_residual(B)
    ra = invariance_residual(B, adjoint=True)
    return ReducingVerdict(r <= tol and ra <= tol, r, ra)


def noncompactness_witness(alpha: Symbol, beta: Symbol, M: int | None = None,
                           count: int = 11) -> tuple[list, list]:
    """Norms of ``S z^n`` and ``S zbar^(n+1)`` for ``n < count``.

    These equal ``|alpha|_2`` and ``|beta|_2`` for every ``n``, so the images
    of an orthonormal sequence never decay unless both symbols vanish.
    """
    r = max(alpha.radius, beta.radius)
    M = r + count if M is None else M
    if M < r + count:
        raise WindowTooSmall(f"M={M} must be at least support + {count}")
    window = (-M, M)
    ana = [apply(alpha, beta, CoeffVector.unit(n, window)).norm() for n in range(count)]
    co = [apply(alpha, beta, CoeffVector.unit(-n - 1, window)).norm() for n in range(count)]
    return ana, co


def compact_distance_ratio(alpha: Symbol, beta: Symbol, K: OperatorMatrix, M: int = 32) -> float:
    """``|S - K| / |S|`` on the square truncation to ``[-M, M]``; ``K`` is embedded there."""
    S = build_matrix(alpha, beta, M, "square")
    Kw = K.embed(S.in_window, S.out_window)
    return (S - Kw).norm() / S.norm()


def _as_symbol(s, degree):
    if isinstance(s, Symbol):
        return s
    if isinstance(s, GridSampling):
        return from_samples(s, min(degree, s.n_points // 2 - 1))
    raise CircleOpError(f"expected Symbol or GridSampling, got {type(s).__name__}")


def kernel_basis(alpha, beta, M: int = 32, tol: float = 1e-8, adjoint: bool = False) -> list:
    """Right singular vectors with singular value ``< tol`` of the exact truncation, smallest first.

    Grid samplings are band-limited to degree ``M`` first.  An empty list
    certifies injectivity on the window ``[-M, M]``.
    """
    a, b = _as_symbol(alpha, M), _as_symbol(beta, M)
    window = (-M, M)
    if adjoint:
        T = matrix_from_map(lambda f: apply_adjoint(a, b, f), window)
    else:
        T = operator_matrix(a, b, window)
    _, s, vh = np.linalg.svd(T.entries, full_matrices=False)
    return [CoeffVector(-M, np.conj(vh[j])) for j in np.flatnonzero(s < tol)[::-1]]


class Injectivity(enum.Enum):
    CASE_I = "CaseI"
    CASE_II_S_INJECTIVE = "CaseII_SInjective"
    CASE_III_ADJOINT_INJECTIVE = "CaseIII_AdjointInjective"
    CASE_III_ADJOINT_NOT_INJECTIVE = "CaseIII_AdjointNotInjective"
    UNCLASSIFIED = "Unclassified"


@dataclass
class InjectivityVerdict:
    kind: Injectivity
    measures: dict
    witness: CoeffVector | None = None
    witness_ratio: float | None = None
    extra: dict = field(default_factory=dict)


def _grid_values(s, N):
    if isinstance(s, GridSampling):
        if s.n_points != N:
            raise CircleOpError(f"sampling has {s.n_points} points, expected {N}")
        return s.values
    return sample(s, N).values


def _adjoint_on_grid(a, b, g):
    """``|S*_{a,b} g| / |g|`` for grid values; products on the grid, P/Q split by FFT."""
    N = g.size
    modes = np.fft.fftfreq(N, 1 / N)
    u = np.fft.fft(np.conj(a) * g) / N
    v = np.fft.fft(np.conj(b) * g) / N
    out = np.where(modes >= 0, u, v)
    return float(np.linalg.norm(out) / np.linalg.norm(np.fft.fft(g) / N))


def injectivity_classifier(alpha, beta, tol: float = 1e-3, N: int = 1024,
                           min_points: int = 3) -> InjectivityVerdict:
    """Match the zero-set configuration of ``alpha, beta`` to the injectivity clauses.

    Zero sets are ``{|s| < tol}`` on the ``N`` grid; fewer than ``min_points``
    grid points count as measure zero.  Clauses are tried in the order

    * ``CASE_I``: one zero set is null, so ``S`` or ``S*`` is injective;
    * ``CASE_III_ADJOINT_NOT_INJECTIVE``: the zero sets overlap in positive
      measure.  The witness is the indicator of the overlap band-limited to
      degree ``N/4``, with ``|S* g| / |g|`` computed on the grid;
    * ``CASE_II_S_INJECTIVE``: both null-free and disjoint, hence ``Z_alpha``
      minus ``Z_beta`` has positive measure and ``S`` is injective.

    Under this order the adjoint-injective clause and ``UNCLASSIFIED`` are
    never produced for valid input; they remain in the enum for completeness.
    """
    a, b = _grid_values(alpha, N), _grid_values(beta, N)
    if np.max(np.abs(a)) < tol or np.max(np.abs(b)) < tol:
        raise CircleOpError("both symbols must be nonzero")
    za, zb = np.abs(a) < tol, np.abs(b) < tol
    floor = min_points / N

    def measure(m):
        return m if m >= floor else 0.0

    meas = {
        "Z_alpha": measure(zero_set_measure(GridSampling(N, a), tol, N)),
        "Z_beta": measure(zero_set_measure(GridSampling(N, b), tol, N)),
        "Z_alpha_minus_Z_beta": measure(np.count_nonzero(za & ~zb) / N),
        "Z_alpha_cap_Z_beta": measure(np.count_nonzero(za & zb) / N),
    }
    if meas["Z_alpha"] == 0 or meas["Z_beta"] == 0:
        return InjectivityVerdict(Injectivity.CASE_I, meas)
    if meas["Z_alpha_cap_Z_beta"] > 0:
        chi = GridSampling(N, (za & zb).astype(complex))
        g_sym = from_samples(chi, N // 4)
        g = sample(g_sym, N).values
        ratio = _adjoint_on_grid(a, b, g)
        return InjectivityVerdict(Injectivity.CASE_III_ADJOINT_NOT_INJECTIVE, meas,
                                  CoeffVector.from_symbol(g_sym), ratio)
    if meas["Z_alpha_minus_Z_beta"] > 0:
        return InjectivityVerdict(Injectivity.CASE_II_S_INJECTIVE, meas)
    return InjectivityVerdict(Injectivity.UNCLASSIFIED, meas)
