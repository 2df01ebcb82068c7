"""Singular integral operators ``S_{alpha,beta} f = alpha P f + beta Q f`` on Fourier modes.

Vectors are finite windows of Fourier coefficients (:class:`CoeffVector`).
Operator applications are exact: the output window is enlarged so that no
coefficient is lost.  :class:`OperatorMatrix` holds truncated matrices in two
flavours, ``exact`` (rectangular, no spillover) and ``square`` (compression to
``[-M, M]``), see :func:`build_matrix`.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import CircleOpError, WindowTooSmall
from .symbol import ONE, TAU_EQ, ZBAR, ZERO, Z, Symbol, format_complex

__all__ = [
    "CoeffVector", "OperatorMatrix", "StructureVerdict",
    "riesz_p", "riesz_q", "multiply", "apply", "apply_adjoint", "shift_power",
    "operator_matrix", "matrix_from_map", "build_matrix", "verify_structure",
    "build_remark_operator", "interior_commutator", "random_vector",
    "matrix_to_csv", "matrix_from_csv",
]


def _hull(*windows):
    return min(w[0] for w in windows), max(w[1] for w in windows)


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Fourier coefficients of an L^2 function on the modes ``window[0]..window[1]``."""

    lo: int
    entries: np.ndarray

    def __post_init__(self):
        e = np.atleast_1d(np.asarray(self.entries, dtype=complex))
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "lo", int(self.lo))

    @classmethod
    def zeros(cls, window):
        lo, hi = window
        return cls(lo, np.zeros(hi - lo + 1, dtype=complex))

    @classmethod
    def unit(cls, n: int, window=None):
        lo, hi = window if window is not None else (n, n)
        if not lo <= n <= hi:
            raise WindowTooSmall(f"mode {n} outside window {(lo, hi)}")
        v = np.zeros(hi - lo + 1, dtype=complex)
        v[n - lo] = 1
        return cls(lo, v)

    @classmethod
    def from_dict(cls, coeffs: dict, window=None):
        if window is None:
            window = (min(coeffs), max(coeffs)) if coeffs else (0, 0)
        v = cls.zeros(window)
        for n, c in coeffs.items():
            v.entries[n - window[0]] = c
        return v

    @classmethod
    def from_symbol(cls, s: Symbol, window=None):
        if window is None:
            window = (s.lo, s.hi) if not s.is_zero else (0, 0)
        return cls(window[0], s.dense(*window))

    @property
    def hi(self) -> int:
        return self.lo + self.entries.size - 1

    @property
    def window(self):
        return self.lo, self.hi

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def __getitem__(self, n: int) -> complex:
        i = n - self.lo
        return complex(self.entries[i]) if 0 <= i < self.entries.size else 0j

    def to_symbol(self) -> Symbol:
        return Symbol(self.lo, self.entries)

    def to_dict(self, tol: float = 0.0) -> dict:
        return {int(n): complex(c) for n, c in zip(self.modes, self.entries) if abs(c) > tol}

    def embed(self, window) -> "CoeffVector":
        """Restrict or zero-pad to another window."""
        lo, hi = window
        out = np.zeros(hi - lo + 1, dtype=complex)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo:b - lo + 1] = self.entries[a - self.lo:b - self.lo + 1]
        return CoeffVector(lo, out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def inner(self, other: "CoeffVector") -> complex:
        """``<self, other> = sum_n self_n conj(other_n)``."""
        w = _hull(self.window, other.window)
        return complex(np.vdot(other.embed(w).entries, self.embed(w).entries))

    def __add__(self, other):
        w = _hull(self.window, other.window)
        return CoeffVector(w[0], self.embed(w).entries + other.embed(w).entries)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        return CoeffVector(self.lo, self.entries * complex(c))

    __rmul__ = __mul__

    def allclose(self, other, tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol

    def __repr__(self):
        return f"CoeffVector(window={self.window}, entries={self.entries!r})"


def random_vector(rng, window, analytic=None) -> CoeffVector:
    """Gaussian random vector; ``analytic=True/False`` keeps only the H^2 / H^2-perp part."""
    lo, hi = window
    v = CoeffVector(lo, rng.standard_normal(hi - lo + 1) + 1j * rng.standard_normal(hi - lo + 1))
    if analytic is True:
        return riesz_p(v)
    if analytic is False:
        return riesz_q(v)
    return v


def riesz_p(f: CoeffVector) -> CoeffVector:
    """Orthogonal projection onto H^2 (keeps modes ``n >= 0``)."""
    e = f.entries.copy()
    e[f.modes < 0] = 0
    return CoeffVector(f.lo, e)


def riesz_q(f: CoeffVector) -> CoeffVector:
    """Orthogonal projection onto the complement of H^2 (keeps modes ``n < 0``)."""
    e = f.entries.copy()
    e[f.modes >= 0] = 0
    return CoeffVector(f.lo, e)


def multiply(s: Symbol, f: CoeffVector) -> CoeffVector:
    """Exact product ``s * f`` on the window ``[f.lo + s.lo, f.hi + s.hi]``."""
    if s.is_zero:
        return CoeffVector.zeros(f.window)
    return CoeffVector(f.lo + s.lo, np.convolve(s.data, f.entries))


def apply(alpha: Symbol, beta: Symbol, f: CoeffVector) -> CoeffVector:
    """``S_{alpha,beta} f`` without truncation loss."""
    a = multiply(alpha, riesz_p(f))
    b = multiply(beta, riesz_q(f))
    return a + b


def apply_adjoint(alpha: Symbol, beta: Symbol, f: CoeffVector) -> CoeffVector:
    """``S*_{alpha,beta} f = P(conj(alpha) f) + Q(conj(beta) f)``."""
    return riesz_p(multiply(alpha.conj(), f)) + riesz_q(multiply(beta.conj(), f))


def shift_power(n: int, f: CoeffVector) -> CoeffVector:
    """``S_{z,zbar}^n f = z^n P f + zbar^n Q f``."""
    if n < 0:
        raise CircleOpError("shift power must be non-negative")
    return apply(Symbol(n, [1.0]), Symbol(-n, [1.0]), f)


# -- matrices --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Truncated operator matrix; ``entries[i, j]`` is the (output mode, input mode) entry."""

    in_window: tuple
    out_window: tuple
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        shape = (self.out_window[1] - self.out_window[0] + 1, self.in_window[1] - self.in_window[0] + 1)
        if e.shape != shape:
            raise CircleOpError(f"entries shape {e.shape} does not match windows {shape}")
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "in_window", tuple(int(x) for x in self.in_window))
        object.__setattr__(self, "out_window", tuple(int(x) for x in self.out_window))

    @property
    def in_modes(self):
        return np.arange(self.in_window[0], self.in_window[1] + 1)

    @property
    def out_modes(self):
        return np.arange(self.out_window[0], self.out_window[1] + 1)

    def entry(self, m: int, n: int) -> complex:
        i, j = m - self.out_window[0], n - self.in_window[0]
        if not (0 <= j < self.entries.shape[1]):
            raise WindowTooSmall(f"input mode {n} outside {self.in_window}")
        if not (0 <= i < self.entries.shape[0]):
            return 0j
        return complex(self.entries[i, j])

    def column(self, n: int) -> CoeffVector:
        return CoeffVector(self.out_window[0], self.entries[:, n - self.in_window[0]])

    def __call__(self, f: CoeffVector) -> CoeffVector:
        return CoeffVector(self.out_window[0], self.entries @ f.embed(self.in_window).entries)

    @property
    def H(self) -> "OperatorMatrix":
        return OperatorMatrix(self.out_window, self.in_window, self.entries.conj().T)

    def embed(self, in_window=None, out_window=None) -> "OperatorMatrix":
        """Restrict/zero-pad rows and columns to new windows."""
        in_window = in_window or self.in_window
        out_window = out_window or self.out_window
        out = np.zeros((out_window[1] - out_window[0] + 1, in_window[1] - in_window[0] + 1), dtype=complex)
        r0, r1 = max(out_window[0], self.out_window[0]), min(out_window[1], self.out_window[1])
        c0, c1 = max(in_window[0], self.in_window[0]), min(in_window[1], self.in_window[1])
        if r0 <= r1 and c0 <= c1:
            out[r0 - out_window[0]:r1 - out_window[0] + 1, c0 - in_window[0]:c1 - in_window[0] + 1] = \
                self.entries[r0 - self.out_window[0]:r1 - self.out_window[0] + 1,
                             c0 - self.in_window[0]:c1 - self.in_window[0] + 1]
        return OperatorMatrix(in_window, out_window, out)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        # rows of `other` outside self.in_window would be silently dropped
        lo, hi = other.out_window
        if lo < self.in_window[0] or hi > self.in_window[1]:
            raise WindowTooSmall(f"output window {other.out_window} not inside {self.in_window}")
        left = self.embed(in_window=other.out_window)
        return OperatorMatrix(other.in_window, self.out_window, left.entries @ other.entries)

    def __sub__(self, other):
        out = _hull(self.out_window, other.out_window)
        if self.in_window != other.in_window:
            raise CircleOpError("input windows differ")
        return OperatorMatrix(self.in_window, out,
                              self.embed(out_window=out).entries - other.embed(out_window=out).entries)

    def __add__(self, other):
        return self - (-1) * other

    def __mul__(self, c):
        return OperatorMatrix(self.in_window, self.out_window, self.entries * complex(c))

    __rmul__ = __mul__

    def norm(self) -> float:
        """Spectral norm (largest singular value)."""
        if self.entries.size == 0:
            return 0.0
        return float(np.linalg.norm(self.entries, 2))

    def svdvals(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)


def operator_matrix(alpha: Symbol, beta: Symbol, in_window, out_window=None) -> OperatorMatrix:
    """Matrix of ``S_{alpha,beta}`` with entry ``a_{m-n}`` (``n >= 0``) or ``b_{m-n}`` (``n <= -1``).

    Without ``out_window`` the exact output hull is used.
    """
    lo, hi = in_window
    if out_window is None:
        los = [lo + s.lo for s in (alpha, beta) if not s.is_zero] or [lo]
        his = [hi + s.hi for s in (alpha, beta) if not s.is_zero] or [hi]
        out_window = (min(los + [lo]), max(his + [hi]))
    rows = np.arange(out_window[0], out_window[1] + 1)
    cols = np.arange(lo, hi + 1)
    diff = rows[:, None] - cols[None, :]
    lo_d, hi_d = diff.min(), diff.max()
    a = alpha.dense(lo_d, hi_d)
    b = beta.dense(lo_d, hi_d)
    entries = np.where(cols[None, :] >= 0, a[diff - lo_d], b[diff - lo_d])
    return OperatorMatrix(in_window, out_window, entries)


def matrix_from_map(fn, in_window) -> OperatorMatrix:
    """Exact matrix of a linear map given as a function on :class:`CoeffVector`."""
    cols = [fn(CoeffVector.unit(n, in_window)) for n in range(in_window[0], in_window[1] + 1)]
    out = _hull(*(c.window for c in cols))
    return OperatorMatrix(in_window, out, np.column_stack([c.embed(out).entries for c in cols]))


def build_matrix(alpha: Symbol, beta: Symbol, M: int, mode: str = "exact") -> OperatorMatrix:
    """Truncated matrix of ``S_{alpha,beta}`` on the input modes ``[-M, M]``.

    Parameters
    ----------
    mode : {"exact", "square"}
        ``exact`` enlarges the output window so polynomial symbols lose nothing;
        ``square`` is the compression to ``[-M, M] x [-M, M]``.
    """
    if mode == "exact":
        r = max(alpha.radius, beta.radius)
        if M < r:
            raise WindowTooSmall(f"M={M} smaller than the symbol support radius {r}")
        return operator_matrix(alpha, beta, (-M, M))
    if mode == "square":
        return operator_matrix(alpha, beta, (-M, M), (-M, M))
    raise CircleOpError(f"unknown truncation mode {mode!r}")


@dataclass
class StructureVerdict:
    """Outcome of :func:`verify_structure`.

    ``is_s_alpha_beta`` is the verdict; ``alpha``/``beta`` are the reconstructed
    symbols when accepted, ``witness`` the worst violating ``(m, n)`` otherwise.
    """

    is_s_alpha_beta: bool
    alpha: Symbol | None
    beta: Symbol | None
    residual: float
    witness: tuple | None = None


def verify_structure(T: OperatorMatrix, tol: float = 1e-10) -> StructureVerdict:
    """Decide whether a truncated matrix has the ``S_{alpha,beta}`` diagonal structure.

    Candidate coefficients are read off the columns ``n = 0`` (``alpha = T 1``)
    and ``n = -1`` (``beta = z T zbar``); diagonal offsets not covered by those
    columns are taken from the nearest column on the same side.  Every entry is
    then compared with ``a_{m-n}`` (``n >= 0``) or ``b_{m-n}`` (``n <= -1``).
    """
    lo, hi = T.in_window
    if lo > -2 or hi < 2:
        raise WindowTooSmall(f"input window {T.in_window} must contain [-2, 2]")
    rows, cols = T.out_modes, T.in_modes
    d_lo, d_hi = rows[0] - cols[-1], rows[-1] - cols[0]
    a = np.full(d_hi - d_lo + 1, np.nan, dtype=complex)
    b = np.full(d_hi - d_lo + 1, np.nan, dtype=complex)
    # columns ordered by distance from 0 (resp. -1) so the proof's columns win
    for n in sorted(cols[cols >= 0]):
        _fill_missing(a, T.entries[:, n - lo], rows - n - d_lo)
    for n in sorted(cols[cols <= -1], reverse=True):
        _fill_missing(b, T.entries[:, n - lo], rows - n - d_lo)
    diff = rows[:, None] - cols[None, :] - d_lo
    expected = np.where(cols[None, :] >= 0, a[diff], b[diff])
    err = np.abs(T.entries - expected)
    worst = np.unravel_index(np.argmax(err), err.shape)
    residual = float(err[worst])
    a_sym = Symbol(d_lo, np.nan_to_num(a)).chop(0.0)
    b_sym = Symbol(d_lo, np.nan_to_num(b)).chop(0.0)
    if residual <= tol:
        return StructureVerdict(True, a_sym, b_sym, residual)
    return StructureVerdict(False, None, None, residual, (int(rows[worst[0]]), int(cols[worst[1]])))


def _fill_missing(target, column, offsets):
    missing = np.isnan(target[offsets])
    target[offsets[missing]] = column[missing]


def build_remark_operator(M: int) -> OperatorMatrix:
    """Square matrix of ``T z^n = z^n + zbar^{n+1}`` (``n >= 0``), ``T z^n = 0`` (``n < 0``).

    The operator commutes with ``S_{z,zbar}`` but is not of the form
    ``S_{alpha,beta}``.
    """
    if M < 2:
        raise WindowTooSmall("M must be at least 2")
    size = 2 * M + 1
    e = np.zeros((size, size), dtype=complex)
    for n in range(0, M + 1):
        e[n + M, n + M] += 1
        if -(n + 1) >= -M:
            e[-(n + 1) + M, n + M] += 1
    return OperatorMatrix((-M, M), (-M, M), e)


def interior_commutator(A: OperatorMatrix, B: OperatorMatrix, interior: int) -> float:
    """Largest singular value of ``AB - BA`` on the input columns ``|n| <= interior``.

    ``A`` and ``B`` must be square on the same window.  The restriction removes
    truncation edge effects as long as both operators move each column with
    ``|n| <= interior`` to modes inside the window.
    """
    if A.in_window != A.out_window or B.in_window != A.in_window or B.out_window != A.out_window:
        raise CircleOpError("interior_commutator needs square matrices on a common window")
    C = A.entries @ B.entries - B.entries @ A.entries
    cols = A.in_modes
    keep = np.abs(cols) <= interior
    sub = C[:, keep]
    return float(np.linalg.norm(sub, 2)) if sub.size else 0.0


# -- CSV dump ------------------------------------------------------------------------

def matrix_to_csv(T: OperatorMatrix) -> str:
    """``out_modes`` header row, ``in_modes`` header row, then one row per output mode."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["out_modes", *map(int, T.out_modes)])
    w.writerow(["in_modes", *map(int, T.in_modes)])
    for row in T.entries:
        w.writerow([_fmt_entry(c) for c in row])
    return buf.getvalue()


def _fmt_entry(c) -> str:
    c = complex(c)
    s = format_complex(c)
    return s if c.imag != 0 else f"{s}+0.0i"


def matrix_from_csv(text: str) -> OperatorMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 2 or rows[0][0] != "out_modes" or rows[1][0] != "in_modes":
        raise CircleOpError("missing out_modes/in_modes header rows")
    out_modes = [int(x) for x in rows[0][1:]]
    in_modes = [int(x) for x in rows[1][1:]]
    e = np.array([[complex(x.replace("i", "j")) for x in r] for r in rows[2:]], dtype=complex)
    e = e.reshape(len(out_modes), len(in_modes))
    return OperatorMatrix((in_modes[0], in_modes[-1]), (out_modes[0], out_modes[-1]), e)
