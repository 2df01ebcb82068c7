"""Symbols on the unit circle.

A :class:`Symbol` is a finite Laurent series ``sum_n c_n z^n`` stored densely
between its lowest and highest nonzero mode.  Continuous (non polynomial)
functions enter through :class:`GridSampling` on an equispaced grid and can be
turned into band-limited symbols with :func:`from_samples`.

Grid-level predicates (essential range, zero-set measure) are approximations
of the corresponding measure-theoretic notions: they cannot see modifications
on sets of measure zero.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CircleOpError, CurveTouchesPoint, GridTooCoarse, SymbolParseError

__all__ = [
    "TAU_EQ", "DELTA_WIND",
    "Symbol", "GridSampling",
    "make_symbol", "parse_symbol", "parse_complex", "format_symbol", "format_complex",
    "sample", "from_samples", "sample_function",
    "sup_norm", "is_analytic", "is_coanalytic",
    "winding_number", "in_essential_range", "zero_set_measure",
    "analytic_inverse", "vanishing_on_arc",
    "ONE", "Z", "ZBAR", "ZERO",
]

#: coefficientwise equality tolerance
TAU_EQ = 1e-10
#: minimal distance between a curve and the point whose winding is computed
DELTA_WIND = 1e-6


class Symbol:
    """Finite Laurent series on the unit circle.

    Parameters
    ----------
    lo : int
        Mode of ``data[0]``.
    data : array_like of complex
        Dense coefficients for modes ``lo, lo + 1, ...``.  Leading and trailing
        exact zeros are trimmed, so ``lo``/``hi`` are the true support bounds.
    """

    __slots__ = ("_lo", "_data")

    def __init__(self, lo, data):
        data = np.atleast_1d(np.asarray(data, dtype=complex)).copy()
        nz = np.flatnonzero(data)
        if nz.size == 0:
            lo, data = 0, np.zeros(0, dtype=complex)
        else:
            lo = int(lo) + int(nz[0])
            data = data[nz[0]:nz[-1] + 1]
        data.flags.writeable = False
        self._lo = lo
        self._data = data

    # -- structure ---------------------------------------------------------
    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + self._data.size - 1

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def coeffs(self) -> dict:
        """Mode -> coefficient map of the nonzero coefficients."""
        return {self._lo + int(i): complex(self._data[i]) for i in np.flatnonzero(self._data)}

    @property
    def is_zero(self) -> bool:
        return self._data.size == 0

    @property
    def radius(self) -> int:
        """``max(|lo|, |hi|)``; 0 for the zero symbol."""
        if self.is_zero:
            return 0
        return max(abs(self.lo), abs(self.hi))

    def __getitem__(self, n: int) -> complex:
        i = n - self._lo
        if 0 <= i < self._data.size:
            return complex(self._data[i])
        return 0j

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients on modes ``lo..hi`` (zero padded, truncated)."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        if self.is_zero:
            return out
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo:b - lo + 1] = self._data[a - self.lo:b - self.lo + 1]
        return out

    # -- algebra -----------------------------------------------------------
    def __add__(self, other):
        other = _as_symbol(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return Symbol(lo, self.dense(lo, hi) + other.dense(lo, hi))

    __radd__ = __add__

    def __neg__(self):
        return Symbol(self._lo, -self._data)

    def __sub__(self, other):
        return self + (-_as_symbol(other))

    def __rsub__(self, other):
        return _as_symbol(other) - self

    def __mul__(self, other):
        if isinstance(other, Symbol):
            if self.is_zero or other.is_zero:
                return ZERO
            return Symbol(self.lo + other.lo, np.convolve(self._data, other._data))
        if np.isscalar(other):
            return Symbol(self._lo, self._data * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Symbol(self._lo, self._data / complex(c))

    def __pow__(self, k: int):
        if k < 0:
            raise CircleOpError("negative powers of a symbol are not Laurent polynomials")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "Symbol":
        """Pointwise complex conjugate on the circle: ``c_n -> conj(c_{-n})``."""
        if self.is_zero:
            return self
        return Symbol(-self.hi, np.conj(self._data[::-1]))

    def analytic_part(self) -> "Symbol":
        """Riesz projection onto modes ``n >= 0``."""
        return Symbol(max(self.lo, 0), self.dense(max(self.lo, 0), self.hi)) if self.hi >= 0 else ZERO

    def coanalytic_part(self) -> "Symbol":
        """Riesz projection onto modes ``n <= -1``."""
        return Symbol(self.lo, self.dense(self.lo, min(self.hi, -1))) if self.lo <= -1 else ZERO

    def chop(self, tol: float) -> "Symbol":
        """Drop coefficients of magnitude ``<= tol``."""
        d = self._data.copy()
        d[np.abs(d) <= tol] = 0
        return Symbol(self._lo, d)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z):
        """Evaluate the Laurent series at (nonzero) complex ``z``."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        # Horner on the analytic polynomial z^{-lo} s(z)
        acc = np.zeros_like(z)
        for c in self._data[::-1]:
            acc = acc * z + c
        return acc * z ** self.lo

    def on_circle(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def l2_norm(self) -> float:
        """L^2 norm (normalized measure), i.e. the Euclidean norm of the coefficients."""
        return float(np.linalg.norm(self._data))

    # -- comparison ---------------------------------------------------------
    def isclose(self, other, tol: float = TAU_EQ) -> bool:
        diff = self - _as_symbol(other)
        return diff.is_zero or float(np.max(np.abs(diff.data))) <= tol

    def __eq__(self, other):
        if not isinstance(other, (Symbol, int, float, complex)):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __repr__(self):
        return f"Symbol({format_symbol(self)!r})"


def _as_symbol(x) -> Symbol:
    if isinstance(x, Symbol):
        return x
    if np.isscalar(x):
        return Symbol(0, [x])
    raise TypeError(f"cannot interpret {type(x).__name__} as a Symbol")


ONE = Symbol(0, [1.0])
Z = Symbol(1, [1.0])
ZBAR = Symbol(-1, [1.0])
ZERO = Symbol(0, [])

_RESERVED = {"one": ONE, "z": Z, "zbar": ZBAR, "zero": ZERO}


def make_symbol(coeffs: Iterable[tuple]) -> Symbol:
    """Build a symbol from ``(mode, coefficient)`` pairs.

    Zero coefficients are dropped; a repeated mode is an error.
    """
    pairs = [(int(n), complex(c)) for n, c in coeffs]
    modes = [n for n, _ in pairs]
    if len(set(modes)) != len(modes):
        dup = sorted({n for n in modes if modes.count(n) > 1})
        raise CircleOpError(f"duplicate mode(s) {dup}")
    pairs = [(n, c) for n, c in pairs if c != 0]
    if not pairs:
        return ZERO
    lo = min(n for n, _ in pairs)
    hi = max(n for n, _ in pairs)
    data = np.zeros(hi - lo + 1, dtype=complex)
    for n, c in pairs:
        data[n - lo] = c
    return Symbol(lo, data)


# -- literal mini-language -----------------------------------------------------

_TERM = re.compile(r"^\s*([+-]?\d+)\s*:\s*(\S+?)\s*$")


def _parse_complex(text: str, position: int) -> complex:
    t = text.strip().replace("I", "i")
    if not t or "j" in t:
        raise SymbolParseError(f"malformed coefficient {text!r}", position)
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise SymbolParseError(f"malformed coefficient {text!r}", position) from None


def parse_complex(text: str) -> complex:
    """Parse one number of the literal language (``2``, ``-1.5+2i``, ``3i``)."""
    return _parse_complex(text, 0)


def parse_symbol(text: str) -> Symbol:
    """Parse the symbol literal language.

    Semicolon-separated ``mode:value`` terms where ``value`` is a real or
    complex number written ``re``, ``re+imi``, ``re-imi`` or ``imi``; e.g.
    ``"0:2;1:1"`` is ``2 + z`` and ``"-1:1"`` is ``zbar``.  The names ``one``,
    ``z``, ``zbar`` and ``zero`` are reserved.
    """
    key = text.strip()
    if key in _RESERVED:
        return _RESERVED[key]
    if not key:
        raise SymbolParseError("empty symbol literal", 0)
    pairs, pos = [], 0
    for chunk in text.split(";"):
        if chunk.strip():
            m = _TERM.match(chunk)
            if m is None:
                raise SymbolParseError(f"expected 'mode:value', got {chunk.strip()!r}", pos)
            pairs.append((int(m.group(1)), _parse_complex(m.group(2), pos + m.start(2))))
        pos += len(chunk) + 1
    try:
        return make_symbol(pairs)
    except CircleOpError as exc:
        raise SymbolParseError(str(exc), 0) from None


def format_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def format_symbol(s: Symbol) -> str:
    """Inverse of :func:`parse_symbol` (modulo float formatting)."""
    if s.is_zero:
        return "zero"
    return ";".join(f"{n}:{format_complex(c)}" for n, c in sorted(s.coeffs.items()))


# -- grid sampling -------------------------------------------------------------

@dataclass(frozen=True)
class GridSampling:
    """Samples ``values[j] = f(exp(2 pi i j / n_points))``."""

    n_points: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.n_points,):
            raise CircleOpError(f"expected {self.n_points} samples, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_points) / self.n_points


def _check_grid(N: int, radius: int = 0):
    if N < 16 or N & (N - 1):
        raise CircleOpError(f"grid size must be a power of two >= 16, got {N}")
    if N <= 2 * radius:
        raise CircleOpError(f"grid size {N} too small for support radius {radius}")


def sample(s: Symbol, N: int) -> GridSampling:
    """Evaluate ``s`` exactly on the ``N``-point equispaced grid."""
    _check_grid(N, s.radius)
    if s.is_zero:
        return GridSampling(N, np.zeros(N, dtype=complex))
    # the alias-free FFT layout holds because N > 2 * radius
    buf = np.zeros(N, dtype=complex)
    modes = np.arange(s.lo, s.hi + 1)
    buf[modes % N] = s.data
    return GridSampling(N, np.fft.ifft(buf) * N)


def sample_function(f, N: int) -> GridSampling:
    """Sample a vectorized function of the angle ``theta`` on the ``N`` grid."""
    _check_grid(N)
    theta = 2 * np.pi * np.arange(N) / N
    return GridSampling(N, np.broadcast_to(np.asarray(f(theta), dtype=complex), (N,)))


def from_samples(g: GridSampling, degree: int) -> Symbol:
    """Band-limited symbol with the discrete Fourier coefficients ``|n| <= degree``."""
    N = g.n_points
    if degree < 0 or degree >= N / 2:
        raise CircleOpError(f"degree {degree} must satisfy 0 <= degree < N/2 = {N / 2} (aliasing)")
    c = np.fft.fft(g.values) / N
    modes = np.arange(-degree, degree + 1)
    s = Symbol(-degree, c[modes % N])
    return s.chop(1e-14 * max(1.0, float(np.max(np.abs(c)))))


def _values(s, N) -> np.ndarray:
    if isinstance(s, GridSampling):
        return s.values
    return sample(s, N).values


def sup_norm(s, N: int = 1024) -> float:
    """Grid maximum of ``|s|``; exact for constants, a lower bound in general."""
    v = _values(s, N)
    return float(np.max(np.abs(v))) if v.size else 0.0


def is_analytic(s: Symbol, tol: float = TAU_EQ) -> bool:
    return s.is_zero or s.lo >= 0 or bool(np.all(np.abs(s.dense(s.lo, -1)) <= tol))


def is_coanalytic(s: Symbol, tol: float = TAU_EQ) -> bool:
    return s.is_zero or s.hi <= 0 or bool(np.all(np.abs(s.dense(1, s.hi)) <= tol))


def winding_number(s, a: complex = 0.0, N: int = 1024, delta: float = DELTA_WIND) -> int:
    """Winding number of the closed curve ``theta -> s(e^{i theta})`` around ``a``.

    Sums the principal phase increments between consecutive grid samples.

    Raises
    ------
    CurveTouchesPoint
        if some sample lies within ``delta`` of ``a``.
    GridTooCoarse
        if a phase increment reaches ``pi / 2``.
    """
    v = _values(s, N) - a
    if np.min(np.abs(v)) <= delta:
        raise CurveTouchesPoint(f"curve passes within {delta:g} of {a}")
    incr = np.angle(np.roll(v, -1) / v)
    if np.max(np.abs(incr)) >= np.pi / 2:
        raise GridTooCoarse(f"phase increment {np.max(np.abs(incr)):.3f} >= pi/2 on N={v.size}")
    return int(round(float(np.sum(incr)) / (2 * np.pi)))


def in_essential_range(s, lam: complex, eps: float, N: int = 1024) -> bool:
    """True iff at least one grid sample lies within ``eps`` of ``lam``."""
    if eps <= 0:
        raise CircleOpError("eps must be positive")
    return bool(np.any(np.abs(_values(s, N) - lam) < eps))


def zero_set_measure(s, tol: float = 1e-3, N: int = 1024) -> float:
    """Normalized grid-fraction estimate of the measure of ``{|s| < tol}``."""
    if tol <= 0:
        raise CircleOpError("tol must be positive")
    v = _values(s, N)
    return float(np.count_nonzero(np.abs(v) < tol)) / v.size


def analytic_inverse(s: Symbol, degree: int) -> Symbol:
    """Truncated series of ``1/s`` for an analytic or co-analytic polynomial.

    ``s`` must not vanish on the closed disk (resp. its exterior) for the
    series to converge on the circle; the caller picks ``degree``.
    """
    if is_analytic(s) and not s.is_zero:
        a = s.dense(0, s.hi)
        if a[0] == 0:
            raise CircleOpError("analytic symbol vanishes at 0; 1/s is not analytic")
        b = np.zeros(degree + 1, dtype=complex)
        b[0] = 1 / a[0]
        for n in range(1, degree + 1):
            k = np.arange(1, min(n, a.size - 1) + 1)
            b[n] = -np.dot(a[k], b[n - k]) / a[0]
        return Symbol(0, b)
    if is_coanalytic(s) and not s.is_zero:
        return analytic_inverse(s.conj(), degree).conj()
    raise CircleOpError("series inverse needs an analytic or co-analytic symbol")


def _smooth_step(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        h0 = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        h1 = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return h0 / (h0 + h1)


def vanishing_on_arc(start: float, stop: float, ramp: float = 0.4):
    """C-infinity cutoff that is 0 on the arc ``[start, stop]`` and 1 beyond ``ramp``.

    The arc runs counterclockwise from ``start`` to ``stop`` (radians).
    Returns a vectorized function of ``theta``.
    """
    length = (stop - start) % (2 * np.pi)

    def cutoff(theta):
        t = (np.asarray(theta, dtype=float) - start) % (2 * np.pi)
        dist = np.where(t <= length, 0.0, np.minimum(t - length, 2 * np.pi - t))
        return _smooth_step(dist / ramp)

    return cutoff
