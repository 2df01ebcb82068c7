import math

import numpy as np
import pytest
from hypothesis import given

from circleop import (
    ONE, ZBAR, ZERO, Z, CircleOpError, CurveTouchesPoint, GridSampling, GridTooCoarse, Symbol,
    SymbolParseError, analytic_inverse, format_symbol, from_samples, in_essential_range, is_analytic,
    is_coanalytic, make_symbol, parse_symbol, sample, sample_function, sup_norm, vanishing_on_arc,
    winding_number, zero_set_measure,
)
from circleop.acceptance import random_nonvanishing
from conftest import laurent


# -- construction and the literal language -------------------------------------------

def test_make_symbol_examples():
    assert make_symbol([(0, 2), (1, 1)]) == 2 + Z
    assert make_symbol([(-1, 1)]) == ZBAR
    s = make_symbol([(0, 0)])
    assert s.is_zero and s.coeffs == {}


def test_make_symbol_rejects_duplicate_modes():
    with pytest.raises(CircleOpError):
        make_symbol([(1, 1), (1, 2)])


@pytest.mark.parametrize("text, expected", [
    ("0:2;1:1", 2 + Z),
    ("-1:1", ZBAR),
    ("one", ONE),
    ("zero", ZERO),
    ("0:1+2i; 3:-0.5i", Symbol(0, [1 + 2j, 0, 0, -0.5j])),
])
def test_parse_symbol(text, expected):
    assert parse_symbol(text) == expected


@pytest.mark.parametrize("text, position", [("0:2;1:x", 6), ("0:2;oops", 4), ("", 0)])
def test_parse_errors_report_position(text, position):
    with pytest.raises(SymbolParseError) as info:
        parse_symbol(text)
    assert info.value.position == position
    assert f"position {position}" in str(info.value)


@given(laurent())
def test_format_parse_round_trip(s):
    assert parse_symbol(format_symbol(s)).isclose(s, 0.0)


def test_equality_uses_tolerance():
    assert Z + Symbol(0, [1e-12]) == Z
    assert Z + Symbol(0, [1e-8]) != Z


# -- arithmetic against pointwise evaluation -----------------------------------------

@given(laurent(), laurent())
def test_arithmetic_matches_pointwise(s, t):
    theta = np.linspace(0, 2 * np.pi, 7)
    zs = np.exp(1j * theta)
    np.testing.assert_allclose((s * t)(zs), s(zs) * t(zs), atol=1e-9)
    np.testing.assert_allclose((s - t)(zs), s(zs) - t(zs), atol=1e-12)
    np.testing.assert_allclose(s.conj()(zs), np.conj(s(zs)), atol=1e-12)


def test_analytic_and_coanalytic_parts_split():
    s = Symbol(-2, [1, 2, 3, 4])
    assert s.analytic_part() + s.coanalytic_part() == s
    assert is_analytic(s.analytic_part()) and is_coanalytic(s.coanalytic_part())
    assert s.coanalytic_part()[0] == 0


# -- sampling ------------------------------------------------------------------------

def test_sample_examples():
    v = sample(Z, 16).values
    np.testing.assert_allclose(v[[0, 4, 8, 12]], [1, 1j, -1, -1j], atol=1e-15)
    np.testing.assert_allclose(sample(Symbol(0, [3.0]), 32).values, 3)
    assert abs(sample(2 + Z, 16).values[0] - 3) < 1e-15


@pytest.mark.parametrize("N", [8, 24, 32])
def test_sample_rejects_bad_grids(N):
    with pytest.raises(CircleOpError):
        sample(Z ** 16, N)


def test_sample_oracle_direct_sum(rng):
    s = Symbol(-3, rng.standard_normal(8) + 1j * rng.standard_normal(8))
    theta = 2 * np.pi * np.arange(64) / 64
    direct = sum(c * np.exp(1j * n * theta) for n, c in s.coeffs.items())
    np.testing.assert_allclose(sample(s, 64).values, direct, atol=1e-12)


@given(laurent(max_degree=6))
def test_round_trip_sample_from_samples(s):
    back = from_samples(sample(s, 64), 7)
    assert back.isclose(s, 1e-12)


def test_from_samples_examples():
    assert from_samples(sample(Z, 16), 1).isclose(Z, 1e-12)
    assert from_samples(sample(2 + ZBAR, 16), 2).isclose(make_symbol([(-1, 1), (0, 2)]), 1e-12)
    with pytest.raises(CircleOpError):
        from_samples(sample(Z, 16), 8)


def test_from_samples_of_mollified_indicator_converges():
    cut = vanishing_on_arc(0.0, np.pi, ramp=0.5)
    N = 4096
    g = sample_function(cut, N)
    # oracle: Fourier integrals by trapezoid quadrature on a much finer grid
    fine = 2 ** 16
    th = 2 * np.pi * np.arange(fine) / fine
    vals = cut(th)
    errors = []
    for degree in (8, 16, 32, 64):
        s = from_samples(g, degree)
        for n in (0, 1, 5, degree):
            ref = np.mean(vals * np.exp(-1j * n * th))
            assert abs(s[n] - ref) < 1e-10
        errors.append(np.max(np.abs(sample(s, N).values - g.values)))
    assert all(a > b for a, b in zip(errors, errors[1:]))


# -- norms and predicates ------------------------------------------------------------

def test_sup_norm_examples():
    assert sup_norm(Z) == pytest.approx(1)
    assert sup_norm(2 + Z) == pytest.approx(3)
    assert sup_norm((Z + ZBAR) / 2) == pytest.approx(1)
    assert sup_norm(Symbol(0, [-4.0])) == 4.0


@given(laurent(), laurent())
def test_sup_norm_submultiplicative(s, t):
    assert sup_norm(s * t) <= sup_norm(s) * sup_norm(t) + 1e-9


def test_sup_norm_monotone_under_refinement(rng):
    s = Symbol(-2, rng.standard_normal(6))
    values = [sup_norm(s, N) for N in (16, 32, 64, 128)]
    assert values == sorted(values)


@pytest.mark.parametrize("s, ana, co", [(2 + Z, True, False), (ZBAR, False, True), (Symbol(0, [5.0]), True, True)])
def test_analyticity(s, ana, co):
    assert is_analytic(s) is ana and is_coanalytic(s) is co


@given(laurent())
def test_both_analytic_iff_constant(s):
    assert (is_analytic(s) and is_coanalytic(s)) == all(n == 0 for n in s.coeffs)


# -- winding -------------------------------------------------------------------------

@pytest.mark.parametrize("s, expected", [(Z, 1), (Z ** 3, 3), (make_symbol([(0, 1), (1, -2.5), (2, 1)]), 1)])
def test_winding_examples(s, expected):
    assert winding_number(s, 0) == expected


def test_winding_errors():
    with pytest.raises(CurveTouchesPoint):
        winding_number(Z, 1.0)
    with pytest.raises(GridTooCoarse):
        winding_number(Z ** 7, 0, 16)


def test_winding_additive_and_grid_stable(rng):
    for _ in range(20):
        s, t = random_nonvanishing(rng), random_nonvanishing(rng)
        w = winding_number(s * t, 0, 4096)
        assert w == winding_number(s, 0, 4096) + winding_number(t, 0, 4096)
        assert w == winding_number(s * t, 0, 8192)


def test_winding_accepts_grid_sampling():
    g = sample_function(lambda t: np.exp(-2j * t) * (2 + np.cos(t)), 256)
    assert winding_number(g, 0) == -2


# -- essential range and zero sets ---------------------------------------------------

def test_essential_range_examples():
    assert in_essential_range(Z, 1, 0.1)
    assert not in_essential_range(Z, 0, 0.5)
    assert in_essential_range(2 + Z, 3, 0.01)


def test_zero_set_measure_examples():
    assert zero_set_measure(Z) == 0.0
    assert zero_set_measure(ZERO) == 1.0
    half = sample_function(vanishing_on_arc(0.0, np.pi, ramp=0.05), 1024)
    assert zero_set_measure(half, 1e-3) == pytest.approx(0.5, abs=0.05)
    with pytest.raises(CircleOpError):
        zero_set_measure(Z, 0.0)


def test_vanishing_on_arc_is_smooth_cutoff():
    cut = vanishing_on_arc(1.0, 2.0, ramp=0.3)
    th = np.linspace(0, 2 * np.pi, 2001)
    v = cut(th)
    assert np.all(v[(th >= 1.0) & (th <= 2.0)] == 0)
    assert np.all(v[(th < 0.7) | (th > 2.3)] == 1)
    assert np.all((v >= 0) & (v <= 1))


def test_analytic_inverse_series():
    s = 2 - Z
    inv = analytic_inverse(s, 60)
    assert (s * inv).chop(1e-15).dense(0, 60)[0] == pytest.approx(1)
    assert np.max(np.abs((s * inv).dense(1, 60))) < 1e-15
    co = analytic_inverse(2 + ZBAR, 60)
    assert is_coanalytic(co)
    np.testing.assert_allclose(sample(co * (2 + ZBAR), 256).values, 1, atol=1e-15)
    with pytest.raises(CircleOpError):
        analytic_inverse(Z, 5)


def test_grid_sampling_validates_length():
    with pytest.raises(CircleOpError):
        GridSampling(16, np.zeros(8))
    assert math.isclose(GridSampling(16, np.zeros(16)).theta[1], 2 * np.pi / 16)
