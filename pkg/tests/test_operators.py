import numpy as np
import pytest
from hypothesis import given

from circleop import ONE, ZBAR, ZERO, Z, CircleOpError, Symbol, WindowTooSmall
from circleop.acceptance import random_symbol
from circleop.operators import (
    CoeffVector, apply, apply_adjoint, build_matrix, build_remark_operator, interior_commutator,
    matrix_from_csv, matrix_from_map, matrix_to_csv, multiply, random_vector, riesz_p, riesz_q,
    shift_power, verify_structure,
)
from conftest import laurent


def vec(d):
    return CoeffVector.from_dict(d)


# -- projections ---------------------------------------------------------------------

def test_projection_examples():
    f = vec({0: 1, -1: 1})
    assert riesz_p(f).allclose(vec({0: 1}))
    assert riesz_q(f).allclose(vec({-1: 1}))
    assert riesz_p(vec({3: 1})).allclose(vec({3: 1}))


def test_projection_algebra(rng):
    for _ in range(20):
        f = random_vector(rng, (-7, 9))
        g = random_vector(rng, (-5, 5))
        assert (riesz_p(riesz_p(f)) - riesz_p(f)).norm() <= 1e-14
        assert (riesz_q(riesz_q(f)) - riesz_q(f)).norm() <= 1e-14
        assert riesz_p(riesz_q(f)).norm() <= 1e-14
        assert (riesz_p(f) + riesz_q(f) - f).norm() <= 1e-14
        assert abs(riesz_p(f).inner(riesz_q(g))) <= 1e-14


# -- S and S* ------------------------------------------------------------------------

def test_apply_examples(rng):
    f = random_vector(rng, (-4, 4))
    assert apply(ONE, ONE, f).allclose(f)
    assert apply(Z, ZBAR, vec({0: 1, -1: 1})).allclose(vec({1: 1, -2: 1}))
    assert apply(Z, ZBAR, vec({0: 1})).allclose(vec({1: 1}))


def test_apply_window_is_enlarged_without_loss():
    out = apply(Z ** 3, ZBAR ** 2, CoeffVector.from_dict({-2: 1, 2: 1}))
    assert out.window == (-4, 5)
    assert out[5] == 1 and out[-4] == 1


def test_apply_adjoint_examples():
    assert apply_adjoint(Z, ZBAR, vec({0: 1})).norm() == 0
    assert apply_adjoint(Z, ZBAR, vec({1: 1})).allclose(vec({0: 1}))
    assert apply_adjoint(ONE, ZERO, vec({-1: 1})).norm() == 0


def test_adjoint_duality(rng):
    for _ in range(30):
        a, b = random_symbol(rng), random_symbol(rng)
        f, g = random_vector(rng, (-6, 6)), random_vector(rng, (-8, 8))
        lhs = apply(a, b, f).inner(g)
        rhs = f.inner(apply_adjoint(a, b, g))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_shift_is_isometry(rng):
    for _ in range(100):
        f = random_vector(rng, (-10, 10))
        assert abs(apply(Z, ZBAR, f).norm() - f.norm()) <= 1e-12


def test_shift_power_examples(rng):
    assert shift_power(2, vec({0: 1})).allclose(vec({2: 1}))
    assert shift_power(2, vec({-1: 1})).allclose(vec({-3: 1}))
    f = random_vector(rng, (-3, 3))
    assert shift_power(0, f).allclose(f)
    with pytest.raises(CircleOpError):
        shift_power(-1, f)


def test_shift_power_matches_iteration(rng):
    f = random_vector(rng, (-5, 5))
    g = f
    for n in range(1, 7):
        g = apply(Z, ZBAR, g)
        assert np.array_equal(shift_power(n, f).embed(g.window).entries, g.entries)


def test_multiply_matches_pointwise(rng):
    s = random_symbol(rng)
    f = random_vector(rng, (-3, 4))
    th = np.linspace(0, 2 * np.pi, 11)
    zs = np.exp(1j * th)
    np.testing.assert_allclose(multiply(s, f).to_symbol()(zs), s(zs) * f.to_symbol()(zs), atol=1e-12)


# -- matrices ------------------------------------------------------------------------

def test_build_matrix_examples():
    T = build_matrix(2 + Z, ZBAR, 4)
    assert T.entry(0, 0) == 2 and T.entry(1, 0) == 1
    assert T.entry(-2, -1) == 1
    I = build_matrix(ONE, ONE, 5)
    np.testing.assert_array_equal(I.entries, np.eye(11))


def test_build_matrix_rejects_small_window():
    with pytest.raises(WindowTooSmall):
        build_matrix(Z ** 5, ONE, 3)
    with pytest.raises(CircleOpError):
        build_matrix(Z, ONE, 3, mode="round")


def test_exact_matrix_matches_apply(rng):
    for _ in range(10):
        a, b = random_symbol(rng), random_symbol(rng)
        T = build_matrix(a, b, 8)
        f = random_vector(rng, (-8, 8))
        assert (T(f) - apply(a, b, f)).norm() <= 1e-12


def test_exact_matrix_matches_loop_oracle(rng):
    a, b = random_symbol(rng), random_symbol(rng)
    T = build_matrix(a, b, 6)
    for m in T.out_modes:
        for n in T.in_modes:
            expected = a[m - n] if n >= 0 else b[m - n]
            assert T.entry(m, n) == expected


def test_square_is_compression_of_exact(rng):
    a, b = random_symbol(rng), random_symbol(rng)
    E = build_matrix(a, b, 10)
    S = build_matrix(a, b, 10, mode="square")
    np.testing.assert_array_equal(E.embed(out_window=(-10, 10)).entries, S.entries)


def test_matrix_from_map_equals_build(rng):
    a, b = random_symbol(rng), random_symbol(rng)
    T = matrix_from_map(lambda f: apply(a, b, f), (-6, 6))
    assert np.allclose(T.embed(out_window=build_matrix(a, b, 6).out_window).entries,
                       build_matrix(a, b, 6).entries, atol=0)


# -- structure characterization ------------------------------------------------------

def test_verify_structure_examples():
    v = verify_structure(build_matrix(2 + Z, ZBAR, 6))
    assert v.is_s_alpha_beta and v.alpha == 2 + Z and v.beta == ZBAR
    v = verify_structure(build_matrix(ONE, ONE, 4))
    assert v.is_s_alpha_beta and v.alpha == ONE and v.beta == ONE
    v = verify_structure(build_remark_operator(6))
    assert not v.is_s_alpha_beta and v.witness is not None and v.residual > 0.5


def test_verify_structure_rejects_small_window():
    with pytest.raises(WindowTooSmall):
        verify_structure(build_matrix(ONE, ONE, 1))


def test_structure_round_trip_random(rng):
    for _ in range(25):
        a, b = random_symbol(rng, 5), random_symbol(rng, 5)
        for mode in ("exact", "square"):
            v = verify_structure(build_matrix(a, b, 12, mode))
            assert v.is_s_alpha_beta
            assert v.alpha.isclose(a, 0.0) and v.beta.isclose(b, 0.0)


def test_perturbed_entry_is_caught(rng):
    a, b = random_symbol(rng), random_symbol(rng)
    T = build_matrix(a, b, 8)
    T.entries[10, 4] += 1e-6
    v = verify_structure(T)
    assert not v.is_s_alpha_beta


def test_non_form_operator_columns_and_norm():
    T = build_remark_operator(8)
    col = T.column(1)
    assert col[1] == 1 and col[-2] == 1 and np.count_nonzero(col.entries) == 2
    assert T.column(-1).norm() == 0
    assert T.norm() <= 2 + 1e-12


def test_non_form_operator_commutes_with_shift_on_interior():
    M = 16
    T = build_remark_operator(M)
    S = build_matrix(Z, ZBAR, M, mode="square")
    assert interior_commutator(T, S, M - 3) <= 1e-14
    # the oracle itself is not blind: a non-commuting pair is detected
    assert interior_commutator(T, build_matrix(Z, ONE, M, mode="square"), M - 3) > 0.5


# -- CSV -----------------------------------------------------------------------------

def test_csv_header_and_format():
    text = matrix_to_csv(build_matrix(2 + Z, ZBAR, 1, mode="square"))
    lines = text.splitlines()
    assert lines[0] == "out_modes,-1,0,1"
    assert lines[1] == "in_modes,-1,0,1"
    assert lines[2].split(",")[0].endswith("i")


@given(laurent(max_degree=3), laurent(max_degree=3))
def test_csv_round_trip(a, b):
    T = build_matrix(a, b, 4)
    back = matrix_from_csv(matrix_to_csv(T))
    assert back.in_window == T.in_window and back.out_window == T.out_window
    np.testing.assert_array_equal(back.entries, T.entries)
