import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.special import polygamma

from roughfn.errors import InvalidParameterError, RegimeError
from roughfn.functions import xm05
from roughfn.numerics import QuadratureSpec
from roughfn.operators import EquationParams, sandwich_bounds
from roughfn.wfourier import (CLASSICAL, COS, E, HAT, SIN, TILDE, BasisIndex, CoeffVector, WfParams,
                              classical_coeffs, cos_idx, default_tail_terms, dyadic_exponent,
                              eval_classical, eval_hat, eval_tilde, eval_tilde_alt, gram_det,
                              gram_hat_analytic, gram_matrix, gram_quadrature, inner_product_series,
                              l2_error_512, periodic_base_ip, quadrature_coeff_fn, sin_idx,
                              standard_indices, synthesize, transform_coeffs)

TOL = 1e-10
Q16 = QuadratureSpec(2**16)


def parseval_tail(K):
    """sqrt(sum_{n>K} beta_n^2) for h = x - 1/2 with beta_n = -sqrt2/(2 pi n)."""
    return math.sqrt(float(polygamma(1, K + 1)) / (2 * math.pi**2))


# -- indices and params ----------------------------------------------------------------

def test_basis_index_validation():
    with pytest.raises(InvalidParameterError):
        BasisIndex(COS, 0)
    with pytest.raises(InvalidParameterError):
        BasisIndex("tan", 1)
    with pytest.raises(InvalidParameterError):
        BasisIndex("const", 2)
    with pytest.raises(InvalidParameterError):
        WfParams(1.0)
    assert WfParams(0.3).b == 2


# -- evaluation ---------------------------------------------------------------------------

def test_hat_at_zero():
    wp = WfParams(0.6)
    assert eval_hat(cos_idx(3), wp, 0.0) == pytest.approx(2 * math.sqrt(2), abs=TOL)
    assert eval_hat(sin_idx(5), wp, 0.0) == 0.0
    assert eval_hat(E, wp, 0.3) == 1.0


def test_a_zero_gives_classical():
    wp = WfParams(0.0)
    x = np.random.default_rng(0).uniform(0, 1, 100)
    for idx in (cos_idx(1), cos_idx(4), sin_idx(2), sin_idx(7)):
        np.testing.assert_array_equal(eval_hat(idx, wp, x), eval_classical(idx, x))
        np.testing.assert_array_equal(eval_tilde(idx, wp, x), eval_classical(idx, x))


def test_tilde_odd_is_hat():
    wp = WfParams(0.5)
    x = np.random.default_rng(1).uniform(0, 1, 100)
    for idx in (cos_idx(1), cos_idx(3), sin_idx(5)):
        np.testing.assert_array_equal(eval_tilde(idx, wp, x), eval_hat(idx, wp, x))


def test_tilde_even_example():
    wp = WfParams(0.6)
    assert eval_tilde(cos_idx(2), wp, 0.0) == pytest.approx(math.sqrt(2), abs=2 * TOL)
    assert eval_tilde_alt(cos_idx(2), wp, 0.0) == pytest.approx(math.sqrt(2), abs=2 * TOL)


@pytest.mark.parametrize("a", [0.3, -0.5, 0.8])
@pytest.mark.parametrize("idx", [cos_idx(2), cos_idx(12), sin_idx(4), sin_idx(6)])
def test_tilde_forms_agree(a, idx):
    wp = WfParams(a)
    x = np.random.default_rng(2).uniform(0, 1, 200)
    np.testing.assert_allclose(eval_tilde(idx, wp, x), eval_tilde_alt(idx, wp, x), atol=2 * TOL / math.sqrt(1 - a * a) * 4)


# -- Gram ------------------------------------------------------------------------------

def test_dyadic_exponent():
    assert dyadic_exponent(1, 4) == 2
    assert dyadic_exponent(12, 3) == 2
    assert dyadic_exponent(3, 5) is None
    assert dyadic_exponent(3, 9) is None
    assert dyadic_exponent(7, 7) == 0


def test_gram_analytic_examples():
    wp = WfParams(0.6)
    assert gram_hat_analytic(1, 4, wp) == pytest.approx(0.36)
    assert gram_hat_analytic(3, 5, wp) == 0.0
    assert gram_hat_analytic(6, 6, wp) == 1.0
    assert gram_hat_analytic(cos_idx(2), sin_idx(2), wp) == 0.0
    assert gram_hat_analytic(E, cos_idx(2), wp) == 0.0
    assert gram_hat_analytic(E, E, wp) == 1.0


def test_gram_analytic_displayed_pattern():
    a = 0.6
    G = gram_matrix([cos_idx(k) for k in range(1, 9)], WfParams(a)).matrix
    expected = np.eye(8)
    for k, l, j in [(1, 2, 1), (1, 4, 2), (1, 8, 3), (2, 4, 1), (2, 8, 2), (4, 8, 1), (3, 6, 1)]:
        expected[k - 1, l - 1] = expected[l - 1, k - 1] = a**j
    np.testing.assert_allclose(G, expected)


def test_gram_quadrature_examples():
    assert gram_quadrature(1, 2, WfParams(0.5), Q16) == pytest.approx(0.5, abs=2e-3)
    assert gram_quadrature(2, 3, WfParams(0.5), Q16) == pytest.approx(0.0, abs=2e-3)
    for k, l in [(1, 2), (3, 5), (2, 7)]:
        assert abs(gram_quadrature(k, l, WfParams(0.0), QuadratureSpec(2**12))) < 1e-9


@pytest.mark.parametrize("a", [0.3, 0.6])
def test_gram_quadrature_vs_analytic_small(a):
    idx = [cos_idx(k) for k in range(1, 9)] + [sin_idx(k) for k in range(1, 9)]
    wp = WfParams(a)
    Gq = gram_matrix(idx, wp, "quadrature", q=QuadratureSpec(2**14))
    assert Gq.max_deviation(gram_matrix(idx, wp)) <= 3e-3


def exact_block_det(size, a):
    a = sympy.Rational(a)
    G = sympy.zeros(size, size)
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            e = dyadic_exponent(i, j)
            G[i - 1, j - 1] = 0 if e is None else a**e
    return G.det()


@pytest.mark.parametrize("m", range(0, 7))
def test_gram_det_against_exact(m):
    a = "3/5"
    d = gram_det(m, WfParams(0.6))
    exact = exact_block_det(2**m, a)
    assert d.numeric == pytest.approx(float(exact), rel=1e-12)
    assert exact == (1 - sympy.Rational(a) ** 2) ** (2**m // 2)
    assert d.closed_form == pytest.approx(d.numeric, rel=1e-12)
    assert d.conjectured == pytest.approx(0.64 ** (2**m))


def test_gram_det_examples():
    d0 = gram_det(0, WfParams(0.6))
    assert (d0.numeric, d0.conjectured) == (1.0, pytest.approx(0.64))
    assert gram_det(2, WfParams(0.6)).conjectured == pytest.approx(0.16777216)
    for m in range(5):
        d = gram_det(m, WfParams(0.0))
        assert d.numeric == d.conjectured == 1.0
    with pytest.raises(InvalidParameterError):
        gram_det(7, WfParams(0.5))


# -- series inner products -------------------------------------------------------------------

def test_series_constant_only():
    zero = lambda m, which: 0.0
    assert inner_product_series(1, 1, 0.5, 2, zero, 10) == pytest.approx(8 / 7)
    assert inner_product_series(1, 2, 0.5, 2, zero, 10) == 0.0
    assert inner_product_series(3, 3, 0.0, 2, zero, 5) == 1.0


def test_series_regime():
    with pytest.raises(RegimeError):
        inner_product_series(1, 1, 1.5, 2, lambda m, w: 0.0, 5)
    with pytest.raises(RegimeError):
        inner_product_series(1, 1, 1.0, 2, lambda m, w: 0.0, 5, space="periodic")


def test_series_periodic_example():
    a = 0.5
    v = inner_product_series(1, 2, a, 2, periodic_base_ip(1, 2), 60, space="periodic")
    assert v * (1 - a * a) == pytest.approx(a, abs=1e-12)


def test_series_line_hermite_like_check():
    # on the line with an orthonormal pair whose dilations are orthogonal,
    # only the diagonal constant survives
    v = inner_product_series(2, 2, 0.9, 2, lambda m, w: 0.0, 30)
    assert v == pytest.approx(1 / (1 - 0.81 / 2))


# -- coefficients ----------------------------------------------------------------------------

def test_classical_coeffs_xm05():
    cv = classical_coeffs(xm05(), 3, Q16)
    np.testing.assert_allclose(cv.alphas, 0, atol=1e-9)
    n = np.arange(1, 4)
    np.testing.assert_allclose(cv.betas, -math.sqrt(2) / (2 * math.pi * n), atol=1e-9)
    assert cv.alpha0 == pytest.approx(0, abs=1e-15)


def test_classical_coeffs_simple():
    cv = classical_coeffs(lambda x: np.ones_like(x), 4)
    assert cv.alpha0 == 1.0
    np.testing.assert_allclose(np.r_[cv.alphas, cv.betas], 0, atol=1e-12)
    cv = classical_coeffs(lambda x: eval_classical(cos_idx(2), x), 4)
    np.testing.assert_allclose(cv.alphas, [0, 1, 0, 0], atol=1e-9)
    np.testing.assert_allclose(cv.betas, 0, atol=1e-9)


def test_transform_identity_at_a_zero():
    cv = classical_coeffs(xm05(), 8)
    tv = transform_coeffs(cv, WfParams(0.0))
    np.testing.assert_array_equal(tv.alphas, cv.alphas)
    np.testing.assert_array_equal(tv.betas, cv.betas)
    assert tv.basis == TILDE


def test_transform_c1_example():
    cv = CoeffVector(0.25, [1.0, 0, 0, 0, 0, 0], np.zeros(6))
    tv = transform_coeffs(cv, WfParams(0.5))
    assert tv.alpha0 == 0.25
    np.testing.assert_allclose(tv.alphas, [math.sqrt(0.75), -0.5, 0, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(tv.betas, 0)


def test_transform_c1_against_quadrature():
    wp = WfParams(0.5)
    tv = transform_coeffs(CoeffVector(0.0, [1.0] + [0.0] * 7, np.zeros(8)), wp)
    x = (np.arange(2**14) + 0.5) / 2**14
    c1 = eval_classical(cos_idx(1), x)
    direct = [np.mean(c1 * eval_tilde(cos_idx(n), wp, x)) for n in range(1, 9)]
    np.testing.assert_allclose(tv.alphas, direct, atol=1e-9)


def test_default_tail_terms():
    assert default_tail_terms(0.0) == 1
    m = default_tail_terms(0.5)
    assert 0.5**m <= 1e-12 < 0.5 ** (m - 1)


def test_transform_requires_classical():
    with pytest.raises(InvalidParameterError):
        transform_coeffs(CoeffVector(0.0, [1.0], [0.0], TILDE), WfParams(0.5))


# -- synthesis and errors -------------------------------------------------------------------------

def test_synthesize_constant_and_trig():
    x = np.linspace(0, 1, 33)
    np.testing.assert_array_equal(synthesize(CoeffVector(1.0, [], []), None, x), np.ones(33))
    h = lambda t: 0.3 + 2 * eval_classical(cos_idx(3), t) - eval_classical(sin_idx(1), t)
    cv = classical_coeffs(h, 5, QuadratureSpec(2**10))
    np.testing.assert_allclose(synthesize(cv, None, x), h(x), atol=1e-12)


def test_tilde_round_trip_c3():
    wp = WfParams(0.5)
    target = lambda t: eval_tilde(cos_idx(3), wp, t)
    cv = classical_coeffs(target, 64, Q16)
    tv = transform_coeffs(cv, wp, coeff_fn=quadrature_coeff_fn(target, Q16))
    x = (np.arange(512) + 0.5) / 512
    assert np.max(np.abs(synthesize(tv, wp, x) - target(x))) <= 5e-3


def test_l2_error_examples():
    h = xm05()
    assert l2_error_512(h, h) == 0.0
    assert l2_error_512(lambda x: np.ones_like(x), lambda x: np.zeros_like(x)) == 1.0
    errs = []
    for K in (5, 10, 20):
        cv = classical_coeffs(h, K, Q16)
        errs.append(l2_error_512(h, lambda t: synthesize(cv, None, t)))
        assert 0 < errs[-1] < math.sqrt(1 / 12)
        assert errs[-1] == pytest.approx(parseval_tail(K), abs=3e-3)
    assert errs == sorted(errs, reverse=True)


def test_bessel_inequality_tilde():
    wp = WfParams(0.5)
    h = xm05()
    cv = classical_coeffs(h, 40, Q16)
    tv = transform_coeffs(cv, wp, coeff_fn=quadrature_coeff_fn(h, Q16))
    energies = [tv.truncated(K).energy() for K in range(1, 41)]
    assert max(energies) <= 1 / 12 + 1e-6
    assert all(b >= a for a, b in zip(energies, energies[1:]))


def test_convergence_in_K():
    wp = WfParams(0.5)
    h = xm05()
    cv = classical_coeffs(h, 50, Q16)
    tv = transform_coeffs(cv, wp, coeff_fn=quadrature_coeff_fn(h, Q16))
    x = (np.arange(512) + 0.5) / 512
    errs, partial = [], np.full(512, tv.alpha0)
    for K in range(1, 51):
        partial = partial + tv.alphas[K - 1] * eval_tilde(cos_idx(K), wp, x) + tv.betas[K - 1] * eval_tilde(sin_idx(K), wp, x)
        errs.append(math.sqrt(np.mean((h(x) - partial) ** 2)))
    assert all(b <= a + 3e-3 for a, b in zip(errs, errs[1:]))


def test_coeff_rows_round_trip():
    cv = CoeffVector(0.5, [1.0, -2.0], [0.25, 0.0], TILDE)
    back = CoeffVector.from_rows(cv.rows())
    assert (back.alpha0, back.basis) == (0.5, TILDE)
    assert back.alphas.tolist() == [1.0, -2.0]
    assert back.betas.tolist() == [0.25, 0.0]
    with pytest.raises(InvalidParameterError):
        CoeffVector.from_rows([("tilde", "const", 0, 1.0), ("classical", "cos", 1, 1.0)])


# -- Riesz bounds -------------------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-0.9, 0.9))
def test_riesz_bounds_periodic(seed, a):
    rng = np.random.default_rng(seed)
    wp = WfParams(a)
    idx = standard_indices(12)[1:]
    v = rng.normal(size=len(idx))
    G = gram_matrix(idx, wp).matrix
    norm_F = math.sqrt(v @ G @ v)
    # synthesized F = sqrt(1-a^2) M^{-1} (sum v_k c_k); T_2 is an isometry here
    lo, hi = sandwich_bounds(EquationParams(a, 2), 1.0)
    r = math.sqrt(1 - a * a)
    nv = float(np.linalg.norm(v))
    assert r * nv / hi - 1e-12 <= norm_F <= r * nv / lo + 1e-12


def test_riesz_bounds_quadrature_sample():
    wp = WfParams(0.6)
    idx = standard_indices(6)[1:]
    v = np.random.default_rng(3).normal(size=len(idx))
    x = (np.arange(2**14) + 0.5) / 2**14
    F = sum(c * eval_hat(i, wp, x) for c, i in zip(v, idx))
    norm_F = math.sqrt(np.mean(F**2))
    assert norm_F == pytest.approx(math.sqrt(v @ gram_matrix(idx, wp).matrix @ v), rel=1e-3)


def test_line_constants_do_not_bound_periodic_basis():
    # documents why the periodic tests use ||T_2|| = 1: the L^2(R) constants
    # (||T_2|| = 2^-1/2) are violated by a dyadic chain
    a = 0.6
    idx = [cos_idx(2**j) for j in range(8)]
    v = np.ones(8)
    norm_F = math.sqrt(v @ gram_matrix(idx, WfParams(a)).matrix @ v)
    lo, _ = sandwich_bounds(EquationParams(a, 2, 2), 1.0)
    assert norm_F > math.sqrt(1 - a * a) * np.linalg.norm(v) / lo
