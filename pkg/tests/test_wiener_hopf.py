import cmath
import math

import numpy as np
import pytest

from th_invert import symbols as sy
from th_invert.errors import NotFredholm, SeriesDiverges
from th_invert.sections import toeplitz_matrix
from th_invert.symbols import Const, Monomial, POINT_ONE, evaluate
from th_invert.wiener_hopf import (
    binomial_streams,
    c0_coefficient,
    c0_quadrature,
    eta_boundary,
    one_sided_inverse_plan,
    power_function,
    rising_stream,
    xi_boundary,
)

from conftest import max_grid_deviation


# ---------------------------------------------------------------------------
# power functions
# ---------------------------------------------------------------------------


def test_power_function_zero_beta_is_one():
    assert power_function(0.0) == Const(1.0)


def test_power_function_limits():
    phi = power_function(0.5)
    assert evaluate(phi, POINT_ONE, "right") == pytest.approx(-1j)
    assert evaluate(phi, POINT_ONE, "left") == pytest.approx(1j)


def test_quarter_twist_ratio_is_scaled_half_power(quarter_twist):
    # a * (~a)^-1 equals a unimodular constant times the half power function;
    # the constant is fixed by evaluating both sides at one point
    ratio = quarter_twist * sy.inverse(sy.tilde(quarter_twist))
    phi = power_function(0.5)
    t = sy.CirclePoint(1.0)
    c1 = evaluate(ratio, t, "right") / evaluate(phi, t, "right")
    assert abs(abs(c1) - 1.0) < 1e-12
    assert max_grid_deviation(ratio, Const(c1) * phi) < 1e-10


# ---------------------------------------------------------------------------
# binomial streams
# ---------------------------------------------------------------------------


def test_stream_values_quarter():
    s = rising_stream(0.25, 4)
    assert s[0] == 1.0
    assert s[1] == pytest.approx(0.25)
    assert s[2] == pytest.approx((0.25 * 1.25) / 2)  # 5/32
    assert s[2] == pytest.approx(5 / 32)


def test_stream_beta_one_is_geometric():
    assert np.allclose(rising_stream(1.0, 10), np.ones(10))


def test_stream_ratio_law():
    for beta in (0.25, 0.5, 0.3 + 0.1j):
        s = rising_stream(beta, 51)
        for k in range(50):
            assert abs(s[k + 1] / s[k] - (k + beta) / (k + 1)) < 1e-12


def test_stream_convolution_adds_exponents():
    # xi_a * xi_b = xi_{a+b}: rising streams convolve
    a = rising_stream(0.25, 20)
    b = rising_stream(0.25, 20)
    conv = np.convolve(a, b)[:20]
    assert np.max(np.abs(conv - rising_stream(0.5, 20))) < 1e-12


def test_factorization_pointwise():
    for beta in (0.25, 0.5):
        zs = np.linspace(0, 2 * math.pi, 514)[1:-1]  # 512 points off the anchor
        err = 0.0
        for z in zs:
            t = cmath.exp(1j * z)
            phi = cmath.exp(1j * beta * (z - math.pi))
            err = max(err, abs(xi_boundary(-beta, t) * eta_boundary(beta, t) - phi))
        assert err < 1e-10


def test_factorization_streams_reproduce_boundary_values():
    # partial sums of the coefficient streams converge to the boundary values
    fac = binomial_streams(0.25, 4000)
    z = 2.0
    t = cmath.exp(1j * z)
    xi_val = sum(c * t ** (-k) for k, c in enumerate(fac.xi_coeffs))
    eta_val = sum(c * t ** k for k, c in enumerate(fac.eta_coeffs))
    assert abs(xi_val - xi_boundary(-0.25, t)) < 1e-3
    assert abs(eta_val - eta_boundary(0.25, t)) < 1e-3


def test_validity_window():
    for beta, p_hi in ((0.25, 4.0), (0.5, 2.0)):
        fac = binomial_streams(beta, 8)
        assert fac.valid_p is not None
        lo, hi = fac.valid_p
        assert lo == 1.0 and hi == pytest.approx(p_hi)
        assert lo < 1.5 < hi and lo < 1.9 < hi  # window covers (1, 2)


# ---------------------------------------------------------------------------
# the constant c0
# ---------------------------------------------------------------------------


def test_c0_series_certified_tail():
    c0, half_width = c0_coefficient(0.25, 1e-12)
    assert half_width < 1e-12
    assert c0.real > 1.0  # every term is positive
    q, _ = c0_quadrature(0.25)
    assert abs(c0.real - q) < 1e-8


def test_c0_matches_gamma_expression():
    from scipy.special import gamma

    c0, _ = c0_coefficient(0.25, 1e-12)
    assert abs(c0.real - gamma(0.5) / gamma(0.75) ** 2) < 1e-12


def test_c0_small_beta_limit():
    c0, _ = c0_coefficient(1e-6, 1e-10)
    assert c0.real == pytest.approx(1.0, abs=1e-4)


def test_c0_out_of_range():
    with pytest.raises(SeriesDiverges):
        c0_coefficient(0.5)
    with pytest.raises(SeriesDiverges):
        c0_coefficient(-0.1)


# ---------------------------------------------------------------------------
# one-sided inverse plans
# ---------------------------------------------------------------------------


def test_plan_monomial():
    plan = one_sided_inverse_plan(Monomial(3), 2.0)
    assert plan.n == 3 and plan.side == "left"
    assert max_grid_deviation(plan.psi0, Const(1.0)) < 1e-14


def test_plan_quarter_c(quarter_pair):
    plan = one_sided_inverse_plan(quarter_pair.c, 2.0)
    assert plan.n == -1 and plan.side == "right"


def test_plan_half_power_two_sided():
    plan = one_sided_inverse_plan(power_function(0.25), 1.5)
    assert plan.n == 0 and plan.side == "two_sided"


def test_plan_not_fredholm(quarter_pair):
    with pytest.raises(NotFredholm):
        one_sided_inverse_plan(quarter_pair.d, 2.0)


def test_plan_materialization_residual():
    # the reported residual measures section truncation; it shrinks with size
    plan = one_sided_inverse_plan(power_function(0.25), 1.5)
    matrix, r128 = plan.materialize(128)
    assert matrix.shape == (128, 128)
    _, r512 = plan.materialize(512)
    assert r128 < 0.2 and r512 < r128


def test_xi_half_section_fixes_constant():
    # T(xi_{1/2}) is upper triangular with unit diagonal: it fixes e0
    xi_half = _xi_symbol_truncated(0.5, 80)
    m = toeplitz_matrix(xi_half, 40).entries
    e0 = np.zeros(40, dtype=complex)
    e0[0] = 1.0
    assert np.linalg.norm(m @ e0 - e0) < 1e-10


def _xi_symbol_truncated(beta, n_terms):
    coeffs = rising_stream(-beta, n_terms)  # xi_beta = (1 - 1/t)^beta
    terms = [Const(c) * Monomial(-k) for k, c in enumerate(coeffs)]
    return sy.add(*terms)
