import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from ganbf.specfun import exp_integral_en, f_k

# quadrature oracle of int_1^inf e^{-t}/t dt, cross-checked against the series
E1_AT_1 = 0.21938393439552029


def en_quadrature(n, x):
    return scipy_quad(lambda t: math.exp(-x * t) / t**n, 1, np.inf, limit=200)[0]


def fk_quadrature(k, x):
    return scipy_quad(lambda t: x * math.exp(-t) / (1 + x * t)**k, 0, np.inf,
                      limit=200)[0]


def test_e1_reference_value():
    assert abs(exp_integral_en(1, 1.0) - E1_AT_1) < 1e-12
    assert abs(exp_integral_en(1, 1.0) - en_quadrature(1, 1.0)) < 1e-10


def test_recurrence_identity():
    # E_{n+1}(x) = (e^{-x} - x E_n(x)) / n on a wide logarithmic grid
    for x in np.logspace(-3, 3, 40):
        for n in range(1, 7):
            lhs = exp_integral_en(n + 1, x)
            rhs = (math.exp(-x) - x * exp_integral_en(n, x)) / n
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_large_argument_asymptotics():
    # E_1(x) -> e^{-x}/x; first-order correction is -1/x, so ~2% at x = 50
    x = 50.0
    lead = math.exp(-x) / x
    rel = abs(exp_integral_en(1, x) - lead) / lead
    assert rel < 0.02


@pytest.mark.parametrize("n,x", [(1, 0.5), (2, 1.0), (3, 3.0), (5, 0.02), (6, 40.0)])
def test_en_against_quadrature(n, x):
    assert abs(exp_integral_en(n, x) - en_quadrature(n, x)) < 1e-9


def test_series_cf_crossover_consistency():
    # the two evaluation branches must agree through the x = 1 split
    for x in (0.98, 0.999, 1.0, 1.001, 1.02):
        for n in (1, 3, 6):
            assert abs(exp_integral_en(n, x) - en_quadrature(n, x)) < 1e-10


def test_f1_reference_value():
    # quadrature oracle of int_0^inf e^{-t}/(1+t) dt
    assert abs(f_k(1, 1.0) - 0.5963473623231940) < 1e-6
    assert abs(f_k(1, 1.0) - fk_quadrature(1, 1.0)) < 1e-10


def test_fk_small_argument_overflow_safe():
    # 1/x far beyond exp overflow range; integral-form oracle still matches
    assert abs(f_k(1, 0.01) - fk_quadrature(1, 0.01)) < 1e-10
    val = f_k(2, 1e-4)
    assert 0.0 < val < 1e-4 * 1.01
    assert math.isfinite(f_k(3, 1e-8))


def test_f2_recurrence_value():
    # F_2(1) = e * E_2(1) with E_2(1) = e^{-1} - E_1(1)
    expect = math.e * (math.exp(-1.0) - E1_AT_1)
    assert abs(f_k(2, 1.0) - expect) < 1e-10


@pytest.mark.parametrize("k", range(1, 7))
def test_fk_integral_consistency(k):
    for x in np.logspace(-2, 2, 9):
        assert abs(f_k(k, x) - fk_quadrature(k, float(x))) < 1e-8


def test_fk_monotonicity():
    xs = np.logspace(-2, 2, 25)
    for k in range(1, 7):
        vals = [f_k(k, float(x)) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:])), f"F_{k} not increasing"
    for x in xs:
        by_k = [f_k(k, float(x)) for k in range(1, 7)]
        assert all(b < a for a, b in zip(by_k, by_k[1:])), "F_k not decreasing in k"


def test_fk_bounds():
    # 0 < F_k(x) < x always; F_k < 1 for k >= 2 (and for k = 1 when x <= 1).
    # F_1(x) grows like log(x) for large x, so no universal unit bound there.
    for x in np.logspace(-2, 2, 17):
        x = float(x)
        for k in range(1, 7):
            v = f_k(k, x)
            assert 0.0 < v < x * (1.0 + 1e-12)
            if k >= 2:
                assert v < 1.0
        if x <= 1.0:
            assert f_k(1, x) < 1.0
    assert f_k(1, 100.0) > 1.0  # the k = 1 kernel is unbounded in x


def test_domain_errors():
    for bad in ((0, 1.0), (1, 0.0), (2, -3.0), (-1, 1.0)):
        with pytest.raises(ValueError):
            exp_integral_en(*bad)
        with pytest.raises(ValueError):
            f_k(*bad)
