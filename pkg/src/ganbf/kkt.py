"""Stationarity residuals and the optimality check for interior allocations.

The two residuals driving the alternating power-allocation search are

    f1(p_v1, p_v2) = ||h||^2/(1 + ||h||^2 p_v1)
                     - E[ G_1 / (1 + p_v1 G_1 + p_v2 sum_{i>=2} G_i) ]

    f2(p_u, p_v1, p_v2) = ||h||^2/(1 + ||h||^2 (p_u + p_v1))
                          - E[ G_1 / (1 + (p_u+p_v1) G_1 + p_v2 sum G_i) ]
                          + E[ G_2 / (1 + (p_u+p_v1) G_1 + p_v2 sum G_i) ]
                          - E[ G_2 / (1 + p_v1 G_1 + p_v2 sum G_i) ]

both zero at interior stationary points of the secrecy-rate objective.  Every
expectation here is a rational moment of independent exponential gains and
reduces to int_0^inf e^{-t} prod_i (1 + p_i t)^{-e_i} dt.

The necessary-condition checker compares the diagonal of the eavesdropper
curvature-gap matrix

    Y_11 = int e^{-t} [ (1+p_v1 t)^{-2} - (1+(p_u+p_v1) t)^{-2} ] (1+p_v2 t)^{-(n_t-1)} dt
    Y_ii = int e^{-t} [ (1+p_v1 t)^{-1} - (1+(p_u+p_v1) t)^{-1} ] (1+p_v2 t)^{-n_t} dt

against the legitimate-channel curvature.  Away from the coefficient
degeneracies p_v1 = p_v2 and p_u + p_v1 = p_v2 the kernels expand in partial
fractions over the F_k basis; inside a narrow band around those degeneracies
the checker falls back to direct quadrature of the Y entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import sample_gains
from .quadrature import DEFAULT_QUAD, integrate_exp_decay
from .specfun import f_k

# relative half-width of the band around the partial-fraction poles
DEGENERACY_BAND = 1e-6


@dataclass(frozen=True)
class ResidualValue:
    value: float
    method: str  # 'quadrature' | 'monte_carlo'

    def __post_init__(self):
        if self.method not in ("quadrature", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")
        if not math.isfinite(self.value):
            raise ValueError("residuals must be finite")


@dataclass(frozen=True)
class NecessaryConditionReport:
    """Raw expression values and verdict of the interior-optimality check.

    first_inequality_lhs is the trace-form expression whose sign selects the
    direction required of the second inequality; `satisfied` applies that
    pairing.  `coefficients` carries the partial-fraction residues used on
    the non-degenerate path and is None when the quadrature fallback ran.
    """

    first_inequality_lhs: float
    second_inequality_lhs: float
    second_inequality_rhs: float
    satisfied: bool
    degenerate: bool
    coefficients: dict | None


def expectation_rational(powers, numerator_index, quad=DEFAULT_QUAD,
                         multiplicities=None):
    """E[ G_j / (1 + sum_i p_i G_i) ] for independent unit-mean exponentials.

    `powers` lists one coefficient per gain group, `multiplicities` the group
    sizes (all 1 by default), and `numerator_index` selects the group the
    numerator gain belongs to.  Computed as

        int_0^inf e^{-t} (1 + p_j t)^{-(m_j + 1)}
                   prod_{i != j} (1 + p_i t)^{-m_i} dt
    """
    p = np.asarray(powers, dtype=float)
    if multiplicities is None:
        mult = np.ones(p.shape[0], dtype=int)
    else:
        mult = np.asarray(multiplicities, dtype=int)
    if p.ndim != 1 or mult.shape != p.shape:
        raise ValueError("powers and multiplicities must be matching vectors")
    if np.any(p < 0.0):
        raise ValueError("powers must be nonnegative")
    if np.any(mult < 1):
        raise ValueError("multiplicities must be >= 1")
    j = int(numerator_index)
    if not 0 <= j < p.shape[0]:
        raise ValueError("numerator_index out of range")

    expo = mult.astype(float)
    expo[j] += 1.0
    active = [(float(pi), float(ei)) for pi, ei in zip(p, expo) if pi > 0.0]

    def integrand(t):
        s = np.zeros_like(t)
        for pi, ei in active:
            s += ei * np.log1p(pi * t)
        return np.exp(-t - s)

    return float(integrate_exp_decay(integrand, quad))


def _eve_moment_mc(config, coeff_g1, coeff_rest, numerator, samples, seed):
    # empirical mean of G_num / (1 + coeff_g1 G_1 + coeff_rest sum_{i>=2} G_i)
    gains = sample_gains(config, samples, seed)
    denom = 1.0 + coeff_g1 * gains[:, 0] + coeff_rest * gains[:, 1:].sum(axis=1)
    num = gains[:, 0] if numerator == 0 else gains[:, 1]
    vals = num / denom
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def f1(config, p_v1, p_v2, quad=DEFAULT_QUAD, method="quadrature",
       samples=10**5, seed=0):
    """Stationarity residual in the main-channel AN power."""
    if p_v1 < 0.0 or p_v2 < 0.0:
        raise ValueError("powers must be nonnegative")
    h2 = config.h_norm_sq
    mu = config.eve_mean_gain
    bob = h2 / (1.0 + h2 * p_v1)
    if method == "monte_carlo":
        eve, _ = _eve_moment_mc(config, p_v1, p_v2, 0, samples, seed)
    else:
        eve = mu * expectation_rational(
            [mu * p_v1, mu * p_v2], 0, quad, [1, config.n_t - 1])
    return ResidualValue(bob - eve, method)


def f2(config, p_u, p_v1, p_v2, quad=DEFAULT_QUAD, method="quadrature",
       samples=10**5, seed=0):
    """Stationarity residual balancing signal power against null-space AN.

    Restricting to p_u = 0 collapses the last two expectations against each
    other and recovers f1 identically.
    """
    if min(p_u, p_v1, p_v2) < 0.0:
        raise ValueError("powers must be nonnegative")
    h2 = config.h_norm_sq
    mu = config.eve_mean_gain
    pp = p_u + p_v1
    bob = h2 / (1.0 + h2 * pp)
    if method == "monte_carlo":
        e1, _ = _eve_moment_mc(config, pp, p_v2, 0, samples, seed)
        e2, _ = _eve_moment_mc(config, pp, p_v2, 1, samples, seed)
        e3, _ = _eve_moment_mc(config, p_v1, p_v2, 1, samples, seed)
        return ResidualValue(bob - e1 + e2 - e3, method)
    m = config.n_t - 1
    e1 = expectation_rational([mu * pp, mu * p_v2], 0, quad, [1, m])
    e2 = expectation_rational([mu * pp, mu * p_v2], 1, quad, [1, m])
    e3 = expectation_rational([mu * p_v1, mu * p_v2], 1, quad, [1, m])
    return ResidualValue(bob - mu * (e1 - e2 + e3), "quadrature")


def y_diagonal(config, alloc, quad=DEFAULT_QUAD):
    """(Y_11, Y_ii) by direct quadrature of the defining integrals."""
    mu = config.eve_mean_gain
    m = config.n_t - 1
    p = mu * alloc.p_v1
    pp = mu * (alloc.p_u + alloc.p_v1)
    q = mu * alloc.p_v2
    y11 = mu * (expectation_rational([p, q], 0, quad, [1, m])
                - expectation_rational([pp, q], 0, quad, [1, m]))
    yii = mu * (expectation_rational([p, q], 1, quad, [1, m])
                - expectation_rational([pp, q], 1, quad, [1, m]))
    return y11, yii


def _pf_coeffs_double(p, q, m):
    # residues of 1 / ((1+pt)^2 (1+qt)^m) over {(1+pt)^-1, (1+pt)^-2, (1+qt)^-k}
    r = 1.0 - q / p
    a1 = -m * (q / p) / r ** (m + 1)
    a2 = r ** (-m)
    b = np.array([(q / p) ** 2 * (m - k + 1) / r ** (m - k + 2)
                  for k in range(1, m + 1)])
    return a1, a2, b


def _pf_coeffs_single(p, q, n):
    # residues of 1 / ((1+pt) (1+qt)^n)
    r = 1.0 - q / p
    alpha = r ** (-n)
    gamma = np.array([-(q / p) * r ** (-(n - k + 1)) for k in range(1, n + 1)])
    return alpha, gamma


def _pf_eval_double(p, q, m, fq):
    a1, a2, b = _pf_coeffs_double(p, q, m)
    val = (a1 / p) * f_k(1, p) + (a2 / p) * f_k(2, p)
    val += sum((b[k - 1] / q) * fq[k - 1] for k in range(1, m + 1))
    return val, (a1, a2, b)


def _pf_eval_single(p, q, n, fq):
    alpha, gamma = _pf_coeffs_single(p, q, n)
    val = (alpha / p) * f_k(1, p)
    val += sum((gamma[k - 1] / q) * fq[k - 1] for k in range(1, n + 1))
    return val, (alpha, gamma)


def necessary_condition(config, alloc, quad=DEFAULT_QUAD):
    """Interior-optimality check for an allocation with p_v1 > 0, p_v2 > 0.

    Evaluates the trace-form expression

        T = p_v1 * (Y_11 - rhs) + (n_t - 1) * p_v2 * Y_ii,
        rhs = ||h||^4 p_u / ((1 + ||h||^2 p_v1)(1 + ||h||^2 (p_u + p_v1)))

    and pairs its sign with the Y_11-vs-rhs comparison: T >= 0 requires
    Y_11 > rhs, T < 0 requires Y_11 < rhs.  Non-degenerate allocations use
    the F_k partial-fraction expansion of the Y entries (residues exposed in
    the report); allocations inside the degeneracy band use quadrature.
    """
    if not alloc.p_v1 > 0.0:
        raise ValueError("necessary_condition requires p_v1 > 0")
    if not alloc.p_v2 > 0.0:
        raise ValueError("necessary_condition requires p_v2 > 0")
    if alloc.n_t != config.n_t:
        raise ValueError("allocation and config disagree on n_t")

    h2 = config.h_norm_sq
    mu = config.eve_mean_gain
    n_t = config.n_t
    m = n_t - 1
    p = mu * alloc.p_v1
    pp = mu * (alloc.p_u + alloc.p_v1)
    q = mu * alloc.p_v2
    rhs = (h2 ** 2 * alloc.p_u
           / ((1.0 + h2 * alloc.p_v1) * (1.0 + h2 * (alloc.p_u + alloc.p_v1))))

    degenerate = (abs(1.0 - q / p) < DEGENERACY_BAND
                  or abs(1.0 - q / pp) < DEGENERACY_BAND)
    if degenerate:
        y11, yii = y_diagonal(config, alloc, quad)
        coefficients = None
    else:
        fq = [f_k(k, q) for k in range(1, n_t + 1)]
        d_p, (a1, a2, b) = _pf_eval_double(p, q, m, fq)
        d_pp, (a1p, a2p, bp) = _pf_eval_double(pp, q, m, fq)
        s_p, (al, g) = _pf_eval_single(p, q, n_t, fq)
        s_pp, (alp, gp) = _pf_eval_single(pp, q, n_t, fq)
        y11 = mu * (d_p - d_pp)
        yii = mu * (s_p - s_pp)
        coefficients = {
            "a1": a1, "a2": a2, "b": b,
            "a1_prime": a1p, "a2_prime": a2p, "b_prime": bp,
            "alpha": al, "gamma": g,
            "alpha_prime": alp, "gamma_prime": gp,
        }

    first = float(alloc.p_v1 * (y11 - rhs) + m * alloc.p_v2 * yii)
    if first >= 0.0:
        satisfied = y11 > rhs
    else:
        satisfied = y11 < rhs
    return NecessaryConditionReport(
        first_inequality_lhs=first,
        second_inequality_lhs=float(y11),
        second_inequality_rhs=float(rhs),
        satisfied=bool(satisfied),
        degenerate=bool(degenerate),
        coefficients=coefficients,
    )
