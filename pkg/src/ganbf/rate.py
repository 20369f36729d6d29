"""Ergodic secrecy-rate evaluators: Monte Carlo, quadrature, and matrix form.

The scalar objective being evaluated is

    R(p_u, p_v1, p_v2) = ( log(1 + ||h||^2 p_u / (1 + ||h||^2 p_v1))
                           - E[ log(1 + G_1 p_u /
                                 (1 + G_1 p_v1 + p_v2 * sum_{i>=2} G_i)) ] )^+

with independent exponential gains G_i.  The deterministic path rewrites the
expectation as a one-dimensional integral: for independent unit-mean
exponential gains and coefficient vectors a >= b (elementwise),

    E[log(1 + a.G)] - E[log(1 + b.G)]
        = int_0^inf e^{-t}/t * (prod_i (1+b_i t)^{-1} - prod_i (1+a_i t)^{-1}) dt

because E[e^{-t c.G}] = prod_i (1 + c_i t)^{-1}.  The bracket is evaluated
through log1p/expm1 so the removable singularity at t = 0 costs no precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import sample_eve_vectors, sample_gains
from .quadrature import DEFAULT_QUAD, integrate_exp_decay

METHODS = ("monte_carlo", "quadrature", "exact")


@dataclass(frozen=True)
class RateEstimate:
    """A secrecy-rate value (nats) with its evaluation pedigree.

    std_error is the standard error of the eavesdropper-side sample mean and
    is nonzero exactly when the estimate is Monte Carlo; deterministic
    methods report 0.  Values are always clamped at zero.
    """

    value: float
    method: str
    std_error: float = 0.0
    sample_count: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < 0.0:
            raise ValueError("rate values are clamped at zero")
        if self.method == "monte_carlo":
            if not self.std_error > 0.0 or self.sample_count < 1:
                raise ValueError("monte_carlo estimates need std_error and samples")
        elif self.std_error != 0.0 or self.sample_count != 0:
            raise ValueError("deterministic estimates carry no sampling metadata")


def _bob_term(config, alloc):
    h2 = config.h_norm_sq
    return math.log1p(h2 * alloc.p_u / (1.0 + h2 * alloc.p_v1))


def ergodic_log_gap(pairs, quad=DEFAULT_QUAD):
    """E[log(1 + a.G)] - E[log(1 + b.G)] for unit-mean exponential gains.

    Parameters
    ----------
    pairs : sequence of (a_i, b_i, multiplicity)
        Paired coefficients, a_i >= b_i >= 0; `multiplicity` independent
        gains share each coefficient pair.
    quad : QuadratureSpec

    Returns
    -------
    float
    """
    clean = []
    for a, b, m in pairs:
        a, b, m = float(a), float(b), int(m)
        if b < 0.0 or a < b:
            raise ValueError("pairs must satisfy a >= b >= 0")
        if m < 1:
            raise ValueError("multiplicity must be >= 1")
        clean.append((a, b, m))
    if all(a == b for a, b, _ in clean):
        return 0.0

    def integrand(t):
        lb = np.zeros_like(t)
        dl = np.zeros_like(t)
        for a, b, m in clean:
            bt = b * t
            if b > 0.0:
                lb += m * np.log1p(bt)
            if a > b:
                dl += m * np.log1p((a - b) * t / (1.0 + bt))
        return np.exp(-t - lb) * (-np.expm1(-dl)) / t

    return float(integrate_exp_decay(integrand, quad))


def secrecy_rate_mc(config, alloc, samples, seed):
    """Monte Carlo estimate of the secrecy rate for one allocation.

    The eavesdropper expectation is an empirical mean over `samples` seeded
    fading draws; the legitimate-receiver term is exact.  With p_u = 0 both
    log terms vanish and the result is exactly zero (method 'exact').
    """
    if alloc.n_t != config.n_t:
        raise ValueError("allocation and config disagree on n_t")
    if alloc.p_u == 0.0:
        return RateEstimate(0.0, "exact")
    gains = sample_gains(config, samples, seed)
    g1 = gains[:, 0]
    tail = gains[:, 1:].sum(axis=1)
    eve = np.log1p(g1 * alloc.p_u / (1.0 + g1 * alloc.p_v1 + tail * alloc.p_v2))
    mean = float(eve.mean())
    se = float(eve.std(ddof=1) / math.sqrt(samples))
    value = max(0.0, _bob_term(config, alloc) - mean)
    return RateEstimate(value, "monte_carlo", se, int(samples))


def secrecy_rate_quadrature(config, alloc, quad=DEFAULT_QUAD):
    """Deterministic secrecy rate via the one-dimensional integral identity."""
    if alloc.n_t != config.n_t:
        raise ValueError("allocation and config disagree on n_t")
    if alloc.p_u == 0.0:
        return RateEstimate(0.0, "exact")
    mu = config.eve_mean_gain
    pairs = [
        (mu * (alloc.p_u + alloc.p_v1), mu * alloc.p_v1, 1),
        (mu * alloc.p_v2, mu * alloc.p_v2, config.n_t - 1),
    ]
    eve = ergodic_log_gap(pairs, quad)
    value = max(0.0, _bob_term(config, alloc) - eve)
    return RateEstimate(value, "quadrature")


def secrecy_rate_quadrature_batch(config, p_u, p_v1, p_v2, quad=DEFAULT_QUAD,
                                  chunk=1024):
    """Vectorized quadrature rates for parallel arrays of allocations.

    Same objective as secrecy_rate_quadrature, evaluated for many
    (p_u, p_v1, p_v2) triples at once; used by the brute-force searches.
    Returns an array of clamped rates in nats.
    """
    p_u = np.atleast_1d(np.asarray(p_u, dtype=float))
    p_v1 = np.atleast_1d(np.asarray(p_v1, dtype=float))
    p_v2 = np.atleast_1d(np.asarray(p_v2, dtype=float))
    h2 = config.h_norm_sq
    mu = config.eve_mean_gain
    m = config.n_t - 1

    out = np.empty(p_u.shape[0])
    for lo in range(0, p_u.shape[0], chunk):
        sl = slice(lo, lo + chunk)
        cu = mu * p_u[sl][:, None]
        c1 = mu * p_v1[sl][:, None]
        c2 = mu * p_v2[sl][:, None]

        def integrand(t, cu=cu, c1=c1, c2=c2):
            b1 = c1 * t
            lb = np.log1p(b1) + m * np.log1p(c2 * t)
            dl = np.log1p(cu * t / (1.0 + b1))
            return np.exp(-t - lb) * (-np.expm1(-dl)) / t

        out[sl] = integrate_exp_decay(integrand, quad)

    bob = np.log1p(h2 * p_u / (1.0 + h2 * p_v1))
    return np.maximum(0.0, bob - out)


def secrecy_rate_matrix_mc(vc, samples, seed):
    """Monte Carlo secrecy rate straight from the covariance matrices.

    Draws standard complex normal eavesdropper vectors and averages the
    log-ratio at the eavesdropper; the legitimate log-ratio is computed from
    the fixed channel vector.  This is the general (matrix) objective that
    the three-power scalar form is provably equal to at the optimal
    covariance structure, and the tests use the pair as a cross-check.
    """
    h = vc.h
    s_total = vc.s_u + vc.s_v
    if float(np.trace(vc.s_u).real) == 0.0:
        return RateEstimate(0.0, "exact")
    qh_tot = float(np.vdot(h, s_total @ h).real)
    qh_v = float(np.vdot(h, vc.s_v @ h).real)
    bob = math.log1p((qh_tot - qh_v) / (1.0 + qh_v))

    g = sample_eve_vectors(h.shape[0], samples, seed)
    gu = np.einsum("ni,ij,nj->n", g.conj(), vc.s_u, g).real
    gv = np.einsum("ni,ij,nj->n", g.conj(), vc.s_v, g).real
    eve = np.log1p(gu / (1.0 + gv))
    mean = float(eve.mean())
    se = float(eve.std(ddof=1) / math.sqrt(samples))
    return RateEstimate(max(0.0, bob - mean), "monte_carlo", se, int(samples))
