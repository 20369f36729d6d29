import math

import numpy as np
import pytest

from ganbf.kkt import f1, f2
from ganbf.model import ChannelConfig, PowerAllocation
from ganbf.rate import secrecy_rate_quadrature
from ganbf.solver import (BracketingError, SolverConfig, bisect,
                          golden_section_max, solve_bruteforce,
                          solve_goel_negi, solve_iterative, solve_no_an,
                          solve_step2, solve_step3)

SC = SolverConfig()


def dense_scan_root(fn, lo, hi, n=4000, rising=None):
    """Independent root locator: finest sign-change bracket on a dense grid."""
    xs = np.linspace(lo, hi, n + 1)
    vals = np.array([fn(x) for x in xs])
    for k in range(n):
        if vals[k] == 0.0:
            return xs[k]
        if vals[k] * vals[k + 1] < 0.0:
            if rising is not None and (vals[k] < vals[k + 1]) != rising:
                continue
            # linear interpolation inside the finest bracket
            return xs[k] - vals[k] * (xs[k + 1] - xs[k]) / (vals[k + 1] - vals[k])
    return None


def test_bisect_linear_root():
    assert bisect(lambda x: x - 3.0, 0.0, 10.0, 1e-10, 1e-5) == pytest.approx(
        3.0, abs=1e-5)


def test_bisect_sqrt2():
    root = bisect(lambda x: x * x - 2.0, 0.0, 2.0, 1e-12, 1e-12)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-5)


def test_bisect_bracketing_error():
    with pytest.raises(BracketingError):
        bisect(lambda x: x + 1.0, 0.0, 1.0, 1e-8, 1e-8)


def test_bisect_stops_at_eps1():
    calls = []

    def res(x):
        calls.append(x)
        return x - 0.5

    out = bisect(res, 0.0, 1.0, 1e-15, eps1=0.2)
    assert abs(out - 0.5) < 0.2
    assert len(calls) < 10  # the residual relaxation exits early


def test_golden_quadratic_peak():
    x, v = golden_section_max(lambda x: -(x - 4.0) ** 2, 0.0, 10.0, 1e-6)
    assert x == pytest.approx(4.0, abs=1e-5)
    assert v == pytest.approx(0.0, abs=1e-9)


def test_golden_sine_peak():
    x, _ = golden_section_max(math.sin, 0.0, math.pi, 1e-8)
    assert x == pytest.approx(math.pi / 2.0, abs=1e-6)


def test_golden_monotone_boundary():
    x, v = golden_section_max(lambda x: x, 0.0, 1.0, 1e-6)
    assert x == pytest.approx(1.0, abs=1e-5)
    assert v == pytest.approx(1.0, abs=1e-5)


# --- step 2 -----------------------------------------------------------------

def test_step2_empty_budget():
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    assert solve_step2(config, SC, 10.0, 10.0) == (0.0, 0.0)


def test_step2_bisection_branch_matches_dense_scan():
    # f2 starts positive here, so the signed crossing is bisected directly.
    # |f2| < eps1 is the accepted-solution contract; the geometric match to
    # the dense-scan oracle is checked with the relaxation tightened away.
    config = ChannelConfig(n_t=2, h_norm_sq=0.5)
    p_total, pv1 = 10.0, 1.0
    width = p_total - pv1
    p_u, p_v2 = solve_step2(config, SC, pv1, p_total)
    assert abs(f2(config, p_u, pv1, p_v2).value) < SC.eps1
    assert p_u + pv1 + p_v2 == pytest.approx(p_total, rel=1e-12)
    tight = SolverConfig(eps1=1e-12)
    p_u_tight, _ = solve_step2(config, tight, pv1, p_total)
    oracle = dense_scan_root(
        lambda x: f2(config, x, pv1, (width - x)).value, 0.0, width, rising=False)
    assert p_u_tight == pytest.approx(oracle, abs=1e-4)


def test_step2_positive_lobe_branch():
    # f2 < 0 at the origin but a positive lobe exists further right
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    p_total, pv1 = 25.0, 0.0
    width = p_total - pv1
    assert f2(config, 0.0, pv1, width).value < 0.0
    p_u, p_v2 = solve_step2(config, SC, pv1, p_total)
    assert p_u > 0.0
    assert abs(f2(config, p_u, pv1, p_v2).value) < SC.eps1
    p_u_tight, _ = solve_step2(config, SolverConfig(eps1=1e-12), pv1, p_total)
    oracle = dense_scan_root(
        lambda x: f2(config, x, pv1, (width - x)).value, 0.0, width, rising=False)
    assert p_u_tight == pytest.approx(oracle, abs=1e-4)


def test_step2_no_positive_lobe_gives_zero_signal():
    # dense scan confirms f2 < 0 over the whole interval for this instance
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    p_total, pv1 = 10.0, 0.5
    width = p_total - pv1
    xs = np.linspace(0.0, width, 400)
    assert max(f2(config, x, pv1, (width - x)).value for x in xs) < 0.0
    p_u, p_v2 = solve_step2(config, SC, pv1, p_total)
    assert p_u == 0.0
    assert p_v2 == pytest.approx(width, rel=1e-12)


# --- step 3 -----------------------------------------------------------------

def test_step3_origin_root():
    # at ||h||^2 = 1 the residual vanishes identically at the origin
    config = ChannelConfig(n_t=2, h_norm_sq=1.0)
    assert f1(config, 0.0, 0.0).value == pytest.approx(0.0, abs=1e-12)
    assert solve_step3(config, SC, 0.0, 10.0) == 0.0


def test_step3_interior_root_matches_dense_scan():
    # f1 rises through zero along this line; the crossing is the rate max
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    p_total, pv2 = 25.0, 16.0
    ub = p_total - pv2
    pv1 = solve_step3(config, SC, pv2, p_total)
    assert abs(f1(config, pv1, pv2).value) < SC.eps1
    pv1_tight = solve_step3(config, SolverConfig(eps1=1e-12), pv2, p_total)
    oracle = dense_scan_root(lambda x: f1(config, x, pv2).value, 0.0, ub,
                             rising=True)
    assert oracle is not None
    assert pv1_tight == pytest.approx(oracle, abs=1e-4)


def test_step3_everywhere_positive_residual_prefers_origin():
    # f1 > 0 across the whole interval means the rate falls as p_v1 grows,
    # so the origin is the boundary maximizer (the rate-consistent fallback)
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    p_total, pv2 = 25.0, 14.0
    ub = p_total - pv2
    xs = np.linspace(0.0, ub, 200)
    assert min(f1(config, x, pv2).value for x in xs) > 0.0
    assert solve_step3(config, SC, pv2, p_total) == 0.0
    r0 = secrecy_rate_quadrature(config, PowerAllocation(ub, 0.0, pv2, p_total, 2)).value
    rub = secrecy_rate_quadrature(config, PowerAllocation(0.0, ub, pv2, p_total, 2)).value
    assert r0 > rub


def test_step3_budget_guard():
    config = ChannelConfig(n_t=3, h_norm_sq=0.1)
    with pytest.raises(ValueError):
        solve_step3(config, SC, 6.0, 10.0)  # 2 * 6 > 10


# --- full solves ------------------------------------------------------------

def test_iterative_zero_rate_canonical_corner():
    config = ChannelConfig(n_t=2, h_norm_sq=0.05)
    rep = solve_iterative(config, SC, 5.0)
    assert rep.rate.value == 0.0
    assert rep.allocation == PowerAllocation(0.0, 0.0, 5.0, 5.0, 2)
    assert rep.converged


def test_iterative_interior_solution_kkt_consistent():
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    rep = solve_iterative(config, SC, 25.0)
    a = rep.allocation
    assert a.p_v1 > SC.eps2
    assert abs(f1(config, a.p_v1, a.p_v2).value) < SC.eps1
    assert abs(f2(config, a.p_u, a.p_v1, a.p_v2).value) < SC.eps1
    assert rep.necessary_condition is not None
    assert rep.necessary_condition.satisfied
    assert rep.converged


def test_iterative_rate_settles_quickly():
    # the trace rate is within 1e-4 of its final value by the 7th iteration
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    rep = solve_iterative(config, SC, 25.0)
    rates = [row[4] for row in rep.trace]
    final = rates[-1]
    by7 = rates[min(6, len(rates) - 1)]
    assert abs(by7 - final) <= 1e-4


def test_iterative_budget_equality_everywhere():
    config = ChannelConfig(n_t=3, h_norm_sq=0.3)
    rep = solve_iterative(config, SC, 12.0)
    for _, p_u, p_v1, p_v2, _ in rep.trace:
        assert p_u + p_v1 + 2 * p_v2 == pytest.approx(12.0, rel=1e-9)
    a = rep.allocation
    assert a.p_u + a.p_v1 + 2 * a.p_v2 == pytest.approx(12.0, rel=1e-9)
    assert len(rep.trace) <= SC.max_iter * SC.max_check


def test_iterative_deterministic():
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    r1 = solve_iterative(config, SolverConfig(seed=11), 9.0)
    r2 = solve_iterative(config, SolverConfig(seed=11), 9.0)
    assert r1.allocation == r2.allocation
    assert r1.rate == r2.rate
    assert r1.trace == r2.trace


def test_iterative_dominates_goel_negi():
    for h2, pt in ((0.1, 25.0), (0.2, 10.0), (0.05, 8.0), (0.3, 18.0)):
        config = ChannelConfig(n_t=2, h_norm_sq=h2)
        it = solve_iterative(config, SC, pt)
        gn = solve_goel_negi(config, pt)
        assert it.rate.value >= gn.rate.value - 1e-6


def test_iterative_matches_bruteforce_three_antennas():
    config = ChannelConfig(n_t=3, h_norm_sq=0.3)
    it = solve_iterative(config, SC, 12.0)
    br = solve_bruteforce(config, 12.0, grid_step=12.0 / 200.0)
    assert abs(it.rate.value - br.rate.value) <= 1e-3


def test_bruteforce_tiny_grid():
    config = ChannelConfig(n_t=2, h_norm_sq=0.1)
    rep = solve_bruteforce(config, 1.0, grid_step=1.0)
    assert rep.rate.value == 0.0
    assert rep.allocation == PowerAllocation(0.0, 0.0, 1.0, 1.0, 2)


def test_bruteforce_moderate_power_uses_main_channel_an():
    # grid-search oracle: the optimum spends AN on the main channel here
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    rep = solve_bruteforce(config, 10.0, grid_step=0.05)
    a = rep.allocation
    assert a.p_v1 > SC.eps2
    assert rep.rate.value > 0.04
    assert (a.p_u, a.p_v1, a.p_v2) == pytest.approx((2.75, 0.75, 6.5), abs=1e-9)
    assert rep.necessary_condition is not None and rep.necessary_condition.satisfied


def test_bruteforce_grid_refinement_consistent():
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    coarse = solve_bruteforce(config, 10.0, grid_step=0.1)
    fine = solve_bruteforce(config, 10.0, grid_step=0.05)
    assert fine.rate.value >= coarse.rate.value - 1e-12
    assert abs(fine.rate.value - coarse.rate.value) < 5e-4


def test_goel_negi_vanishing_budget():
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    rep = solve_goel_negi(config, 1e-3)
    assert rep.rate.value == 0.0


def test_goel_negi_within_bruteforce():
    for h2, pt in ((0.1, 25.0), (0.2, 12.0)):
        config = ChannelConfig(n_t=2, h_norm_sq=h2)
        gn = solve_goel_negi(config, pt, grid_step=pt / 200.0)
        br = solve_bruteforce(config, pt, grid_step=pt / 200.0)
        assert gn.rate.value <= br.rate.value + 1e-9
        assert gn.allocation.p_v1 == 0.0


def test_no_an_baselines():
    # below-unity channel gains cannot sustain a positive rate without AN
    config = ChannelConfig(n_t=2, h_norm_sq=0.2)
    rep = solve_no_an(config, 20.0)
    assert rep.rate.value == 0.0
    assert rep.allocation.p_u == 20.0  # canonical full-power representative
    # a strong legitimate channel flips that
    strong = ChannelConfig(n_t=2, h_norm_sq=3.0)
    rep2 = solve_no_an(strong, 10.0)
    assert rep2.rate.value > 0.0
    gn2 = solve_goel_negi(strong, 10.0)
    assert gn2.rate.value >= rep2.rate.value - 1e-6
