"""Power-allocation solvers: alternating KKT search, brute force, baselines.

The iterative solver alternates two one-dimensional searches on the budget
surface p_u + p_v1 + (n_t - 1) p_v2 = p_total:

  step 2: with p_v1 held fixed, substitute the budget into f2 so it becomes a
          function of p_u alone on [0, p_total - p_v1] and drive |f2| below
          eps1 (bisection when the endpoint signs differ, otherwise a
          golden-section hunt for a positive lobe, with p_u = 0 as the
          fallback when f2 is negative throughout);
  step 3: with p_v2 held fixed, drive |f1| below eps1 in p_v1 over
          [0, p_total - (n_t - 1) p_v2]; f1's sign structure identifies the
          rate-maximizing stationary candidates along the line and the best
          one is kept, so an everywhere-one-signed residual resolves to the
          correct boundary.

Convergence is declared when an iteration moves every coordinate by less
than eps2.  The exactly solved p_v1 = 0 restriction is always carried as a
standing candidate: runs whose p_v1 collapses below eps2 are represented by
it, and interior runs must beat it (with the necessary condition passing)
to be accepted early; anything else triggers a random restart of p_v1^(0),
up to max_check runs, and the best-rate candidate seen wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kkt import NecessaryConditionReport, f1, f2, necessary_condition
from .model import PowerAllocation
from .quadrature import DEFAULT_QUAD
from .rate import (RateEstimate, ergodic_log_gap, secrecy_rate_quadrature,
                   secrecy_rate_quadrature_batch)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BracketingError(ValueError):
    """Bisection was called with endpoint residuals of the same sign."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and caps for the iterative solver.

    bisection_tol, golden_tol and grid_step default to None, which resolves
    to 1e-8 * p_total, 1e-8 * p_total and p_total / 200 at solve time.
    """

    eps1: float = 1e-5
    eps2: float = 1e-5
    max_iter: int = 20
    max_check: int = 5
    bisection_tol: float | None = None
    golden_tol: float | None = None
    grid_step: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not (self.eps1 > 0.0 and self.eps2 > 0.0):
            raise ValueError("eps1 and eps2 must be positive")
        if self.max_iter < 1 or self.max_check < 1:
            raise ValueError("max_iter and max_check must be >= 1")
        for name in ("bisection_tol", "golden_tol", "grid_step"):
            v = getattr(self, name)
            if v is not None and not v > 0.0:
                raise ValueError(f"{name} must be positive when given")

    def resolve_bisection_tol(self, p_total):
        return self.bisection_tol if self.bisection_tol is not None else 1e-8 * p_total

    def resolve_golden_tol(self, p_total):
        return self.golden_tol if self.golden_tol is not None else 1e-8 * p_total

    def resolve_grid_step(self, p_total):
        return self.grid_step if self.grid_step is not None else p_total / 200.0


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one power-allocation search."""

    allocation: PowerAllocation
    rate: RateEstimate
    iterations_used: int
    trace: tuple = field(default_factory=tuple)
    necessary_condition: NecessaryConditionReport | None = None
    converged: bool = True
    restarts_used: int = 0


def bisect(residual, lo, hi, tol, eps1):
    """Root of a scalar residual on [lo, hi] with a sign change.

    Returns as soon as |residual| < eps1 at a probe point (the accepted-
    solution relaxation) or the interval width drops below tol, whichever
    comes first.  Raises BracketingError when the endpoint residuals have
    the same strict sign.
    """
    flo = residual(lo)
    fhi = residual(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketingError(
            f"residual({lo}) = {flo:.3e} and residual({hi}) = {fhi:.3e} "
            "have the same sign"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = residual(mid)
        if abs(fmid) < eps1:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(objective, lo, hi, tol):
    """Golden-section search for a maximizer of a unimodal objective.

    Returns (argmax, max_value).  The original endpoints are kept as
    candidates so monotone objectives resolve to the correct boundary.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    f_lo = objective(lo)
    f_hi = objective(hi)
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    fx1 = objective(x1)
    fx2 = objective(x2)
    while b - a > tol:
        if fx1 >= fx2:
            b, x2, fx2 = x2, x1, fx1
            x1 = b - _GOLDEN * (b - a)
            fx1 = objective(x1)
        else:
            a, x1, fx1 = x1, x2, fx2
            x2 = a + _GOLDEN * (b - a)
            fx2 = objective(x2)
    xm = 0.5 * (a + b)
    fm = objective(xm)
    best_x, best_f = xm, fm
    if f_lo > best_f:
        best_x, best_f = lo, f_lo
    if f_hi > best_f:
        best_x, best_f = hi, f_hi
    return best_x, best_f


def solve_step2(config, solver_config, p_v1_fixed, p_total, quad=DEFAULT_QUAD):
    """Given p_v1, find (p_u, p_v2) on the budget surface with |f2| < eps1.

    f2 restricted to the budget line is the derivative of the objective as
    power moves from null-space AN into the signal, so its positive-to-
    negative crossing is a one-dimensional maximizer.  When f2 starts
    negative, a golden-section hunt looks for a positive lobe further right;
    if the whole interval stays negative the signal gets no power.  When a
    crossing and the p_u = 0 boundary are both stationary candidates, the
    one with the larger rate wins.
    """
    if not 0.0 <= p_v1_fixed <= p_total * (1.0 + 1e-12):
        raise ValueError("p_v1_fixed must lie in [0, p_total]")
    m = config.n_t - 1
    width = p_total - p_v1_fixed
    if width <= 0.0:
        return 0.0, 0.0
    eps1 = solver_config.eps1

    def pv2_of(pu):
        return max(0.0, (width - pu) / m)

    def res(pu):
        return f2(config, pu, p_v1_fixed, pv2_of(pu), quad).value

    def line_rate(pu):
        alloc = _alloc(config, pu, p_v1_fixed, p_total)
        return secrecy_rate_quadrature(config, alloc, quad).value

    f_lo = res(0.0)
    f_hi = res(width)
    if abs(f_lo) < eps1:
        return 0.0, pv2_of(0.0)
    if abs(f_hi) < eps1:
        return width, 0.0

    if f_lo > 0.0 and f_hi < 0.0:
        pu = bisect(res, 0.0, width, solver_config.resolve_bisection_tol(p_total), eps1)
    elif f_lo < 0.0:
        # hunt for a positive lobe; if none the signal gets no power
        pu_tilde, f_max = golden_section_max(
            res, 0.0, width, solver_config.resolve_golden_tol(p_total))
        if f_max <= 0.0:
            pu = 0.0
        else:
            if f_hi < 0.0:
                crossing = bisect(res, pu_tilde, width,
                                  solver_config.resolve_bisection_tol(p_total), eps1)
            else:
                crossing = width
            # p_u = 0 is also a local maximizer here (f2 < 0 at the origin)
            pu = crossing if line_rate(crossing) >= line_rate(0.0) else 0.0
    else:
        # f2 positive at both ends: the objective still grows at the boundary
        pu = width
    return pu, pv2_of(pu)


_STEP3_SCAN = 32


def solve_step3(config, solver_config, p_v2_fixed, p_total, quad=DEFAULT_QUAD):
    """Given p_v2, find p_v1 with |f1| < eps1 on [0, p_total - (n_t-1) p_v2].

    -f1 is the derivative of the objective as power moves from the signal
    into main-channel AN, so rate maximizers along the line are the points
    where f1 rises through zero, plus the endpoints whose f1 sign points
    inward.  A sign scan collects those candidates (bisection refines each
    crossing) and the best-rate candidate is returned; in particular an
    everywhere-positive f1 resolves to p_v1 = 0 and an everywhere-negative
    f1 to the upper endpoint.
    """
    m = config.n_t - 1
    ub = p_total - m * p_v2_fixed
    if ub < -1e-12 * p_total:
        raise ValueError("(n_t - 1) * p_v2_fixed exceeds the budget")
    ub = max(0.0, ub)
    if ub == 0.0:
        return 0.0

    def res(pv1):
        return f1(config, pv1, p_v2_fixed, quad).value

    def line_rate(pv1):
        alloc = _alloc(config, ub - pv1, pv1, p_total)
        return secrecy_rate_quadrature(config, alloc, quad).value

    xs = np.linspace(0.0, ub, _STEP3_SCAN + 1)
    fs = [res(x) for x in xs]
    candidates = []
    if fs[0] >= 0.0:
        candidates.append(0.0)
    btol = solver_config.resolve_bisection_tol(p_total)
    for k in range(_STEP3_SCAN):
        if fs[k] < 0.0 <= fs[k + 1]:
            candidates.append(bisect(res, float(xs[k]), float(xs[k + 1]),
                                     btol, solver_config.eps1))
    if fs[-1] <= 0.0:
        candidates.append(ub)
    return max(candidates, key=line_rate)


def _alloc(config, p_u, p_v1, p_total):
    return PowerAllocation.from_signal_and_main(
        max(0.0, p_u), max(0.0, p_v1), p_total, config.n_t)


def _zero_rate_corner(config, p_total):
    # canonical representative of the all-tied zero-rate region
    return PowerAllocation(0.0, 0.0, p_total / (config.n_t - 1), p_total, config.n_t)


def solve_iterative(config, solver_config, p_total, quad=DEFAULT_QUAD):
    """Alternating search for the power allocation, Table-style schedule.

    Starts from p_v1 = 0, alternates solve_step2 / solve_step3 until the
    allocation moves less than eps2 per coordinate or max_iter iterations
    elapse.  A run whose converged p_v1 falls below eps2 declares p_v1 = 0
    for that run and is represented by the exactly re-solved two-power
    restriction (the null-space-only structure), which also serves as a
    standing candidate so the result can never fall below that baseline.
    A run that converges to an interior point is accepted when the
    necessary condition passes and the rate beats the standing candidates;
    anything else triggers a random restart of p_v1^(0), up to max_check
    runs, and the best-rate candidate seen is returned.
    """
    if not p_total > 0.0:
        raise ValueError("p_total must be positive")
    m = config.n_t - 1
    rng = np.random.Generator(np.random.Philox(key=int(solver_config.seed)))
    eps2 = solver_config.eps2

    # the p_v1 = 0 restriction: Remark-style fallback and containment floor
    gn = solve_goel_negi(config, p_total,
                         solver_config.resolve_grid_step(p_total), quad)
    candidates = [(gn.rate.value, gn.allocation, None, True)]

    trace = []
    runs = 0
    p_v1_init = 0.0
    global_iter = 0
    accepted = None

    while runs < solver_config.max_check:
        runs += 1
        prev = (0.0, p_v1_init, (p_total - p_v1_init) / m)
        p_v1_cur = p_v1_init
        run_converged = False
        for _ in range(solver_config.max_iter):
            p_u, p_v2 = solve_step2(config, solver_config, p_v1_cur, p_total, quad)
            p_v1_cur = solve_step3(config, solver_config, p_v2, p_total, quad)
            p_u = max(0.0, p_total - p_v1_cur - m * p_v2)
            global_iter += 1
            cur = (p_u, p_v1_cur, p_v2)
            alloc = _alloc(config, p_u, p_v1_cur, p_total)
            rate = secrecy_rate_quadrature(config, alloc, quad).value
            trace.append((global_iter, alloc.p_u, alloc.p_v1, alloc.p_v2, rate))
            if max(abs(c - p) for c, p in zip(cur, prev)) < eps2:
                run_converged = True
                break
            prev = cur

        final = _alloc(config, cur[0], cur[1], p_total)
        if final.p_v1 >= eps2:
            nc = necessary_condition(config, final, quad)
            rate_final = secrecy_rate_quadrature(config, final, quad).value
            candidates.append((rate_final, final, nc, run_converged))
            if nc.satisfied and rate_final >= candidates[0][0]:
                accepted = candidates[-1]
                break
        # converged p_v1 below eps2 is covered by the standing p_v1 = 0
        # candidate; either way explore another initialization
        p_v1_init = float(rng.uniform(0.0, p_total))

    if accepted is None:
        accepted = max(candidates, key=lambda c: c[0])
    rate_value, allocation, nc, run_converged = accepted
    if rate_value <= 0.0:
        allocation = _zero_rate_corner(config, p_total)
        rate_value = 0.0
        nc = None
    return SolveReport(
        allocation=allocation,
        rate=RateEstimate(rate_value, "quadrature"),
        iterations_used=global_iter,
        trace=tuple(trace),
        necessary_condition=nc,
        converged=bool(run_converged and (nc is None or nc.satisfied)),
        restarts_used=runs - 1,
    )


def solve_bruteforce(config, p_total, grid_step=None, quad=DEFAULT_QUAD,
                     eps2=1e-5):
    """Exhaustive grid search over the feasible simplex, the solver oracle.

    Enumerates p_u = i * step, p_v1 = j * step with i + j <= n and
    p_v2 = (p_total - p_u - p_v1) / (n_t - 1), evaluating every point by
    quadrature.  Ties (the all-zero-rate region in particular) resolve to
    the lexicographically smallest triple.
    """
    if not p_total > 0.0:
        raise ValueError("p_total must be positive")
    if grid_step is None:
        grid_step = p_total / 200.0
    if not grid_step > 0.0:
        raise ValueError("grid_step must be positive")
    m = config.n_t - 1
    n = max(1, int(round(p_total / grid_step)))
    step = p_total / n

    iu, jv = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = (iu + jv) <= n
    p_u = iu[keep] * step
    p_v1 = jv[keep] * step
    p_v2 = (p_total - p_u - p_v1) / m

    rates = secrecy_rate_quadrature_batch(config, p_u, p_v1, p_v2, quad)
    idx = int(np.argmax(rates))  # first max = lexicographic tie-break
    if rates[idx] <= 0.0:
        allocation = _zero_rate_corner(config, p_total)
        best_rate = 0.0
    else:
        allocation = PowerAllocation(float(p_u[idx]), float(p_v1[idx]),
                                     float(p_v2[idx]), p_total, config.n_t)
        best_rate = float(rates[idx])
    nc = None
    if allocation.p_v1 > eps2 and allocation.p_v2 > 0.0:
        nc = necessary_condition(config, allocation, quad)
    return SolveReport(
        allocation=allocation,
        rate=RateEstimate(best_rate, "quadrature"),
        iterations_used=0,
        necessary_condition=nc,
    )


def _scan_and_refine(objective, lo, hi, grid_step, golden_tol):
    # coarse grid scan followed by golden-section refinement around the best
    n = max(2, int(math.ceil((hi - lo) / grid_step)))
    xs = np.linspace(lo, hi, n + 1)
    vals = [objective(x) for x in xs]
    k = int(np.argmax(vals))
    a = xs[max(0, k - 1)]
    b = xs[min(n, k + 1)]
    if a == b:
        return float(xs[k]), float(vals[k])
    x, v = golden_section_max(objective, float(a), float(b), golden_tol)
    if vals[k] > v:
        return float(xs[k]), float(vals[k])
    return x, v


def solve_goel_negi(config, p_total, grid_step=None, quad=DEFAULT_QUAD):
    """Null-space-only AN baseline: p_v1 = 0, one-dimensional search in p_u."""
    if not p_total > 0.0:
        raise ValueError("p_total must be positive")
    if grid_step is None:
        grid_step = p_total / 200.0
    m = config.n_t - 1

    def rate_of(pu):
        alloc = PowerAllocation(pu, 0.0, (p_total - pu) / m, p_total, config.n_t)
        return secrecy_rate_quadrature(config, alloc, quad).value

    pu, best = _scan_and_refine(rate_of, 0.0, p_total, grid_step,
                                SolverConfig().resolve_golden_tol(p_total))
    if best <= 0.0:
        allocation = _zero_rate_corner(config, p_total)
        best = 0.0
    else:
        allocation = PowerAllocation(pu, 0.0, (p_total - pu) / m,
                                     p_total, config.n_t)
    return SolveReport(
        allocation=allocation,
        rate=RateEstimate(best, "quadrature"),
        iterations_used=0,
    )


def solve_no_an(config, p_total, grid_step=None, quad=DEFAULT_QUAD):
    """No-AN baseline: p_v1 = p_v2 = 0, signal power optimized over (0, p_total].

    Power may be left unspent here (the budget is an inequality for this
    baseline); the returned allocation's p_total records the power actually
    used.  The zero-rate case resolves to full signal power canonically.
    """
    if not p_total > 0.0:
        raise ValueError("p_total must be positive")
    if grid_step is None:
        grid_step = p_total / 200.0
    h2 = config.h_norm_sq
    mu = config.eve_mean_gain

    def rate_of(pu):
        if pu <= 0.0:
            return 0.0
        eve = ergodic_log_gap([(mu * pu, 0.0, 1)], quad)
        return max(0.0, math.log1p(h2 * pu) - eve)

    pu, best = _scan_and_refine(rate_of, 0.0, p_total, grid_step,
                                SolverConfig().resolve_golden_tol(p_total))
    if best <= 0.0 or pu <= 0.0:
        allocation = PowerAllocation(p_total, 0.0, 0.0, p_total, config.n_t)
        best = 0.0
    else:
        allocation = PowerAllocation(pu, 0.0, 0.0, pu, config.n_t)
    return SolveReport(
        allocation=allocation,
        rate=RateEstimate(best, "quadrature"),
        iterations_used=0,
    )
