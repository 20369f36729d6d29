"""Problem instances, power allocations, and seeded eavesdropper sampling.

All powers and channel gains are linear-scale; rates elsewhere are in nats.
The eavesdropper's per-antenna power gains are exponential with configurable
mean (1 by default); a non-unit mean is equivalent to rescaling the AN and
signal powers seen by the eavesdropper, and the evaluators apply exactly that
rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# relative slack on the total-power equality constraint
BUDGET_RTOL = 1e-9

# Hermitian / PSD validation slack for covariance matrices
_HERM_ATOL = 1e-12
_PSD_ATOL = 1e-9


@dataclass(frozen=True)
class ChannelConfig:
    """A wiretap-channel instance: antenna count and channel statistics.

    n_t          transmit antennas (>= 2 so the null space of h is nonempty)
    h_norm_sq    squared norm of the legitimate channel vector, linear scale
    eve_mean_gain  mean of each eavesdropper power gain (1 in the reference
                   setting)
    """

    n_t: int
    h_norm_sq: float
    eve_mean_gain: float = 1.0

    def __post_init__(self):
        if int(self.n_t) != self.n_t or self.n_t < 2:
            raise ValueError("n_t must be an integer >= 2")
        if not self.h_norm_sq > 0.0:
            raise ValueError("h_norm_sq must be positive")
        if not self.eve_mean_gain > 0.0:
            raise ValueError("eve_mean_gain must be positive")


@dataclass(frozen=True)
class PowerAllocation:
    """The decision variable: signal power, main-channel AN, null-space AN.

    p_u, p_v1, p_v2 are per-direction powers; p_v2 is spent in each of the
    n_t - 1 null-space directions, so feasibility means

        p_u + p_v1 + (n_t - 1) * p_v2 == p_total

    to within BUDGET_RTOL relative slack.  Using the whole budget is optimal,
    hence equality rather than an inequality.
    """

    p_u: float
    p_v1: float
    p_v2: float
    p_total: float
    n_t: int

    def __post_init__(self):
        if int(self.n_t) != self.n_t or self.n_t < 2:
            raise ValueError("n_t must be an integer >= 2")
        if not self.p_total > 0.0:
            raise ValueError("p_total must be positive")
        for name in ("p_u", "p_v1", "p_v2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        spent = self.p_u + self.p_v1 + (self.n_t - 1) * self.p_v2
        if abs(spent - self.p_total) > BUDGET_RTOL * self.p_total:
            raise ValueError(
                f"power budget violated: {spent!r} != {self.p_total!r}"
            )

    @classmethod
    def from_signal_and_main(cls, p_u, p_v1, p_total, n_t):
        """Build an allocation with p_v2 filled in from the budget equality."""
        p_v2 = (p_total - p_u - p_v1) / (n_t - 1)
        if -BUDGET_RTOL * p_total < p_v2 < 0.0:
            p_v2 = 0.0
            p_u = p_total - p_v1  # absorb the rounding into the largest term
        return cls(p_u, p_v1, p_v2, p_total, n_t)


@dataclass(frozen=True)
class ValidationChannel:
    """Explicit channel vector plus signal/AN covariance matrices.

    Used only by the matrix-form rate evaluator that validates the reduction
    of the covariance optimization to the three-power problem.
    """

    h: np.ndarray
    s_u: np.ndarray
    s_v: np.ndarray
    p_total: float

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        s_u = np.asarray(self.s_u, dtype=complex)
        s_v = np.asarray(self.s_v, dtype=complex)
        n = h.shape[0]
        if h.ndim != 1 or s_u.shape != (n, n) or s_v.shape != (n, n):
            raise ValueError("shape mismatch between h and the covariances")
        for name, s in (("s_u", s_u), ("s_v", s_v)):
            if np.max(np.abs(s - s.conj().T)) > _HERM_ATOL:
                raise ValueError(f"{name} is not Hermitian")
            if np.min(np.linalg.eigvalsh(s)) < -_PSD_ATOL:
                raise ValueError(f"{name} is not positive semidefinite")
        trace = float(np.trace(s_u).real + np.trace(s_v).real)
        if trace > self.p_total + 1e-9:
            raise ValueError("trace(s_u + s_v) exceeds the power budget")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "s_u", s_u)
        object.__setattr__(self, "s_v", s_v)


def sample_gains(config, count, seed):
    """Draw eavesdropper power-gain vectors, one row per fading realization.

    Each entry is an independent exponential draw with mean
    config.eve_mean_gain, produced by inverse-CDF mapping of a counter-based
    Philox stream keyed on `seed`.  The draw is a pure function of
    (config, count, seed), independent of how callers partition work.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    u = rng.random((int(count), config.n_t))
    return -config.eve_mean_gain * np.log1p(-u)


def sample_eve_vectors(n_t, count, seed):
    """Circularly symmetric standard complex normal channel vectors."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    z = rng.standard_normal((int(count), 2 * n_t))
    return (z[:, :n_t] + 1j * z[:, n_t:]) / np.sqrt(2.0)


def build_optimal_covariances(config, alloc, h):
    """Optimal-structure covariances for a given allocation and channel h.

    The signal covariance is the rank-one beamformer along h carrying p_u.
    The AN covariance has eigenvalue p_v1 along h and p_v2 along every
    direction orthogonal to h:

        s_v = ((n_t p_v1 - p_total + p_u) / ||h||^2 * h h^H
               + (p_total - p_u - p_v1) * I) / (n_t - 1)

    Raises ValueError when the implied eigenvalues are negative, i.e. the
    inputs lie outside the feasible simplex.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (config.n_t,):
        raise ValueError("h must be a vector of length n_t")
    if alloc.n_t != config.n_t:
        raise ValueError("allocation and config disagree on n_t")
    h2 = float(np.vdot(h, h).real)
    if not h2 > 0.0:
        raise ValueError("h must be nonzero")

    n_t = config.n_t
    outer = np.outer(h, h.conj())
    s_u = (alloc.p_u / h2) * outer
    a = (n_t * alloc.p_v1 - alloc.p_total + alloc.p_u) / h2
    b = alloc.p_total - alloc.p_u - alloc.p_v1
    s_v = (a * outer + b * np.eye(n_t)) / (n_t - 1)

    # eigenvalues of s_v along h and orthogonal to it; guard the simplex
    ev_h = (a * h2 + b) / (n_t - 1)
    ev_perp = b / (n_t - 1)
    if min(ev_h, ev_perp) < -_PSD_ATOL:
        raise ValueError(
            "allocation outside the feasible simplex: AN covariance would "
            f"have eigenvalues ({ev_h:.3e}, {ev_perp:.3e})"
        )
    return ValidationChannel(h=h, s_u=s_u, s_v=s_v, p_total=alloc.p_total)
