"""Closed-form recovery bounds and their Monte-Carlo validation.

Covers the mixed-Bernoulli tail bound, the three-term first-stage error
rate and its aggregation over recovery counts, the second-stage sign-error
rate (printed exponent plus the standard Hoeffding variant), and the
finite-n quantities behind the expander conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from sdpinfer.rng import STREAM_TRIAL, derive_seed


@dataclass(frozen=True)
class RateInputs:
    """Inputs to the first-stage error rate for recovering k of n labels."""

    n: int
    k: int
    p: float
    phi: float
    delta_max: int

    def __post_init__(self):
        if not (self.n / 2 <= self.k <= self.n):
            raise ValueError(f"need n/2 <= k <= n, got n={self.n} k={self.k}")
        if not (0.0 <= self.p < 0.5):
            raise ValueError(f"p must lie in [0, 0.5), got {self.p}")
        if self.phi < 0:
            raise ValueError(f"phi must be nonnegative, got {self.phi}")
        if self.delta_max < 1:
            raise ValueError(f"delta_max must be >= 1, got {self.delta_max}")


@dataclass(frozen=True)
class ChernoffInputs:
    """Sum of m Ber(r) and n-m Ber(1-r) variables, deviation t above the mean."""

    n: int
    m: int
    r: float
    t: float

    def __post_init__(self):
        if not (0 <= self.m <= self.n):
            raise ValueError(f"need 0 <= m <= n, got m={self.m} n={self.n}")
        if not (0.5 <= self.r < 1.0):
            raise ValueError(f"r must lie in [0.5, 1), got {self.r}")
        if self.t < 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")


@dataclass(frozen=True)
class ExpanderConditionReport:
    """Finite-n ratios behind the three asymptotic expander conditions.

    Each ratio pairs with the error term it controls; no boolean verdict
    is attached because the conditions are asymptotic.
    """

    degree_log_ratio: float  # d / log n
    recover_gap_ratio: float  # (c^2 d/16 - (n-k))^2 / (d log k)
    complement_gap_ratio: float  # (c^2 d/16 - (2k+d-n))^2 / (d log(n-k))
    eps_term_spectral: float
    eps_term_recover: float
    eps_term_complement: float


def _epsilon_terms(ri: RateInputs) -> tuple[float, float, float]:
    n, k, p, phi, delta = ri.n, ri.k, ri.p, ri.phi, ri.delta_max
    one_minus_2p = 1.0 - 2.0 * p
    denom = 512.0 * p * (1.0 - p) * delta**3 + 11.0 * one_minus_2p * (1.0 - p) * delta * phi**2
    if denom > 0.0:
        term1 = n * math.exp(-(one_minus_2p**2) * phi**4 / denom)
    else:
        # denom vanishes only at p = 0, phi = 0: the 0/0 exponent is read
        # as 0, leaving the vacuous coefficient n
        term1 = float(n)
    gap = phi**2 / (16.0 * delta)
    term2 = k * math.exp(-2.0 * one_minus_2p**2 / delta * (gap - (n - k)) ** 2)
    term3 = (n - k) * math.exp(-2.0 * one_minus_2p**2 / delta * (gap - (2 * k + delta - n)) ** 2)
    return term1, term2, term3


def epsilon_rate(ri: RateInputs) -> float:
    """Three-term error rate for a fixed recovery configuration of size k.

    May exceed 1; it is an error bound, not a probability.
    """
    return sum(_epsilon_terms(ri))


def recovery_prob_bound(ri: RateInputs, eps: float | None = None) -> float:
    """Aggregated success bound (n-k+1) * C(n,k) * (1 - eps), clamped to [0,1].

    Binomial coefficient handled in log space; a vacuous (>= 1 or <= 0)
    value clamps.  eps defaults to epsilon_rate(ri).
    """
    if eps is None:
        eps = epsilon_rate(ri)
    if eps >= 1.0:
        return 0.0
    log_total = math.log(ri.n - ri.k + 1) + math.lgamma(ri.n + 1) - math.lgamma(ri.k + 1) - math.lgamma(ri.n - ri.k + 1)
    log_total += math.log1p(-eps)
    if log_total >= 0.0:
        return 1.0
    return math.exp(log_total)


def mixed_chernoff_bound(ci: ChernoffInputs) -> float:
    """exp(-(2(n-m) + m/(2r(1-r))) * t^2 / n^2).

    At r = 0.5 the mixed coefficient reduces to 2n, recovering Hoeffding.
    """
    coeff = 2.0 * (ci.n - ci.m) + ci.m / (2.0 * ci.r * (1.0 - ci.r))
    return math.exp(-coeff * ci.t**2 / ci.n**2)


def stage2_error_bound(n: int, q: float) -> float:
    """Second-stage sign-error rate exp(-(1 - 2 q^2) n / 2)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (0.0 <= q < 0.5):
        raise ValueError(f"q must lie in [0, 0.5), got {q}")
    return math.exp(-(1.0 - 2.0 * q**2) * n / 2.0)


def stage2_error_bound_hoeffding(n: int, q: float) -> float:
    """Companion rate exp(-(1-2q)^2 n / 2) from Hoeffding on w^T y* <= 0."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (0.0 <= q < 0.5):
        raise ValueError(f"q must lie in [0, 0.5), got {q}")
    return math.exp(-((1.0 - 2.0 * q) ** 2) * n / 2.0)


def expander_conditions(n: int, d: int, c: float, k: int) -> ExpanderConditionReport:
    """Finite-n quantities behind the expander recovery conditions.

    Uses phi = c*d and delta_max = d in the rate terms.  Degenerate
    logarithms (log of 0 or 1) report an infinite ratio.
    """
    if d < 1 or d >= n or c <= 0:
        raise ValueError(f"invalid expander parameters n={n} d={d} c={c}")
    ri = RateInputs(n=n, k=k, p=0.0, phi=c * d, delta_max=d)
    t1, t2, t3 = _epsilon_terms(ri)
    gap = c**2 * d / 16.0

    def ratio(num: float, count: int) -> float:
        log_count = math.log(count) if count >= 2 else 0.0
        return num / (d * log_count) if log_count > 0.0 else math.inf

    return ExpanderConditionReport(
        degree_log_ratio=d / math.log(n) if n >= 2 else math.inf,
        recover_gap_ratio=ratio((gap - (n - k)) ** 2, k),
        complement_gap_ratio=ratio((gap - (2 * k + d - n)) ** 2, n - k),
        eps_term_spectral=t1,
        eps_term_recover=t2,
        eps_term_complement=t3,
    )


def validate_chernoff_monte_carlo(ci: ChernoffInputs, trials: int, seed: int) -> tuple[float, float]:
    """Empirical tail P(s >= E[s] + t) next to the closed-form bound.

    Returns (empirical, bound).  Tests require empirical <= bound plus a
    3-sigma sampling allowance.
    """
    if trials < 1000:
        raise ValueError(f"need at least 1000 trials, got {trials}")
    rng = np.random.default_rng(derive_seed(seed, STREAM_TRIAL))
    s = np.zeros(trials)
    if ci.m > 0:
        s += rng.binomial(ci.m, ci.r, size=trials)
    if ci.n - ci.m > 0:
        s += rng.binomial(ci.n - ci.m, 1.0 - ci.r, size=trials)
    mean = ci.m * ci.r + (ci.n - ci.m) * (1.0 - ci.r)
    empirical = float(np.mean(s >= mean + ci.t))
    return empirical, mixed_chernoff_bound(ci)
