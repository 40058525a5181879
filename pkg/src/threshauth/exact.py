"""Exact binomial acceptance probabilities and brute-force optima.

With {0,1} per-round errors the total error count is binomial, so
acceptance probabilities, expected losses, and the best (rounds,
threshold) pair can all be computed exactly. The functions here serve
as ground truth for the closed-form bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .loss import ErrorRateBounds, LossParameters, ProverIdentity, expected_loss


@dataclass(frozen=True)
class BinomialSpec:
    """Number of trials and per-trial success probability."""

    trials: int
    success_prob: float

    def __post_init__(self) -> None:
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if not (0.0 <= self.success_prob <= 1.0):
            raise ValueError(f"success_prob not in [0,1]: {self.success_prob}")


@dataclass(frozen=True)
class BruteForceResult:
    """Outcome of the exhaustive (rounds, threshold) search."""

    rounds: int
    threshold: int
    worst_loss: float


def binomial_pmf(trials: int, success_prob: float) -> np.ndarray:
    """Full probability mass function as an array of length trials + 1.

    Computed in log space with cumulative binomial-coefficient sums, so
    no factorial overflow occurs for trial counts into the thousands.
    """
    n, mu = trials, success_prob
    if n < 1:
        raise ValueError(f"trials must be >= 1, got {n}")
    if not (0.0 <= mu <= 1.0):
        raise ValueError(f"success_prob not in [0,1]: {mu}")
    if mu == 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if mu == 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    k = np.arange(1, n + 1, dtype=np.float64)
    # log C(n, k) built incrementally: log C(n,k) - log C(n,k-1) = log((n-k+1)/k)
    log_comb = np.concatenate(([0.0], np.cumsum(np.log((n - k + 1.0) / k))))
    ks = np.arange(0, n + 1, dtype=np.float64)
    log_pmf = log_comb + ks * math.log(mu) + (n - ks) * math.log1p(-mu)
    return np.exp(log_pmf)


def binomial_cdf(spec: BinomialSpec, count: int) -> float:
    """Lower-tail probability Pr(X <= count), exact term-by-term sum.

    Terms are evaluated through the log-gamma function and accumulated
    with compensated summation. Counts below 0 give 0, counts at or
    above the trial count give 1.
    """
    n, mu = spec.trials, spec.success_prob
    if count < 0:
        return 0.0
    if count >= n:
        return 1.0
    if mu == 0.0:
        return 1.0
    if mu == 1.0:
        return 0.0
    log_mu, log_q = math.log(mu), math.log1p(-mu)
    lg_n1 = math.lgamma(n + 1)
    terms = [
        math.exp(
            lg_n1
            - math.lgamma(k + 1)
            - math.lgamma(n - k + 1)
            + k * log_mu
            + (n - k) * log_q
        )
        for k in range(0, count + 1)
    ]
    return min(1.0, math.fsum(terms))


def binomial_sf(spec: BinomialSpec, count: int) -> float:
    """Upper-tail probability Pr(X >= count), derived by complement.

    Defined as 1 - cdf(count - 1) so that cdf(u) + sf(u + 1) == 1 holds
    exactly in floating point for every u.
    """
    return 1.0 - binomial_cdf(spec, count - 1)


def accepted_count_max(threshold: float) -> int:
    """Largest integer error count strictly below the threshold."""
    return math.ceil(threshold) - 1


def acceptance_probability(trials: int, threshold: float, per_round_error: float) -> float:
    """Pr(error count < threshold) for binomial per-round errors."""
    return binomial_cdf(
        BinomialSpec(trials, per_round_error), accepted_count_max(threshold)
    )


def exact_expected_loss(
    params: LossParameters,
    rounds: int,
    threshold: float,
    per_round_error: float,
    identity: ProverIdentity,
) -> float:
    """Expected loss with the acceptance probability computed exactly."""
    accept = acceptance_probability(rounds, threshold, per_round_error)
    return expected_loss(params, rounds, accept, identity)


def exact_worst_case_loss(
    params: LossParameters,
    rates: ErrorRateBounds,
    rounds: int,
    threshold: float,
) -> float:
    """Worst of the two exact per-identity losses at the rate bounds.

    The attacker plays at its error floor and the user at its ceiling;
    those are the extremal behaviors the bounds are designed against.
    """
    loss_att = exact_expected_loss(
        params, rounds, threshold, rates.attacker_floor, ProverIdentity.ATTACKER
    )
    loss_use = exact_expected_loss(
        params, rounds, threshold, rates.user_ceiling, ProverIdentity.USER
    )
    return max(loss_att, loss_use)


def brute_force_optimal(
    params: LossParameters,
    rates: ErrorRateBounds,
    n_max: int,
) -> BruteForceResult:
    """Exhaustive search for the loss-minimizing rounds and threshold.

    Sweeps every round count up to ``n_max`` and every integer threshold
    0..n; integer thresholds suffice because with {0,1} per-round errors
    only they change the decision rule. Ties break toward the smallest
    round count, then the smallest threshold.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    best = BruteForceResult(1, 0, math.inf)
    la, lu, lb = params.false_accept, params.false_reject, params.per_round
    for n in range(1, n_max + 1):
        pmf_att = binomial_pmf(n, rates.attacker_floor)
        pmf_use = binomial_pmf(n, rates.user_ceiling)
        # acceptance probability at integer threshold t is Pr(count <= t-1)
        acc_att = np.concatenate(([0.0], np.cumsum(pmf_att[:-1])))
        acc_use = np.concatenate(([0.0], np.cumsum(pmf_use[:-1])))
        worst = np.maximum(
            n * lb + acc_att * la, n * lb + (1.0 - acc_use) * lu
        )
        t = int(np.argmin(worst))  # argmin returns the first, smallest-t, minimum
        if worst[t] < best.worst_loss:
            best = BruteForceResult(n, t, float(worst[t]))
    return best
