"""Finite-sample loss bounds and the closed-form near-optimal design.

Concentration of the error count around its mean yields an exponential
upper bound on the worst-case expected loss for any threshold between
the two rate means. Equalizing its two branches gives a closed-form
threshold, and minimizing over the round count gives a closed-form
round choice, each with its own bound value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .loss import ErrorRateBounds, LossParameters


@dataclass(frozen=True)
class BoundReport:
    """Loss-bound value together with the inputs it was evaluated at.

    ``valid`` records whether the threshold lay inside the interval
    [rounds * user_ceiling, rounds * attacker_floor] required for the
    bound to hold; the value is reported either way and callers decide
    how to treat out-of-range thresholds.
    """

    bound_value: float
    threshold: float
    rounds: int
    valid: bool


@dataclass(frozen=True)
class ThresholdChoice:
    """Near-optimal threshold, clamped to its validity interval.

    ``raw`` keeps the unclamped formula value; when it falls outside
    [rounds * user_ceiling, rounds * attacker_floor], ``value`` is the
    nearest endpoint and ``clamped`` is set.
    """

    value: float
    clamped: bool
    raw: float


@dataclass(frozen=True)
class RoundsChoice:
    """Near-optimal integer round count and the real minimizer behind it."""

    value: int
    real: float


def hoeffding_tail(rounds: int, deviation: float, range_width: float = 1.0) -> float:
    """Concentration bound exp(-2 n t^2 / w^2) on an upward mean deviation.

    Bounds Pr(sum >= sum of means + n*t) for n independent summands each
    confined to an interval of width w. All per-round error variables
    here live in [0,1], so the width defaults to 1.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if not deviation > 0:
        raise ValueError(f"deviation must be positive, got {deviation}")
    if not range_width > 0:
        raise ValueError(f"range_width must be positive, got {range_width}")
    return math.exp(-2.0 * rounds * deviation * deviation / (range_width * range_width))


def loss_bound_at(
    params: LossParameters,
    rates: ErrorRateBounds,
    rounds: int,
    threshold: float,
) -> BoundReport:
    """Exponential upper bound on the worst-case expected loss.

        rounds * per_round + max(exp(-(2/n)(n*pu - tau)^2) * false_reject,
                                 exp(-(2/n)(n*pa - tau)^2) * false_accept)

    Valid when n*pu <= tau <= n*pa; outside that interval the report is
    flagged invalid rather than repaired.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    n = float(rounds)
    pa, pu = rates.attacker_floor, rates.user_ceiling
    reject_term = math.exp(-(2.0 / n) * (n * pu - threshold) ** 2) * params.false_reject
    accept_term = math.exp(-(2.0 / n) * (n * pa - threshold) ** 2) * params.false_accept
    valid = n * pu <= threshold <= n * pa
    return BoundReport(
        bound_value=rounds * params.per_round + max(reject_term, accept_term),
        threshold=threshold,
        rounds=rounds,
        valid=valid,
    )


def optimal_threshold(
    params: LossParameters,
    rates: ErrorRateBounds,
    rounds: int,
) -> ThresholdChoice:
    """Threshold equalizing the two branches of the loss bound.

        tau = n (pa + pu) / 2 - ln(ratio) / (4 gap)

    For small round counts the formula can leave the validity interval
    [n*pu, n*pa]; the returned value is then the nearest endpoint with
    ``clamped`` set, and ``raw`` preserves the formula output.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    n = float(rounds)
    pa, pu = rates.attacker_floor, rates.user_ceiling
    raw = n * (pa + pu) / 2.0 - math.log(params.ratio) / (4.0 * rates.gap)
    value = min(max(raw, n * pu), n * pa)
    return ThresholdChoice(value=value, clamped=(value != raw), raw=raw)


def threshold_loss_bound(
    params: LossParameters,
    rates: ErrorRateBounds,
    rounds: int,
) -> float:
    """Loss bound at the equalizing threshold, as a function of rounds.

        n * per_round + exp(-n gap^2 / 2) * sqrt(false_accept * false_reject)

    Dominates loss_bound_at(.., optimal_threshold(..)) whenever the
    threshold is unclamped, since equalization drops a factor <= 1.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    gap = rates.gap
    return rounds * params.per_round + math.exp(
        -rounds * gap * gap / 2.0
    ) * math.sqrt(params.false_accept * params.false_reject)


def optimal_rounds(params: LossParameters, rates: ErrorRateBounds) -> RoundsChoice:
    """Round count minimizing the equalized loss bound.

    The real minimizer is (sqrt(1 + 2 C K) - 1) / C with C = gap^2 and
    K = sqrt(false_accept * false_reject) / per_round; the integer
    choice is whichever of floor or ceiling (at least 1) evaluates to
    the smaller bound.
    """
    if not params.per_round > 0:
        raise ValueError("per_round must be positive to optimize the round count")
    c = rates.gap * rates.gap
    k = math.sqrt(params.false_accept * params.false_reject) / params.per_round
    real = (math.sqrt(1.0 + 2.0 * c * k) - 1.0) / c
    lo = max(1, math.floor(real))
    hi = max(1, math.ceil(real))
    if threshold_loss_bound(params, rates, lo) <= threshold_loss_bound(params, rates, hi):
        return RoundsChoice(value=lo, real=real)
    return RoundsChoice(value=hi, real=real)


def rounds_loss_bound(params: LossParameters, rates: ErrorRateBounds) -> float:
    """Loss bound at the optimal round count, in closed form.

        sqrt(8 * per_round) * (false_accept * false_reject)^(1/4) / gap
    """
    if not params.per_round > 0:
        raise ValueError("per_round must be positive")
    return (
        math.sqrt(8.0 * params.per_round)
        * (params.false_accept * params.false_reject) ** 0.25
        / rates.gap
    )
