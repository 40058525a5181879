"""Loss structure for thresholded authentication protocols.

A protocol run costs a fixed amount per exchanged round plus a penalty
when the decision is wrong: accepting an attacker or rejecting the
legitimate user. Everything downstream (bounds, exact optima, Monte
Carlo) scores outcomes through the functions defined here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class GapCollapseError(ValueError):
    """Raised when attacker and user error-rate bounds fail to separate."""


class ProverIdentity(enum.Enum):
    USER = "user"
    ATTACKER = "attacker"


@dataclass(frozen=True)
class LossParameters:
    """The three unit losses and their derived ratio.

    Attributes
    ----------
    false_accept : float
        Loss suffered when an attacker is accepted.
    false_reject : float
        Loss suffered when the legitimate user is rejected.
    per_round : float
        Transmission cost per protocol round.
    allow_zero_round_cost : bool
        Permit ``per_round == 0`` for callers that never optimize the
        round count. The round-count optimizer divides by ``per_round``,
        so the default constructor rejects zero to fail early.
    """

    false_accept: float
    false_reject: float
    per_round: float
    allow_zero_round_cost: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.false_accept > 0 and math.isfinite(self.false_accept)):
            raise ValueError(f"false_accept must be positive, got {self.false_accept}")
        if not (self.false_reject > 0 and math.isfinite(self.false_reject)):
            raise ValueError(f"false_reject must be positive, got {self.false_reject}")
        floor = 0.0 if self.allow_zero_round_cost else None
        if floor is None:
            if not (self.per_round > 0 and math.isfinite(self.per_round)):
                raise ValueError(f"per_round must be positive, got {self.per_round}")
        elif not (self.per_round >= 0 and math.isfinite(self.per_round)):
            raise ValueError(f"per_round must be nonnegative, got {self.per_round}")

    @property
    def ratio(self) -> float:
        """False-accept to false-reject loss ratio."""
        return self.false_accept / self.false_reject


@dataclass(frozen=True)
class ErrorRateBounds:
    """Per-round expected-error bounds separating attacker from user.

    ``attacker_floor`` lower-bounds the attacker's per-round error
    probability; ``user_ceiling`` upper-bounds the user's. The analysis
    needs a strictly positive gap between the two.
    """

    attacker_floor: float
    user_ceiling: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.user_ceiling <= 1.0):
            raise ValueError(f"user_ceiling not in [0,1]: {self.user_ceiling}")
        if not (0.0 <= self.attacker_floor <= 1.0):
            raise ValueError(f"attacker_floor not in [0,1]: {self.attacker_floor}")
        if not self.attacker_floor > self.user_ceiling:
            raise GapCollapseError(
                f"attacker_floor {self.attacker_floor} must exceed "
                f"user_ceiling {self.user_ceiling}"
            )

    @property
    def gap(self) -> float:
        return self.attacker_floor - self.user_ceiling


@dataclass(frozen=True)
class ProtocolConfig:
    """Round count and acceptance threshold of one protocol instance.

    A prover is accepted if and only if its total error count over
    ``rounds`` rounds is strictly below ``threshold``.
    """

    rounds: int
    threshold: float

    def __post_init__(self) -> None:
        if not (isinstance(self.rounds, int) and self.rounds >= 1):
            raise ValueError(f"rounds must be a positive integer, got {self.rounds}")
        if not (0.0 <= self.threshold <= self.rounds):
            raise ValueError(
                f"threshold {self.threshold} outside [0, {self.rounds}]"
            )


def expected_loss(
    params: LossParameters,
    rounds: int,
    accept_prob: float,
    identity: ProverIdentity,
) -> float:
    """Expected loss of one protocol run given the acceptance probability.

    For an attacker the wrong decision is acceptance, for the user it is
    rejection; either way the round cost is always paid:

        attacker: rounds * per_round + accept_prob * false_accept
        user:     rounds * per_round + (1 - accept_prob) * false_reject
    """
    if not (0.0 <= accept_prob <= 1.0):
        raise ValueError(f"accept_prob not in [0,1]: {accept_prob}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    base = rounds * params.per_round
    if identity is ProverIdentity.ATTACKER:
        return base + accept_prob * params.false_accept
    return base + (1.0 - accept_prob) * params.false_reject


def worst_case_expected_loss(loss_user: float, loss_attacker: float) -> float:
    """Max of the two per-identity expected losses.

    Upper-bounds the expected loss under any prior over who the prover
    is, which is why the optimization targets this quantity.
    """
    if loss_user < 0 or loss_attacker < 0:
        raise ValueError("losses must be nonnegative")
    return max(loss_user, loss_attacker)
