"""Binary symmetric channel, protocol error-rate mapping, and simulation.

Maps channel noise to the per-round error-rate bounds of the analyzed
challenge-response protocols, and runs deterministic Monte Carlo trials
of the rapid bit-exchange phase for both prover identities.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .loss import (
    ErrorRateBounds,
    GapCollapseError,
    LossParameters,
    ProverIdentity,
    expected_loss,
)

# Sub-stream tags keep user trials, attacker trials, and coded-phase
# draws on disjoint random streams under one master seed.
_STREAM_TAG = {ProverIdentity.USER: 1, ProverIdentity.ATTACKER: 2}
CODED_PHASE_TAG = 3

# Cap on elements drawn per vectorized batch; keeps peak memory modest
# without changing the stream position consumed per trial.
_CHUNK_ELEMENTS = 1 << 23


@dataclass(frozen=True)
class ChannelModel:
    """Memoryless symmetric bit-flip channel over {0,1}."""

    flip_probability: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.flip_probability <= 1.0):
            raise ValueError(
                f"flip_probability not in [0,1]: {self.flip_probability}"
            )


class UserErrorModel(enum.Enum):
    """How the legitimate user's per-round error probability is set.

    AT_BOUND places the user exactly at its ceiling rate (twice the flip
    probability), the worst case the bounds are designed against.
    PHYSICAL uses 1 - (1 - w)^2, the rate of a round whose challenge and
    response each cross the channel once.
    """

    AT_BOUND = "at-bound"
    PHYSICAL = "physical"

    def per_round_error(self, flip_probability: float) -> float:
        if self is UserErrorModel.AT_BOUND:
            return min(2.0 * flip_probability, 1.0)
        return 1.0 - (1.0 - flip_probability) ** 2


def attacker_per_round_error(flip_probability: float) -> float:
    """Per-round error of the guessing relay attacker: (1 + w) / 2."""
    return (1.0 + flip_probability) / 2.0


def swiss_hitomi_rates(channel: ChannelModel) -> ErrorRateBounds:
    """Error-rate bounds of the analyzed protocol family.

    Attacker floor (1 + w) / 2 and user ceiling 2w, which separate only
    for flip probabilities strictly below 1/3.
    """
    w = channel.flip_probability
    if w >= 1.0 / 3.0:
        raise GapCollapseError(
            f"rate bounds collapse at flip probability {w} >= 1/3"
        )
    return ErrorRateBounds(
        attacker_floor=attacker_per_round_error(w), user_ceiling=2.0 * w
    )


def swiss_loss_bound(
    params: LossParameters, channel: ChannelModel, rounds: int
) -> float:
    """Worst-case loss bound in channel-noise form.

        n * per_round + exp(-n (1 - 3w)^2 / 8) * sqrt(false_accept * false_reject)

    Written out directly rather than through the rate mapping so it can
    be cross-checked against threshold_loss_bound on the mapped rates.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    w = channel.flip_probability
    if w >= 1.0 / 3.0:
        raise GapCollapseError(
            f"rate bounds collapse at flip probability {w} >= 1/3"
        )
    return rounds * params.per_round + math.exp(
        -rounds * (1.0 - 3.0 * w) ** 2 / 8.0
    ) * math.sqrt(params.false_accept * params.false_reject)


def capped_rounds(n_star: int, key_length: int) -> int:
    """Round count limited by the available key bits."""
    if n_star < 1 or key_length < 1:
        raise ValueError("both arguments must be positive")
    return min(n_star, key_length)


@dataclass(frozen=True)
class RapidBitExchangeConfig:
    """Per-round error probabilities and decision rule of one instance."""

    rounds: int
    threshold: float
    user_round_error_prob: float
    attacker_round_error_prob: float

    def __post_init__(self) -> None:
        if not (isinstance(self.rounds, int) and self.rounds >= 1):
            raise ValueError(f"rounds must be a positive integer, got {self.rounds}")
        for name in ("user_round_error_prob", "attacker_round_error_prob"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} not in [0,1]: {v}")

    @classmethod
    def from_channel(
        cls,
        channel: ChannelModel,
        rounds: int,
        threshold: float,
        user_model: UserErrorModel = UserErrorModel.AT_BOUND,
    ) -> "RapidBitExchangeConfig":
        return cls(
            rounds=rounds,
            threshold=threshold,
            user_round_error_prob=user_model.per_round_error(
                channel.flip_probability
            ),
            attacker_round_error_prob=attacker_per_round_error(
                channel.flip_probability
            ),
        )

    def per_round_error(self, identity: ProverIdentity) -> float:
        if identity is ProverIdentity.ATTACKER:
            return self.attacker_round_error_prob
        return self.user_round_error_prob


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one simulated authentication run."""

    identity: ProverIdentity
    error_count: int
    accepted: bool
    loss: float


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample means and standard errors over repeated trials."""

    loss_attacker: float
    loss_user: float
    worst_case: float
    stderr_attacker: float
    stderr_user: float
    stderr_worst: float
    accept_rate_attacker: float
    accept_rate_user: float
    trials_per_identity: int


def _seed_entropy(master_seed: int | Sequence[int]) -> tuple[int, ...]:
    if isinstance(master_seed, (int, np.integer)):
        return (int(master_seed),)
    return tuple(int(s) for s in master_seed)


def trial_stream(
    master_seed: int | Sequence[int],
    identity: ProverIdentity,
    trial_index: int,
    rounds: int,
) -> np.random.Generator:
    """Random stream positioned at the start of one trial's draws.

    Trial i consumes uniforms [i * rounds, (i + 1) * rounds) of the
    per-identity stream, so serial loops, vectorized batches, and
    parallel workers that honor this layout produce identical outcomes.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be nonnegative, got {trial_index}")
    bg = np.random.PCG64(
        np.random.SeedSequence(_seed_entropy(master_seed) + (_STREAM_TAG[identity],))
    )
    bg.advance(trial_index * rounds)
    return np.random.Generator(bg)


def simulate_trial(
    config: RapidBitExchangeConfig,
    params: LossParameters,
    identity: ProverIdentity,
    rng: np.random.Generator,
) -> TrialOutcome:
    """Run one rapid bit-exchange: n Bernoulli errors, compare to threshold."""
    p = config.per_round_error(identity)
    errors = rng.random(config.rounds) < p
    count = int(errors.sum())
    accepted = count < config.threshold
    loss = expected_loss(params, config.rounds, 1.0 if accepted else 0.0, identity)
    return TrialOutcome(identity=identity, error_count=count, accepted=accepted, loss=loss)


def simulate_error_counts(
    rounds: int,
    per_round_error: float,
    trials: int,
    master_seed: int | Sequence[int],
    identity: ProverIdentity,
) -> np.ndarray:
    """Error counts of ``trials`` consecutive runs, drawn in batches.

    Bit-identical to calling simulate_trial sequentially on
    trial_stream(master_seed, identity, i, rounds) for i = 0..trials-1.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    gen = trial_stream(master_seed, identity, 0, rounds)
    counts = np.empty(trials, dtype=np.int64)
    done = 0
    rows_per_chunk = max(1, _CHUNK_ELEMENTS // rounds)
    while done < trials:
        m = min(rows_per_chunk, trials - done)
        block = gen.random((m, rounds)) < per_round_error
        counts[done : done + m] = block.sum(axis=1)
        done += m
    return counts


def losses_from_counts(
    counts: np.ndarray,
    threshold: float,
    rounds: int,
    params: LossParameters,
    identity: ProverIdentity,
) -> np.ndarray:
    """Per-trial losses implied by error counts under a threshold rule."""
    accepted = counts < threshold
    base = rounds * params.per_round
    if identity is ProverIdentity.ATTACKER:
        return base + accepted * params.false_accept
    return base + (~accepted) * params.false_reject


def estimate_worst_case_loss(
    config: RapidBitExchangeConfig,
    params: LossParameters,
    trials_per_identity: int,
    master_seed: int | Sequence[int],
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the worst-case expected loss.

    Runs the given number of independent trials for each identity on
    separate derived streams, averages the losses, and takes the max of
    the two means. Standard errors are sample standard deviations over
    sqrt(trials); the worst-case standard error is the one of whichever
    identity attains the max.
    """
    stats = {}
    for identity in (ProverIdentity.ATTACKER, ProverIdentity.USER):
        counts = simulate_error_counts(
            config.rounds,
            config.per_round_error(identity),
            trials_per_identity,
            master_seed,
            identity,
        )
        losses = losses_from_counts(
            counts, config.threshold, config.rounds, params, identity
        )
        mean = float(losses.mean())
        spread = float(losses.std(ddof=1)) if trials_per_identity > 1 else 0.0
        stats[identity] = (
            mean,
            spread / math.sqrt(trials_per_identity),
            float((counts < config.threshold).mean()),
        )
    att, use = stats[ProverIdentity.ATTACKER], stats[ProverIdentity.USER]
    worst_is_attacker = att[0] >= use[0]
    return MonteCarloEstimate(
        loss_attacker=att[0],
        loss_user=use[0],
        worst_case=max(att[0], use[0]),
        stderr_attacker=att[1],
        stderr_user=use[1],
        stderr_worst=att[1] if worst_is_attacker else use[1],
        accept_rate_attacker=att[2],
        accept_rate_user=use[2],
        trials_per_identity=trials_per_identity,
    )
