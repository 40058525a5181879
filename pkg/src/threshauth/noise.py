"""Channel-noise estimation from the coded protocol phases.

The initialization and termination messages travel under an error
correcting code; counting the errors the decoder removes gives an
empirical flip-rate estimate, a finite-sample confidence interval, and
widened error-rate bounds that hold with high probability.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import ChannelModel
from .loss import ErrorRateBounds, GapCollapseError


def _as_symbol_array(seq: Sequence[int] | str | np.ndarray) -> np.ndarray:
    if isinstance(seq, str):
        return np.array([int(c) for c in seq], dtype=np.int64)
    return np.asarray(seq, dtype=np.int64)


def hamming_distance(a: Sequence[int] | str, b: Sequence[int] | str) -> int:
    """Number of positions at which two equal-length sequences differ."""
    va, vb = _as_symbol_array(a), _as_symbol_array(b)
    if va.shape != vb.shape:
        raise ValueError(f"length mismatch: {va.shape[0]} vs {vb.shape[0]}")
    return int(np.count_nonzero(va != vb))


@dataclass(frozen=True)
class BlockCode:
    """Binary block code given by its full codebook.

    Row i of ``codebook`` is the codeword of message i. The minimum
    distance is found by exhaustive pairwise search at construction, so
    this class is meant for small codes used in exhaustive tests.
    """

    message_length: int
    codebook: np.ndarray
    min_distance: int = field(init=False)

    def __post_init__(self) -> None:
        book = np.asarray(self.codebook, dtype=np.int64)
        object.__setattr__(self, "codebook", book)
        if book.ndim != 2 or book.shape[0] != 2**self.message_length:
            raise ValueError(
                f"codebook must have 2^{self.message_length} rows, got {book.shape}"
            )
        if book.shape[1] <= self.message_length:
            raise ValueError("codeword length must exceed message length")
        dmin = book.shape[1]
        for i, j in itertools.combinations(range(book.shape[0]), 2):
            d = int(np.count_nonzero(book[i] != book[j]))
            if d == 0:
                raise ValueError(f"duplicate codewords at messages {i} and {j}")
            dmin = min(dmin, d)
        object.__setattr__(self, "min_distance", dmin)

    @property
    def codeword_length(self) -> int:
        return int(self.codebook.shape[1])

    @property
    def correction_radius(self) -> int:
        return (self.min_distance - 1) // 2

    def encode(self, message: int) -> np.ndarray:
        if not 0 <= message < 2**self.message_length:
            raise ValueError(f"message {message} out of range")
        return self.codebook[message].copy()


def repetition_code(message_length: int, repeats: int = 3) -> BlockCode:
    """Code repeating each message bit ``repeats`` times."""
    if repeats < 2:
        raise ValueError("repeats must be >= 2")
    msgs = np.arange(2**message_length)
    bits = (msgs[:, None] >> np.arange(message_length - 1, -1, -1)) & 1
    return BlockCode(
        message_length=message_length, codebook=np.repeat(bits, repeats, axis=1)
    )


@dataclass(frozen=True)
class TransparentCode:
    """Stand-in code for large-block experiments.

    Exposes only the two quantities the coded-phase simulation needs, a
    codeword length and a correction radius; the true flip count plays
    the role of the decoder's error count, which is exact whenever the
    flip count stays within the radius. No codebook is materialized.
    """

    codeword_length: int
    correction_radius: int

    def __post_init__(self) -> None:
        if self.codeword_length < 1:
            raise ValueError("codeword_length must be positive")
        if not 0 <= self.correction_radius <= self.codeword_length:
            raise ValueError("correction_radius out of range")


def default_transparent_code(codeword_length: int) -> TransparentCode:
    # quarter-block radius: generous but still aborts hopeless channels
    return TransparentCode(codeword_length, codeword_length // 4)


def decode_nearest(code: BlockCode, received: Sequence[int] | str) -> tuple[int, int]:
    """Nearest-codeword decoding.

    Returns the decoded message and the Hamming distance to its
    codeword, which equals the true error count whenever that count is
    within the correction radius. Distance ties break toward the
    smallest message.
    """
    word = _as_symbol_array(received)
    if word.shape[0] != code.codeword_length:
        raise ValueError(
            f"received length {word.shape[0]} != codeword length {code.codeword_length}"
        )
    dists = np.count_nonzero(code.codebook != word[None, :], axis=1)
    msg = int(np.argmin(dists))  # first minimum, smallest message index
    return msg, int(dists[msg])


@dataclass(frozen=True)
class NoiseEstimate:
    """Empirical flip-rate estimate with a two-sided confidence width.

    The point estimate is observed_errors / codeword_length; the true
    rate lies within ``half_width`` of it with probability at least
    1 - confidence.
    """

    observed_errors: int
    codeword_length: int
    confidence: float
    point_estimate: float = field(init=False)
    half_width: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0 < self.confidence < 1:
            raise ValueError(f"confidence must lie in (0,1), got {self.confidence}")
        if not 0 <= self.observed_errors <= self.codeword_length:
            raise ValueError(
                f"observed_errors {self.observed_errors} outside "
                f"[0, {self.codeword_length}]"
            )
        object.__setattr__(
            self, "point_estimate", self.observed_errors / self.codeword_length
        )
        object.__setattr__(
            self,
            "half_width",
            math.sqrt(math.log(2.0 / self.confidence) / (2.0 * self.codeword_length)),
        )


def estimate_noise(observed_errors: int, codeword_length: int, confidence: float) -> NoiseEstimate:
    """Flip-rate point estimate and high-probability interval half-width."""
    return NoiseEstimate(
        observed_errors=observed_errors,
        codeword_length=codeword_length,
        confidence=confidence,
    )


def high_probability_rates(estimate: NoiseEstimate) -> ErrorRateBounds:
    """Error-rate bounds that hold with probability 1 - confidence.

    Widens the plug-in mapping of the estimate by the estimation error:
    attacker floor (1 + w)/2 + sqrt(ln(2/d)/(8k)), user ceiling
    2w - sqrt(2 ln(2/d)/k), clamped into [0,1]. Fails when the widened
    bounds no longer separate.
    """
    w = estimate.point_estimate
    k = estimate.codeword_length
    log_term = math.log(2.0 / estimate.confidence)
    attacker = (1.0 + w) / 2.0 + math.sqrt(log_term / (8.0 * k))
    user = 2.0 * w - math.sqrt(2.0 * log_term / k)
    attacker = min(attacker, 1.0)
    user = max(user, 0.0)
    if attacker <= user:
        raise GapCollapseError(
            f"widened bounds collapse: attacker {attacker} <= user {user}"
        )
    return ErrorRateBounds(attacker_floor=attacker, user_ceiling=user)


def simulate_coded_phase(
    channel: ChannelModel,
    code: BlockCode | TransparentCode,
    rng: np.random.Generator,
) -> tuple[int, bool]:
    """Transmit one codeword through the channel.

    Returns the number of flipped symbols and whether decoding is
    hopeless, meaning the flip count exceeded the correction radius.
    """
    k = code.codeword_length
    theta = int((rng.random(k) < channel.flip_probability).sum())
    return theta, theta > code.correction_radius
