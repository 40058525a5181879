"""Parameter sweeps behind the figure-reproduction CLI.

Each sweep produces rows of one fixed CSV schema so every experiment
(bound curves, minimizer comparison, estimation-strategy comparison,
threshold duel) lands in the same plottable format. All randomness is
derived from one master seed; rerunning a sweep with the same seed
reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path

import numpy as np

from .asymptotic import HypothesisPrior, asymptotic_threshold, bayes_threshold
from .bounds import optimal_rounds, optimal_threshold, rounds_loss_bound, threshold_loss_bound
from .channel import (
    CODED_PHASE_TAG,
    ChannelModel,
    RapidBitExchangeConfig,
    UserErrorModel,
    capped_rounds,
    estimate_worst_case_loss,
    losses_from_counts,
    simulate_error_counts,
    swiss_hitomi_rates,
)
from .exact import brute_force_optimal, exact_expected_loss, exact_worst_case_loss
from .loss import ErrorRateBounds, GapCollapseError, LossParameters, ProverIdentity
from .noise import default_transparent_code, estimate_noise, high_probability_rates, simulate_coded_phase

DEFAULT_LOSSES = LossParameters(false_accept=10.0, false_reject=1.0, per_round=1e-2)
DEFAULT_SEED = 1729

CSV_HEADER = (
    "omega",
    "n",
    "tau",
    "threshold_strategy",
    "rate_strategy",
    "exact_worst",
    "elb1",
    "elb2",
    "mc_worst",
    "mc_stderr",
    "aborted",
)


def _canon(value: float | None) -> float | None:
    # rows store reals at the 12-significant-digit resolution of the
    # CSV schema, making emit/parse an exact round trip
    if value is None:
        return None
    return float(f"{value:.12g}")


@dataclass(frozen=True)
class SweepRow:
    """One output record; field order matches the CSV column order."""

    omega: float
    n: int | None
    tau: float | None
    threshold_strategy: str
    rate_strategy: str
    exact_worst: float | None
    elb1: float | None
    elb2: float | None
    mc_worst: float | None
    mc_stderr: float | None
    aborted: str

    def __post_init__(self) -> None:
        for name in ("omega", "tau", "exact_worst", "elb1", "elb2", "mc_worst", "mc_stderr"):
            object.__setattr__(self, name, _canon(getattr(self, name)))


class ThresholdStrategy(Enum):
    FINITE = "finite-sample"
    ASYMPTOTIC = "asymptotic"
    BAYES = "bayes"


@dataclass(frozen=True)
class TrueRateStrategy:
    """Rate bounds from the actual channel noise (an oracle baseline)."""

    needs_estimate = False
    label = "true-omega"

    def derive(self, true_omega: float, theta: int, codeword_length: int) -> ErrorRateBounds:
        return swiss_hitomi_rates(ChannelModel(true_omega))


@dataclass(frozen=True)
class GuessedRateStrategy:
    """Rate bounds from a fixed design-time noise guess."""

    omega_guess: float
    needs_estimate = False

    @property
    def label(self) -> str:
        return f"guess:{self.omega_guess:g}"

    def derive(self, true_omega: float, theta: int, codeword_length: int) -> ErrorRateBounds:
        return swiss_hitomi_rates(ChannelModel(self.omega_guess))


@dataclass(frozen=True)
class MlRateStrategy:
    """Plug-in rate bounds at the raw coded-phase estimate theta / k."""

    needs_estimate = True
    label = "ml"

    def derive(self, true_omega: float, theta: int, codeword_length: int) -> ErrorRateBounds:
        return swiss_hitomi_rates(ChannelModel(theta / codeword_length))


@dataclass(frozen=True)
class HighProbabilityRateStrategy:
    """Estimate widened so the bounds hold with probability 1 - confidence."""

    confidence: float
    needs_estimate = True

    @property
    def label(self) -> str:
        return f"hp:{self.confidence:g}"

    def derive(self, true_omega: float, theta: int, codeword_length: int) -> ErrorRateBounds:
        return high_probability_rates(
            estimate_noise(theta, codeword_length, self.confidence)
        )


RateStrategy = (
    TrueRateStrategy | GuessedRateStrategy | MlRateStrategy | HighProbabilityRateStrategy
)


def default_noise_grid(points: int = 24) -> tuple[float, ...]:
    """Log-spaced noise grid spanning quiet channels to near gap collapse."""
    return tuple(float(w) for w in np.geomspace(1e-3, 0.3, points))


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything a sweep needs: losses, grids, strategies, seed."""

    params: LossParameters = DEFAULT_LOSSES
    noise_grid: tuple[float, ...] = (0.1, 0.01)
    n_grid: tuple[int, ...] = tuple(range(1, 257))
    n_max: int = 512
    gap_grid: tuple[float, ...] = (0.05, 0.10, 0.15, 0.20)
    trials: int = 10_000
    threshold_strategies: tuple[ThresholdStrategy, ...] = (ThresholdStrategy.FINITE,)
    rate_strategies: tuple[RateStrategy, ...] = (TrueRateStrategy(),)
    codeword_length: int = 1024
    prior: HypothesisPrior = field(default_factory=HypothesisPrior.uniform)
    user_model: UserErrorModel = UserErrorModel.AT_BOUND
    master_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not self.noise_grid:
            raise ValueError("noise_grid must be nonempty")
        if not self.n_grid:
            raise ValueError("n_grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.codeword_length < 1:
            raise ValueError("codeword_length must be positive")

    @classmethod
    def figure1a(cls, seed: int = DEFAULT_SEED, **overrides) -> "ExperimentSpec":
        defaults = dict(
            noise_grid=(0.1, 0.01), n_grid=tuple(range(1, 257)), master_seed=seed
        )
        defaults.update(overrides)
        return cls(**defaults)

    @classmethod
    def figure1b(cls, seed: int = DEFAULT_SEED, **overrides) -> "ExperimentSpec":
        defaults = dict(noise_grid=default_noise_grid(), n_max=512, master_seed=seed)
        defaults.update(overrides)
        return cls(**defaults)

    @classmethod
    def figure3(cls, seed: int = DEFAULT_SEED, **overrides) -> "ExperimentSpec":
        defaults = dict(
            noise_grid=default_noise_grid(),
            trials=10_000,
            codeword_length=1024,
            threshold_strategies=(ThresholdStrategy.FINITE, ThresholdStrategy.ASYMPTOTIC),
            rate_strategies=(
                GuessedRateStrategy(0.1),
                GuessedRateStrategy(0.01),
                GuessedRateStrategy(0.001),
                MlRateStrategy(),
                HighProbabilityRateStrategy(0.1),
                HighProbabilityRateStrategy(0.01),
            ),
            user_model=UserErrorModel.PHYSICAL,
            master_seed=seed,
        )
        defaults.update(overrides)
        return cls(**defaults)

    @classmethod
    def duel(cls, seed: int = DEFAULT_SEED, **overrides) -> "ExperimentSpec":
        defaults = dict(
            n_grid=(4, 8, 16, 32),
            gap_grid=(0.05, 0.10, 0.15, 0.20),
            trials=10_000,
            user_model=UserErrorModel.AT_BOUND,
            master_seed=seed,
        )
        defaults.update(overrides)
        return cls(**defaults)


def figure1a_sweep(spec: ExperimentSpec) -> list[SweepRow]:
    """Bound vs exact worst-case loss as the round count grows.

    For each noise level and each round count, evaluates the loss bound
    at its minimizing round-independent form and the exact worst-case
    loss at the closed-form threshold (unclamped, so very small round
    counts fall back to an always-reject rule).
    """
    rows = []
    for w in sorted(spec.noise_grid):
        rates = swiss_hitomi_rates(ChannelModel(w))
        elb2 = rounds_loss_bound(spec.params, rates)
        for n in spec.n_grid:
            tau = optimal_threshold(spec.params, rates, n).raw
            rows.append(
                SweepRow(
                    omega=w,
                    n=n,
                    tau=tau,
                    threshold_strategy=ThresholdStrategy.FINITE.value,
                    rate_strategy="true-omega",
                    exact_worst=exact_worst_case_loss(spec.params, rates, n, tau),
                    elb1=threshold_loss_bound(spec.params, rates, n),
                    elb2=elb2,
                    mc_worst=None,
                    mc_stderr=None,
                    aborted="",
                )
            )
    return rows


def figure1b_sweep(spec: ExperimentSpec) -> list[SweepRow]:
    """Best-possible vs formula-chosen round count across noise levels.

    Per noise level: the exhaustive-search optimum (rounds, integer
    threshold, loss) and the closed-form design with its exact loss and
    both bound values.
    """
    rows = []
    for w in sorted(spec.noise_grid):
        rates = swiss_hitomi_rates(ChannelModel(w))
        best = brute_force_optimal(spec.params, rates, spec.n_max)
        rows.append(
            SweepRow(
                omega=w,
                n=best.rounds,
                tau=float(best.threshold),
                threshold_strategy="brute-force",
                rate_strategy="true-omega",
                exact_worst=best.worst_loss,
                elb1=None,
                elb2=None,
                mc_worst=None,
                mc_stderr=None,
                aborted="",
            )
        )
        n_hat = optimal_rounds(spec.params, rates).value
        tau_hat = optimal_threshold(spec.params, rates, n_hat).raw
        rows.append(
            SweepRow(
                omega=w,
                n=n_hat,
                tau=tau_hat,
                threshold_strategy=ThresholdStrategy.FINITE.value,
                rate_strategy="true-omega",
                exact_worst=exact_worst_case_loss(spec.params, rates, n_hat, tau_hat),
                elb1=threshold_loss_bound(spec.params, rates, n_hat),
                elb2=rounds_loss_bound(spec.params, rates),
                mc_worst=None,
                mc_stderr=None,
                aborted="",
            )
        )
    return rows


def _strategy_threshold(
    strategy: ThresholdStrategy,
    params: LossParameters,
    rates: ErrorRateBounds,
    rounds: int,
    prior: HypothesisPrior,
) -> float:
    if strategy is ThresholdStrategy.FINITE:
        return optimal_threshold(params, rates, rounds).raw
    if strategy is ThresholdStrategy.ASYMPTOTIC:
        return asymptotic_threshold(params, rates, rounds)
    return bayes_threshold(params, rates, prior, rounds)


def _abort_row(
    w: float, tstrat: str, rstrat: str, reason: str
) -> SweepRow:
    return SweepRow(
        omega=w,
        n=None,
        tau=None,
        threshold_strategy=tstrat,
        rate_strategy=rstrat,
        exact_worst=None,
        elb1=None,
        elb2=None,
        mc_worst=None,
        mc_stderr=None,
        aborted=reason,
    )


def figure3_comparison(spec: ExperimentSpec) -> list[SweepRow]:
    """Noise-estimation and threshold strategies under a real channel.

    For each noise level one coded phase is simulated and its error
    count shared by every estimating strategy, so strategies are
    compared on identical information. Each strategy derives rate
    bounds, a round count (capped by the codeword length), and a
    threshold, then its worst-case loss is estimated by Monte Carlo on
    the true channel. Strategies that cannot proceed (hopeless coded
    phase, collapsed rate bounds, rates outside the threshold formula's
    domain) yield rows carrying an abort marker instead of numbers.
    """
    rows = []
    code = default_transparent_code(spec.codeword_length)
    for wi, w in enumerate(sorted(spec.noise_grid)):
        channel = ChannelModel(w)
        phase_rng = np.random.Generator(
            np.random.PCG64(
                np.random.SeedSequence((spec.master_seed, CODED_PHASE_TAG, wi))
            )
        )
        theta, phase_hopeless = simulate_coded_phase(channel, code, phase_rng)
        for si, rstrat in enumerate(spec.rate_strategies):
            if rstrat.needs_estimate and phase_hopeless:
                for tstrat in spec.threshold_strategies:
                    rows.append(
                        _abort_row(w, tstrat.value, rstrat.label, "coded-abort")
                    )
                continue
            try:
                rates = rstrat.derive(w, theta, spec.codeword_length)
            except GapCollapseError:
                for tstrat in spec.threshold_strategies:
                    rows.append(
                        _abort_row(w, tstrat.value, rstrat.label, "gap-collapse")
                    )
                continue
            n = capped_rounds(
                optimal_rounds(spec.params, rates).value, spec.codeword_length
            )
            for ti, tstrat in enumerate(spec.threshold_strategies):
                try:
                    tau = _strategy_threshold(tstrat, spec.params, rates, n, spec.prior)
                except ValueError:
                    rows.append(
                        _abort_row(w, tstrat.value, rstrat.label, "invalid-rates")
                    )
                    continue
                config = RapidBitExchangeConfig.from_channel(
                    channel, n, tau, spec.user_model
                )
                mc = estimate_worst_case_loss(
                    config, spec.params, spec.trials, (spec.master_seed, wi, si, ti)
                )
                exact = max(
                    exact_expected_loss(
                        spec.params, n, tau,
                        config.attacker_round_error_prob, ProverIdentity.ATTACKER,
                    ),
                    exact_expected_loss(
                        spec.params, n, tau,
                        config.user_round_error_prob, ProverIdentity.USER,
                    ),
                )
                rows.append(
                    SweepRow(
                        omega=w,
                        n=n,
                        tau=tau,
                        threshold_strategy=tstrat.value,
                        rate_strategy=rstrat.label,
                        exact_worst=exact,
                        elb1=threshold_loss_bound(spec.params, rates, n),
                        elb2=rounds_loss_bound(spec.params, rates),
                        mc_worst=mc.worst_case,
                        mc_stderr=mc.stderr_worst,
                        aborted="",
                    )
                )
    return rows


def threshold_duel(spec: ExperimentSpec) -> list[SweepRow]:
    """Finite-sample vs asymptotic threshold at small designs.

    Sweeps a grid of round counts and rate gaps (mapped back to channel
    noise), simulating both identities at their rate bounds once per
    grid point and scoring the same error counts under both thresholds,
    so the comparison is paired and equal decision rules tie exactly.
    """
    rows = []
    for gi, gap in enumerate(spec.gap_grid):
        w = (1.0 - 2.0 * gap) / 3.0
        rates = swiss_hitomi_rates(ChannelModel(w))
        for ni, n in enumerate(spec.n_grid):
            point_seed = (spec.master_seed, gi, ni)
            counts = {
                identity: simulate_error_counts(
                    n,
                    rates.attacker_floor
                    if identity is ProverIdentity.ATTACKER
                    else rates.user_ceiling,
                    spec.trials,
                    point_seed,
                    identity,
                )
                for identity in (ProverIdentity.ATTACKER, ProverIdentity.USER)
            }
            duelists = (
                (ThresholdStrategy.FINITE.value,
                 optimal_threshold(spec.params, rates, n).raw),
                (ThresholdStrategy.ASYMPTOTIC.value,
                 asymptotic_threshold(spec.params, rates, n)),
            )
            for label, tau in duelists:
                means, errs = {}, {}
                for identity, cts in counts.items():
                    losses = losses_from_counts(cts, tau, n, spec.params, identity)
                    means[identity] = float(losses.mean())
                    errs[identity] = float(losses.std(ddof=1)) / math.sqrt(spec.trials)
                worst_id = max(means, key=means.get)
                rows.append(
                    SweepRow(
                        omega=w,
                        n=n,
                        tau=tau,
                        threshold_strategy=label,
                        rate_strategy="true-omega",
                        exact_worst=exact_worst_case_loss(spec.params, rates, n, tau),
                        elb1=None,
                        elb2=None,
                        mc_worst=means[worst_id],
                        mc_stderr=errs[worst_id],
                        aborted="",
                    )
                )
    return rows


def _format_field(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def emit_csv(rows: list[SweepRow], path: str | Path) -> None:
    """Write rows under the fixed header, reals at 12 significant digits."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in rows:
                writer.writerow(
                    [_format_field(getattr(row, f.name)) for f in fields(SweepRow)]
                )
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def parse_csv(path: str | Path) -> list[SweepRow]:
    """Read rows previously written by emit_csv."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header}")
        for rec in reader:
            vals = dict(zip(CSV_HEADER, rec))
            rows.append(
                SweepRow(
                    omega=float(vals["omega"]),
                    n=int(vals["n"]) if vals["n"] else None,
                    tau=float(vals["tau"]) if vals["tau"] else None,
                    threshold_strategy=vals["threshold_strategy"],
                    rate_strategy=vals["rate_strategy"],
                    exact_worst=float(vals["exact_worst"]) if vals["exact_worst"] else None,
                    elb1=float(vals["elb1"]) if vals["elb1"] else None,
                    elb2=float(vals["elb2"]) if vals["elb2"] else None,
                    mc_worst=float(vals["mc_worst"]) if vals["mc_worst"] else None,
                    mc_stderr=float(vals["mc_stderr"]) if vals["mc_stderr"] else None,
                    aborted=vals["aborted"],
                )
            )
    return rows
