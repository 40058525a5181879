"""Expected-loss analysis of thresholded challenge-response authentication.

A verifier exchanges n rapid rounds with a prover over a noisy channel
and accepts when the error count stays below a threshold. This package
computes finite-sample loss bounds and the closed-form near-optimal
designs they induce, exact binomial ground truth, asymptotic Bayesian
thresholds, channel-noise estimation from coded phases, and seeded
Monte Carlo experiments comparing all of the above.
"""

from .asymptotic import (
    BayesDecision,
    HypothesisPrior,
    approx_threshold,
    asymptotic_threshold,
    bayes_decision,
    bayes_risk,
    bayes_threshold,
)
from .bounds import (
    BoundReport,
    RoundsChoice,
    ThresholdChoice,
    hoeffding_tail,
    loss_bound_at,
    optimal_rounds,
    optimal_threshold,
    rounds_loss_bound,
    threshold_loss_bound,
)
from .channel import (
    ChannelModel,
    MonteCarloEstimate,
    RapidBitExchangeConfig,
    TrialOutcome,
    UserErrorModel,
    capped_rounds,
    estimate_worst_case_loss,
    simulate_trial,
    swiss_hitomi_rates,
    swiss_loss_bound,
    trial_stream,
)
from .exact import (
    BinomialSpec,
    BruteForceResult,
    acceptance_probability,
    binomial_cdf,
    binomial_pmf,
    binomial_sf,
    brute_force_optimal,
    exact_expected_loss,
    exact_worst_case_loss,
)
from .loss import (
    ErrorRateBounds,
    GapCollapseError,
    LossParameters,
    ProtocolConfig,
    ProverIdentity,
    expected_loss,
    worst_case_expected_loss,
)
from .noise import (
    BlockCode,
    NoiseEstimate,
    TransparentCode,
    decode_nearest,
    estimate_noise,
    hamming_distance,
    high_probability_rates,
    repetition_code,
    simulate_coded_phase,
)

__version__ = "0.1.0"

__all__ = [
    "BayesDecision",
    "BinomialSpec",
    "BlockCode",
    "BoundReport",
    "BruteForceResult",
    "ChannelModel",
    "ErrorRateBounds",
    "GapCollapseError",
    "HypothesisPrior",
    "LossParameters",
    "MonteCarloEstimate",
    "NoiseEstimate",
    "ProtocolConfig",
    "ProverIdentity",
    "RapidBitExchangeConfig",
    "RoundsChoice",
    "ThresholdChoice",
    "TransparentCode",
    "TrialOutcome",
    "UserErrorModel",
    "acceptance_probability",
    "approx_threshold",
    "asymptotic_threshold",
    "bayes_decision",
    "bayes_risk",
    "bayes_threshold",
    "binomial_cdf",
    "binomial_pmf",
    "binomial_sf",
    "brute_force_optimal",
    "capped_rounds",
    "decode_nearest",
    "estimate_noise",
    "estimate_worst_case_loss",
    "exact_expected_loss",
    "exact_worst_case_loss",
    "expected_loss",
    "hamming_distance",
    "high_probability_rates",
    "hoeffding_tail",
    "loss_bound_at",
    "optimal_rounds",
    "optimal_threshold",
    "repetition_code",
    "rounds_loss_bound",
    "simulate_coded_phase",
    "simulate_trial",
    "swiss_hitomi_rates",
    "swiss_loss_bound",
    "threshold_loss_bound",
    "trial_stream",
    "worst_case_expected_loss",
]
