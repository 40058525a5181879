"""Tests for the channel mapping and the deterministic Monte Carlo layer."""

import math

import numpy as np
import pytest

import threshauth.channel as channel_mod
from threshauth.bounds import threshold_loss_bound
from threshauth.channel import (
    ChannelModel,
    RapidBitExchangeConfig,
    UserErrorModel,
    attacker_per_round_error,
    capped_rounds,
    estimate_worst_case_loss,
    simulate_error_counts,
    simulate_trial,
    swiss_hitomi_rates,
    swiss_loss_bound,
    trial_stream,
)
from threshauth.exact import BinomialSpec, binomial_cdf
from threshauth.loss import GapCollapseError, LossParameters, ProverIdentity

BENCH = LossParameters(false_accept=10.0, false_reject=1.0, per_round=1e-2)


class TestChannelModel:
    def test_accepts_valid_probabilities(self):
        assert ChannelModel(0.0).flip_probability == 0.0
        assert ChannelModel(1.0).flip_probability == 1.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            ChannelModel(-0.1)
        with pytest.raises(ValueError):
            ChannelModel(1.5)


class TestPerRoundErrorRates:
    def test_attacker_rate(self):
        assert attacker_per_round_error(0.1) == pytest.approx(0.55)
        assert attacker_per_round_error(0.0) == pytest.approx(0.5)

    def test_user_rate_at_bound(self):
        assert UserErrorModel.AT_BOUND.per_round_error(0.1) == pytest.approx(0.2)
        assert UserErrorModel.AT_BOUND.per_round_error(0.6) == 1.0

    def test_user_rate_physical(self):
        assert UserErrorModel.PHYSICAL.per_round_error(0.1) == pytest.approx(0.19)
        assert UserErrorModel.PHYSICAL.per_round_error(0.0) == 0.0

    def test_physical_never_exceeds_bound(self):
        for w in np.linspace(0.0, 0.5, 26):
            assert (
                UserErrorModel.PHYSICAL.per_round_error(w)
                <= UserErrorModel.AT_BOUND.per_round_error(w) + 1e-15
            )


class TestSwissHitomiRates:
    def test_frozen_examples(self):
        r = swiss_hitomi_rates(ChannelModel(0.1))
        assert r.attacker_floor == pytest.approx(0.55)
        assert r.user_ceiling == pytest.approx(0.2)
        assert r.gap == pytest.approx(0.35)

        r = swiss_hitomi_rates(ChannelModel(0.0))
        assert (r.attacker_floor, r.user_ceiling) == (0.5, 0.0)

        r = swiss_hitomi_rates(ChannelModel(0.01))
        assert r.attacker_floor == pytest.approx(0.505)
        assert r.user_ceiling == pytest.approx(0.02)
        assert r.gap == pytest.approx(0.485)

    def test_collapses_at_one_third(self):
        with pytest.raises(GapCollapseError):
            swiss_hitomi_rates(ChannelModel(1.0 / 3.0))
        with pytest.raises(GapCollapseError):
            swiss_hitomi_rates(ChannelModel(0.4))

    def test_survives_just_below_one_third(self):
        r = swiss_hitomi_rates(ChannelModel(1.0 / 3.0 - 1e-9))
        assert r.gap > 0.0


class TestSwissLossBound:
    def test_frozen_value(self):
        bound = swiss_loss_bound(BENCH, ChannelModel(0.1), 64)
        assert bound == pytest.approx(0.7027430506634064, abs=1e-12)

    def test_agrees_with_rate_mapped_bound(self):
        # independent noise-form expression must match the generic bound
        # evaluated on the mapped rates across the whole valid range
        for w in (0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 1.0 / 3.0 - 1e-6):
            channel = ChannelModel(w)
            rates = swiss_hitomi_rates(channel)
            for n in (1, 7, 64):
                assert swiss_loss_bound(BENCH, channel, n) == pytest.approx(
                    threshold_loss_bound(BENCH, rates, n), rel=1e-12
                )

    def test_increases_with_noise(self):
        vals = [swiss_loss_bound(BENCH, ChannelModel(w), 64) for w in np.linspace(0, 0.33, 12)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_noise_limit_saturates_to_full_decision_term(self):
        bound = swiss_loss_bound(BENCH, ChannelModel(1.0 / 3.0 - 1e-12), 64)
        assert bound == pytest.approx(0.64 + math.sqrt(10.0), rel=1e-9)

    def test_rejects_collapsed_channel_and_bad_rounds(self):
        with pytest.raises(GapCollapseError):
            swiss_loss_bound(BENCH, ChannelModel(0.34), 64)
        with pytest.raises(ValueError):
            swiss_loss_bound(BENCH, ChannelModel(0.1), 0)


class TestCappedRounds:
    def test_examples(self):
        assert capped_rounds(64, 1024) == 64
        assert capped_rounds(2000, 1024) == 1024
        assert capped_rounds(5, 5) == 5

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            capped_rounds(0, 10)
        with pytest.raises(ValueError):
            capped_rounds(10, 0)


class TestRapidBitExchangeConfig:
    def test_from_channel_at_bound_default(self):
        config = RapidBitExchangeConfig.from_channel(ChannelModel(0.1), 64, 22.0)
        assert config.user_round_error_prob == pytest.approx(0.2)
        assert config.attacker_round_error_prob == pytest.approx(0.55)
        assert config.per_round_error(ProverIdentity.USER) == pytest.approx(0.2)
        assert config.per_round_error(ProverIdentity.ATTACKER) == pytest.approx(0.55)

    def test_from_channel_physical_user(self):
        config = RapidBitExchangeConfig.from_channel(
            ChannelModel(0.1), 64, 22.0, user_model=UserErrorModel.PHYSICAL
        )
        assert config.user_round_error_prob == pytest.approx(0.19)

    def test_saturated_thresholds_are_legal(self):
        # rules that always reject or always accept are representable
        RapidBitExchangeConfig(8, -3.0, 0.2, 0.55)
        RapidBitExchangeConfig(8, 13.0, 0.2, 0.55)

    def test_rejects_bad_rounds_and_rates(self):
        with pytest.raises(ValueError):
            RapidBitExchangeConfig(0, 1.0, 0.2, 0.55)
        with pytest.raises(ValueError):
            RapidBitExchangeConfig(8, 1.0, 1.2, 0.55)
        with pytest.raises(ValueError):
            RapidBitExchangeConfig(8, 1.0, 0.2, -0.1)


class TestSimulateTrial:
    def test_noiseless_user_and_certain_attacker(self):
        config = RapidBitExchangeConfig(8, 1.0, 0.0, 1.0)
        user = simulate_trial(
            config, BENCH, ProverIdentity.USER, trial_stream(7, ProverIdentity.USER, 0, 8)
        )
        assert user.error_count == 0
        assert user.accepted
        assert user.loss == pytest.approx(0.08)

        attacker = simulate_trial(
            config,
            BENCH,
            ProverIdentity.ATTACKER,
            trial_stream(7, ProverIdentity.ATTACKER, 0, 8),
        )
        assert attacker.error_count == 8
        assert not attacker.accepted
        assert attacker.loss == pytest.approx(0.08)

    def test_threshold_comparison_is_strict(self):
        # zero threshold rejects even an error-free run
        config = RapidBitExchangeConfig(8, 0.0, 0.0, 1.0)
        user = simulate_trial(
            config, BENCH, ProverIdentity.USER, trial_stream(7, ProverIdentity.USER, 0, 8)
        )
        assert user.error_count == 0
        assert not user.accepted
        assert user.loss == pytest.approx(0.08 + 1.0)

    def test_same_stream_position_reproduces_outcome(self):
        config = RapidBitExchangeConfig(32, 10.0, 0.3, 0.55)
        a = simulate_trial(
            config, BENCH, ProverIdentity.USER, trial_stream(42, ProverIdentity.USER, 5, 32)
        )
        b = simulate_trial(
            config, BENCH, ProverIdentity.USER, trial_stream(42, ProverIdentity.USER, 5, 32)
        )
        assert a == b


class TestStreamLayout:
    def test_batched_counts_match_serial_trials(self):
        rounds, trials, seed = 17, 10, 99
        config = RapidBitExchangeConfig(rounds, 5.0, 0.3, 0.3)
        batched = simulate_error_counts(
            rounds, 0.3, trials, seed, ProverIdentity.USER
        )
        serial = [
            simulate_trial(
                config,
                BENCH,
                ProverIdentity.USER,
                trial_stream(seed, ProverIdentity.USER, i, rounds),
            ).error_count
            for i in range(trials)
        ]
        assert batched.tolist() == serial

    def test_identities_use_disjoint_streams(self):
        a = simulate_error_counts(64, 0.5, 50, 123, ProverIdentity.USER)
        b = simulate_error_counts(64, 0.5, 50, 123, ProverIdentity.ATTACKER)
        assert a.tolist() != b.tolist()

    def test_integer_and_sequence_seeds_agree(self):
        a = simulate_error_counts(16, 0.4, 20, 5, ProverIdentity.USER)
        b = simulate_error_counts(16, 0.4, 20, (5,), ProverIdentity.USER)
        assert a.tolist() == b.tolist()

    def test_chunk_size_does_not_change_the_draws(self, monkeypatch):
        full = simulate_error_counts(33, 0.3, 400, 7, ProverIdentity.ATTACKER)
        monkeypatch.setattr(channel_mod, "_CHUNK_ELEMENTS", 64)
        small = simulate_error_counts(33, 0.3, 400, 7, ProverIdentity.ATTACKER)
        assert full.tolist() == small.tolist()

    def test_rejects_bad_trial_parameters(self):
        with pytest.raises(ValueError):
            simulate_error_counts(8, 0.3, 0, 1, ProverIdentity.USER)
        with pytest.raises(ValueError):
            trial_stream(1, ProverIdentity.USER, -1, 8)


class TestEstimateWorstCaseLoss:
    def test_degenerate_rates_give_exact_round_cost(self):
        config = RapidBitExchangeConfig(8, 4.0, 0.0, 1.0)
        est = estimate_worst_case_loss(config, BENCH, 500, 11)
        assert est.loss_user == pytest.approx(0.08, abs=0.0)
        assert est.loss_attacker == pytest.approx(0.08, abs=0.0)
        assert est.worst_case == pytest.approx(0.08, abs=0.0)
        assert est.stderr_user == 0.0
        assert est.stderr_attacker == 0.0
        assert est.accept_rate_user == 1.0
        assert est.accept_rate_attacker == 0.0
        assert est.trials_per_identity == 500

    def test_acceptance_rate_matches_binomial(self):
        # n=4, tau=2, attacker error rate 0.55: accept prob is the exact
        # lower tail Pr(count <= 1)
        config = RapidBitExchangeConfig(4, 2.0, 0.2, 0.55)
        trials = 20_000
        est = estimate_worst_case_loss(config, BENCH, trials, 1729)
        target = binomial_cdf(BinomialSpec(4, 0.55), 1)
        sigma = math.sqrt(target * (1.0 - target) / trials)
        assert abs(est.accept_rate_attacker - target) < 5.0 * sigma

    def test_worst_side_carries_its_own_stderr(self):
        # low threshold makes the user side dominate
        config = RapidBitExchangeConfig(4, 1.0, 0.2, 0.55)
        est = estimate_worst_case_loss(config, BENCH, 2_000, 3)
        assert est.worst_case == est.loss_user
        assert est.stderr_worst == est.stderr_user

    def test_deterministic_under_fixed_seed(self):
        config = RapidBitExchangeConfig(16, 6.0, 0.2, 0.55)
        a = estimate_worst_case_loss(config, BENCH, 1_000, 21)
        b = estimate_worst_case_loss(config, BENCH, 1_000, 21)
        c = estimate_worst_case_loss(config, BENCH, 1_000, 22)
        assert a == b
        assert a != c

    def test_mean_matches_exact_expected_loss_within_noise(self):
        config = RapidBitExchangeConfig(4, 2.0, 0.2, 0.55)
        est = estimate_worst_case_loss(config, BENCH, 40_000, 1729)
        assert abs(est.loss_attacker - 2.4548125) < 5.0 * est.stderr_attacker
        assert abs(est.loss_user - 0.2208) < 5.0 * est.stderr_user
