"""Tests for coding-phase noise estimation and the widened rate bounds."""

import math

import numpy as np
import pytest

from threshauth.channel import ChannelModel
from threshauth.loss import GapCollapseError
from threshauth.noise import (
    BlockCode,
    TransparentCode,
    decode_nearest,
    default_transparent_code,
    estimate_noise,
    hamming_distance,
    high_probability_rates,
    repetition_code,
    simulate_coded_phase,
)

# frozen with a 40-digit arbitrary precision script: 102 errors out of a
# 1024-symbol codeword at 99% confidence
POINT_102 = 0.099609375
HALF_WIDTH_102 = 0.05086323845996029
HP_ATTACKER_102 = 0.5752363067299801
HP_USER_102 = 0.09749227308007942


class TestHammingDistance:
    def test_frozen_examples(self):
        assert hamming_distance("10110", "10110") == 0
        assert hamming_distance("10110", "11100") == 2
        assert hamming_distance("000", "111") == 3

    def test_input_forms_agree(self):
        as_str = hamming_distance("0110", "1110")
        as_list = hamming_distance([0, 1, 1, 0], [1, 1, 1, 0])
        as_array = hamming_distance(np.array([0, 1, 1, 0]), np.array([1, 1, 1, 0]))
        assert as_str == as_list == as_array == 1

    def test_length_mismatch_raises(self):
        with pytest.raises(ValueError):
            hamming_distance("01", "011")


class TestBlockCode:
    def test_single_bit_repetition(self):
        code = repetition_code(1)
        assert code.codebook.tolist() == [[0, 0, 0], [1, 1, 1]]
        assert code.min_distance == 3
        assert code.correction_radius == 1
        assert code.codeword_length == 3
        assert code.encode(0).tolist() == [0, 0, 0]
        assert code.encode(1).tolist() == [1, 1, 1]

    def test_two_bit_repetition_with_two_repeats(self):
        code = repetition_code(2, repeats=2)
        assert code.codeword_length == 4
        assert code.min_distance == 2
        assert code.correction_radius == 0
        assert code.encode(2).tolist() == [1, 1, 0, 0]

    def test_encode_range_checked(self):
        code = repetition_code(1)
        with pytest.raises(ValueError):
            code.encode(2)
        with pytest.raises(ValueError):
            code.encode(-1)

    def test_min_distance_matches_pairwise_search(self):
        parity = BlockCode(
            message_length=2,
            codebook=np.array([[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]),
        )
        codes = [repetition_code(1), repetition_code(2), repetition_code(3, 2), parity]
        for code in codes:
            words = code.codebook
            dists = [
                hamming_distance(words[i], words[j])
                for i in range(len(words))
                for j in range(i + 1, len(words))
            ]
            assert code.min_distance == min(dists)

    def test_rejects_duplicates_and_short_codewords(self):
        with pytest.raises(ValueError):
            BlockCode(message_length=1, codebook=np.array([[0, 0], [0, 0]]))
        with pytest.raises(ValueError):
            BlockCode(
                message_length=2,
                codebook=np.array([[0, 0], [0, 1], [1, 0], [1, 1]]),
            )
        with pytest.raises(ValueError):
            repetition_code(1, repeats=1)


class TestTransparentCode:
    def test_default_uses_quarter_block_radius(self):
        code = default_transparent_code(1024)
        assert code.codeword_length == 1024
        assert code.correction_radius == 256

    def test_validation(self):
        with pytest.raises(ValueError):
            TransparentCode(0, 0)
        with pytest.raises(ValueError):
            TransparentCode(8, 9)
        with pytest.raises(ValueError):
            TransparentCode(8, -1)


class TestDecodeNearest:
    def test_single_flip_corrected(self):
        code = repetition_code(1)
        assert decode_nearest(code, "010") == (0, 1)
        assert decode_nearest(code, "011") == (1, 1)

    def test_codeword_decodes_to_itself(self):
        code = repetition_code(2)
        for msg in range(4):
            assert decode_nearest(code, code.encode(msg)) == (msg, 0)

    def test_all_words_match_exhaustive_oracle(self):
        code = repetition_code(1)
        for bits in range(8):
            word = [(bits >> 2) & 1, (bits >> 1) & 1, bits & 1]
            dists = [hamming_distance(word, code.encode(m)) for m in (0, 1)]
            want_msg = dists.index(min(dists))
            assert decode_nearest(code, word) == (want_msg, min(dists))

    def test_tie_breaks_toward_smallest_message(self):
        code = repetition_code(1, repeats=2)
        assert decode_nearest(code, "01") == (0, 1)
        assert decode_nearest(code, "10") == (0, 1)

    def test_flips_within_radius_recover_message_and_count(self):
        code = repetition_code(2)  # length 6, corrects 1 flip
        for msg in range(4):
            clean = code.encode(msg)
            assert decode_nearest(code, clean) == (msg, 0)
            for pos in range(6):
                word = clean.copy()
                word[pos] ^= 1
                assert decode_nearest(code, word) == (msg, 1)

    def test_wrong_length_raises(self):
        with pytest.raises(ValueError):
            decode_nearest(repetition_code(1), "0101")


class TestNoiseEstimate:
    def test_frozen_example(self):
        est = estimate_noise(102, 1024, 0.01)
        assert est.point_estimate == pytest.approx(POINT_102, abs=1e-15)
        assert est.half_width == pytest.approx(HALF_WIDTH_102, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_noise(-1, 1024, 0.01)
        with pytest.raises(ValueError):
            estimate_noise(1025, 1024, 0.01)
        with pytest.raises(ValueError):
            estimate_noise(10, 1024, 0.0)
        with pytest.raises(ValueError):
            estimate_noise(10, 1024, 1.0)

    def test_half_width_shrinks_with_block_length(self):
        widths = [estimate_noise(0, k, 0.01).half_width for k in (256, 1024, 4096)]
        assert widths[0] > widths[1] > widths[2]

    def test_half_width_grows_as_confidence_tightens(self):
        loose = estimate_noise(0, 1024, 0.1).half_width
        tight = estimate_noise(0, 1024, 0.001).half_width
        assert tight > loose


class TestHighProbabilityRates:
    def test_frozen_example(self):
        rates = high_probability_rates(estimate_noise(102, 1024, 0.01))
        assert rates.attacker_floor == pytest.approx(HP_ATTACKER_102, abs=1e-15)
        assert rates.user_ceiling == pytest.approx(HP_USER_102, abs=1e-15)

    def test_widening_margins(self):
        # the attacker floor moves up from the plug-in value and the user
        # ceiling moves down, each by the frozen estimation margin
        rates = high_probability_rates(estimate_noise(102, 1024, 0.01))
        plug_attacker = (1.0 + POINT_102) / 2.0
        plug_user = 2.0 * POINT_102
        assert rates.attacker_floor - plug_attacker == pytest.approx(
            0.02543161922998014, abs=1e-15
        )
        assert plug_user - rates.user_ceiling == pytest.approx(
            0.10172647691992058, abs=1e-15
        )

    def test_user_ceiling_clamps_at_zero(self):
        rates = high_probability_rates(estimate_noise(0, 64, 0.01))
        assert rates.user_ceiling == 0.0
        assert rates.attacker_floor > 0.5

    def test_collapse_raises(self):
        with pytest.raises(GapCollapseError):
            high_probability_rates(estimate_noise(615, 1024, 0.01))

    def test_longer_blocks_approach_plug_in_rates(self):
        # both margins scale like 1/sqrt(k), so the widened bounds close
        # in on the plug-in mapping of the same point estimate
        wide = high_probability_rates(estimate_noise(40, 400, 0.01))
        narrow = high_probability_rates(estimate_noise(1000, 10_000, 0.01))
        assert narrow.attacker_floor < wide.attacker_floor
        assert narrow.user_ceiling > wide.user_ceiling
        plug_gap = (1.0 + 0.1) / 2.0 - 2.0 * 0.1
        assert plug_gap < narrow.gap < wide.gap


class TestSimulateCodedPhase:
    def test_noiseless_channel_never_aborts(self):
        rng = np.random.Generator(np.random.PCG64(0))
        theta, aborted = simulate_coded_phase(
            ChannelModel(0.0), default_transparent_code(1024), rng
        )
        assert (theta, aborted) == (0, False)

    def test_certain_flips_overwhelm_small_code(self):
        rng = np.random.Generator(np.random.PCG64(0))
        theta, aborted = simulate_coded_phase(ChannelModel(1.0), repetition_code(1), rng)
        assert (theta, aborted) == (3, True)

    def test_deterministic_under_fixed_seed(self):
        code = default_transparent_code(1024)
        a = simulate_coded_phase(
            ChannelModel(0.1), code, np.random.Generator(np.random.PCG64(42))
        )
        b = simulate_coded_phase(
            ChannelModel(0.1), code, np.random.Generator(np.random.PCG64(42))
        )
        assert a == b

    def test_mean_flip_count_matches_channel(self):
        code = default_transparent_code(1024)
        rng = np.random.Generator(np.random.PCG64(2024))
        runs = 20_000
        thetas = np.empty(runs)
        for i in range(runs):
            thetas[i], _ = simulate_coded_phase(ChannelModel(0.1), code, rng)
        sigma_mean = math.sqrt(1024 * 0.1 * 0.9) / math.sqrt(runs)
        assert abs(thetas.mean() - 102.4) < 3.0 * sigma_mean

    def test_estimates_are_conditionally_unbiased(self):
        # at moderate noise the abort event is essentially impossible, so
        # the kept estimates should average to the true flip probability
        code = default_transparent_code(1024)
        for w in (0.01, 0.05):
            rng = np.random.Generator(np.random.PCG64(7))
            runs = 5_000
            kept = []
            for _ in range(runs):
                theta, aborted = simulate_coded_phase(ChannelModel(w), code, rng)
                if not aborted:
                    kept.append(theta / 1024.0)
            assert len(kept) == runs
            stderr = math.sqrt(w * (1 - w) / 1024.0) / math.sqrt(runs)
            assert abs(np.mean(kept) - w) < 3.0 * stderr
