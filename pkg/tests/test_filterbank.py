import warnings

import numpy as np
import pytest

from conftest import random_segmentation
from ewt.filterbank import (
    TightFrameWarning,
    auto_gamma,
    beta,
    build_filterbank,
    gamma_max,
    scaling_response,
    wavelet_response,
)
from ewt.segmentation import Segmentation

SQRT_HALF = np.sqrt(0.5)


class TestBeta:
    def test_endpoints_and_centre(self):
        assert beta(0.0) == 0.0
        assert beta(1.0) == 1.0
        assert beta(0.5) == 0.5
        assert beta(-3.0) == 0.0 and beta(7.0) == 1.0

    def test_quarter(self):
        # exact rational evaluation
        assert beta(0.25) == 0.070556640625

    def test_symmetry_identity(self, rng):
        x = rng.uniform(0, 1, 10_000)
        assert np.max(np.abs(beta(x) + beta(1 - x) - 1)) < 1e-12

    def test_monotone(self):
        x = np.linspace(-0.5, 1.5, 4001)
        assert np.all(np.diff(beta(x)) >= 0)


class TestGammaMax:
    def test_example_bank(self, four_band_segmentation):
        # (pi - 2.8) / (pi + 2.8)
        assert gamma_max(four_band_segmentation) == pytest.approx(0.057491765845544743994, rel=1e-14)

    def test_half_band(self):
        assert gamma_max(Segmentation([0, np.pi / 2, np.pi])) == pytest.approx(1 / 3, rel=1e-15)

    def test_single_band(self):
        assert gamma_max(Segmentation([0, np.pi])) == 1.0


class TestResponses:
    def test_scaling_edges(self):
        g, w1 = 0.3, 1.2
        assert scaling_response(0.0, w1, g) == 1.0
        assert scaling_response((1 + g) * w1, w1, g) == pytest.approx(0.0, abs=1e-15)
        assert scaling_response(w1, w1, g) == pytest.approx(SQRT_HALF, rel=1e-15)

    def test_scaling_plotted_example(self):
        w = np.linspace(0, np.pi, 2001)
        r = scaling_response(w, 1.0, 0.5)
        assert np.all(r[w <= 0.5] == 1.0)
        assert np.all(r[w >= 1.5] == 0.0)
        inside = (w > 0.5) & (w < 1.5)
        assert np.all((r[inside] >= 0) & (r[inside] <= 1))
        assert np.all(np.diff(r) <= 0)

    def test_wavelet_transition_centres(self):
        g = 0.1
        assert wavelet_response(1.0, 1.0, 2.0, g) == pytest.approx(SQRT_HALF, rel=1e-15)
        assert wavelet_response(2.0, 1.0, 2.0, g) == pytest.approx(SQRT_HALF, rel=1e-15)

    def test_wavelet_plotted_example(self):
        w = np.linspace(0, np.pi, 4001)
        r = wavelet_response(w, 1.0, 2.5, 0.2)
        assert np.all(r[(w >= 1.2) & (w <= 2.0)] == 1.0)
        assert np.all(r[w <= 0.8] == 0.0)
        assert np.all(r[w >= 3.0] == 0.0)

    def test_top_wavelet_holds_to_pi(self):
        w = np.linspace(2.5, np.pi, 100)
        assert np.all(wavelet_response(w, 2.0, np.pi, 0.2) == 1.0)

    def test_adjacent_edges_are_complementary(self, rng):
        g = 0.08
        b = [0.0, 0.9, 1.7, 2.6, np.pi]
        for n in range(1, 4):
            w = rng.uniform((1 - g) * b[n], (1 + g) * b[n], 200)
            upper = wavelet_response(w, b[n], b[n + 1], g)
            lower = scaling_response(w, b[1], g) if n == 1 else wavelet_response(w, b[n - 1], b[n], g)
            np.testing.assert_allclose(upper**2 + lower**2, 1.0, atol=1e-14)

    def test_rejects_inverted_band(self):
        with pytest.raises(ValueError):
            wavelet_response(0.5, 2.0, 1.0, 0.1)
        with pytest.raises(ValueError):
            scaling_response(0.5, 1.0, 1.2)


class TestBuildFilterbank:
    def test_example_bank_is_tight(self, four_band_segmentation):
        bank = build_filterbank(four_band_segmentation, 0.05, 1000)
        assert bank.tight
        assert bank.channel_count == 4
        assert bank.partition_error() < 1e-10

    def test_all_pass(self):
        for g in (0.1, 0.5, "auto"):
            bank = build_filterbank(Segmentation([0, np.pi]), g, 257)
            assert bank.channel_count == 1
            assert np.all(bank.responses == 1.0)

    def test_auto_gamma(self, four_band_segmentation):
        bank = build_filterbank(four_band_segmentation, "auto", 512)
        assert bank.gamma == pytest.approx(0.95 * gamma_max(four_band_segmentation))
        assert auto_gamma(Segmentation([0, np.pi / 2, np.pi])) == pytest.approx(0.95 / 3)
        assert auto_gamma(Segmentation([0, 0.5, np.pi])) == 0.45

    def test_oversized_gamma_flagged(self):
        # the narrow pair (1.0, 1.2) sets gamma_max here
        seg = Segmentation([0.0, 1.0, 1.2, np.pi])
        g = gamma_max(seg) + 0.01
        with pytest.warns(TightFrameWarning):
            bank = build_filterbank(seg, g, 1000)
        assert not bank.tight
        assert bank.partition_error() > 1e-6

    def test_flag_at_exact_bound(self, four_band_segmentation):
        with pytest.warns(TightFrameWarning):
            bank = build_filterbank(four_band_segmentation, gamma_max(four_band_segmentation), 1000)
        assert not bank.tight

    def test_partition_of_unity_random(self, rng):
        for _ in range(50):
            seg = random_segmentation(rng, 10)
            L = int(rng.integers(16, 2048))
            bank = build_filterbank(seg, 0.9 * gamma_max(seg), L)
            assert bank.partition_error() < 1e-10

    def test_even_and_bounded(self, rng):
        for L in (8, 9, 256, 1001):
            seg = random_segmentation(rng, 6)
            bank = build_filterbank(seg, "auto", L)
            r = bank.responses
            assert np.array_equal(r[:, 1:], r[:, 1:][:, ::-1])
            assert r.min() >= 0.0 and r.max() <= 1.0

    def test_compact_support(self, four_band_segmentation):
        g = 0.05
        bank = build_filterbank(four_band_segmentation, g, 4096)
        w = np.abs(2 * np.pi * np.fft.fftfreq(4096))
        b = four_band_segmentation.boundaries
        for n in range(1, 4):
            hi = np.pi if n == 3 else (1 + g) * b[n + 1]
            outside = (w < (1 - g) * b[n]) | (w > hi)
            assert np.all(bank.responses[n][outside] == 0.0)
        assert np.all(bank.responses[0][w > (1 + g) * b[1]] == 0.0)

    def test_edges_monotone(self, four_band_segmentation):
        g = 0.05
        w = np.linspace(0, np.pi, 20001)
        b = four_band_segmentation.boundaries
        assert np.all(np.diff(scaling_response(w, b[1], g)) <= 0)
        for n in range(1, 4):
            r = wavelet_response(w, b[n], b[n + 1], g)
            split = np.searchsorted(w, b[n] + g * b[n])
            assert np.all(np.diff(r[:split]) >= 0)
            assert np.all(np.diff(r[split:]) <= 0)

    def test_requires_valid_segmentation(self):
        with pytest.raises(ValueError):
            build_filterbank([0.0, 2.0, 1.0, np.pi], 0.1, 64)
        with pytest.raises(ValueError):
            build_filterbank(Segmentation([0, 1, np.pi]), 1.5, 64)

    def test_no_warning_when_tight(self, four_band_segmentation):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_filterbank(four_band_segmentation, 0.05, 100)
