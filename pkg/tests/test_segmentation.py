import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewt.segmentation import (
    MagnitudeSpectrum,
    MaximaSet,
    Segmentation,
    boundaries_from_maxima,
    estimate_num_channels,
    estimate_num_modes,
    find_local_maxima,
    half_spectrum,
)
from ewt.signals import generate_sig1


def spectrum_of(values):
    values = np.asarray(values, float)
    return MagnitudeSpectrum(values, 2 * (len(values) - 1))


def brute_force_maxima(v):
    found = []
    for k in range(1, len(v) - 1):
        if v[k] > v[k - 1] and v[k] >= v[k + 1]:
            found.append(k)
    return sorted(found, key=lambda k: (-v[k], k))


def dft_magnitude(x):
    L = len(x)
    n = np.arange(L)
    return np.array([abs(np.sum(x * np.exp(-2j * np.pi * k * n / L))) for k in range(L // 2 + 1)])


class TestHalfSpectrum:
    def test_constant(self):
        spec = half_spectrum(np.full(8, -1.5))
        np.testing.assert_allclose(spec.values, [12.0, 0, 0, 0, 0], atol=1e-12)

    def test_single_tone(self):
        x = np.cos(2 * np.pi * 10 * np.arange(1000) / 1000)
        spec = half_spectrum(x)
        np.testing.assert_allclose(spec.values, dft_magnitude(x), atol=1e-9)
        maxima = find_local_maxima(spec)
        assert list(maxima.bins) == [10]
        assert maxima.magnitudes[0] == pytest.approx(500.0, rel=1e-12)

    def test_linearity(self, rng):
        x = rng.standard_normal(101)
        np.testing.assert_allclose(half_spectrum(2 * x).values, 2 * half_spectrum(x).values, rtol=1e-12)
        assert len(half_spectrum(x)) == 51


class TestLocalMaxima:
    def test_monotone_has_none(self):
        assert len(find_local_maxima(spectrum_of([5, 4, 3, 2, 1]))) == 0

    def test_sorted_by_magnitude(self):
        assert list(find_local_maxima(spectrum_of([0, 1, 0, 2, 0])).bins) == [3, 1]

    def test_plateau_counted_once(self):
        assert list(find_local_maxima(spectrum_of([0, 1, 1, 0, 3, 0])).bins) == [4, 1]

    def test_ties_broken_by_bin(self):
        assert list(find_local_maxima(spectrum_of([0, 2, 0, 2, 0, 1, 0])).bins) == [1, 3, 5]

    def test_normalization(self):
        maxima = find_local_maxima(spectrum_of([0, 4, 0, 2, 0, 3, 0]))
        np.testing.assert_allclose(maxima.normalized, [1.0, 0.5, 0.0])
        single = find_local_maxima(spectrum_of([0, 4, 0]))
        assert list(single.normalized) == [1.0]

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 20), min_size=3, max_size=40))
    def test_matches_brute_force(self, values):
        v = np.array(values, float)
        got = find_local_maxima(spectrum_of(v))
        assert list(got.bins) == brute_force_maxima(v)
        norm = got.normalized
        if len(got):
            assert norm.max() == 1.0 and norm.min() >= 0.0
            assert np.all(np.diff(got.magnitudes) <= 0)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=30), st.floats(1.5, 3.0))
    def test_reversed_negation_finds_complement(self, lows, gap):
        # strictly alternating: even bins low, odd bins high
        lows = np.array(lows)
        v = np.where(np.arange(len(lows)) % 2 == 0, lows, lows + gap)
        flipped = (v.max() + v.min() - v)[::-1]
        n = len(v)
        maxima_v = set(find_local_maxima(spectrum_of(v)).bins.tolist())
        maxima_flipped = set(find_local_maxima(spectrum_of(flipped)).bins.tolist())
        interior = set(range(1, n - 1))
        assert maxima_v == {k for k in interior if k % 2 == 1}
        assert {n - 1 - k for k in maxima_flipped} == interior - maxima_v

    @pytest.mark.parametrize("tones", [(7, 40, 90), (12, 33), (5, 120, 200, 310)])
    def test_well_separated_tones(self, tones, rng):
        L = 1000
        n = np.arange(L)
        x = sum(rng.uniform(0.5, 2.0) * np.cos(2 * np.pi * k * n / L + rng.uniform(0, 6)) for k in tones)
        oracle = dft_magnitude(x)
        top = set(np.argsort(oracle[1:-1])[::-1][: len(tones)] + 1)
        maxima = find_local_maxima(half_spectrum(x))
        assert set(maxima.bins[: len(tones)].tolist()) == set(tones) == top


class TestBoundaries:
    def test_single_midpoint(self):
        L = 200
        seg = boundaries_from_maxima(MaximaSet([20, 8], [2.0, 1.0], L), 2, L)
        np.testing.assert_allclose(seg.boundaries, [0, np.pi * 28 / L, np.pi], rtol=1e-15)
        assert seg.channel_count == 2

    def test_midpoint_is_mean_frequency(self):
        L = 1000
        maxima = MaximaSet([300, 100], [1.0, 0.5], L)
        seg = boundaries_from_maxima(maxima, 2, L)
        assert seg.boundaries[1] == pytest.approx(np.mean(maxima.frequencies), rel=1e-15)

    def test_shortage_resets_channel_count(self):
        seg = boundaries_from_maxima(MaximaSet([40], [1.0], 1000), 5, 1000)
        np.testing.assert_array_equal(seg.boundaries, [0, np.pi])
        assert seg.channel_count == 1

    def test_three_maxima(self):
        seg = boundaries_from_maxima(MaximaSet([20, 10, 30], [3.0, 2.0, 1.0], 1000), 3, 1000)
        np.testing.assert_allclose(seg.internal, [2 * np.pi * 15 / 1000, 2 * np.pi * 25 / 1000], rtol=1e-15)

    def test_keeps_strongest(self):
        seg = boundaries_from_maxima(MaximaSet([20, 10, 30], [3.0, 2.0, 1.0], 1000), 2, 1000)
        np.testing.assert_allclose(seg.internal, [2 * np.pi * 15 / 1000])

    def test_empty_maxima_is_lowpass(self):
        seg = boundaries_from_maxima(MaximaSet([], [], 64), 4, 64)
        assert seg.channel_count == 1

    def test_zero_channels_rejected(self):
        with pytest.raises(ValueError):
            boundaries_from_maxima(MaximaSet([3], [1.0], 64), 0, 64)

    def test_anchored_rule(self):
        maxima = MaximaSet([20, 4], [2.0, 1.0], 1000)
        seg = boundaries_from_maxima(maxima, 3, 1000, anchor_zero=True)
        np.testing.assert_allclose(seg.internal, [2 * np.pi * 2 / 1000, 2 * np.pi * 12 / 1000])
        short = boundaries_from_maxima(maxima, 9, 1000, anchor_zero=True)
        assert short.channel_count == 3
        assert boundaries_from_maxima(MaximaSet([], [], 1000), 3, anchor_zero=True).channel_count == 1

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.integers(1, 499), min_size=0, max_size=30, unique=True),
        st.integers(1, 12),
        st.booleans(),
    )
    def test_boundaries_strictly_increasing(self, bins, C, anchor):
        mags = np.linspace(2.0, 1.0, len(bins))
        seg = boundaries_from_maxima(MaximaSet(bins, mags, 1000), C, 1000, anchor)
        b = seg.boundaries
        assert b[0] == 0.0 and b[-1] == np.pi
        assert np.all(np.diff(b) > 0)
        assert 1 <= seg.channel_count <= C

    def test_segmentation_validation(self):
        with pytest.raises(ValueError):
            Segmentation([0.0, 2.0, 1.0, np.pi])
        with pytest.raises(ValueError):
            Segmentation([0.1, np.pi])
        with pytest.raises(ValueError):
            Segmentation([0.0, 3.0])


class TestModeCount:
    def test_threshold_arithmetic(self):
        maxima = MaximaSet([1, 2, 3], [1.0, 0.5, 0.0], 10)
        assert estimate_num_modes(maxima, 0.4) == 2

    def test_alpha_extremes(self):
        maxima = MaximaSet([1, 2, 3, 4], [9.0, 9.0, 4.0, 1.0], 10)
        assert estimate_num_modes(maxima, 0.0) == 4
        assert estimate_num_modes(maxima, 1.0) == 2
        assert estimate_num_modes(MaximaSet([], [], 10), 0.3) == 0

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            estimate_num_modes(MaximaSet([1], [1.0], 10), 1.5)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0.0, 100.0), min_size=1, max_size=40))
    def test_non_increasing_in_alpha(self, mags):
        mags = np.sort(np.array(mags))[::-1]
        maxima = MaximaSet(np.arange(1, len(mags) + 1), mags, 200)
        counts = [estimate_num_modes(maxima, a) for a in np.linspace(0, 1, 21)]
        assert counts[0] == len(mags)
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_sig1_band_count(self):
        counts = [estimate_num_channels(generate_sig1(1000), a) for a in (0.3, 0.4, 0.5)]
        assert all(abs(c - p) <= 1 for c, p in zip(counts, (3, 3, 2)))
