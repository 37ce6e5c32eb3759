"""Fourier spectrum segmentation: local maxima, boundary midpoints, mode-count estimation."""
from dataclasses import dataclass

import numpy as np
import scipy.fft

from ._validation import check_alpha, check_positive_int, readonly
from .signals import as_signal

NOISE_RTOL = 1e-10


@dataclass(frozen=True)
class MagnitudeSpectrum:
    """Half-spectrum magnitudes at bins ``0 .. L // 2`` of a length-``L`` signal."""

    values: np.ndarray
    length: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("spectrum values must be one-dimensional")
        if values.shape[0] != self.length // 2 + 1:
            raise ValueError(f"expected {self.length // 2 + 1} bins for L={self.length}, got {values.shape[0]}")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("spectrum magnitudes must be finite and non-negative")
        object.__setattr__(self, "values", readonly(values))
        object.__setattr__(self, "length", int(self.length))

    @property
    def frequencies(self):
        """Normalized angular frequency of each bin, in ``[0, pi]``."""
        return 2 * np.pi * np.arange(self.values.shape[0]) / self.length

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class MaximaSet:
    """Interior spectrum maxima sorted by decreasing magnitude (ties: lower bin first)."""

    bins: np.ndarray
    magnitudes: np.ndarray
    length: int

    def __post_init__(self):
        object.__setattr__(self, "bins", np.array(self.bins, dtype=int).reshape(-1))
        object.__setattr__(self, "magnitudes", readonly(np.reshape(self.magnitudes, -1)))
        self.bins.setflags(write=False)
        if self.bins.shape != self.magnitudes.shape:
            raise ValueError("bins and magnitudes must have the same length")

    def __len__(self):
        return self.bins.shape[0]

    @property
    def normalized(self):
        """Magnitudes mapped affinely so the largest is 1 and the smallest is 0.

        A single maximum maps to 1; the empty set stays empty.
        """
        mags = self.magnitudes
        if mags.size == 0:
            return mags.copy()
        top, bottom = mags.max(), mags.min()
        if top == bottom:
            return np.ones_like(mags)
        return (mags - bottom) / (top - bottom)

    @property
    def frequencies(self):
        return 2 * np.pi * self.bins / self.length

    def top(self, count):
        count = max(0, min(int(count), len(self)))
        return MaximaSet(self.bins[:count], self.magnitudes[:count], self.length)


@dataclass(frozen=True)
class Segmentation:
    """Ordered boundaries ``0 = w_0 < w_1 < ... < w_C = pi`` of ``C`` contiguous bands."""

    boundaries: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float).reshape(-1)
        if b.shape[0] < 2:
            raise ValueError("a segmentation needs at least the two boundaries 0 and pi")
        if b[0] != 0.0:
            raise ValueError(f"first boundary must be 0, got {b[0]}")
        if not np.isclose(b[-1], np.pi, rtol=0, atol=1e-12):
            raise ValueError(f"last boundary must be pi, got {b[-1]}")
        b = b.copy()
        b[-1] = np.pi
        if np.any(np.diff(b) <= 0):
            raise ValueError("boundaries must be strictly increasing")
        object.__setattr__(self, "boundaries", readonly(b))

    @property
    def channel_count(self):
        return self.boundaries.shape[0] - 1

    @property
    def internal(self):
        return self.boundaries[1:-1]

    def to_hz(self, sample_rate):
        """Boundaries in Hz for a signal sampled at ``sample_rate``."""
        return self.boundaries * sample_rate / (2 * np.pi)

    def tolist(self):
        return [float(b) for b in self.boundaries]


def half_spectrum(signal):
    """``|DFT(f)[k]|`` for ``k = 0 .. L // 2`` (unnormalized forward DFT)."""
    samples = as_signal(signal).samples
    return MagnitudeSpectrum(np.abs(scipy.fft.rfft(samples)), samples.shape[0])


def find_local_maxima(spectrum, noise_rtol=NOISE_RTOL):
    """Detect interior local maxima of a magnitude spectrum.

    Bin ``k`` (``0 < k < last``) is a maximum when ``v[k] > v[k-1]`` and
    ``v[k] >= v[k+1]``, so a flat top is credited once, at its leftmost bin.
    The endpoints (0 and pi) are never candidates. Maxima no larger than
    ``noise_rtol * max(v)`` are FFT round-off and are dropped.
    """
    if not isinstance(spectrum, MagnitudeSpectrum):
        raise TypeError("expected a MagnitudeSpectrum")
    v = spectrum.values
    if v.shape[0] < 3:
        return MaximaSet(np.empty(0, int), np.empty(0), spectrum.length)
    centre = v[1:-1]
    is_max = (centre > v[:-2]) & (centre >= v[2:])
    is_max &= centre > noise_rtol * v.max()
    bins = np.flatnonzero(is_max) + 1
    mags = v[bins]
    order = np.lexsort((bins, -mags))
    return MaximaSet(bins[order], mags[order], spectrum.length)


def boundaries_from_maxima(maxima, n_channels, length=None, anchor_zero=False):
    """Turn the strongest maxima into a segmentation of ``[0, pi]``.

    Parameters
    ----------
    maxima : MaximaSet
        Maxima sorted by decreasing magnitude, as returned by
        :func:`find_local_maxima`.
    n_channels : int
        Requested number of bands ``C``.
    length : int, optional
        Signal length ``L``; defaults to ``maxima.length``.
    anchor_zero : bool
        ``False`` keeps the top ``C`` maxima and places one boundary halfway
        between each consecutive pair, giving one band per kept maximum.
        ``True`` keeps the top ``C - 1`` maxima and also puts a boundary
        halfway between 0 and the lowest kept maximum, so the low-pass band
        sits below every detected mode.

    Returns
    -------
    Segmentation
        When fewer maxima exist than requested the channel count shrinks to
        what the maxima support. With no maxima at all the result is the
        single band ``{0, pi}``.
    """
    n_channels = check_positive_int(n_channels, "n_channels")
    L = maxima.length if length is None else check_positive_int(length, "length", minimum=2)
    wanted = n_channels - 1 if anchor_zero else n_channels
    kept = np.sort(maxima.bins[: min(wanted, len(maxima))]).astype(float)
    if kept.size == 0:
        return Segmentation([0.0, np.pi])
    if anchor_zero:
        kept = np.concatenate(([0.0], kept))
    midpoints = np.pi * (kept[:-1] + kept[1:]) / L
    return Segmentation(np.concatenate(([0.0], midpoints, [np.pi])))


def estimate_num_modes(maxima, alpha):
    """Count maxima whose normalized magnitude reaches ``M_M + alpha (M_1 - M_M)``.

    ``alpha = 0`` keeps every maximum; ``alpha = 1`` keeps only those tied
    with the largest. Returns 0 for an empty set.
    """
    alpha = check_alpha(alpha)
    norm = maxima.normalized
    if norm.size == 0:
        return 0
    smallest, largest = norm.min(), norm.max()
    threshold = smallest + alpha * (largest - smallest)
    return int(np.count_nonzero(norm >= threshold))


def detect_boundaries(signal, n_channels, anchor_zero=True):
    """Full 1D pipeline: half spectrum, maxima, then :func:`boundaries_from_maxima`."""
    spectrum = half_spectrum(signal)
    return boundaries_from_maxima(find_local_maxima(spectrum), n_channels, spectrum.length, anchor_zero)


def estimate_num_channels(signal, alpha, anchor_zero=True):
    """Number of bands the alpha rule selects for ``signal``.

    This is the count of retained maxima, plus the low-pass band when
    ``anchor_zero`` is set (each retained maximum then owns one wavelet band
    above the scaling band). Always at least 1.
    """
    count = estimate_num_modes(find_local_maxima(half_spectrum(signal)), alpha)
    return max(count + 1 if anchor_zero else count, 1)
