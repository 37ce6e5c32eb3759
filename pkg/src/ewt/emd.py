"""Classic EMD sifting, kept as a comparison baseline for the EWT."""
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_positive_int, check_signal_array, readonly
from .signals import Signal, as_signal

DEFAULT_SD_THRESHOLD = 0.2
DEFAULT_MAX_ITER = 50
DEFAULT_MAX_IMFS = 10


class MonotoneSignalError(ValueError):
    """Too few extrema to build upper and lower envelopes."""


def local_extrema(x):
    """Indices of interior local maxima and minima (flat tops credited at their left end)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] < 3:
        return np.empty(0, int), np.empty(0, int)
    mid, left, right = x[1:-1], x[:-2], x[2:]
    maxima = np.flatnonzero((mid > left) & (mid >= right)) + 1
    minima = np.flatnonzero((mid < left) & (mid <= right)) + 1
    return maxima, minima


def zero_crossings(x):
    s = np.sign(np.asarray(x, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def is_imf(x, tolerance=1):
    maxima, minima = local_extrema(x)
    return abs(maxima.size + minima.size - zero_crossings(x)) <= tolerance


def _envelope(x, idx):
    """Natural cubic spline through ``x[idx]``, with the two outermost extrema mirrored at each end."""
    n = x.shape[0]
    last = n - 1
    left = idx[:2][::-1]
    right = idx[-2:][::-1]
    knots = np.concatenate([-left, idx, 2 * last - right])
    values = np.concatenate([x[left], x[idx], x[right]])
    return CubicSpline(knots, values, bc_type="natural")(np.arange(n))


def envelope_mean(signal):
    """Mean of the upper and lower cubic-spline envelopes.

    Raises :class:`MonotoneSignalError` when there are fewer than two maxima
    or fewer than two minima.
    """
    signal = as_signal(signal)
    x = signal.samples
    maxima, minima = local_extrema(x)
    if maxima.size < 2 or minima.size < 2:
        raise MonotoneSignalError(f"{maxima.size} maxima and {minima.size} minima: no envelopes")
    mean = 0.5 * (_envelope(x, maxima) + _envelope(x, minima))
    return Signal(mean, signal.duration)


def sift(signal, max_iter=DEFAULT_MAX_ITER, sd_threshold=DEFAULT_SD_THRESHOLD):
    """Extract one IMF candidate by repeatedly subtracting the envelope mean.

    Stops once the Cauchy criterion ``sum (r_prev - r)^2 / sum r_prev^2`` drops
    below ``sd_threshold`` and the extrema and zero-crossing counts differ by at
    most one, or after ``max_iter`` passes.
    """
    signal = as_signal(signal)
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    r = np.array(signal.samples)
    for it in range(max_iter):
        try:
            m = envelope_mean(r).samples
        except MonotoneSignalError:
            if it == 0:
                raise
            break
        new = r - m
        denom = np.sum(r**2)
        sd = np.sum((r - new) ** 2) / denom if denom > 0 else 0.0
        r = new
        if sd < sd_threshold and is_imf(r):
            break
    return Signal(r, signal.duration)


@dataclass(frozen=True)
class ImfSet:
    imfs: tuple
    residue: Signal

    def __post_init__(self):
        object.__setattr__(self, "imfs", tuple(self.imfs))

    def __len__(self):
        return len(self.imfs)

    def as_array(self):
        """IMFs then residue as rows of one array."""
        rows = [imf.samples for imf in self.imfs] + [self.residue.samples]
        return readonly(np.stack(rows))


def _too_few_extrema(x):
    maxima, minima = local_extrema(x)
    return maxima.size < 2 or minima.size < 2 or maxima.size + minima.size < 3


def emd(signal, max_imfs=DEFAULT_MAX_IMFS, max_iter=DEFAULT_MAX_ITER, sd_threshold=DEFAULT_SD_THRESHOLD):
    """Decompose ``signal`` into IMFs plus a residue that sum back to it."""
    signal = as_signal(signal)
    check_signal_array(signal.samples, min_length=16)
    max_imfs = check_positive_int(max_imfs, "max_imfs", minimum=0)
    residue = np.array(signal.samples)
    imfs = []
    while len(imfs) < max_imfs and not _too_few_extrema(residue):
        imf = sift(residue, max_iter, sd_threshold).samples
        imfs.append(Signal(imf, signal.duration))
        residue = residue - imf
    return ImfSet(imfs, Signal(residue, signal.duration))


class EMD(TransformerMixin, BaseEstimator):
    """Stateless estimator wrapper around :func:`emd`.

    ``transform`` returns an array of shape ``(n_imfs + 1, L)``: the IMFs
    followed by the residue. The number of IMFs depends on the signal.
    """

    def __init__(self, max_imfs=DEFAULT_MAX_IMFS, max_iter=DEFAULT_MAX_ITER, sd_threshold=DEFAULT_SD_THRESHOLD):
        self.max_imfs = max_imfs
        self.max_iter = max_iter
        self.sd_threshold = sd_threshold

    def fit(self, X, y=None):
        check_signal_array(X, min_length=16)
        return self

    def transform(self, X):
        result = emd(X, self.max_imfs, self.max_iter, self.sd_threshold)
        return np.array(result.as_array())

    def inverse_transform(self, Z):
        return np.sum(np.asarray(Z, dtype=float), axis=0)
