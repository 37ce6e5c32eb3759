"""Forward and inverse empirical wavelet transform, mode extraction, and the 1D estimator."""
from dataclasses import dataclass

import numpy as np
import scipy.fft
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_alpha, check_gamma, check_positive_int, readonly
from .filterbank import FilterBank, build_filterbank
from .segmentation import (
    boundaries_from_maxima,
    estimate_num_modes,
    find_local_maxima,
    half_spectrum,
    MagnitudeSpectrum,
)
from .signals import Signal, as_signal

IMAG_RESIDUE_TOL = 1e-9


@dataclass(frozen=True)
class EwtDecomposition:
    """Per-channel coefficient signals and the bank that produced them.

    ``channels[0]`` holds the approximation coefficients, ``channels[n]``
    the detail coefficients of wavelet ``n``.
    """

    channels: np.ndarray
    bank: FilterBank
    duration: float = 1.0

    def __post_init__(self):
        channels = np.atleast_2d(np.asarray(self.channels, dtype=float))
        if channels.shape != (self.bank.channel_count, self.bank.length):
            raise ValueError(
                f"channels of shape {channels.shape} do not match a bank of "
                f"{self.bank.channel_count} filters of length {self.bank.length}"
            )
        if not np.all(np.isfinite(channels)):
            raise ValueError("decomposition contains non-finite samples")
        object.__setattr__(self, "channels", readonly(channels))

    @property
    def channel_count(self):
        return self.channels.shape[0]

    def channel(self, n):
        return Signal(self.channels[n], self.duration)


def _real_part(spectrum, reference_scale):
    out = scipy.fft.ifft(spectrum, axis=-1)
    residue = np.max(np.abs(out.imag)) if out.size else 0.0
    if residue > IMAG_RESIDUE_TOL * max(reference_scale, np.finfo(float).tiny):
        raise FloatingPointError(f"imaginary residue {residue:.3g} exceeds tolerance; filters are not even")
    return out.real


def ewt_forward(signal, bank):
    """Channel ``n`` is the inverse DFT of ``f_hat * conj(filter_n)``."""
    signal = as_signal(signal)
    if signal.sample_count != bank.length:
        raise ValueError(f"signal length {signal.sample_count} does not match bank length {bank.length}")
    f_hat = scipy.fft.fft(signal.samples)
    coeffs = f_hat[None, :] * np.conj(bank.responses)
    channels = _real_part(coeffs, np.max(np.abs(signal.samples)))
    return EwtDecomposition(channels, bank, signal.duration)


def ewt_inverse(decomposition):
    """Synthesis ``f = IDFT(sum_n W_hat(n) * filter_n)``; exact when the bank is tight."""
    bank = decomposition.bank
    if decomposition.channel_count != bank.channel_count:
        raise ValueError("channel count does not match the filter count")
    w_hat = scipy.fft.fft(decomposition.channels, axis=-1)
    spectrum = np.sum(w_hat * bank.responses, axis=0)
    scale = np.max(np.abs(decomposition.channels)) if decomposition.channels.size else 0.0
    return Signal(_real_part(spectrum, scale), decomposition.duration)


def extract_modes(decomposition):
    """Empirical modes: each channel filtered once more by its own response."""
    w_hat = scipy.fft.fft(decomposition.channels, axis=-1)
    scale = np.max(np.abs(decomposition.channels))
    modes = _real_part(w_hat * decomposition.bank.responses, scale)
    return [Signal(m, decomposition.duration) for m in modes]


class EmpiricalWaveletTransform(TransformerMixin, BaseEstimator):
    """Adaptive 1D empirical wavelet transform.

    ``fit`` detects band boundaries from the magnitude spectrum of the
    training signal(s) and builds the filter bank; ``transform`` projects
    signals onto it and ``inverse_transform`` resynthesizes them.

    Parameters
    ----------
    n_channels : int, default=3
        Requested number of bands (scaling band included). Ignored when
        ``alpha`` is set.
    gamma : float or 'auto', default='auto'
        Transition ratio in (0, 1). 'auto' stays safely under the tight-frame bound.
    alpha : float or None, default=None
        When given, the number of bands is estimated by the relative
        amplitude threshold rule instead of taken from ``n_channels``.
    anchor_zero : bool, default=True
        Boundary placement rule, see :func:`ewt.segmentation.boundaries_from_maxima`.

    Attributes
    ----------
    bank_ : FilterBank
    segmentation_ : Segmentation
    boundaries_ : ndarray of shape (n_channels_ + 1,)
    gamma_ : float
    n_channels_ : int
    tight_ : bool
    spectrum_ : MagnitudeSpectrum
        Spectrum the boundaries were detected on. For a batch of signals this is
        the mean of their magnitude spectra.

    Notes
    -----
    ``X`` is a single signal of shape ``(L,)`` or a batch ``(n_signals, L)``.
    ``transform`` returns ``(n_channels_, L)`` or ``(n_signals, n_channels_, L)``
    to match.
    """

    def __init__(self, n_channels=3, gamma="auto", alpha=None, anchor_zero=True):
        self.n_channels = n_channels
        self.gamma = gamma
        self.alpha = alpha
        self.anchor_zero = anchor_zero

    def _validate_X(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim not in (1, 2):
            raise ValueError(f"expected a signal (L,) or a batch (n_signals, L), got shape {X.shape}")
        if X.shape[-1] < 2:
            raise ValueError("signals need at least 2 samples")
        if not np.all(np.isfinite(X)):
            raise ValueError("input contains non-finite values")
        return X

    def fit(self, X, y=None):
        X = self._validate_X(X)
        check_positive_int(self.n_channels, "n_channels")
        gamma = check_gamma(self.gamma)
        L = X.shape[-1]
        if X.ndim == 1:
            spectrum = half_spectrum(X)
        else:
            spectrum = MagnitudeSpectrum(np.mean(np.abs(scipy.fft.rfft(X, axis=-1)), axis=0), L)
        maxima = find_local_maxima(spectrum)
        if self.alpha is None:
            n_channels = self.n_channels
        else:
            kept = estimate_num_modes(maxima, check_alpha(self.alpha))
            n_channels = max(kept + 1 if self.anchor_zero else kept, 1)
        segmentation = boundaries_from_maxima(maxima, n_channels, L, self.anchor_zero)
        self.bank_ = build_filterbank(segmentation, gamma, L)
        self.spectrum_ = spectrum
        self.segmentation_ = segmentation
        self.boundaries_ = np.array(segmentation.boundaries)
        self.gamma_ = self.bank_.gamma
        self.n_channels_ = self.bank_.channel_count
        self.tight_ = self.bank_.tight
        return self

    def _check_length(self, X):
        if X.shape[-1] != self.bank_.length:
            raise ValueError(f"expected signals of length {self.bank_.length}, got {X.shape[-1]}")

    def transform(self, X):
        check_is_fitted(self, "bank_")
        X = self._validate_X(X)
        self._check_length(X)
        if X.ndim == 1:
            return np.array(ewt_forward(X, self.bank_).channels)
        return np.stack([ewt_forward(x, self.bank_).channels for x in X])

    def inverse_transform(self, W):
        check_is_fitted(self, "bank_")
        W = np.asarray(W, dtype=float)
        if W.ndim == 2:
            return np.array(ewt_inverse(EwtDecomposition(W, self.bank_)).samples)
        if W.ndim == 3:
            return np.stack([ewt_inverse(EwtDecomposition(w, self.bank_)).samples for w in W])
        raise ValueError(f"expected (n_channels, L) or (n_signals, n_channels, L), got shape {W.shape}")

    def decompose(self, X):
        """:class:`EwtDecomposition` of a single signal."""
        check_is_fitted(self, "bank_")
        return ewt_forward(X, self.bank_)

    def modes(self, X):
        """Empirical modes of a single signal, shape ``(n_channels_, L)``."""
        return np.stack([m.samples for m in extract_modes(self.decompose(X))])
