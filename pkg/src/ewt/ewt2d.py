"""Tensor-product 2D EWT: one bank for all rows, one bank for all columns."""
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_gamma, check_positive_int, readonly
from .filterbank import FilterBank, TightFrameWarning, build_filterbank
from .segmentation import MagnitudeSpectrum, boundaries_from_maxima, find_local_maxima
from .signals import Image, as_image


def mean_row_spectrum(image):
    """Mean over rows of the per-row DFT magnitude (half spectrum, length ``cols // 2 + 1``)."""
    pixels = as_image(image).pixels
    return MagnitudeSpectrum(np.mean(np.abs(scipy.fft.rfft(pixels, axis=1)), axis=0), pixels.shape[1])


def mean_col_spectrum(image):
    return mean_row_spectrum(as_image(image).transpose())


@dataclass(frozen=True)
class Ewt2dDecomposition:
    """Subband images indexed ``[row_channel, col_channel]``.

    ``row_bank`` filters along each row (length ``cols``), ``col_bank`` along
    each column (length ``rows``).
    """

    subbands: np.ndarray
    row_bank: FilterBank
    col_bank: FilterBank

    def __post_init__(self):
        subbands = np.asarray(self.subbands, dtype=float)
        expected = (self.row_bank.channel_count, self.col_bank.channel_count, self.col_bank.length, self.row_bank.length)
        if subbands.shape != expected:
            raise ValueError(f"subbands of shape {subbands.shape}, expected {expected}")
        object.__setattr__(self, "subbands", readonly(subbands))

    @property
    def shape(self):
        return self.subbands.shape[:2]

    @property
    def subband_count(self):
        return self.subbands.shape[0] * self.subbands.shape[1]

    @property
    def tight(self):
        return self.row_bank.tight and self.col_bank.tight

    def subband(self, m, n):
        return Image(self.subbands[m, n])

    def manifest(self):
        return {
            "rows": int(self.col_bank.length),
            "cols": int(self.row_bank.length),
            "row_bank": self.row_bank.manifest(),
            "col_bank": self.col_bank.manifest(),
            "subbands": [[f"subband_{m}_{n}" for n in range(self.shape[1])] for m in range(self.shape[0])],
        }


def _filter_axis(data, responses, axis, conjugate):
    """Multiply the DFT along ``axis`` by each response; returns a new leading channel axis."""
    spectrum = scipy.fft.fft(data, axis=axis)
    shape = [1] * data.ndim
    shape[axis] = -1
    out = []
    for r in responses:
        r = np.conj(r) if conjugate else r
        out.append(scipy.fft.ifft(spectrum * r.reshape(shape), axis=axis).real)
    return np.stack(out)


def detect_banks(image, row_channels, col_channels, gamma="auto", anchor_zero=True):
    """Row and column filter banks detected on the mean row/column spectra."""
    image = as_image(image)
    row_spec = mean_row_spectrum(image)
    col_spec = mean_col_spectrum(image)
    row_seg = boundaries_from_maxima(find_local_maxima(row_spec), row_channels, image.cols, anchor_zero)
    col_seg = boundaries_from_maxima(find_local_maxima(col_spec), col_channels, image.rows, anchor_zero)
    return build_filterbank(row_seg, gamma, image.cols), build_filterbank(col_seg, gamma, image.rows)


def ewt2d_apply(image, row_bank, col_bank):
    """Filter every row with ``row_bank``, then every column of each output with ``col_bank``."""
    pixels = as_image(image).pixels
    if pixels.shape != (col_bank.length, row_bank.length):
        raise ValueError(f"image shape {pixels.shape} does not match banks ({col_bank.length}, {row_bank.length})")
    by_rows = _filter_axis(pixels, row_bank.responses, axis=1, conjugate=True)
    subbands = np.stack([_filter_axis(y, col_bank.responses, axis=0, conjugate=True) for y in by_rows])
    return Ewt2dDecomposition(subbands, row_bank, col_bank)


def ewt2d_forward(image, row_channels=3, col_channels=3, gamma="auto", anchor_zero=True):
    """Detect per-direction banks on the mean spectra and split ``image`` into subbands."""
    image = as_image(image)
    if min(image.shape) < 8:
        raise ValueError(f"image must be at least 8x8, got {image.shape}")
    row_channels = check_positive_int(row_channels, "row_channels")
    col_channels = check_positive_int(col_channels, "col_channels")
    row_bank, col_bank = detect_banks(image, row_channels, col_channels, check_gamma(gamma), anchor_zero)
    return ewt2d_apply(image, row_bank, col_bank)


def ewt2d_inverse(decomposition):
    """Column synthesis inside each row group, then row synthesis."""
    if not decomposition.tight:
        warnings.warn("2D reconstruction with a non-tight filter bank is not exact", TightFrameWarning, stacklevel=2)
    row_resp = decomposition.row_bank.responses
    col_resp = decomposition.col_bank.responses
    groups = []
    for m in range(decomposition.shape[0]):
        # subbands[m] is (C_col, rows, cols); axis 1 runs down the columns
        spectrum = scipy.fft.fft(decomposition.subbands[m], axis=1)
        groups.append(np.sum(spectrum * col_resp[:, :, None], axis=0))
    column_synth = scipy.fft.ifft(np.stack(groups), axis=1).real
    spectrum = scipy.fft.fft(column_synth, axis=2)
    return Image(scipy.fft.ifft(np.sum(spectrum * row_resp[:, None, :], axis=0), axis=1).real)


def ewt2d_modes(decomposition):
    """Each subband filtered once more by its separable response; they sum to the input when tight."""
    row_resp = decomposition.row_bank.responses
    col_resp = decomposition.col_bank.responses
    spectra = scipy.fft.fft2(decomposition.subbands, axes=(2, 3))
    weights = col_resp[None, :, :, None] * row_resp[:, None, None, :]
    return scipy.fft.ifft2(spectra * weights, axes=(2, 3)).real


class EmpiricalWaveletTransform2D(TransformerMixin, BaseEstimator):
    """Separable 2D empirical wavelet transform.

    ``fit`` detects row and column boundaries on the mean row and mean column
    magnitude spectra of an image. ``transform`` returns subbands of shape
    ``(n_row_channels_, n_col_channels_, rows, cols)``.
    """

    def __init__(self, row_channels=3, col_channels=3, gamma="auto", anchor_zero=True):
        self.row_channels = row_channels
        self.col_channels = col_channels
        self.gamma = gamma
        self.anchor_zero = anchor_zero

    def fit(self, X, y=None):
        image = as_image(X)
        if min(image.shape) < 8:
            raise ValueError(f"image must be at least 8x8, got {image.shape}")
        self.row_bank_, self.col_bank_ = detect_banks(
            image,
            check_positive_int(self.row_channels, "row_channels"),
            check_positive_int(self.col_channels, "col_channels"),
            check_gamma(self.gamma),
            self.anchor_zero,
        )
        self.n_row_channels_ = self.row_bank_.channel_count
        self.n_col_channels_ = self.col_bank_.channel_count
        self.tight_ = self.row_bank_.tight and self.col_bank_.tight
        return self

    def transform(self, X):
        check_is_fitted(self, "row_bank_")
        return np.array(ewt2d_apply(X, self.row_bank_, self.col_bank_).subbands)

    def inverse_transform(self, S):
        check_is_fitted(self, "row_bank_")
        return np.array(ewt2d_inverse(Ewt2dDecomposition(S, self.row_bank_, self.col_bank_)).pixels)
