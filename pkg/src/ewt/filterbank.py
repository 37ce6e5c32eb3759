"""Empirical scaling function and wavelets in the Fourier domain.

Responses are real, even in frequency, and built from Meyer-type cos/sin
transitions shaped by :func:`beta`.  A transition centred on boundary
``w_n`` has half-width ``tau_n = gamma * w_n``.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import check_gamma, check_positive_int, readonly
from .segmentation import Segmentation

AUTO_GAMMA_FACTOR = 0.95
AUTO_GAMMA_CAP = 0.45


class TightFrameWarning(UserWarning):
    """The chosen transition ratio does not guarantee a tight frame."""


def beta(x):
    """Clamped ramp ``x^4 (35 - 84x + 70x^2 - 20x^3)``; 0 below 0 and 1 above 1."""
    x = np.asarray(x, dtype=float)
    xc = np.clip(x, 0.0, 1.0)
    out = xc**4 * (35.0 - 84.0 * xc + 70.0 * xc**2 - 20.0 * xc**3)
    # the polynomial overshoots [0, 1] by round-off near the ends
    out = np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, np.clip(out, 0.0, 1.0)))
    return out[()] if out.ndim == 0 else out


def gamma_max(segmentation):
    """Largest transition ratio for which consecutive transitions cannot overlap.

    ``min_n (w_{n+1} - w_n) / (w_{n+1} + w_n)`` over the internal boundaries
    and pi. Returns 1 for a single band.
    """
    b = segmentation.boundaries
    if segmentation.channel_count == 1:
        return 1.0
    lo, hi = b[1:-1], b[2:]
    return float(np.min((hi - lo) / (hi + lo)))


def _falling_edge(w, centre, tau):
    """1 below ``centre - tau``, cos-shaped descent to 0 at ``centre + tau``."""
    return np.select(
        [w <= centre - tau, w <= centre + tau],
        [1.0, np.cos(0.5 * np.pi * beta((w - centre + tau) / (2 * tau)))],
        0.0,
    )


def _scaling(w, w1, tau1):
    return _falling_edge(np.abs(w), w1, tau1)


def _wavelet(w, wn, wn1, tau_n, tau_n1, top):
    aw = np.abs(w)
    rising = np.sin(0.5 * np.pi * beta((aw - wn + tau_n) / (2 * tau_n)))
    if top:
        return np.select([aw >= wn + tau_n, aw >= wn - tau_n], [1.0, rising], 0.0)
    falling = np.cos(0.5 * np.pi * beta((aw - wn1 + tau_n1) / (2 * tau_n1)))
    # branch order follows the piecewise definition: flat, upper edge, lower edge
    return np.select(
        [
            (aw >= wn + tau_n) & (aw <= wn1 - tau_n1),
            (aw >= wn1 - tau_n1) & (aw <= wn1 + tau_n1),
            (aw >= wn - tau_n) & (aw <= wn + tau_n),
        ],
        [1.0, falling, rising],
        0.0,
    )


def scaling_response(omega, w1, gamma):
    """Low-pass response: 1 up to ``(1-gamma) w1``, 0 beyond ``(1+gamma) w1``."""
    gamma = check_gamma(gamma, allow_auto=False)
    if w1 <= 0:
        raise ValueError("w1 must be positive")
    out = _scaling(np.asarray(omega, dtype=float), w1, gamma * w1)
    return out[()] if out.ndim == 0 else out


def wavelet_response(omega, wn, wn1, gamma):
    """Band-pass response on ``[wn, wn1]``.

    With ``wn1 == pi`` the upper roll-off is dropped and the response stays
    1 up to pi, so the top band and its mirror image meet without a gap.
    """
    gamma = check_gamma(gamma, allow_auto=False)
    if not 0 < wn < wn1:
        raise ValueError(f"need 0 < wn < wn1, got wn={wn}, wn1={wn1}")
    top = wn1 >= np.pi
    out = _wavelet(np.asarray(omega, dtype=float), wn, wn1, gamma * wn, gamma * wn1, top)
    return out[()] if out.ndim == 0 else out


def auto_gamma(segmentation):
    return min(AUTO_GAMMA_FACTOR * gamma_max(segmentation), AUTO_GAMMA_CAP)


def dft_frequencies(length):
    """``|w_k|`` for DFT bins ``k = 0 .. L-1``, folded into ``[0, pi]``.

    Bins ``k`` and ``L - k`` get bit-identical values.
    """
    k = np.arange(length)
    folded = np.minimum(k, length - k)
    return 2 * np.pi * folded / length


@dataclass(frozen=True)
class FilterBank:
    """Sampled responses of one scaling filter and ``C - 1`` wavelets on a length-``L`` DFT grid.

    ``responses[0]`` is the scaling filter, ``responses[n]`` the n-th wavelet.
    ``tight`` is True when ``gamma < gamma_max(segmentation)``.
    """

    segmentation: Segmentation
    gamma: float
    length: int
    responses: np.ndarray
    tight: bool

    def __post_init__(self):
        object.__setattr__(self, "responses", readonly(self.responses))

    @property
    def channel_count(self):
        return self.responses.shape[0]

    @property
    def boundaries(self):
        return self.segmentation.boundaries

    def partition_error(self):
        """``max_k |sum_n responses[n, k]^2 - 1|``."""
        return float(np.max(np.abs(np.sum(self.responses**2, axis=0) - 1.0)))

    def manifest(self):
        return {
            "boundaries": self.segmentation.tolist(),
            "gamma": float(self.gamma),
            "L": int(self.length),
            "n_channels": int(self.channel_count),
            "tight_frame": bool(self.tight),
        }


def build_filterbank(segmentation, gamma, length):
    """Sample the empirical filter bank for ``segmentation`` on a length-``L`` DFT grid.

    ``gamma='auto'`` picks ``min(0.95 * gamma_max, 0.45)``. An explicit
    ``gamma >= gamma_max`` still builds the bank, but marks it non-tight and
    emits :class:`TightFrameWarning`.
    """
    if not isinstance(segmentation, Segmentation):
        segmentation = Segmentation(segmentation)
    length = check_positive_int(length, "length", minimum=2)
    gamma = check_gamma(gamma)
    limit = gamma_max(segmentation)
    if gamma == "auto":
        gamma = auto_gamma(segmentation)
    tight = gamma < limit
    if not tight:
        warnings.warn(
            f"gamma={gamma:.6g} >= gamma_max={limit:.6g}: the filter bank is not guaranteed to be a tight frame",
            TightFrameWarning,
            stacklevel=2,
        )

    w = dft_frequencies(length)
    b = segmentation.boundaries
    C = segmentation.channel_count
    responses = np.empty((C, length))
    if C == 1:
        responses[0] = 1.0
    else:
        responses[0] = _scaling(w, b[1], gamma * b[1])
        for n in range(1, C):
            top = n == C - 1
            responses[n] = _wavelet(w, b[n], b[n + 1], gamma * b[n], gamma * b[n + 1], top)
    return FilterBank(segmentation, float(gamma), length, responses, bool(tight))
