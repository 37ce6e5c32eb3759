"""Discrete Hilbert transform, instantaneous amplitude/frequency, and the EWT time-frequency representation."""
from dataclasses import dataclass

import numpy as np
import scipy.fft

from ._validation import check_positive_int, check_signal_array, readonly
from .signals import Signal, as_signal

ZERO_AMPLITUDE_RTOL = 1e-12


def _hilbert_multiplier(L):
    """``-i sign(k)`` on the DFT grid, with DC and (even L) Nyquist set to 0."""
    h = np.zeros(L, dtype=complex)
    half = (L - 1) // 2
    h[1 : half + 1] = -1j
    h[L - half :] = 1j
    return h


def hilbert(signal):
    """Hilbert transform of a real signal, computed in the frequency domain."""
    signal = as_signal(signal)
    x = signal.samples
    out = scipy.fft.ifft(scipy.fft.fft(x) * _hilbert_multiplier(x.shape[0]))
    scale = max(np.max(np.abs(x)), np.finfo(float).tiny)
    if np.max(np.abs(out.imag)) > 1e-9 * scale:
        raise FloatingPointError("Hilbert transform produced a complex result")
    return Signal(out.real, signal.duration)


def analytic_signal(signal):
    x = as_signal(signal).samples
    return x + 1j * hilbert(x).samples


@dataclass(frozen=True)
class AnalyticChannel:
    """Instantaneous amplitude and frequency (radians per sample) of one channel.

    ``defined`` is False where the amplitude is negligible and the phase,
    hence the frequency, carries no information; frequency is 0 there.
    """

    amplitude: np.ndarray
    inst_frequency: np.ndarray
    phase: np.ndarray
    defined: np.ndarray

    def __post_init__(self):
        for name in ("amplitude", "inst_frequency", "phase"):
            object.__setattr__(self, name, readonly(getattr(self, name)))
        mask = np.array(self.defined, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "defined", mask)

    def __len__(self):
        return self.amplitude.shape[0]


def analytic_channel(signal):
    """Amplitude ``|f_a|`` and frequency ``d/dt unwrap(arg f_a)`` of the analytic signal.

    The derivative uses centred differences with one-sided ends, and is
    clamped to ``[0, pi]``.
    """
    x = check_signal_array(np.asarray(as_signal(signal).samples), min_length=4)
    fa = analytic_signal(x)
    amplitude = np.abs(fa)
    peak = amplitude.max()
    defined = amplitude > ZERO_AMPLITUDE_RTOL * peak if peak > 0 else np.zeros(x.shape[0], dtype=bool)
    phase = np.unwrap(np.angle(fa))
    freq = np.clip(np.gradient(phase), 0.0, np.pi)
    freq[~defined] = 0.0
    if peak == 0:
        phase = np.zeros_like(phase)
    return AnalyticChannel(amplitude, freq, phase, defined)


@dataclass(frozen=True)
class TfrPoints:
    """One ``(t, omega, amplitude)`` triple per channel and time sample.

    Arrays have shape ``(n_channels, L)``; ``omega`` is in radians per sample.
    """

    frequency: np.ndarray
    amplitude: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequency", readonly(np.atleast_2d(self.frequency)))
        object.__setattr__(self, "amplitude", readonly(np.atleast_2d(self.amplitude)))
        if self.frequency.shape != self.amplitude.shape:
            raise ValueError("frequency and amplitude must have the same shape")

    @property
    def channel_count(self):
        return self.frequency.shape[0]

    @property
    def length(self):
        return self.frequency.shape[1]

    def triples(self):
        """``(channel, t_index, omega, amplitude)`` rows, channel-major."""
        C, L = self.frequency.shape
        channel = np.repeat(np.arange(C), L)
        t = np.tile(np.arange(L), C)
        return np.column_stack([channel, t, self.frequency.ravel(), self.amplitude.ravel()])

    def rasterize(self, time_bins=512, freq_bins=256):
        """Amplitude-summed histogram on a ``time_bins x freq_bins`` grid over ``[0, L) x [0, pi]``."""
        time_bins = check_positive_int(time_bins, "time_bins")
        freq_bins = check_positive_int(freq_bins, "freq_bins")
        C, L = self.frequency.shape
        t_idx = np.tile(np.arange(L) * time_bins // L, C)
        f_idx = np.minimum((self.frequency.ravel() / np.pi * freq_bins).astype(int), freq_bins - 1)
        raster = np.zeros((time_bins, freq_bins))
        np.add.at(raster, (t_idx, f_idx), self.amplitude.ravel())
        return raster


def build_tfr(decomposition):
    """Hilbert analysis of every channel of an EWT (or any stack of channels)."""
    channels = getattr(decomposition, "channels", decomposition)
    channels = np.atleast_2d(np.asarray(channels, dtype=float))
    analysed = [analytic_channel(ch) for ch in channels]
    return TfrPoints(
        np.stack([a.inst_frequency for a in analysed]),
        np.stack([a.amplitude for a in analysed]),
    )
