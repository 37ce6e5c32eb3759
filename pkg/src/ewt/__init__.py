"""Empirical wavelet transform: adaptive spectrum segmentation, tight-frame filter banks,
Hilbert time-frequency analysis, a separable 2D extension, and an EMD baseline."""
from .emd import EMD, ImfSet, MonotoneSignalError, emd, envelope_mean, sift
from .ewt2d import (
    Ewt2dDecomposition,
    EmpiricalWaveletTransform2D,
    ewt2d_forward,
    ewt2d_inverse,
    ewt2d_modes,
    mean_col_spectrum,
    mean_row_spectrum,
)
from .filterbank import (
    FilterBank,
    TightFrameWarning,
    beta,
    build_filterbank,
    gamma_max,
    scaling_response,
    wavelet_response,
)
from .hilbert import AnalyticChannel, TfrPoints, analytic_channel, build_tfr, hilbert
from .segmentation import (
    MagnitudeSpectrum,
    MaximaSet,
    Segmentation,
    boundaries_from_maxima,
    detect_boundaries,
    estimate_num_channels,
    estimate_num_modes,
    find_local_maxima,
    half_spectrum,
)
from .signals import (
    CsvFormatError,
    Image,
    Signal,
    generate_sig1,
    generate_sig2,
    generate_sig3,
    generate_test_image,
    read_signal_csv,
    write_signal_csv,
)
from .transform import EmpiricalWaveletTransform, EwtDecomposition, ewt_forward, ewt_inverse, extract_modes

__version__ = "0.1.0"
