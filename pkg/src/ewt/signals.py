"""Signal and image containers, synthetic test signals, and plain-text/PGM I/O.

All generators sample ``t = i / L`` for ``i = 0 .. L-1`` so that integer
frequency tones are exactly periodic on the DFT grid.
"""
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_image_array, check_positive_int, check_signal_array, readonly

DEFAULT_LENGTH = 1000


class CsvFormatError(ValueError):
    """Raised when a CSV file cannot be parsed; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = f"{path}: " if path is not None else ""
        if lineno is not None:
            where += f"line {lineno}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real waveform on ``[0, duration)``."""

    samples: np.ndarray
    duration: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "samples", readonly(check_signal_array(self.samples)))
        if not (np.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"duration must be positive, got {self.duration}")
        object.__setattr__(self, "duration", float(self.duration))

    @property
    def sample_count(self):
        return self.samples.shape[0]

    def __len__(self):
        return self.sample_count

    @property
    def sample_rate(self):
        return self.sample_count / self.duration

    @property
    def times(self):
        return np.arange(self.sample_count) / self.sample_rate

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.samples, dtype=dtype)


@dataclass(frozen=True)
class Image:
    """Row-major real matrix."""

    pixels: np.ndarray = field()

    def __post_init__(self):
        object.__setattr__(self, "pixels", readonly(check_image_array(self.pixels)))

    @property
    def rows(self):
        return self.pixels.shape[0]

    @property
    def cols(self):
        return self.pixels.shape[1]

    @property
    def shape(self):
        return self.pixels.shape

    def transpose(self):
        return Image(self.pixels.T)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.pixels, dtype=dtype)


def as_signal(x, duration=None):
    """Coerce a :class:`Signal` or array-like into a :class:`Signal`."""
    if isinstance(x, Signal):
        if duration is None or duration == x.duration:
            return x
        return Signal(x.samples, duration)
    return Signal(x, 1.0 if duration is None else duration)


def as_image(x):
    return x if isinstance(x, Image) else Image(x)


def _time_axis(L):
    L = check_positive_int(L, "L", minimum=2)
    return np.arange(L) / L


def generate_sig1(L=DEFAULT_LENGTH):
    """Ramp plus two tones: ``6t + cos(8 pi t) + 0.5 cos(40 pi t)``."""
    t = _time_axis(L)
    return Signal(6 * t + np.cos(8 * np.pi * t) + 0.5 * np.cos(40 * np.pi * t))


def generate_sig2(L=DEFAULT_LENGTH):
    """Quadratic trend, a linear chirp, and a tone that jumps from 30 to 40 Hz after ``t = 0.5``."""
    t = _time_axis(L)
    switched = np.where(t > 0.5, np.cos(80 * np.pi * t - 15 * np.pi), np.cos(60 * np.pi * t))
    return Signal(6 * t**2 + np.cos(10 * np.pi * t + 10 * np.pi * t**2) + switched)


def generate_sig3(L=DEFAULT_LENGTH):
    t = _time_axis(L)
    trend = 1.0 / (1.2 + np.cos(2 * np.pi * t))
    envelope = 1.0 / (1.5 + np.sin(2 * np.pi * t))
    carrier = np.cos(32 * np.pi * t + np.cos(64 * np.pi * t))
    return Signal(trend + envelope * carrier)


def image_tone_frequencies(rows, cols):
    """(u, v) cycle counts used by :func:`generate_test_image` for a given size.

    ``u`` counts cycles along a row (x, column index) and ``v`` along a
    column (y, row index).  For 256x256 this gives (2, 2), (32, 0), (0, 48).
    """
    return {
        "low": (2, 2),
        "horizontal": (max(cols // 8, 3), 0),
        "vertical": (0, max(3 * rows // 16, 3)),
    }


def generate_test_image(rows=256, cols=256, background=0.5, low_amplitude=1.0, high_amplitude=0.8):
    """Synthetic image with a constant, one smooth separable cosine and two oriented tones.

    Recipe, with ``x`` the column index and ``y`` the row index::

        background
        + low_amplitude  * cos(2 pi 2 x / cols) * cos(2 pi 2 y / rows)
        + high_amplitude * hann(x / cols) * cos(2 pi u_h x / cols)
        + high_amplitude * hann(y / rows) * cos(2 pi v_v y / rows)

    where ``hann(s) = 0.5 (1 - cos(2 pi s))`` is the periodic Hann window and
    ``u_h = cols // 8``, ``v_v = 3 rows // 16`` (see :func:`image_tone_frequencies`).
    Each window runs along its tone's own axis so the tone stays on one
    frequency line of the 2D spectrum.
    """
    rows = check_positive_int(rows, "rows", minimum=8)
    cols = check_positive_int(cols, "cols", minimum=8)
    freqs = image_tone_frequencies(rows, cols)
    x = np.arange(cols)[None, :] / cols
    y = np.arange(rows)[:, None] / rows
    u_low, v_low = freqs["low"]
    u_h = freqs["horizontal"][0]
    v_v = freqs["vertical"][1]
    hann_x = 0.5 * (1 - np.cos(2 * np.pi * x))
    hann_y = 0.5 * (1 - np.cos(2 * np.pi * y))
    img = np.full((rows, cols), float(background))
    img = img + low_amplitude * np.cos(2 * np.pi * u_low * x) * np.cos(2 * np.pi * v_low * y)
    img = img + high_amplitude * hann_x * np.cos(2 * np.pi * u_h * x)
    img = img + high_amplitude * hann_y * np.cos(2 * np.pi * v_v * y)
    return Image(img)


# --- file I/O -------------------------------------------------------------


def atomic_write(path, data, mode="w"):
    """Write ``data`` to ``path`` through a temporary file and ``os.replace``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_row(values):
    return ",".join(repr(float(v)) for v in values)


def read_signal_csv(path, duration=1.0):
    """Read one decimal sample per line. Blank lines and ``#`` comments are skipped."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise CsvFormatError(f"cannot parse {text!r} as a number", lineno, path) from None
            if not np.isfinite(value):
                raise CsvFormatError(f"non-finite value {text!r}", lineno, path)
            values.append(value)
    if not values:
        raise CsvFormatError("file contains no samples", path=path)
    if len(values) < 2:
        raise CsvFormatError("a signal needs at least 2 samples", path=path)
    return Signal(np.array(values), duration)


def write_signal_csv(signal, path):
    samples = np.asarray(signal, dtype=float)
    atomic_write(path, "".join(repr(float(v)) + "\n" for v in samples))


def _is_number(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_matrix_csv(path):
    """Read a comma-separated real matrix (one row per line).

    A first line made only of non-numeric column names is taken as a header and skipped.
    """
    rows = []
    seen_content = False
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            first, seen_content = not seen_content, True
            try:
                row = [float(tok) for tok in text.split(",")]
            except ValueError:
                if first and not any(_is_number(tok) for tok in text.split(",")):
                    continue
                raise CsvFormatError(f"cannot parse row {text[:40]!r}", lineno, path) from None
            if rows and len(row) != len(rows[0]):
                raise CsvFormatError(f"expected {len(rows[0])} columns, got {len(row)}", lineno, path)
            rows.append(row)
    if not rows:
        raise CsvFormatError("file contains no rows", path=path)
    return np.array(rows)


def write_matrix_csv(matrix, path, header=None):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [] if header is None else [",".join(header)]
    lines.extend(_format_row(row) for row in matrix)
    atomic_write(path, "\n".join(lines) + "\n")


def read_image_csv(path):
    return Image(read_matrix_csv(path))


def write_image_csv(image, path):
    write_matrix_csv(np.asarray(image, dtype=float), path)


def to_uint8(matrix):
    """Min-max scale to 0..255; a constant matrix maps to 0."""
    m = np.asarray(matrix, dtype=float)
    lo, hi = m.min(), m.max()
    if hi <= lo:
        return np.zeros(m.shape, dtype=np.uint8)
    return np.round((m - lo) / (hi - lo) * 255.0).astype(np.uint8)


def write_pgm(matrix, path):
    """Write a binary P5 8-bit greyscale image, min-max scaled."""
    data = to_uint8(matrix)
    rows, cols = data.shape
    atomic_write(path, f"P5\n{cols} {rows}\n255\n".encode("ascii") + data.tobytes(), mode="wb")


def read_pgm(path):
    """Read a binary P5 file written by :func:`write_pgm` (no comment lines)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while raw[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    if tokens[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM file")
    cols, rows, maxval = (int(tok) for tok in tokens[1:])
    if maxval > 255:
        raise ValueError(f"{path}: only 8-bit PGM is supported")
    pixels = np.frombuffer(raw[pos + 1 : pos + 1 + rows * cols], dtype=np.uint8)
    return pixels.reshape(rows, cols)
