"""Batch command-line front end.

Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 numeric invariant failure.
``EWT_THREADS`` caps the FFT worker count.
"""
import argparse
import contextlib
import os
import sys
import warnings

import numpy as np
import scipy.fft

from . import export
from .emd import emd
from .ewt2d import ewt2d_forward, ewt2d_modes
from .filterbank import build_filterbank
from .hilbert import build_tfr
from .segmentation import (
    boundaries_from_maxima,
    estimate_num_modes,
    find_local_maxima,
    half_spectrum,
)
from .signals import (
    CsvFormatError,
    generate_sig1,
    generate_sig2,
    generate_sig3,
    generate_test_image,
    read_image_csv,
    read_signal_csv,
    write_image_csv,
    write_matrix_csv,
    write_pgm,
    write_signal_csv,
)
from .transform import ewt_forward, ewt_inverse, extract_modes

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in [0, 1], got {text}")
    return value


def _gamma(text):
    if text.lower() == "auto":
        return "auto"
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"gamma must lie in (0, 1), got {text}")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _existing_file(path):
    if not os.path.isfile(path):
        raise FileNotFoundError(f"input file not found: {path}")
    return path


def _output_dir(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"parent directory does not exist: {parent}")
    os.makedirs(path, exist_ok=True)
    return path


def _output_file(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"parent directory does not exist: {parent}")
    return path


def _segmentation_args(p):
    p.add_argument("--channels", "-n", type=_positive, default=3, help="requested number of bands (default 3)")
    p.add_argument("--alpha", type=_alpha, default=None, help="estimate the band count with this threshold instead")
    p.add_argument(
        "--no-anchor",
        dest="anchor_zero",
        action="store_false",
        help="place boundaries only between kept maxima (one band per maximum)",
    )


def build_parser():
    parser = _Parser(prog="ewt", description="Empirical wavelet transform toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a synthetic test signal or image")
    p.add_argument("kind", choices=["sig1", "sig2", "sig3", "image"])
    p.add_argument("--L", dest="length", type=_positive, default=1000, help="sample count for signals")
    p.add_argument("--rows", type=_positive, default=256)
    p.add_argument("--cols", type=_positive, default=256)
    p.add_argument("-o", "--output", required=True, help="CSV path (images: .pgm writes a PGM instead)")

    p = sub.add_parser("boundaries", help="detect spectrum boundaries")
    p.add_argument("input")
    _segmentation_args(p)
    p.add_argument("--duration", type=float, default=1.0, help="signal duration in seconds, for Hz output")
    p.add_argument("-o", "--output", help="write boundaries (radians) as a JSON array")

    p = sub.add_parser("detect-n", help="estimate the number of bands")
    p.add_argument("input")
    p.add_argument("--alpha", type=_alpha, action="append", required=True, help="repeatable")
    p.add_argument("--no-anchor", dest="anchor_zero", action="store_false")

    for name, helptext in (("ewt", "forward transform: channel coefficients"), ("modes", "empirical modes")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        _segmentation_args(p)
        p.add_argument("--gamma", type=_gamma, default="auto")
        p.add_argument("--duration", type=float, default=1.0)
        p.add_argument("--filterbank", action="store_true", help="also write filterbank.csv")
        p.add_argument("-o", "--output", required=True, help="output directory")

    p = sub.add_parser("iewt", help="reconstruct from an ewt output directory")
    p.add_argument("input", help="directory written by `ewt ewt`")
    p.add_argument("--reference", help="signal CSV to compare against")
    p.add_argument("-o", "--output", help="write the reconstruction as CSV")

    p = sub.add_parser("tfr", help="Hilbert time-frequency representation of the EWT channels")
    p.add_argument("input")
    _segmentation_args(p)
    p.add_argument("--gamma", type=_gamma, default="auto")
    p.add_argument("--raster", nargs=2, type=_positive, metavar=("TIME_BINS", "FREQ_BINS"))
    p.add_argument("-o", "--output", required=True, help="output directory")

    p = sub.add_parser("ewt2d", help="separable 2D transform of a CSV image")
    p.add_argument("input")
    p.add_argument("--row-channels", type=_positive, default=3)
    p.add_argument("--col-channels", type=_positive, default=3)
    p.add_argument("--gamma", type=_gamma, default="auto")
    p.add_argument("--modes", action="store_true", help="write resynthesized subband modes instead of coefficients")
    p.add_argument("-o", "--output", required=True, help="output directory")

    p = sub.add_parser("emd", help="empirical mode decomposition baseline")
    p.add_argument("input")
    p.add_argument("--max-imfs", type=_positive, default=10)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--sd-threshold", type=float, default=0.2)
    p.add_argument("-o", "--output", required=True, help="output directory")
    return parser


def _segmentation(signal, args):
    spectrum = half_spectrum(signal)
    maxima = find_local_maxima(spectrum)
    if args.alpha is not None:
        kept = estimate_num_modes(maxima, args.alpha)
        n = max(kept + 1 if args.anchor_zero else kept, 1)
    else:
        n = args.channels
    return boundaries_from_maxima(maxima, n, spectrum.length, args.anchor_zero)


def _bank(signal, args):
    return build_filterbank(_segmentation(signal, args), args.gamma, signal.sample_count)


def cmd_generate(args):
    out = _output_file(args.output)
    if args.kind == "image":
        image = generate_test_image(args.rows, args.cols)
        if out.lower().endswith(".pgm"):
            write_pgm(image.pixels, out)
        else:
            write_image_csv(image, out)
        print(f"wrote {args.rows}x{args.cols} image to {out}")
        return
    generator = {"sig1": generate_sig1, "sig2": generate_sig2, "sig3": generate_sig3}[args.kind]
    write_signal_csv(generator(args.length), out)
    print(f"wrote {args.kind} (L={args.length}) to {out}")


def cmd_boundaries(args):
    signal = read_signal_csv(_existing_file(args.input), args.duration)
    seg = _segmentation(signal, args)
    hz = seg.to_hz(signal.sample_rate)
    print(f"{seg.channel_count} channels")
    for k, (w, f) in enumerate(zip(seg.boundaries, hz)):
        print(f"w{k} = {w:.10f} rad  ({f:.6f} Hz)")
    if args.output:
        export.write_json(seg.tolist(), _output_file(args.output))


def cmd_detect_n(args):
    signal = read_signal_csv(_existing_file(args.input))
    maxima = find_local_maxima(half_spectrum(signal))
    for alpha in args.alpha:
        kept = estimate_num_modes(maxima, alpha)
        bands = max(kept + 1 if args.anchor_zero else kept, 1)
        print(f"alpha={alpha:g} bands={bands}")


def cmd_ewt(args, modes=False):
    signal = read_signal_csv(_existing_file(args.input), args.duration)
    outdir = _output_dir(args.output)
    bank = _bank(signal, args)
    dec = ewt_forward(signal, bank)
    manifest = export.write_decomposition(dec, outdir, modes=extract_modes(dec) if modes else None)
    if args.filterbank:
        export.write_filterbank_csv(bank, os.path.join(outdir, "filterbank.csv"))
    what = "modes" if modes else "channels"
    print(f"wrote {bank.channel_count} {what} to {outdir} (gamma={bank.gamma:.6g}, tight={manifest['tight_frame']})")


def cmd_iewt(args):
    if not os.path.isfile(os.path.join(args.input, export.MANIFEST)):
        raise FileNotFoundError(f"no {export.MANIFEST} in {args.input}")
    reference = read_signal_csv(_existing_file(args.reference)) if args.reference else None
    dec = export.read_decomposition(args.input)
    recon = ewt_inverse(dec)
    if args.output:
        write_signal_csv(recon, _output_file(args.output))
    if reference is not None:
        if reference.sample_count != recon.sample_count:
            raise ValueError(f"reference has {reference.sample_count} samples, reconstruction {recon.sample_count}")
        ref = reference.samples
        err = np.linalg.norm(recon.samples - ref) / max(np.linalg.norm(ref), np.finfo(float).tiny)
        print(f"relative L2 error: {err:.3e}")
    else:
        print(f"reconstructed {recon.sample_count} samples")


def cmd_tfr(args):
    signal = read_signal_csv(_existing_file(args.input))
    outdir = _output_dir(args.output)
    dec = ewt_forward(signal, _bank(signal, args))
    tfr = build_tfr(dec)
    write_matrix_csv(
        tfr.triples(), os.path.join(outdir, "tfr.csv"), header=["channel", "t_index", "omega_rad_per_sample", "amplitude"]
    )
    if args.raster:
        raster = tfr.rasterize(*args.raster)
        write_matrix_csv(raster, os.path.join(outdir, "raster.csv"))
        # frequency increases upwards in the picture
        write_pgm(np.flipud(raster.T), os.path.join(outdir, "raster.pgm"))
    export.write_json(dec.bank.manifest(), os.path.join(outdir, export.MANIFEST))
    print(f"wrote {tfr.channel_count * tfr.length} TFR points to {outdir}")


def cmd_ewt2d(args):
    image = read_image_csv(_existing_file(args.input))
    outdir = _output_dir(args.output)
    dec = ewt2d_forward(image, args.row_channels, args.col_channels, args.gamma)
    data = ewt2d_modes(dec) if args.modes else dec.subbands
    for m in range(dec.shape[0]):
        for n in range(dec.shape[1]):
            stem = os.path.join(outdir, f"subband_{m}_{n}")
            write_matrix_csv(data[m, n], stem + ".csv")
            write_pgm(data[m, n], stem + ".pgm")
    manifest = dec.manifest()
    manifest["kind"] = "modes" if args.modes else "subbands"
    export.write_json(manifest, os.path.join(outdir, export.MANIFEST))
    print(f"wrote {dec.subband_count} subbands ({dec.shape[0]}x{dec.shape[1]}) to {outdir}")


def cmd_emd(args):
    signal = read_signal_csv(_existing_file(args.input))
    outdir = _output_dir(args.output)
    result = emd(signal, args.max_imfs, args.max_iter, args.sd_threshold)
    rows = [imf.samples for imf in result.imfs]
    export.write_channels(
        rows + [result.residue.samples],
        outdir,
        "imf",
        {"L": signal.sample_count, "n_imfs": len(rows), "residue": f"imf_{len(rows)}.csv"},
    )
    write_signal_csv(result.residue, os.path.join(outdir, "residue.csv"))
    print(f"wrote {len(rows)} IMFs and the residue to {outdir}")


COMMANDS = {
    "generate": cmd_generate,
    "boundaries": cmd_boundaries,
    "detect-n": cmd_detect_n,
    "ewt": cmd_ewt,
    "modes": lambda args: cmd_ewt(args, modes=True),
    "iewt": cmd_iewt,
    "tfr": cmd_tfr,
    "ewt2d": cmd_ewt2d,
    "emd": cmd_emd,
}


def _fft_workers():
    value = os.environ.get("EWT_THREADS")
    if not value:
        return contextlib.nullcontext()
    try:
        workers = int(value)
    except ValueError:
        raise UsageError(f"EWT_THREADS must be an integer, got {value!r}") from None
    if workers < 1:
        raise UsageError(f"EWT_THREADS must be positive, got {workers}")
    return scipy.fft.set_workers(workers)


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with _fft_workers(), warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            COMMANDS[args.command](args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except UsageError as exc:
        print(f"ewt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CsvFormatError) as exc:
        print(f"ewt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, FloatingPointError, ArithmeticError) as exc:
        print(f"ewt: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
