"""On-disk layout for decompositions: per-channel CSVs, a column table, and a JSON manifest."""
import json
import os
import warnings

import numpy as np

from .filterbank import FilterBank, build_filterbank
from .segmentation import Segmentation
from .signals import atomic_write, read_signal_csv, write_matrix_csv, write_signal_csv
from .transform import EwtDecomposition

MANIFEST = "manifest.json"


def write_json(obj, path):
    atomic_write(path, json.dumps(obj, indent=2) + "\n")


def read_manifest(directory):
    with open(os.path.join(directory, MANIFEST)) as fh:
        return json.load(fh)


def bank_from_manifest(manifest):
    """Rebuild the exact filter bank recorded in a manifest."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_filterbank(Segmentation(manifest["boundaries"]), manifest["gamma"], manifest["L"])


def write_filterbank_csv(bank, path):
    """One column per filter, one row per DFT bin."""
    header = ["bin", "omega"] + [f"filter_{n}" for n in range(bank.channel_count)]
    omega = 2 * np.pi * np.arange(bank.length) / bank.length
    table = np.column_stack([np.arange(bank.length), omega, bank.responses.T])
    write_matrix_csv(table, path, header=header)


def write_channels(rows, directory, prefix, manifest):
    """Write ``prefix_k.csv`` per row, ``prefix_table.csv`` (one column each) and the manifest."""
    os.makedirs(directory, exist_ok=True)
    for k, row in enumerate(rows):
        write_signal_csv(row, os.path.join(directory, f"{prefix}_{k}.csv"))
    header = [f"{prefix}_{k}" for k in range(len(rows))]
    write_matrix_csv(np.column_stack(rows), os.path.join(directory, f"{prefix}_table.csv"), header=header)
    write_json(manifest, os.path.join(directory, MANIFEST))


def write_decomposition(decomposition, directory, modes=None):
    """Export channels (or, when ``modes`` is given, modes) with a manifest that rebuilds the bank."""
    manifest = decomposition.bank.manifest()
    manifest["duration"] = decomposition.duration
    if modes is None:
        manifest["kind"] = "channels"
        write_channels(list(decomposition.channels), directory, "channel", manifest)
    else:
        manifest["kind"] = "modes"
        write_channels([m.samples for m in modes], directory, "mode", manifest)
    return manifest


def read_decomposition(directory):
    manifest = read_manifest(directory)
    if manifest.get("kind", "channels") != "channels":
        raise ValueError(f"{directory} holds {manifest['kind']}, not EWT channels")
    bank = bank_from_manifest(manifest)
    channels = [
        read_signal_csv(os.path.join(directory, f"channel_{k}.csv")).samples for k in range(manifest["n_channels"])
    ]
    return EwtDecomposition(np.stack(channels), bank, manifest.get("duration", 1.0))
