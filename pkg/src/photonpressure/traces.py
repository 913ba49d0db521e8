"""Trace containers and the plain-text file formats.

Complex reflection traces are stored as three whitespace-separated columns
(frequency_hz, re, im); spectra as two columns (frequency_hz, value) with a
header line declaring the units.  Comment lines start with '#'.  Parameter
sets and fit reports are flat JSON documents with dotted keys and SI values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TraceFormatError

__all__ = [
    "ComplexTrace",
    "SpectrumTrace",
    "read_complex_trace",
    "write_complex_trace",
    "read_spectrum_trace",
    "write_spectrum_trace",
    "read_points",
    "write_columns",
    "read_params",
    "write_params",
]


def _check_grid(freq):
    freq = np.asarray(freq, dtype=float)
    if freq.ndim != 1 or freq.size < 2:
        raise DomainError("frequency grid must be a 1-D array with >= 2 points")
    if not np.all(np.diff(freq) > 0):
        raise DomainError("frequency grid must be strictly increasing")
    return freq


@dataclass(frozen=True)
class ComplexTrace:
    """Frequency-indexed complex reflection data."""

    frequency_hz: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        freq = _check_grid(self.frequency_hz)
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != freq.shape:
            raise DomainError("values must match the frequency grid")
        if not np.all(np.isfinite(vals)):
            raise DomainError("trace values must be finite")
        object.__setattr__(self, "frequency_hz", freq)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.frequency_hz.size


@dataclass(frozen=True)
class SpectrumTrace:
    """Frequency-indexed real data (PSD or any scalar spectrum)."""

    frequency_hz: np.ndarray
    values: np.ndarray
    units: str = "photon"

    def __post_init__(self):
        freq = _check_grid(self.frequency_hz)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != freq.shape:
            raise DomainError("values must match the frequency grid")
        if not np.all(np.isfinite(vals)):
            raise DomainError("trace values must be finite")
        object.__setattr__(self, "frequency_hz", freq)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.frequency_hz.size


def read_points(path, n_columns=None):
    """Read a whitespace-separated numeric table, skipping '#' comments.

    Returns (header, array); ``header`` maps '# key: value' comment entries.
    Raises :class:`TraceFormatError` with the offending line number on any
    parse failure.
    """
    header: dict[str, str] = {}
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    header[key.strip()] = value.strip()
                continue
            parts = line.split()
            try:
                row = [float(p) for p in parts]
            except ValueError:
                raise TraceFormatError(f"could not parse {line!r}", line=lineno)
            if n_columns is not None and len(row) != n_columns:
                raise TraceFormatError(
                    f"expected {n_columns} columns, found {len(row)}", line=lineno)
            if rows and len(row) != len(rows[-1]):
                raise TraceFormatError("inconsistent column count", line=lineno)
            rows.append(row)
    if not rows:
        raise TraceFormatError(f"no data rows in {path}")
    return header, np.asarray(rows, dtype=float)


def write_columns(path, columns, labels, header=None):
    """Write numeric columns with a '# columns: ...' header line."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# columns: " + " ".join(labels) + "\n")
        for key, value in (header or {}).items():
            fh.write(f"# {key}: {value}\n")
        for row in zip(*cols):
            fh.write(" ".join(format(v, ".17g") for v in row) + "\n")


def read_complex_trace(path) -> ComplexTrace:
    """Read a three-column (frequency_hz, re, im) file."""
    _, data = read_points(path, n_columns=3)
    return ComplexTrace(data[:, 0], data[:, 1] + 1j * data[:, 2])


def write_complex_trace(path, trace: ComplexTrace) -> None:
    write_columns(path, [trace.frequency_hz, trace.values.real, trace.values.imag],
                  ["frequency_hz", "re", "im"])


def read_spectrum_trace(path) -> SpectrumTrace:
    """Read a two-column (frequency_hz, value) file; units from the header."""
    header, data = read_points(path, n_columns=2)
    return SpectrumTrace(data[:, 0], data[:, 1], units=header.get("units", "photon"))


def write_spectrum_trace(path, trace: SpectrumTrace) -> None:
    write_columns(path, [trace.frequency_hz, trace.values],
                  ["frequency_hz", "value"], header={"units": trace.units})


def read_params(path) -> dict:
    """Read a flat JSON key/value document (dotted keys, SI values)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise TraceFormatError("parameter document must be a JSON object")
    flat: dict[str, float | str] = {}
    for key, value in doc.items():
        if isinstance(value, dict):  # one level of nesting is tolerated
            for sub, v in value.items():
                flat[f"{key}.{sub}"] = v
        else:
            flat[key] = value
    return flat


def write_params(path, params: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params, fh, indent=2, sort_keys=True)
        fh.write("\n")
