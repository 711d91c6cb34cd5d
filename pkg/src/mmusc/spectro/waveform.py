"""Time-domain waveforms and truncated, zero-padded amplitude spectra."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MIN_SAMPLES = 16


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled field trace; ``t`` in seconds."""

    t: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        E = np.asarray(self.E, dtype=float)
        if t.ndim != 1 or t.shape != E.shape:
            raise ValueError("t and E must be 1-D arrays of equal length")
        if t.size < MIN_SAMPLES:
            raise ValueError(f"waveform needs at least {MIN_SAMPLES} samples")
        dt = np.diff(t)
        if np.any(dt <= 0) or not np.allclose(dt, dt[0], rtol=1e-6, atol=0):
            raise ValueError("time samples must be uniformly spaced and increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "E", E)

    @property
    def dt(self) -> float:
        return float((self.t[-1] - self.t[0]) / (self.t.size - 1))

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


@dataclass(frozen=True)
class AmplitudeSpectrum:
    freq_hz: np.ndarray
    amplitude: np.ndarray

    @property
    def df(self) -> float:
        return float(self.freq_hz[1] - self.freq_hz[0])

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["freq_GHz", "amplitude"])
            for f, a in zip(self.freq_hz / 1e9, self.amplitude):
                w.writerow([f"{f:.10g}", f"{a:.10g}"])
        return path


def window_and_fft(w: Waveform, t_cut: float | None = None, pad_factor: float = 1.0,
                   taper: str | None = None) -> AmplitudeSpectrum:
    """Rectangular truncation at ``t_cut`` (measured from the first sample), zero padding, |rfft|.

    The transform length is ``ceil(pad_factor * len(record))`` so that bin
    spacing depends only on the padding, not on the cut. ``taper='hann'``
    applies a Hann window to the kept samples (off by default).
    """
    if pad_factor < 1:
        raise ValueError("pad_factor must be >= 1")
    E = w.E.copy()
    if t_cut is not None:
        if t_cut <= 0:
            raise ValueError("t_cut must be positive")
        if t_cut > w.duration + w.dt:
            raise ValueError("t_cut lies beyond the end of the record")
        keep = (w.t - w.t[0]) < t_cut
    else:
        keep = np.ones(E.size, dtype=bool)
    E = E[keep]
    if taper == "hann":
        E = E * np.hanning(E.size)
    elif taper is not None:
        raise ValueError(f"unknown taper {taper!r}")
    n = int(np.ceil(pad_factor * w.t.size))
    spec = np.abs(np.fft.rfft(E, n=n)) * w.dt
    return AmplitudeSpectrum(np.fft.rfftfreq(n, w.dt), spec)


def read_waveform_csv(path) -> Waveform:
    """Two-column CSV ``t_ps, E`` with a header row; '#' lines are comments."""
    rows = []
    with Path(path).open() as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith("#"):
                rows.append(s)
    if not rows or [c.strip() for c in rows[0].split(",")] != ["t_ps", "E"]:
        raise ValueError(f"{path}: expected header 't_ps,E'")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    return Waveform(data[:, 0] * 1e-12, data[:, 1])


def write_waveform_csv(w: Waveform, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["t_ps", "E"])
        for t, e in zip(w.t * 1e12, w.E):
            wr.writerow([f"{t:.10g}", f"{e:.10g}"])
    return path
