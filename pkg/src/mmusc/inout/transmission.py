"""Input-output transmission of the dissipative multimode Hopfield system.

Each photon mode couples to two identical Markovian reservoirs (top and
bottom) sharing its total decay rate Gamma_p = omega_p / Q_p; each CR mode
decays at Gamma_c. With ``alpha(t) = alpha(w) exp(-i w t)`` the Langevin
equations for the full (normal and anomalous) operator vector read

    (i (K M - w) + Gamma / 2) alpha = sqrt(Gamma_top) alpha_in

and the bottom-port output is ``sqrt(Gamma_p / 2) a_p``. The drive populates
the top ports of every photon mode of the input polarization equally.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from ..core.params import TWO_PI, PhysParams
from ..hopfield.hamiltonian import HopfieldMatrix


class SingularResponse(RuntimeError):
    pass


@dataclass(frozen=True)
class DissipationSpec:
    """Photon decay rates per (p, sigma) and the CR decay rate, all in rad/s."""

    Gamma_p: np.ndarray
    Gamma_c: float

    def __post_init__(self):
        g = np.asarray(self.Gamma_p, dtype=float)
        object.__setattr__(self, "Gamma_p", g)
        if np.any(g <= 0) or not self.Gamma_c > 0:
            raise ValueError("all decay rates must be positive")

    @classmethod
    def from_quality(cls, omega_p, Q, Gamma_c: float | None = None) -> "DissipationSpec":
        omega_p, Q = np.asarray(omega_p, dtype=float), np.asarray(Q, dtype=float)
        if np.any(Q <= 0):
            raise ValueError("quality factors must be positive")
        return cls(omega_p / Q, PhysParams().gamma_c if Gamma_c is None else Gamma_c)

    @classmethod
    def for_model(cls, profiles, params: PhysParams | None = None) -> "DissipationSpec":
        params = params or PhysParams()
        return cls.from_quality([p.omega_p for p in profiles], [p.Q for p in profiles], params.gamma_c)


@dataclass
class SpectrumSeries:
    freq_hz: np.ndarray
    T: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def freq_ghz(self) -> np.ndarray:
        return self.freq_hz / 1e9

    def peaks(self, prominence: float = 1e-3) -> np.ndarray:
        """Frequencies [Hz] of local transmission maxima."""
        idx, _ = find_peaks(self.T, prominence=prominence * max(float(self.T.max()), 1e-300))
        return self.freq_hz[idx]


def _pol_indices(H: HopfieldMatrix, sigma: str) -> np.ndarray:
    idx = H.polarization_indices(sigma)
    if idx.size == 0:
        raise ValueError(f"no photon modes with polarization {sigma!r}")
    return idx


def transmission_spectrum(H: HopfieldMatrix, diss: DissipationSpec, freq_hz, sigma_in: str,
                          sigma_out: str, amplitude: complex = 1.0) -> SpectrumSeries:
    """Normalized transmission T_{sigma_in, sigma_out}(omega) on a frequency grid [Hz]."""
    n, N = H.n_photon, H.n_modes
    if diss.Gamma_p.shape != (n,):
        raise ValueError(f"need {n} photon decay rates, got {diss.Gamma_p.shape}")
    if amplitude == 0:
        raise ValueError("input amplitude must be nonzero")
    f = np.atleast_1d(np.asarray(freq_hz, dtype=float))
    w = TWO_PI * f
    i_in, i_out = _pol_indices(H, sigma_in), _pol_indices(H, sigma_out)

    gam = np.r_[diss.Gamma_p, np.full(N - n, diss.Gamma_c)]
    gam = np.r_[gam, gam]
    K = np.r_[np.ones(N), -np.ones(N)]
    KM = K[:, None] * H.M
    scale = float(np.abs(np.diag(H.M)).max()) or 1.0

    drive = np.zeros(2 * N, dtype=complex)
    drive[i_in] = np.sqrt(diss.Gamma_p[i_in] / 2) * amplitude

    # R(w) = i (KM - w) + Gamma/2, solved for all frequencies at once
    R = 1j * (KM[None] - w[:, None, None] * np.eye(2 * N)[None]) + np.diag(gam / 2)[None]
    R /= scale
    cond = np.linalg.cond(R)
    bad = ~np.isfinite(cond) | (cond > 1e14)
    if np.any(bad):
        raise SingularResponse(f"singular response matrix at {f[bad][0]:.6g} Hz")
    alpha = np.linalg.solve(R, np.broadcast_to(drive / scale, (len(w), 2 * N))[..., None])[..., 0]
    out = np.sqrt(diss.Gamma_p[i_out] / 2) * alpha[:, i_out]
    T = np.sum(np.abs(out) ** 2, axis=1) / (len(i_in) * abs(amplitude) ** 2)
    return SpectrumSeries(f, T, {"B": H.B, "sigma_in": sigma_in, "sigma_out": sigma_out, "flags": H.flags})


def transmission_map(model, B_grid, freq_hz, sigma_in: str, sigma_out: str | None = None,
                     diss: DissipationSpec | None = None) -> list[SpectrumSeries]:
    """One SpectrumSeries per field for a ``HopfieldModel``."""
    sigma_out = sigma_in if sigma_out is None else sigma_out
    diss = diss or DissipationSpec.for_model(model.profiles, model.params)
    return [transmission_spectrum(model.hamiltonian(B), diss, freq_hz, sigma_in, sigma_out)
            for B in np.asarray(B_grid, dtype=float)]


def map_array(series: list[SpectrumSeries]) -> np.ndarray:
    """Stack a map as T[iB, ifreq]."""
    return np.array([s.T for s in series])


def ridge_frequencies(series: SpectrumSeries, prominence: float = 1e-3) -> np.ndarray:
    return series.peaks(prominence)


def write_spectrum_csv(series: SpectrumSeries, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_GHz", "T"])
        for f, t in zip(series.freq_ghz, series.T):
            w.writerow([f"{f:.10g}", f"{t:.10g}"])
    return path


def write_map_csv(series: list[SpectrumSeries], path) -> Path:
    """Long format: B_T, freq_GHz, T."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["B_T", "freq_GHz", "T"])
        for s in series:
            for f, t in zip(s.freq_ghz, s.T):
                w.writerow([f"{s.meta['B']:.10g}", f"{f:.10g}", f"{t:.10g}"])
    return path


def write_map_matrix(series: list[SpectrumSeries], path) -> Path:
    """Rectangular format: header row of frequencies [GHz], then one row per B starting with B [T]."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["B_T\\freq_GHz"] + [f"{f:.10g}" for f in series[0].freq_ghz])
        for s in series:
            w.writerow([f"{s.meta['B']:.10g}"] + [f"{t:.10g}" for t in s.T])
    return path
