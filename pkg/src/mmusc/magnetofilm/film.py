"""Gyrotropic Drude sheet and normal-incidence multilayer transmission.

Sign convention: time dependence exp(-i w t), so absorption means Im(eps) >= 0.
The cyclotron frequency carries the sign of B, which makes eps_xy odd in B.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.constants import c as C_LIGHT, e as E_CHARGE, epsilon_0, m_e

from ..core.params import GAAS_MASS_RATIO, TWO_PI
from ..inout.transmission import SpectrumSeries

EPS_GAAS = 12.96


@dataclass(frozen=True)
class GyroParams:
    """2DEG sheet parameters. ``n_e`` is the areal density spread over thickness ``d``."""

    eps_bg: float = EPS_GAAS
    n_e: float = 3.08e16
    m_eff: float = GAAS_MASS_RATIO * m_e
    gamma: float = TWO_PI * 5.7e9
    d: float = 2e-6
    B: float = 0.0

    def __post_init__(self):
        if not self.eps_bg > 1:
            raise ValueError("eps_bg must exceed 1")
        if not self.d > 0:
            raise ValueError("sheet thickness must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.n_e < 0 or not self.m_eff > 0:
            raise ValueError("n_e must be >= 0 and m_eff > 0")

    @property
    def omega_pl_sq(self) -> float:
        """n_e e^2 / (eps0 m_eff); with an areal density the 1/d factor completes the 3-D plasma frequency."""
        return self.n_e * E_CHARGE**2 / (epsilon_0 * self.m_eff)

    @property
    def omega_pl(self) -> float:
        return float(np.sqrt(self.omega_pl_sq))

    @property
    def omega_c(self) -> float:
        """Signed cyclotron frequency e B / m_eff."""
        return E_CHARGE * self.B / self.m_eff

    def replace(self, **kw) -> "GyroParams":
        return replace(self, **kw)


def _check_omega(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("angular frequency must be positive")
    return w


def permittivity_components(omega, gp: GyroParams):
    """(eps_xx, eps_xy, eps_zz) of the gyrotropic sheet."""
    w = _check_omega(omega)
    wg = w + 1j * gp.gamma
    den = w * gp.d * (wg**2 - gp.omega_c**2)
    exx = gp.eps_bg - gp.omega_pl_sq * wg / den
    exy = 1j * gp.omega_pl_sq * gp.omega_c / den
    return exx, exy, np.full_like(exx, gp.eps_bg)


def permittivity_tensor(omega, gp: GyroParams) -> np.ndarray:
    """3x3 tensor [[xx, xy, 0], [-xy, xx, 0], [0, 0, zz]]; leading axes follow ``omega``."""
    exx, exy, ezz = permittivity_components(omega, gp)
    t = np.zeros(np.shape(exx) + (3, 3), dtype=complex)
    t[..., 0, 0] = t[..., 1, 1] = exx
    t[..., 0, 1] = exy
    t[..., 1, 0] = -exy
    t[..., 2, 2] = ezz
    return t


def circular_eigenpermittivities(tensor) -> tuple[np.ndarray, np.ndarray]:
    """eps_pm = eps_xx -/+ i eps_xy, eigenvalues for the (x -/+ i y) / sqrt 2 fields.

    eps_minus is the CR-active channel for B > 0.
    """
    t = np.asarray(tensor)
    if t.shape[-2:] != (3, 3):
        raise ValueError("expected 3x3 tensor(s)")
    exx, exy = t[..., 0, 0], t[..., 0, 1]
    if not (np.allclose(t[..., 1, 1], exx) and np.allclose(t[..., 1, 0], -exy)):
        raise ValueError("tensor is not of gyrotropic form")
    return exx - 1j * exy, exx + 1j * exy


@dataclass(frozen=True)
class Layer:
    thickness: float
    eps: complex


@dataclass(frozen=True)
class LayerStack:
    """Layers between an incident and an exit half-space, light entering layer 0 first.

    ``sheet_index`` is the position at which the gyrotropic sheet (thickness
    ``GyroParams.d``) is inserted into ``layers``; ``None`` means no sheet.
    """

    layers: tuple[Layer, ...] = ()
    sheet_index: int | None = 0
    eps_in: complex = 1.0
    eps_out: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if any(not L.thickness > 0 for L in self.layers):
            raise ValueError("layer thicknesses must be positive")
        if self.sheet_index is not None and not 0 <= self.sheet_index <= len(self.layers):
            raise ValueError("sheet index out of range")

    @classmethod
    def sheet_on_substrate(cls, substrate_thickness: float = 60e-6, eps_sub: complex = EPS_GAAS) -> "LayerStack":
        return cls((Layer(substrate_thickness, eps_sub),), sheet_index=0)


def _index(eps):
    n = np.sqrt(np.asarray(eps, dtype=complex))
    # passive branch: Im n >= 0
    return np.where(n.imag < 0, -n, n)


def stack_response(omega, eps_layers: Sequence, thicknesses: Sequence[float], eps_in=1.0, eps_out=1.0):
    """Complex (t, r) amplitudes by the characteristic-matrix method.

    ``eps_layers`` entries may be scalars or arrays matching ``omega``.
    """
    w = _check_omega(omega)
    n0, ns = _index(eps_in), _index(eps_out)
    m11 = np.ones_like(w, dtype=complex)
    m22 = np.ones_like(w, dtype=complex)
    m12 = np.zeros_like(w, dtype=complex)
    m21 = np.zeros_like(w, dtype=complex)
    for eps, d in zip(eps_layers, thicknesses):
        n = _index(eps)
        delta = n * w * d / C_LIGHT
        c, s = np.cos(delta), np.sin(delta)
        a11, a12, a21, a22 = c, -1j * s / n, -1j * n * s, c
        m11, m12, m21, m22 = (m11 * a11 + m12 * a21, m11 * a12 + m12 * a22,
                              m21 * a11 + m22 * a21, m21 * a12 + m22 * a22)
    den = n0 * m11 + n0 * ns * m12 + m21 + ns * m22
    return 2 * n0 / den, (n0 * m11 + n0 * ns * m12 - m21 - ns * m22) / den


def stack_amplitude(omega, eps_layers: Sequence, thicknesses: Sequence[float], eps_in=1.0, eps_out=1.0) -> np.ndarray:
    """Complex transmission amplitude of the stack."""
    return stack_response(omega, eps_layers, thicknesses, eps_in, eps_out)[0]


@dataclass
class FilmSpectrum:
    freq_hz: np.ndarray
    T_plus: np.ndarray
    T_minus: np.ndarray
    T_xx: np.ndarray
    T_xy: np.ndarray
    A_plus: np.ndarray
    A_minus: np.ndarray
    meta: dict = field(default_factory=dict)

    def channel(self, name: str) -> SpectrumSeries:
        return SpectrumSeries(self.freq_hz, getattr(self, f"T_{name}"), dict(self.meta, channel=name))

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            fh.write("# time convention exp(-i w t); T_minus is the CR-active channel for B > 0\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["freq_GHz", "T_plus", "T_minus", "T_xx", "T_xy"])
            for row in zip(self.freq_hz / 1e9, self.T_plus, self.T_minus, self.T_xx, self.T_xy):
                w.writerow([f"{v:.10g}" for v in row])
        return path


def film_transmission(stack: LayerStack, gp: GyroParams, freq_hz) -> FilmSpectrum:
    """Power transmission of the stack for circular and linear input polarizations.

    Circular absorptances ``A = 1 - T - R`` are returned alongside; T_xx and
    T_xy are the co- and cross-polarized transmittances for x-polarized input.
    """
    f = np.atleast_1d(np.asarray(freq_hz, dtype=float))
    w = TWO_PI * f
    ratio = (_index(stack.eps_out) / _index(stack.eps_in)).real
    eps_p, eps_m = circular_eigenpermittivities(permittivity_tensor(w, gp))
    t, A = {}, {}
    for name, eps_sheet in (("plus", eps_p), ("minus", eps_m)):
        eps = [L.eps for L in stack.layers]
        th = [L.thickness for L in stack.layers]
        if stack.sheet_index is not None:
            eps.insert(stack.sheet_index, eps_sheet)
            th.insert(stack.sheet_index, gp.d)
        t[name], r = stack_response(w, eps, th, stack.eps_in, stack.eps_out)
        A[name] = 1.0 - ratio * np.abs(t[name]) ** 2 - np.abs(r) ** 2
    txx = 0.5 * (t["plus"] + t["minus"])
    txy = 0.5j * (t["minus"] - t["plus"])
    out = [ratio * np.abs(x) ** 2 for x in (t["plus"], t["minus"], txx, txy)]
    if not all(np.all(np.isfinite(x)) for x in out):
        raise FloatingPointError("non-finite transmission (check layer permittivities)")
    return FilmSpectrum(f, *out, A["plus"], A["minus"], meta={"B": gp.B})


def sheet_conductivity(omega, gp: GyroParams) -> tuple[np.ndarray, np.ndarray]:
    """Circular 2-D conductivities (sigma_plus, sigma_minus) of the Drude sheet [S]."""
    w = _check_omega(omega)
    s0 = gp.n_e * E_CHARGE**2 / gp.m_eff
    return 1j * s0 / (w + 1j * gp.gamma + gp.omega_c), 1j * s0 / (w + 1j * gp.gamma - gp.omega_c)


def cr_dip_frequency(stack: LayerStack, gp: GyroParams, freq_hz, channel: str = "minus") -> float:
    """Frequency [Hz] of the CR absorption peak in a circular channel.

    Absorptance is dissipated only in the sheet, so it carries no substrate
    Fabry-Perot dispersion beyond the slowly varying local-field factor.
    """
    f = np.asarray(freq_hz, dtype=float)
    A = getattr(film_transmission(stack, gp, f), f"A_{channel}")
    return float(f[np.argmax(A)])
