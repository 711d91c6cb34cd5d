"""Vacuum-fluctuation maps and z-localization of cavity modes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .params import PhysParams
from .profiles import COMPONENTS, ModeProfile

NORM_TOL = 1e-3


@dataclass(frozen=True)
class VacuumMaps:
    z: np.ndarray
    I_z: np.ndarray  # J/m
    E_std: np.ndarray  # V/m on the 2DEG plane
    zbar: float
    sigma_z: float
    norm: float


def _energy_density(profile: ModeProfile) -> np.ndarray:
    """eps * sum_j E_j^2 on the full 3D grid."""
    e2 = sum(np.abs(profile.grid[c]) ** 2 for c in COMPONENTS if c in profile.grid)
    eps = 1.0 if profile.eps is None else profile.eps
    return eps * e2


def mode_norm(profile: ModeProfile) -> float:
    """int (drho/a^2)(dz/a) eps sum_j E_j^2; equals 1 for a properly normalized mode."""
    if not profile.z_resolved:
        raise ValueError("normalization needs a z-resolved profile")
    w = _energy_density(profile).mean(axis=(0, 1))
    return float(trapezoid(w, profile.z) / profile.a)


def vacuum_maps(profile: ModeProfile, params: PhysParams | None = None, tol: float = NORM_TOL) -> VacuumMaps:
    """Vacuum energy density along z, in-plane field spread and z-localization.

    The energy-density profile ``I(z) = hbar omega_p / (4a) <eps sum_j E_j^2>_rho``
    is treated as a probability density in ``z/a`` to obtain the mean height
    and its standard deviation.
    """
    params = params or PhysParams()
    norm = mode_norm(profile)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"mode {profile.label} is not normalized: measured norm {norm:.6g}")
    z = np.asarray(profile.z, dtype=float)
    a = profile.a
    w = _energy_density(profile).mean(axis=(0, 1))
    I_z = params.hbar * profile.omega_p / (4.0 * a) * w
    zbar = float(trapezoid(z * w, z) / a)
    var = float(trapezoid((z - zbar) ** 2 * w, z) / a)
    e2_plane = np.abs(profile.in_plane("x")) ** 2 + np.abs(profile.in_plane("y")) ** 2
    E_std = np.sqrt(params.hbar * profile.omega_p / (2.0 * params.eps0 * a**3) * e2_plane)
    return VacuumMaps(z=z, I_z=I_z, E_std=E_std, zbar=zbar, sigma_z=float(np.sqrt(max(var, 0.0))), norm=norm)
