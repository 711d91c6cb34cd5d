"""Physical parameters of the 2DEG / cavity system and derived quantities.

All quantities are SI. Frequencies are angular (rad/s) unless a name ends in
``_hz`` or ``_ghz``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants as _c

GAAS_MASS_RATIO = 0.067
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhysParams:
    """Material and geometry parameters.

    Defaults describe the GaAs multiple-quantum-well sample in the woodpile
    cavity: total areal density 3.08e16 m^-2, lattice constant 333 um and
    cyclotron decay rate 2*pi*5.7 GHz. ``m_eff`` defaults to 0.067 m_e.
    """

    n_e: float = 3.08e16
    m_eff: float = GAAS_MASS_RATIO * _c.m_e
    a: float = 333e-6
    gamma_c: float = TWO_PI * 5.7e9
    d_qw: float = 2e-6
    eps0: float = field(default=_c.epsilon_0)
    e_charge: float = field(default=_c.e)
    hbar: float = field(default=_c.hbar)

    def __post_init__(self):
        for name in ("n_e", "m_eff", "a", "gamma_c", "d_qw", "eps0", "e_charge", "hbar"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    def replace(self, **changes) -> "PhysParams":
        from dataclasses import replace

        return replace(self, **changes)


def cyclotron_frequency(B: float, params: PhysParams | None = None) -> float:
    """Cyclotron angular frequency ``e B / m_eff`` for a field magnitude ``B`` [T]."""
    params = params or PhysParams()
    B = float(B)
    if B < 0:
        raise ValueError(f"magnetic field must be >= 0, got {B}")
    return params.e_charge * B / params.m_eff


def field_for_cyclotron(omega_c: float, params: PhysParams | None = None) -> float:
    """Inverse of :func:`cyclotron_frequency`."""
    params = params or PhysParams()
    if omega_c < 0:
        raise ValueError("omega_c must be >= 0")
    return omega_c * params.m_eff / params.e_charge


def magnetic_length(B: float, params: PhysParams | None = None) -> float:
    """``sqrt(hbar / (e B))``. Informational only; not used by the bosonic model."""
    params = params or PhysParams()
    if B <= 0:
        raise ValueError("magnetic length needs B > 0")
    return float(np.sqrt(params.hbar / (params.e_charge * B)))


def filling_factor(B: float, params: PhysParams | None = None) -> float:
    """Landau-level filling factor ``2 pi n_e l_c^2``."""
    params = params or PhysParams()
    return TWO_PI * params.n_e * magnetic_length(B, params) ** 2


def plasma_frequency_sq(params: PhysParams | None = None) -> float:
    """``n_e e^2 / (eps0 m_eff)`` with areal ``n_e`` (units m s^-2).

    Dividing by a sheet thickness gives the bulk plasma frequency squared.
    """
    params = params or PhysParams()
    return params.n_e * params.e_charge**2 / (params.eps0 * params.m_eff)
