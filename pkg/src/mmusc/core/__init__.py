from .couplings import (
    CouplingField,
    CouplingSet,
    FigureOfMerit,
    a2_coefficients,
    coupling_field,
    coupling_prefactor,
    couplings_at_field,
    effective_coupling,
    fom_eta,
    fom_lambda,
    overlap_xi,
)
from .params import (
    PhysParams,
    cyclotron_frequency,
    field_for_cyclotron,
    filling_factor,
    magnetic_length,
    plasma_frequency_sq,
)
from .profile_io import convert_profile, read_profile, write_profile
from .profiles import (
    FourierSet,
    ModeProfile,
    fourier_decompose,
    grid_axis,
    reconstruct,
    toy_field,
    toy_mode_profile,
)
from .vacuum import VacuumMaps, mode_norm, vacuum_maps

__all__ = [name for name in dir() if not name.startswith("_")]
