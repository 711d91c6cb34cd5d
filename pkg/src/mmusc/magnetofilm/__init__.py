"""Gyrotropic 2DEG permittivity and thin-film transmission."""
from .film import (EPS_GAAS, FilmSpectrum, GyroParams, Layer, LayerStack, circular_eigenpermittivities, cr_dip_frequency,
                   film_transmission, permittivity_components, permittivity_tensor, sheet_conductivity,
                   stack_amplitude, stack_response)

__all__ = ["EPS_GAAS", "FilmSpectrum", "GyroParams", "Layer", "LayerStack", "circular_eigenpermittivities", "cr_dip_frequency",
           "film_transmission", "permittivity_components", "permittivity_tensor", "sheet_conductivity",
           "stack_amplitude", "stack_response"]
