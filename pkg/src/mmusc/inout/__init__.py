"""Input-output transmission spectra."""
from .transmission import (DissipationSpec, SingularResponse, SpectrumSeries, map_array, ridge_frequencies,
                           transmission_map, transmission_spectrum, write_map_csv, write_map_matrix,
                           write_spectrum_csv)

__all__ = ["DissipationSpec", "SingularResponse", "SpectrumSeries", "map_array", "ridge_frequencies",
           "transmission_map", "transmission_spectrum", "write_map_csv", "write_map_matrix",
           "write_spectrum_csv"]
