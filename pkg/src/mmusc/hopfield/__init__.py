"""Multimode Hopfield model: Hamiltonian, Bogoliubov diagonalization, sweeps."""
from .bogoliubov import DiagonalizationError, PolaritonSolution, diagonalize
from .hamiltonian import PRESETS, HamiltonianFlags, HopfieldMatrix, assemble, build_hamiltonian
from .observables import BRIGHT_TOL, bright_mask, classify_branches, ground_state_correlations, photon_weights
from .scans import (CollapsePath, MPWeightScan, collapse_deviation, collapse_paths, mp_weight_scan,
                    toy_point)
from .sweep import (DispersionSweep, HopfieldModel, MPCrossing, NoMiddlePolariton, dispersion_sweep,
                    find_mp_crossings, mp_weights, toy_model)

__all__ = [
    "DiagonalizationError", "PolaritonSolution", "diagonalize",
    "PRESETS", "HamiltonianFlags", "HopfieldMatrix", "assemble", "build_hamiltonian",
    "BRIGHT_TOL", "bright_mask", "classify_branches", "ground_state_correlations", "photon_weights",
    "DispersionSweep", "HopfieldModel", "MPCrossing", "NoMiddlePolariton", "dispersion_sweep",
    "find_mp_crossings", "mp_weights", "toy_model",
    "CollapsePath", "MPWeightScan", "collapse_deviation", "collapse_paths", "mp_weight_scan", "toy_point",
]
