"""Magnetic-field sweeps: dispersions, branch tracking and middle-polariton analysis."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from ..core.couplings import CouplingSet, couplings_at_field
from ..core.params import TWO_PI, PhysParams, cyclotron_frequency
from ..core.profiles import ModeProfile, toy_mode_profile
from .bogoliubov import PolaritonSolution, diagonalize
from .hamiltonian import HamiltonianFlags, HopfieldMatrix, build_hamiltonian
from .observables import BRIGHT_TOL, bright_mask, photon_weights

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HopfieldModel:
    """Mode profiles plus material parameters; produces the Hamiltonian at any B.

    Couplings are rebuilt at each field since g scales as sqrt(omega_c); the
    A^2 coefficients are field independent.
    """

    profiles: tuple[ModeProfile, ...]
    params: PhysParams = field(default_factory=PhysParams)
    flags: HamiltonianFlags = field(default_factory=HamiltonianFlags)
    drop_tol: float = 1e-8

    def __post_init__(self):
        # decompose once; every B reuses the same Fourier sets
        profs = tuple(p if p.fourier is not None else p.with_fourier(drop_tol=self.drop_tol) for p in self.profiles)
        object.__setattr__(self, "profiles", profs)

    def couplings(self, B: float) -> CouplingSet:
        return couplings_at_field(self.profiles, B, self.params)

    def hamiltonian(self, B: float) -> HopfieldMatrix:
        return build_hamiltonian(self.couplings(B), self.flags, self.drop_tol)

    def solve(self, B: float) -> PolaritonSolution:
        return diagonalize(self.hamiltonian(B))

    def with_flags(self, flags: HamiltonianFlags) -> "HopfieldModel":
        return HopfieldModel(self.profiles, self.params, flags, self.drop_tol)

    def omega_c(self, B: float) -> float:
        return cyclotron_frequency(abs(B), self.params)


def toy_model(eps: float = 1.0, f1_hz: float = 0.339e12, f2_hz: float = 0.384e12,
              params: PhysParams | None = None, flags: HamiltonianFlags | None = None,
              grid_n: int = 128, Q: Sequence[float] = (72.0, 70.0)) -> HopfieldModel:
    """Two-mode, single-component toy cavity with tunable overlap ``eps``."""
    profiles = (
        toy_mode_profile(1, eps, grid_n, omega_p=TWO_PI * f1_hz, Q=Q[0]),
        toy_mode_profile(2, eps, grid_n, omega_p=TWO_PI * f2_hz, Q=Q[1]),
    )
    return HopfieldModel(profiles, params or PhysParams(), flags or HamiltonianFlags())


@dataclass
class DispersionSweep:
    """Per-B polariton spectra. Branch index = position in the ascending sort."""

    B: np.ndarray
    omega: np.ndarray  # (nB, N) rad/s
    omega_c: np.ndarray  # (nB,)
    weights: np.ndarray  # (nB, n_photon, N) |X|^2
    photon_fraction: np.ndarray  # (nB, N)
    stable: np.ndarray  # (nB, N)
    photon_labels: tuple
    model: HopfieldModel | None = None
    solutions: list | None = None

    @property
    def freq_hz(self) -> np.ndarray:
        return self.omega / TWO_PI

    @property
    def n_branches(self) -> int:
        return self.omega.shape[1]

    @property
    def unstable_B(self) -> np.ndarray:
        return self.B[~np.all(self.stable, axis=1)]

    def bright(self, tol: float = BRIGHT_TOL) -> np.ndarray:
        return self.photon_fraction > tol

    def jumps(self) -> np.ndarray:
        """|omega(B_{i+1}) - omega(B_i)| per sorted branch, shape (nB-1, N)."""
        return np.abs(np.diff(self.omega, axis=0))

    def discontinuities(self, threshold: float) -> list[tuple[float, int]]:
        """(B, branch) pairs where a sorted branch jumps by more than ``threshold`` [rad/s]."""
        bad = np.argwhere(self.jumps() > threshold)
        return [(float(self.B[i + 1]), int(k)) for i, k in bad]

    def tracked(self) -> np.ndarray:
        """Branch frequencies re-ordered by nearest-neighbour continuation in B."""
        out = self.omega.copy()
        for i in range(1, len(self.B)):
            prev = out[i - 1]
            cur = self.omega[i]
            cost = np.abs(prev[:, None] - cur[None, :])
            r, c = linear_sum_assignment(cost)
            out[i, r] = cur[c]
        return out


def dispersion_sweep(model: HopfieldModel, B_grid, threads: int = 1, keep_solutions: bool = False) -> DispersionSweep:
    """Diagonalize the model at every field of a strictly increasing grid."""
    B_grid = np.asarray(B_grid, dtype=float)
    if B_grid.ndim != 1 or B_grid.size == 0:
        raise ValueError("B grid must be a non-empty 1-D array")
    if np.any(np.diff(B_grid) <= 0):
        raise ValueError("B grid must be strictly increasing")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sols = list(pool.map(model.solve, B_grid))
    else:
        sols = [model.solve(B) for B in B_grid]
    sweep = DispersionSweep(
        B=B_grid,
        omega=np.array([s.omega for s in sols]),
        omega_c=np.array([model.omega_c(B) for B in B_grid]),
        weights=np.array([photon_weights(s) for s in sols]),
        photon_fraction=np.array([s.photon_fraction() for s in sols]),
        stable=np.array([s.stable for s in sols]),
        photon_labels=sols[0].hamiltonian.photon_labels,
        model=model,
        solutions=sols if keep_solutions else None,
    )
    for B in sweep.unstable_B:
        log.warning("unstable polariton spectrum at B = %.6g T", B)
    return sweep


@dataclass(frozen=True)
class MPCrossing:
    B: float
    branch: int  # index in the sorted full spectrum
    rank: int  # index among bright branches


def _bright_offsets(sol: PolaritonSolution, omega_c: float, tol: float):
    idx = np.flatnonzero(bright_mask(sol, tol))
    return idx, sol.omega[idx] - omega_c


def find_mp_crossings(sweep: DispersionSweep, tol: float = BRIGHT_TOL) -> list[MPCrossing]:
    """Fields where an interior bright branch crosses the bare CR frequency.

    Bright branches are ranked by frequency; a crossing is a sign change of
    ``omega_rank - omega_c`` between neighbouring grid points for a rank that
    is neither the lowest nor the highest. Crossing fields are linearly
    interpolated between grid points.
    """
    bright = sweep.bright(tol)
    out = []
    for i in range(len(sweep.B) - 1):
        b0, b1 = np.flatnonzero(bright[i]), np.flatnonzero(bright[i + 1])
        if len(b0) != len(b1) or len(b0) < 3:
            continue
        d0 = sweep.omega[i, b0] - sweep.omega_c[i]
        d1 = sweep.omega[i + 1, b1] - sweep.omega_c[i + 1]
        for r in range(1, len(b0) - 1):
            if d0[r] == 0 or np.sign(d0[r]) != np.sign(d1[r]):
                t = d0[r] / (d0[r] - d1[r]) if d0[r] != d1[r] else 0.0
                B = sweep.B[i] + t * (sweep.B[i + 1] - sweep.B[i])
                out.append(MPCrossing(float(B), int(b0[r]), r))
    return out


class NoMiddlePolariton(ValueError):
    """Raised when no middle polariton crosses the CR (decoupled geometry)."""


def mp_weights(sweep: DispersionSweep, crossing: int = 0, refine: bool = True,
               tol: float = BRIGHT_TOL) -> tuple[float, np.ndarray]:
    """Weights sum_{lambda in MPs} |X^lambda_p|^2 at a middle-polariton / CR crossing.

    Returns ``(B_star, weights[p])``. With ``refine`` the crossing field is
    solved to machine precision on the model before the weights are taken.
    """
    crossings = find_mp_crossings(sweep, tol)
    if not crossings:
        raise NoMiddlePolariton("no middle polariton crosses the cyclotron resonance in this sweep")
    cr = crossings[crossing]
    B_star = cr.B
    model = sweep.model
    if model is None:
        raise ValueError("sweep carries no model; cannot evaluate weights at the crossing")
    if refine:
        i = int(np.searchsorted(sweep.B, cr.B)) - 1
        lo, hi = sweep.B[max(i, 0)], sweep.B[min(i + 1, len(sweep.B) - 1)]

        def offset(B):
            idx, d = _bright_offsets(model.solve(B), model.omega_c(B), tol)
            return d[cr.rank]

        if lo < hi and np.sign(offset(lo)) != np.sign(offset(hi)):
            B_star = brentq(offset, lo, hi, xtol=1e-12, rtol=1e-12)
    sol = model.solve(B_star)
    bright = np.flatnonzero(bright_mask(sol, tol))
    mps = bright[1:-1]
    return float(B_star), photon_weights(sol)[:, mps].sum(axis=1)
