"""Photon correlations and polariton weights derived from a PolaritonSolution."""
from __future__ import annotations

import numpy as np

from .bogoliubov import PolaritonSolution

BRIGHT_TOL = 1e-6


def ground_state_correlations(sol: PolaritonSolution, occupations=None) -> np.ndarray:
    """Matrix C[p, p'] = <a_p^dag a_p'> in the Fock state with n_lambda polaritons.

    C = sum_l conj(Xt_p) Xt_p' (n_l + 1) + sum_l X_p conj(X_p') n_l.
    ``occupations=None`` is the polariton vacuum.
    """
    if not sol.is_stable:
        raise ValueError("correlations need a stable solution")
    n = np.zeros(sol.n_modes) if occupations is None else np.asarray(occupations, dtype=float)
    if n.shape != (sol.n_modes,):
        raise ValueError(f"expected {sol.n_modes} occupations")
    if np.any(n < 0):
        raise ValueError("occupations must be non-negative")
    Xt, X = sol.Xt, sol.X
    C = (Xt.conj() * (n + 1)) @ Xt.T + (X * n) @ X.conj().T
    return 0.5 * (C + C.conj().T)


def photon_weights(sol: PolaritonSolution) -> np.ndarray:
    """|X^lambda_p|^2, indexed [p, lambda]."""
    return np.abs(sol.X) ** 2


def bright_mask(sol: PolaritonSolution, tol: float = BRIGHT_TOL) -> np.ndarray:
    """Polaritons with photon content above ``tol`` (dark CR modes excluded)."""
    return sol.photon_fraction() > tol


def classify_branches(sol: PolaritonSolution, tol: float = BRIGHT_TOL) -> dict[str, np.ndarray]:
    """Indices of the lower, middle and upper bright polaritons.

    Dark CR modes (no photon content) are not branches. Middle polaritons are
    bright modes strictly between the lowest (LP) and highest (UP).
    """
    bright = np.flatnonzero(bright_mask(sol, tol))
    if bright.size == 0:
        return {"LP": bright, "MP": bright, "UP": bright, "dark": np.arange(sol.n_modes)}
    return {
        "LP": bright[:1],
        "MP": bright[1:-1],
        "UP": bright[-1:],
        "dark": np.setdiff1d(np.arange(sol.n_modes), bright),
    }
