"""RMS deviation between measured and simulated peak frequencies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DeviationReport:
    delta_f: np.ndarray  # [Hz]
    N: int
    D: float

    def recompute(self) -> float:
        return deviation_D(self.delta_f, self.N)


def deviation_D(residuals, N: int) -> float:
    """D = sqrt(sum(delta_f^2) / (2 N)); N is the per-polarization-family point count."""
    r = np.asarray(residuals, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("no residuals")
    if N <= 0:
        raise ValueError("N must be positive")
    return float(np.sqrt(np.sum(r**2) / (2 * N)))


def deviation_report(residuals, N: int) -> DeviationReport:
    r = np.asarray(residuals, dtype=float).ravel()
    return DeviationReport(r, int(N), deviation_D(r, N))


def argmin_parameter(values, D_values, refine: bool = True) -> float:
    """Parameter value minimizing D over a scan; optional parabolic refinement around the grid minimum."""
    x = np.asarray(values, dtype=float)
    y = np.asarray(D_values, dtype=float)
    if x.shape != y.shape or x.size == 0:
        raise ValueError("values and D_values must be non-empty and equal length")
    order = np.argsort(x)
    x, y = x[order], y[order]
    i = int(np.argmin(y))
    if not refine or i == 0 or i == x.size - 1:
        return float(x[i])
    c = np.polyfit(x[i - 1:i + 2], y[i - 1:i + 2], 2)
    if c[0] <= 0:
        return float(x[i])
    return float(np.clip(-c[1] / (2 * c[0]), x[i - 1], x[i + 1]))
