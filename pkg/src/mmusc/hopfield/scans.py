"""Parameter scans on the two-mode toy cavity: correlation collapse and MP weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.couplings import fom_eta, fom_lambda
from ..core.params import TWO_PI, PhysParams
from .hamiltonian import HamiltonianFlags
from .observables import ground_state_correlations
from .sweep import dispersion_sweep, mp_weights, toy_model

TOY_F1, TOY_F2 = 0.339e12, 0.384e12


@dataclass
class CollapsePath:
    name: str
    parameter: np.ndarray
    eta: np.ndarray
    corr: np.ndarray  # complex <a1^dag a2>


def toy_point(f1_hz: float, f2_hz: float, eps: float, B: float, params: PhysParams | None = None,
              flags: HamiltonianFlags | None = None, grid_n: int = 32) -> tuple[float, complex]:
    """(eta_12, <a1^dag a2>) in the vacuum of the toy model."""
    model = toy_model(eps, f1_hz, f2_hz, params, flags, grid_n=grid_n)
    cs = model.couplings(B)
    eta = fom_eta(cs, 1, 2, "y").value
    C = ground_state_correlations(model.solve(B))
    return eta, complex(C[0, 1])


def collapse_paths(B: float = 0.81, n: int = 400, f_max_hz: float = 1.8e12,
                   params: PhysParams | None = None, flags: HamiltonianFlags | None = None) -> dict[str, CollapsePath]:
    """The three scans of <a1^dag a2> against eta_12: vary omega_1, vary omega_2, vary eps."""
    specs = {
        "omega1": (np.linspace(TOY_F1, f_max_hz, n), lambda x: (x, TOY_F2, 1.0)),
        "omega2": (np.linspace(TOY_F2, f_max_hz, n), lambda x: (TOY_F1, x, 1.0)),
        "eps": (np.linspace(0.0, 1.0, n), lambda x: (TOY_F1, TOY_F2, x)),
    }
    out = {}
    for name, (xs, args) in specs.items():
        pts = [toy_point(*args(x), B, params, flags) for x in xs]
        out[name] = CollapsePath(name, xs, np.array([p[0] for p in pts]), np.array([p[1] for p in pts]))
    return out


def collapse_deviation(paths: dict[str, CollapsePath], eta_rtol: float = 1e-3) -> tuple[float, int]:
    """Largest relative mismatch of correlations between points of different paths whose eta agree within ``eta_rtol``.

    Returns ``(max_deviation, n_pairs)``.
    """
    names = list(paths)
    worst, count = 0.0, 0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ea, eb = paths[a].eta, paths[b].eta
            ca, cb = paths[a].corr.real, paths[b].corr.real
            with np.errstate(divide="ignore", invalid="ignore"):
                match = np.abs(ea[:, None] / eb[None, :] - 1) < eta_rtol
            match &= (ea[:, None] > 0) & (eb[None, :] > 0)
            ia, ib = np.nonzero(match)
            if ia.size:
                dev = np.abs(ca[ia] / cb[ib] - 1)
                worst = max(worst, float(dev.max()))
                count += ia.size
    return worst, count


@dataclass
class MPWeightScan:
    f2_hz: np.ndarray
    B_star: np.ndarray
    weights: np.ndarray  # (n, 2)
    Lambda: np.ndarray


def mp_weight_scan(f2_values_hz, f1_hz: float = TOY_F1, eps: float = 1.0,
                   B_grid=None, params: PhysParams | None = None) -> MPWeightScan:
    """MP weights on modes 1 and 2 at the MP/CR crossing, for each omega_2."""
    B_grid = np.linspace(0.05, 3.0, 120) if B_grid is None else np.asarray(B_grid)
    rows = []
    for f2 in np.asarray(f2_values_hz, dtype=float):
        model = toy_model(eps, f1_hz, f2, params, grid_n=32)
        Bs, w = mp_weights(dispersion_sweep(model, B_grid))
        lam = fom_lambda(model.couplings(Bs), "y").value
        rows.append((f2, Bs, w, lam))
    return MPWeightScan(np.array([r[0] for r in rows]), np.array([r[1] for r in rows]),
                        np.array([r[2] for r in rows]), np.array([r[3] for r in rows]))
