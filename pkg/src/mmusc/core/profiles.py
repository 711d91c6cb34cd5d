"""Cavity mode profiles: sampled grids, Fourier sets and analytic toy modes.

Grid convention: a field over one unit cell of side ``a`` is stored as an
array indexed ``[ix, iy]`` (or ``[ix, iy, iz]``) with in-plane samples at
``x_k = k a / N``, ``k = 0..N-1``. The point ``x = a`` is the periodic image
of ``x = 0`` and is not stored. On such a grid the plain average is the
periodic trapezoid rule, which is exact for trigonometric polynomials of
degree < N.

Fourier convention: ``U(G) = int (drho / a^2) E(rho) exp(-i G.rho)`` with
``G = (2 pi m_x / a, 2 pi m_y / a)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .params import TWO_PI

IN_PLANE = ("x", "y")
COMPONENTS = ("x", "y", "z")

# Toy-model cavity: two modes at 0.339 and 0.384 THz with the Q of modes 1, 2.
TOY_FREQUENCIES_HZ = {1: 0.339e12, 2: 0.384e12}
TOY_Q = {1: 72.0, 2: 70.0}
DEFAULT_LATTICE = 333e-6


@dataclass(frozen=True)
class FourierSet:
    """Sparse Fourier coefficients of the in-plane field components.

    ``ms`` has shape (K, 2) with integer (m_x, m_y); ``coeffs`` maps a
    component name to a complex array of length K.
    """

    ms: np.ndarray
    coeffs: Mapping[str, np.ndarray]
    dropped_mass: float = 0.0

    def __post_init__(self):
        ms = np.asarray(self.ms, dtype=int).reshape(-1, 2)
        object.__setattr__(self, "ms", ms)
        coeffs = {}
        for comp, c in self.coeffs.items():
            c = np.asarray(c, dtype=complex)
            if c.shape != (len(ms),):
                raise ValueError(f"component {comp!r}: expected {len(ms)} coefficients, got {c.shape}")
            coeffs[comp] = c
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return len(self.ms)

    def component(self, comp: str) -> np.ndarray:
        return self.coeffs.get(comp, np.zeros(len(self.ms), dtype=complex))

    def as_dict(self, comp: str) -> dict[tuple[int, int], complex]:
        c = self.component(comp)
        return {(int(mx), int(my)): complex(v) for (mx, my), v in zip(self.ms, c)}

    def is_conjugate_symmetric(self, atol: float = 1e-12) -> bool:
        """True when every component satisfies U(-G) = U(G)*, i.e. the field is real."""
        for comp in self.coeffs:
            d = self.as_dict(comp)
            scale = max((abs(v) for v in d.values()), default=0.0)
            for (mx, my), v in d.items():
                if abs(d.get((-mx, -my), 0.0) - np.conj(v)) > atol * max(scale, 1.0):
                    return False
        return True


@dataclass(frozen=True)
class ModeProfile:
    """A cavity electric-field mode function E_{p,sigma,j}.

    Either ``grid`` (component -> real array) or ``fourier`` must be given.
    For z-resolved data the grid arrays are 3D, ``z`` holds the (possibly
    non-uniform) z samples in metres, ``eps`` the relative permittivity on the
    same grid and ``z_2deg`` the height of the electron gas.
    """

    p: int
    sigma: str
    omega_p: float
    Q: float | None = None
    a: float = DEFAULT_LATTICE
    grid: Mapping[str, np.ndarray] | None = None
    fourier: FourierSet | None = None
    z: np.ndarray | None = None
    eps: np.ndarray | None = None
    z_2deg: float | None = None
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.grid is None and self.fourier is None:
            raise ValueError("a mode profile needs grid samples or Fourier coefficients")
        if not self.omega_p > 0:
            raise ValueError(f"mode frequency must be positive, got {self.omega_p}")
        if self.Q is not None and not self.Q > 0:
            raise ValueError("quality factor must be positive")
        if self.grid is not None:
            grid = {k: np.asarray(v, dtype=complex if np.iscomplexobj(v) else float) for k, v in self.grid.items()}
            shapes = {v.shape for v in grid.values()}
            if len(shapes) != 1:
                raise ValueError(f"grid components disagree in shape: {shapes}")
            shape = shapes.pop()
            if len(shape) not in (2, 3) or shape[0] != shape[1]:
                raise ValueError(f"grid must be N x N or N x N x Nz, got {shape}")
            if len(shape) == 3:
                if self.z is None or len(self.z) != shape[2]:
                    raise ValueError("z-resolved grid needs z samples matching the last axis")
            object.__setattr__(self, "grid", grid)

    @property
    def label(self) -> tuple[int, str]:
        return (self.p, self.sigma)

    @property
    def grid_n(self) -> int | None:
        if self.grid is None:
            return None
        return next(iter(self.grid.values())).shape[0]

    @property
    def z_resolved(self) -> bool:
        return self.grid is not None and next(iter(self.grid.values())).ndim == 3

    @property
    def decay_rate(self) -> float:
        """Photon decay rate omega_p / Q."""
        if self.Q is None:
            raise ValueError(f"mode {self.label} has no quality factor")
        return self.omega_p / self.Q

    def z_index(self) -> int:
        if not self.z_resolved:
            raise ValueError("profile is not z-resolved")
        if self.z_2deg is None:
            raise ValueError("z-resolved profile needs z_2deg to select the 2DEG plane")
        return int(np.argmin(np.abs(np.asarray(self.z) - self.z_2deg)))

    def in_plane(self, comp: str) -> np.ndarray:
        """Component ``comp`` on the 2DEG plane as an N x N array (zeros if absent)."""
        if self.grid is None:
            raise ValueError("profile has no grid samples")
        n = self.grid_n
        arr = self.grid.get(comp)
        if arr is None:
            return np.zeros((n, n))
        if arr.ndim == 3:
            return arr[:, :, self.z_index()]
        return arr

    def with_fourier(self, cutoff: int | None = None, drop_tol: float = 1e-8) -> "ModeProfile":
        return replace(self, fourier=fourier_decompose(self, cutoff=cutoff, drop_tol=drop_tol))

    def fourier_only(self) -> "ModeProfile":
        """Copy without grid samples (forces Fourier-space integrals)."""
        fs = self.fourier if self.fourier is not None else fourier_decompose(self)
        return replace(self, grid=None, z=None, eps=None, fourier=fs)

    def scaled(self, factor: float) -> "ModeProfile":
        grid = None if self.grid is None else {k: v * factor for k, v in self.grid.items()}
        fs = None
        if self.fourier is not None:
            fs = FourierSet(self.fourier.ms, {k: v * factor for k, v in self.fourier.coeffs.items()},
                            self.fourier.dropped_mass * factor**2)
        return replace(self, grid=grid, fourier=fs)


def grid_axis(n: int, a: float = DEFAULT_LATTICE) -> np.ndarray:
    return np.arange(n) * (a / n)


def toy_mode_profile(
    p: int,
    eps: float = 1.0,
    grid_n: int = 128,
    a: float = DEFAULT_LATTICE,
    omega_p: float | None = None,
    Q: float | None = None,
    component: str = "y",
    sigma: str = "y",
) -> ModeProfile:
    """Single-component toy profile of the two-mode model.

    Mode 1 is ``sin(2 pi x/a) sin(2 pi y/a)``; mode 2 has both factors shifted
    in phase by ``(1 - eps) pi / 2``, so ``eps`` tunes the in-plane overlap
    from 0 (orthogonal) to 1 (identical).
    """
    if p not in (1, 2):
        raise ValueError("toy model has modes p=1 and p=2 only")
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"overlap parameter must lie in [0, 1], got {eps}")
    if grid_n < 8:
        raise ValueError("grid_n must be >= 8")
    x = grid_axis(grid_n, a)
    phase = 0.0 if p == 1 else (1.0 - eps) * np.pi / 2
    f = np.sin(TWO_PI * x / a + phase)
    field_ = np.outer(f, f)
    if omega_p is None:
        omega_p = TWO_PI * TOY_FREQUENCIES_HZ[p]
    if Q is None:
        Q = TOY_Q[p]
    return ModeProfile(p=p, sigma=sigma, omega_p=omega_p, Q=Q, a=a, grid={component: field_},
                       meta={"source": "toy", "eps": eps})


def toy_field(p: int, eps: float, x, y, a: float = DEFAULT_LATTICE):
    """Evaluate the toy profile at arbitrary points (no sampling)."""
    phase = 0.0 if p == 1 else (1.0 - eps) * np.pi / 2
    return np.sin(TWO_PI * np.asarray(x) / a + phase) * np.sin(TWO_PI * np.asarray(y) / a + phase)


def fourier_decompose(profile: ModeProfile, cutoff: int | None = None, drop_tol: float = 1e-8) -> FourierSet:
    """Fourier coefficients of the in-plane components on the 2DEG plane.

    Coefficients with ``|m_x|`` or ``|m_y|`` above ``cutoff`` are discarded,
    as is everything below ``drop_tol`` times the largest retained magnitude.
    The discarded power (sum of |U|^2) is recorded in ``dropped_mass``; it
    bounds the mean-square round-trip error.
    """
    if profile.grid is None:
        if profile.fourier is None:
            raise ValueError("profile has neither grid nor Fourier data")
        return profile.fourier
    n = profile.grid_n
    max_cut = (n - 1) // 2
    if cutoff is None:
        cutoff = max_cut
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    cutoff = min(cutoff, max_cut)

    comps = [c for c in IN_PLANE if c in profile.grid]
    spectra = {c: np.fft.fft2(profile.in_plane(c)) / n**2 for c in comps}
    m = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    mx, my = np.meshgrid(m, m, indexing="ij")
    inside = (np.abs(mx) <= cutoff) & (np.abs(my) <= cutoff)

    total = sum(np.sum(np.abs(s) ** 2) for s in spectra.values())
    mag = np.zeros((n, n))
    for s in spectra.values():
        mag = np.maximum(mag, np.abs(s))
    peak = mag[inside].max() if np.any(inside) else 0.0
    keep = inside & (mag > drop_tol * peak) if peak > 0 else inside & (mag > 0)
    if peak == 0:
        keep = inside & (mx == 0) & (my == 0)

    ms = np.column_stack([mx[keep], my[keep]])
    order = np.lexsort((ms[:, 1], ms[:, 0]))
    ms = ms[order]
    coeffs = {c: spectra[c][keep][order] for c in comps}
    kept = sum(np.sum(np.abs(v) ** 2) for v in coeffs.values())
    return FourierSet(ms, coeffs, dropped_mass=float(max(total - kept, 0.0)))


def reconstruct(fs: FourierSet, grid_n: int, real: bool = True) -> dict[str, np.ndarray]:
    """Sample a Fourier set back onto the standard N x N grid."""
    if np.any(np.abs(fs.ms) > (grid_n - 1) // 2):
        raise ValueError("grid too coarse for the retained reciprocal vectors")
    out = {}
    for comp, c in fs.coeffs.items():
        spec = np.zeros((grid_n, grid_n), dtype=complex)
        np.add.at(spec, (fs.ms[:, 0] % grid_n, fs.ms[:, 1] % grid_n), c)
        field_ = np.fft.ifft2(spec) * grid_n**2
        out[comp] = field_.real if real else field_
    return out
