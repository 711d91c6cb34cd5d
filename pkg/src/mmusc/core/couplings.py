"""Light-matter coupling fields, overlaps, A^2 coefficients and figures of merit.

The coupling of cavity mode (p, sigma) to the cyclotron resonance is

    g_{p,sigma,j}(rho) = E_{p,sigma,j}(rho) * sqrt(e^2 omega_c n_e / (4 eps0 m_eff omega_p a))

and enters the Hamiltonian through the chiral combination
``g_tilde = g_y - i g_x`` (``g_y + i g_x`` for a reversed field). All in-plane
integrals are unit-cell averages ``int drho / a^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .params import PhysParams, cyclotron_frequency
from .profiles import IN_PLANE, FourierSet, ModeProfile, fourier_decompose


def coupling_prefactor(omega_c: float, omega_p: float, params: PhysParams | None = None) -> float:
    """Scalar factor converting a dimensionless mode function into g [rad/s]."""
    if omega_c < 0:
        raise ValueError("omega_c must be >= 0")
    return coupling_strength(omega_p, params) * float(np.sqrt(omega_c))


def coupling_strength(omega_p: float, params: PhysParams | None = None) -> float:
    """Field-independent part of the prefactor, ``sqrt(e^2 n_e / (4 eps0 m_eff omega_p a))``."""
    params = params or PhysParams()
    if not omega_p > 0:
        raise ValueError(f"mode frequency must be positive, got {omega_p}")
    return float(np.sqrt(params.e_charge**2 * params.n_e
                         / (4.0 * params.eps0 * params.m_eff * omega_p * params.a)))


@dataclass(frozen=True)
class CouplingField:
    """Coupling of one cavity mode: ``prefactor * E`` plus its chiral combination.

    ``strength * sqrt(omega_c)`` is the prefactor; keeping the two apart lets
    the A^2 coefficients be formed without dividing by omega_c.
    """

    profile: ModeProfile
    strength: float
    omega_c: float
    chirality: int = 1

    @property
    def prefactor(self) -> float:
        return self.strength * float(np.sqrt(self.omega_c))

    @property
    def label(self):
        return self.profile.label

    @property
    def uses_grid(self) -> bool:
        return self.profile.grid is not None

    def g(self, comp: str) -> np.ndarray:
        """Grid samples of g_j on the 2DEG plane."""
        return self.prefactor * self.profile.in_plane(comp)

    def g_tilde(self) -> np.ndarray:
        return self.g("y") - 1j * self.chirality * self.g("x")

    @cached_property
    def profile_fourier(self) -> FourierSet:
        """Dimensionless Fourier set of the mode function."""
        return self.profile.fourier if self.profile.fourier is not None else fourier_decompose(self.profile)

    @property
    def fourier(self) -> FourierSet:
        fs = self.profile_fourier
        return FourierSet(fs.ms, {k: self.prefactor * v for k, v in fs.coeffs.items()},
                          fs.dropped_mass * self.prefactor**2)

    def e_tilde_fourier(self) -> dict[tuple[int, int], complex]:
        """Fourier coefficients of the dimensionless chiral field E_y -/+ i E_x."""
        fs = self.profile_fourier
        c = fs.component("y") - 1j * self.chirality * fs.component("x")
        return {(int(mx), int(my)): v for (mx, my), v in zip(fs.ms, c)}

    def g_tilde_fourier(self) -> dict[tuple[int, int], complex]:
        pf = self.prefactor
        return {m: pf * v for m, v in self.e_tilde_fourier().items()}


def coupling_field(profile: ModeProfile, omega_c: float, params: PhysParams | None = None,
                   chirality: int = 1) -> CouplingField:
    """Build the coupling field of one mode at cyclotron frequency ``omega_c``."""
    if chirality not in (1, -1):
        raise ValueError("chirality must be +1 or -1")
    if omega_c < 0:
        raise ValueError("omega_c must be >= 0")
    return CouplingField(profile, coupling_strength(profile.omega_p, params), float(omega_c), chirality)


def _inner_fourier(f1: dict, f2: dict) -> complex:
    # Parseval: int drho/a^2 f1 f2* = sum_G F1(G) F2(G)*
    return complex(sum(v * np.conj(f2[m]) for m, v in f1.items() if m in f2))


def _inner(c1: CouplingField, c2: CouplingField, kind: str) -> complex:
    """Unit-cell average of products of two coupling fields.

    ``kind="tilde"`` gives int g_tilde_1 g_tilde_2^*; ``kind="components"``
    gives sum_j int g_{1,j} g_{2,j}^*.
    """
    same_grid = (c1.uses_grid and c2.uses_grid and c1.profile.grid_n == c2.profile.grid_n)
    if same_grid:
        if kind == "tilde":
            return complex(np.mean(c1.g_tilde() * np.conj(c2.g_tilde())))
        return complex(sum(np.mean(c1.g(j) * np.conj(c2.g(j))) for j in IN_PLANE))
    if kind == "tilde":
        return _inner_fourier(c1.g_tilde_fourier(), c2.g_tilde_fourier())
    total = 0.0j
    for j in IN_PLANE:
        total += _inner_fourier(c1.fourier.as_dict(j), c2.fourier.as_dict(j))
    return total


class FigureOfMerit(NamedTuple):
    """``value = sqrt(|radicand|)``; ``phase`` is the argument of the radicand."""

    value: float
    phase: float

    def __float__(self):
        return self.value


class CouplingSet:
    """Coupling fields of a set of cavity modes at one magnetic field.

    Parameters
    ----------
    fields : sequence of CouplingField
        One per cavity mode (p, sigma); labels must be unique.
    omega_c : float
        Cyclotron angular frequency used to build the fields.
    params : PhysParams
    B : float, optional
        Signed magnetic field, kept for bookkeeping.
    """

    def __init__(self, fields: Sequence[CouplingField], omega_c: float, params: PhysParams | None = None,
                 B: float | None = None):
        if not fields:
            raise ValueError("empty coupling set")
        labels = [f.label for f in fields]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels: {labels}")
        self.fields = tuple(fields)
        self.omega_c = float(omega_c)
        self.params = params or PhysParams()
        self.B = B

    def __len__(self):
        return len(self.fields)

    @property
    def labels(self) -> list[tuple[int, str]]:
        return [f.label for f in self.fields]

    @property
    def omega(self) -> np.ndarray:
        return np.array([f.profile.omega_p for f in self.fields])

    @property
    def profiles(self) -> list[ModeProfile]:
        return [f.profile for f in self.fields]

    def index(self, p: int, sigma: str) -> int:
        try:
            return self.labels.index((p, sigma))
        except ValueError:
            raise KeyError(f"no mode (p={p}, sigma={sigma!r}) in coupling set") from None

    def field(self, p: int, sigma: str) -> CouplingField:
        return self.fields[self.index(p, sigma)]

    @cached_property
    def tilde_gram(self) -> np.ndarray:
        """Matrix of int g_tilde_i g_tilde_j^* over the unit cell [rad^2/s^2]."""
        n = len(self.fields)
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                out[i, j] = _inner(self.fields[i], self.fields[j], "tilde")
                out[j, i] = np.conj(out[i, j])
        return out

    @cached_property
    def component_gram(self) -> np.ndarray:
        """Matrix of sum_j int g_{i,j} g_{k,j}^* [rad^2/s^2]."""
        n = len(self.fields)
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                out[i, j] = _inner(self.fields[i], self.fields[j], "components")
                out[j, i] = np.conj(out[i, j])
        return out

    @cached_property
    def profile_gram(self) -> np.ndarray:
        """sum_j int E_{i,j} E_{k,j}^* of the bare mode functions (field independent)."""
        unit = [replace(f, strength=1.0, omega_c=1.0) for f in self.fields]
        n = len(unit)
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                out[i, j] = _inner(unit[i], unit[j], "components")
                out[j, i] = np.conj(out[i, j])
        return out

    @property
    def strengths(self) -> np.ndarray:
        return np.array([f.strength for f in self.fields])

    @property
    def Omega(self) -> np.ndarray:
        return np.sqrt(np.clip(np.real(np.diag(self.tilde_gram)), 0.0, None))

    @property
    def xi(self) -> np.ndarray:
        om = self.Omega
        if np.any(om == 0):
            raise ValueError("overlap undefined: some mode has zero effective coupling")
        xi = self.tilde_gram / np.outer(om, om)
        np.fill_diagonal(xi, 1.0)
        return xi

    @property
    def D(self) -> np.ndarray:
        return a2_coefficients(self)

    def matter_couplings(self, drop_tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
        """Reciprocal-space couplings h[p, G] of photon mode p to the CR mode b_G.

        ``h[p, G]`` is the Fourier coefficient of ``conj(g_tilde_p)`` at G, so
        that the linear coupling reads
        ``sum_{p,G} (h[p,G] b_G^dag + h[p,G]^* b_G)(a_p + a_p^dag)``.
        Reciprocal vectors whose couplings are all below ``drop_tol`` times
        the largest one are pruned. Returns ``(ms, h)``.
        """
        tilde = [f.e_tilde_fourier() for f in self.fields]
        # FT[conj f](G) = conj(FT[f](-G))
        conj_sets = [{(-mx, -my): np.conj(v) for (mx, my), v in t.items()} for t in tilde]
        all_ms = sorted(set().union(*[s.keys() for s in conj_sets]))
        e = np.array([[s.get(m, 0.0) for m in all_ms] for s in conj_sets], dtype=complex).reshape(len(self), -1)
        # prune on the dimensionless profiles so the basis does not depend on B
        peak = np.abs(e).max() if e.size else 0.0
        if peak == 0:
            return np.zeros((0, 2), dtype=int), np.zeros((len(self), 0), dtype=complex)
        keep = np.abs(e).max(axis=0) > drop_tol * peak
        pref = np.array([f.prefactor for f in self.fields])
        return np.array(all_ms, dtype=int)[keep], pref[:, None] * e[:, keep]


def couplings_at_field(profiles: Sequence[ModeProfile], B: float, params: PhysParams | None = None) -> CouplingSet:
    """Coupling set at signed field ``B``; a negative field reverses the chirality."""
    params = params or PhysParams()
    omega_c = cyclotron_frequency(abs(B), params)
    chirality = -1 if B < 0 else 1
    fields = [coupling_field(p, omega_c, params, chirality) for p in profiles]
    return CouplingSet(fields, omega_c, params, B=B)


def effective_coupling(cs: CouplingSet, p: int, sigma: str) -> float:
    """Effective coupling Omega_{p,sigma} = sqrt(int |g_tilde|^2) [rad/s]."""
    prof = cs.field(p, sigma).profile
    comps = prof.grid if prof.grid is not None else prof.fourier.coeffs
    if not any(c in comps for c in IN_PLANE):
        raise ValueError(f"mode {prof.label} has no in-plane field components")
    return float(cs.Omega[cs.index(p, sigma)])


def overlap_xi(cs: CouplingSet, p: int, p2: int, sigma: str, sigma2: str) -> complex:
    """Normalized overlap of the chiral coupling fields of two modes."""
    i, j = cs.index(p, sigma), cs.index(p2, sigma2)
    om = cs.Omega
    if om[i] == 0 or om[j] == 0:
        raise ValueError("overlap undefined for a mode with zero effective coupling")
    if i == j:
        return 1.0 + 0.0j
    return complex(cs.tilde_gram[i, j] / (om[i] * om[j]))


def a2_coefficients(cs: CouplingSet) -> np.ndarray:
    """Diamagnetic coefficients D[i, k] = sum_j int g_{i,j} g_{k,j} / omega_c [rad/s].

    Since g^2 is proportional to omega_c, D does not depend on the field; it is
    evaluated from the bare mode functions to avoid the 0/0 form. Returned
    Hermitian; for real mode functions the matrix is real symmetric.
    """
    if cs.omega_c <= 0:
        raise ValueError("A^2 coefficients are undefined (0/0) at omega_c = 0")
    s = cs.strengths
    D = np.outer(s, s) * cs.profile_gram
    return 0.5 * (D + D.conj().T)


def _fom(radicand: complex) -> FigureOfMerit:
    return FigureOfMerit(float(np.sqrt(abs(radicand))), float(np.angle(radicand)) if radicand != 0 else 0.0)


def fom_eta(cs: CouplingSet, p: int, p2: int, sigma: str) -> FigureOfMerit:
    """Multimode ultrastrong-coupling figure of merit eta_{pp',sigma} (B independent)."""
    if cs.omega_c <= 0:
        raise ValueError("eta needs omega_c > 0")
    i, j = cs.index(p, sigma), cs.index(p2, sigma)
    w = cs.omega
    return _fom(cs.tilde_gram[i, j] / (cs.omega_c * (w[i] + w[j]) / 2.0))


def fom_lambda(cs: CouplingSet, sigma: str, p1: int = 1, p2: int = 2) -> FigureOfMerit:
    """Superstrong-coupling figure of merit Lambda_sigma for the mode pair (p1, p2)."""
    if cs.omega_c <= 0:
        raise ValueError("Lambda needs omega_c > 0")
    i, j = cs.index(p1, sigma), cs.index(p2, sigma)
    w = cs.omega
    dw = w[j] - w[i]
    if dw == 0:
        raise ValueError("Lambda is undefined for degenerate modes")
    return _fom(cs.tilde_gram[i, j] / (cs.omega_c * dw))
