"""Quadratic multimode Hopfield Hamiltonian in bosonic block form.

The Hamiltonian is written as ``H = 1/2 alpha^dag M alpha + const`` with the
operator vector ``alpha = (a, b, a^dag, b^dag)`` and

    M = [[A,  B ],
         [B*, A*]]

A is Hermitian (number-conserving terms), B symmetric (pair terms). Photon
modes come first, then the matter modes; frequencies are in rad/s (hbar = 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core.couplings import CouplingSet, a2_coefficients

PRESETS = ("full", "decoupled", "rwa", "antiresonant", "a2-only", "hint-only")


@dataclass(frozen=True)
class HamiltonianFlags:
    """Term selection.

    ``rwa_only`` keeps the number-conserving (resonant) parts of the linear
    and A^2 terms; ``antiresonant_only`` keeps only their pair-creation and
    pair-annihilation parts. Bare photon and CR energies are always kept.
    """

    include_hint: bool = True
    include_a2: bool = True
    rwa_only: bool = False
    antiresonant_only: bool = False
    decoupled: bool = False

    def __post_init__(self):
        if self.rwa_only and self.antiresonant_only:
            raise ValueError("rwa_only and antiresonant_only are mutually exclusive")

    @classmethod
    def preset(cls, name: str) -> "HamiltonianFlags":
        table = {
            "full": cls(),
            "decoupled": cls(decoupled=True),
            "rwa": cls(rwa_only=True),
            "antiresonant": cls(antiresonant_only=True),
            "a2-only": cls(include_hint=False),
            "hint-only": cls(include_a2=False),
        }
        try:
            return table[name]
        except KeyError:
            raise ValueError(f"unknown Hamiltonian preset {name!r}; choose from {PRESETS}") from None

    @property
    def keep_resonant(self) -> bool:
        return not self.antiresonant_only

    @property
    def keep_antiresonant(self) -> bool:
        return not self.rwa_only


@dataclass(frozen=True)
class HopfieldMatrix:
    M: np.ndarray
    n_photon: int
    n_matter: int
    photon_labels: tuple
    matter_labels: tuple
    photon_omega: np.ndarray
    omega_c: float
    flags: HamiltonianFlags = field(default_factory=HamiltonianFlags)
    B: float | None = None

    @property
    def n_modes(self) -> int:
        return self.n_photon + self.n_matter

    @property
    def A(self) -> np.ndarray:
        n = self.n_modes
        return self.M[:n, :n]

    @property
    def Bblock(self) -> np.ndarray:
        n = self.n_modes
        return self.M[:n, n:]

    def photon_index(self, p: int, sigma: str) -> int:
        return self.photon_labels.index((p, sigma))

    def polarization_indices(self, sigma: str) -> np.ndarray:
        return np.array([i for i, (_, s) in enumerate(self.photon_labels) if s == sigma], dtype=int)


def assemble(photon_omega, omega_c: float, h: np.ndarray, D: np.ndarray | None,
             flags: HamiltonianFlags) -> np.ndarray:
    """Dense M for photons ``photon_omega`` and matter modes at ``omega_c``.

    ``h[p, k]`` couples photon p to matter mode k through
    ``(h b_k^dag + h^* b_k)(a_p + a_p^dag)``; ``D`` is the (Hermitian) A^2
    matrix of ``sum D_pp' (a_p + a_p^dag)(a_p' + a_p'^dag)``.
    """
    w = np.asarray(photon_omega, dtype=float)
    n, m = h.shape
    N = n + m
    A = np.zeros((N, N), dtype=complex)
    Bm = np.zeros((N, N), dtype=complex)
    A[:n, :n] += np.diag(w)
    A[n:, n:] += omega_c * np.eye(m)

    if flags.include_hint and m:
        if flags.keep_resonant:
            A[n:, :n] += h.T
            A[:n, n:] += h.conj()
        if flags.keep_antiresonant:
            Bm[n:, :n] += h.T
            Bm[:n, n:] += h
    if flags.include_a2 and D is not None:
        # only the symmetric real part survives in sum D x_p x_p'
        Dr = 0.5 * (D + D.T).real
        if flags.keep_resonant:
            A[:n, :n] += 2.0 * Dr
        if flags.keep_antiresonant:
            Bm[:n, :n] += 2.0 * Dr
    return np.block([[A, Bm], [Bm.conj(), A.conj()]])


def build_hamiltonian(cs: CouplingSet, flags: HamiltonianFlags | None = None,
                      drop_tol: float = 1e-8) -> HopfieldMatrix:
    """Assemble the Hopfield matrix for a coupling set.

    Full model: one CR mode b_G per retained reciprocal vector G, all at
    omega_c. Decoupled model: one CR mode per photon mode with coupling
    Omega_{p,sigma} and a diagonal A^2 term Omega^2 / omega_c.
    """
    flags = flags or HamiltonianFlags()
    omega_c = cs.omega_c
    if flags.include_a2 and omega_c <= 0:
        raise ValueError("the A^2 term needs omega_c > 0")
    w = cs.omega
    labels = tuple(cs.labels)

    if flags.decoupled:
        h = np.diag(cs.Omega).astype(complex)
        matter = tuple(("b",) + lab for lab in labels)
        D = np.diag(cs.Omega**2 / omega_c) if flags.include_a2 else None
    else:
        ms, h = cs.matter_couplings(drop_tol)
        if h.shape[1] == 0:
            raise ValueError("empty Fourier set: no reciprocal vector carries any coupling")
        matter = tuple(("G", int(mx), int(my)) for mx, my in ms)
        D = a2_coefficients(cs) if flags.include_a2 else None

    M = assemble(w, omega_c, h, D, flags)
    return HopfieldMatrix(M=M, n_photon=len(w), n_matter=h.shape[1], photon_labels=labels,
                          matter_labels=matter, photon_omega=w, omega_c=omega_c, flags=flags, B=cs.B)
