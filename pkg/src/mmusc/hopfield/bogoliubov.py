"""Bosonic Bogoliubov diagonalization of a HopfieldMatrix.

For ``H = 1/2 alpha^dag M alpha`` the Heisenberg equations read
``i d(alpha)/dt = K M alpha`` with ``K = diag(1, -1)``. An eigenvector y of
``K M`` with eigenvalue omega and positive symplectic norm ``y^dag K y = 1``
defines the polariton annihilation operator ``p = y^dag K alpha``:

    p = sum_p X_p a_p + sum_k W_k b_k + sum_p Xt_p a_p^dag + sum_k Wt_k b_k^dag

so that ``X = conj(y_a)``, ``W = conj(y_b)``, ``Xt = -conj(y_a^dag-part)`` and
``Wt = -conj(y_b^dag-part)``. ``Wt[k]`` multiplies ``b_k^dag``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .hamiltonian import HopfieldMatrix

NORM_TOL = 1e-9


class DiagonalizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PolaritonSolution:
    """Polariton frequencies (ascending) and Bogoliubov coefficients.

    Coefficient arrays are indexed ``[mode, lambda]``. Unstable modes carry
    NaN coefficients, ``stable[lambda] = False`` and a complex entry in
    ``omega_complex``.
    """

    omega: np.ndarray
    X: np.ndarray
    W: np.ndarray
    Xt: np.ndarray
    Wt: np.ndarray
    stable: np.ndarray
    omega_complex: np.ndarray
    hamiltonian: HopfieldMatrix

    @property
    def n_modes(self) -> int:
        return len(self.omega)

    @property
    def is_stable(self) -> bool:
        return bool(np.all(self.stable))

    def symplectic_norms(self) -> np.ndarray:
        return (np.sum(np.abs(self.X) ** 2, 0) + np.sum(np.abs(self.W) ** 2, 0)
                - np.sum(np.abs(self.Xt) ** 2, 0) - np.sum(np.abs(self.Wt) ** 2, 0))

    def transformation(self) -> np.ndarray:
        """Matrix T with ``alpha = T beta``, ``beta = (p, p^dag)``; T^dag M T is diagonal."""
        Y = np.vstack([np.conj(self.X), np.conj(self.W), -np.conj(self.Xt), -np.conj(self.Wt)])
        N = Y.shape[0] // 2
        # partner (negative-frequency) vectors: swap blocks and conjugate
        Z = np.vstack([Y[N:].conj(), Y[:N].conj()])
        return np.hstack([Y, Z])

    def photon_fraction(self) -> np.ndarray:
        """Photon content sum_p |X|^2 + |Xt|^2 of each polariton."""
        return np.sum(np.abs(self.X) ** 2, 0) + np.sum(np.abs(self.Xt) ** 2, 0)


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(values)
    groups, current = [], [order[0]]
    for i, j in zip(order[:-1], order[1:]):
        if values[j] - values[i] <= tol:
            current.append(j)
        else:
            groups.append(np.array(current))
            current = [j]
    groups.append(np.array(current))
    return groups


def diagonalize(H: HopfieldMatrix, imag_tol: float = 1e-9, degeneracy_tol: float = 1e-9) -> PolaritonSolution:
    """Diagonalize by Bogoliubov transformation.

    Physical (positive symplectic norm) modes are returned sorted by
    frequency. Degenerate eigenspaces are re-orthonormalized under the
    symplectic metric. Eigenvalues of K M with a non-negligible imaginary
    part are reported as unstable, never dropped.
    """
    M = H.M
    if not np.allclose(M, M.conj().T, atol=1e-12 * max(np.abs(M).max(), 1.0), rtol=0):
        raise DiagonalizationError("Hamiltonian matrix is not Hermitian")
    N = M.shape[0] // 2
    if M.shape != (2 * N, 2 * N):
        raise DiagonalizationError("matrix must be 2N x 2N")
    Kd = np.r_[np.ones(N), -np.ones(N)]
    scale = float(np.abs(np.diag(M)).max()) or 1.0
    Ms = M / scale

    ev, V = sla.eig(Kd[:, None] * Ms)
    is_real = np.abs(ev.imag) <= imag_tol * max(1.0, np.abs(ev).max())

    vecs, freqs, cfreqs, flags = [], [], [], []
    real_idx = np.flatnonzero(is_real)
    if real_idx.size:
        for grp in _clusters(ev.real[real_idx], degeneracy_tol):
            idx = real_idx[grp]
            Vc = V[:, idx]
            G = Vc.conj().T @ (Kd[:, None] * Vc)
            G = 0.5 * (G + G.conj().T)
            gw, gu = np.linalg.eigh(G)
            Vc = Vc @ gu
            for k in np.flatnonzero(gw > NORM_TOL * max(1.0, np.abs(gw).max())):
                vecs.append(Vc[:, k] / np.sqrt(gw[k]))
                w = float(np.mean(ev.real[idx]))
                freqs.append(w)
                cfreqs.append(complex(w))
                flags.append(True)
    for k in np.flatnonzero(~is_real):
        e = ev[k]
        # a complex quartet {w, w*, -w, -w*} belongs to two physical modes; keep Re > 0
        if e.real > 0 or (e.real == 0 and e.imag > 0):
            vecs.append(np.full(2 * N, np.nan, dtype=complex))
            freqs.append(float(e.real))
            cfreqs.append(complex(e))
            flags.append(False)

    if len(vecs) != N:
        raise DiagonalizationError(f"found {len(vecs)} physical modes, expected {N}")

    Y = np.column_stack(vecs)
    freqs = np.array(freqs) * scale
    cfreqs = np.array(cfreqs) * scale
    flags = np.array(flags)
    order = np.argsort(freqs, kind="stable")
    Y, freqs, cfreqs, flags = Y[:, order], freqs[order], cfreqs[order], flags[order]

    n = H.n_photon
    sol = PolaritonSolution(
        omega=freqs,
        X=np.conj(Y[:n]),
        W=np.conj(Y[n:N]),
        Xt=-np.conj(Y[N:N + n]),
        Wt=-np.conj(Y[N + n:]),
        stable=flags,
        omega_complex=cfreqs,
        hamiltonian=H,
    )
    if np.any(flags):
        err = np.abs(sol.symplectic_norms()[flags] - 1.0).max()
        if err > 1e-6:
            raise DiagonalizationError(f"symplectic normalization failed (error {err:.3g})")
    return sol
