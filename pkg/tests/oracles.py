"""Independent reference computations used by the tests.

Nothing here imports the package's numerical routines; inputs are plain
numbers or arrays so each oracle can be checked on its own.
"""
from __future__ import annotations

import itertools

import mpmath as mp
import numpy as np
import scipy.constants as sc
import scipy.linalg as sla

E, ME, EPS0 = sc.e, sc.m_e, sc.epsilon_0


def mp_prefactor(B, f_mode_hz, n_e=3.08e16, m_ratio=0.067, a=333e-6, dps=40):
    """sqrt(e^2 omega_c n_e / (4 eps0 m omega_p a)) at high precision."""
    with mp.workdps(dps):
        e, me, eps0 = (mp.mpf(repr(x)) for x in (E, ME, EPS0))
        m = mp.mpf(repr(m_ratio)) * me
        wc = e * mp.mpf(repr(B)) / m
        wp = 2 * mp.pi * mp.mpf(repr(f_mode_hz))
        return float(mp.sqrt(e**2 * wc * mp.mpf(repr(n_e)) / (4 * eps0 * m * wp * mp.mpf(repr(a)))))


def mp_omega_c(B, m_ratio=0.067):
    with mp.workdps(30):
        return float(mp.mpf(repr(E)) * mp.mpf(repr(B)) / (mp.mpf(repr(m_ratio)) * mp.mpf(repr(ME))))


def toy_fourier_analytic(eps):
    """Coefficients of sin(kx+phi) sin(ky+phi), phi = (1-eps) pi/2, at (m_x, m_y) = (+-1, +-1).

    sin(u + phi) = (e^{i phi} e^{iu} - e^{-i phi} e^{-iu}) / (2i).
    """
    phi = (1 - eps) * np.pi / 2
    c = {1: np.exp(1j * phi) / 2j, -1: -np.exp(-1j * phi) / 2j}
    return {(mx, my): c[mx] * c[my] for mx in (1, -1) for my in (1, -1)}


def brute_mean(f, n=512, a=1.0):
    """Midpoint-rule mean of f(x, y) over one period, independent grid."""
    x = (np.arange(n) + 0.5) * a / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    return np.mean(f(X, Y))


def quadratic_spectrum_xp(M):
    """Normal-mode frequencies of H = 1/2 alpha^dag M alpha via the real (x, p) form.

    alpha = U z with z = (x, p), U = [[I, iI], [I, -iI]] / sqrt 2. The real
    symmetric form h = U^dag M U gives frequencies as the positive imaginary
    parts of the eigenvalues of J h.
    """
    N = M.shape[0] // 2
    I = np.eye(N)
    U = np.block([[I, 1j * I], [I, -1j * I]]) / np.sqrt(2)
    h = (U.conj().T @ M @ U).real
    J = np.block([[np.zeros((N, N)), I], [-I, np.zeros((N, N))]])
    ev = sla.eigvals(J @ h)
    return np.sort(ev.imag[ev.imag > 0])


def realspace_toy_matrix(w, s, profiles, omega_c, include_a2=True):
    """Hopfield matrix with one CR oscillator per real-space grid site.

    ``profiles`` are real (n, n) samples of single-component mode functions;
    site j couples to photon p with s_p E_p(rho_j) / n. Dark site
    combinations stay at omega_c; bright ones must match the reciprocal-space
    model.
    """
    P = len(w)
    n = profiles[0].shape[0]
    g = np.array([sp * Ep.ravel() / n for sp, Ep in zip(s, profiles)])  # (P, n^2)
    K = g.shape[1]
    N = P + K
    A = np.zeros((N, N))
    Bm = np.zeros((N, N))
    A[:P, :P] = np.diag(w)
    A[P:, P:] = omega_c * np.eye(K)
    A[P:, :P] = g.T
    A[:P, P:] = g
    Bm[P:, :P] = g.T
    Bm[:P, P:] = g
    if include_a2:
        D = np.array([[si * sj * np.mean(Ei * Ej) / omega_c for sj, Ej in zip(s, profiles)] for si, Ei in zip(s, profiles)])
        A[:P, :P] += 2 * D
        Bm[:P, :P] += 2 * D
    return np.block([[A, Bm], [Bm, A]])


def hopfield_quartic_roots(wp, wc, Omega, D):
    """Positive roots of (w^2 - wp^2 - 4 D wp)(w^2 - wc^2) = 4 Omega^2 wp wc."""
    c4, c2 = 1.0, -(wp**2 + 4 * D * wp + wc**2)
    c0 = (wp**2 + 4 * D * wp) * wc**2 - 4 * Omega**2 * wp * wc
    r = np.roots([c4, 0, c2, 0, c0])
    return np.sort(r.real[(r.real > 0) & (np.abs(r.imag) < 1e-9 * np.abs(r).max())])


def fock_correlations(w, wc, Omega, D, nmax=8):
    """Exact-diagonalization <a_p^dag a_p'> for photons coupled to one bright CR mode.

    H = sum w_p a_p^dag a_p + wc b^dag b + sum_p Omega_p (b + b^dag)(a_p + a_p^dag)
        + sum_pp' D_pp' (a_p + a_p^dag)(a_p' + a_p'^dag)
    in a truncated Fock basis with ``nmax`` levels per mode.
    """
    P = len(w)
    d = nmax
    a1 = np.diag(np.sqrt(np.arange(1, d)), 1)
    I1 = np.eye(d)

    def op(single, k, nmodes):
        mats = [I1] * nmodes
        mats[k] = single
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    nm = P + 1
    a = [op(a1, k, nm) for k in range(P)]
    b = op(a1, P, nm)
    x = [ak + ak.T for ak in a]
    H = wc * b.T @ b
    for p in range(P):
        H = H + w[p] * a[p].T @ a[p] + Omega[p] * (b + b.T) @ x[p]
    for p, q in itertools.product(range(P), repeat=2):
        H = H + D[p][q] * x[p] @ x[q]
    vals, vecs = np.linalg.eigh(H)
    g = vecs[:, 0]
    return np.array([[g @ a[p].T @ a[q] @ g for q in range(P)] for p in range(P)])


def two_port_lorentzian(omega, wp, gamma):
    """Transmission of one mode with two identical ports sharing the decay rate ``gamma``."""
    return (gamma / 2) ** 2 / ((omega - wp) ** 2 + (gamma / 2) ** 2)


def sheet_transmission(omega, n_e, m_eff, gamma, omega_c, n1=1.0, n2=1.0, channel=-1):
    """Power transmission of an infinitely thin Drude sheet between media n1 and n2.

    t = 2 n1 / (n1 + n2 + Z0 sigma), sigma = i n e^2/m / (w + i gamma + channel * omega_c).
    """
    Z0 = sc.mu_0 * sc.c
    sig = 1j * n_e * E**2 / m_eff / (omega + 1j * gamma + channel * omega_c)
    t = 2 * n1 / (n1 + n2 + Z0 * sig)
    return (n2 / n1) * np.abs(t) ** 2


def mp_gyro_components(f_hz, B, n_e, m_ratio, gamma, d, eps_bg, dps=40):
    """(eps_xx, eps_xy) in the exp(-i w t) convention at high precision."""
    with mp.workdps(dps):
        e, me, eps0 = (mp.mpf(repr(x)) for x in (E, ME, EPS0))
        m = mp.mpf(repr(m_ratio)) * me
        w = 2 * mp.pi * mp.mpf(repr(f_hz))
        wc = e * mp.mpf(repr(B)) / m
        P = mp.mpf(repr(n_e)) * e**2 / (eps0 * m)
        wg = w + 1j * mp.mpf(repr(gamma))
        den = w * mp.mpf(repr(d)) * (wg**2 - wc**2)
        exx = mp.mpf(repr(eps_bg)) - P * wg / den
        exy = 1j * P * wc / den
        return complex(exx), complex(exy)
