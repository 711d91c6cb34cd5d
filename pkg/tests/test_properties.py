import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from mmusc.core import ModeProfile, PhysParams, couplings_at_field, grid_axis
from mmusc.core.params import TWO_PI
from mmusc.hopfield import HamiltonianFlags, HopfieldModel, assemble, diagonalize, toy_model
from mmusc.hopfield.hamiltonian import HopfieldMatrix
from mmusc.spectro import deviation_D

A = 333e-6


def random_profiles(seed, n_modes, n=8):
    rng = np.random.default_rng(seed)
    x = grid_axis(n, A)
    X, Y = np.meshgrid(x, x, indexing="ij")
    k = TWO_PI / A
    out = []
    for i in range(n_modes):
        comps = {}
        for c in ("x", "y"):
            f = np.zeros((n, n))
            for _ in range(3):
                mx, my = rng.integers(0, 3, size=2)
                ph = rng.uniform(0, TWO_PI, size=2)
                f += rng.normal() * np.cos(mx * k * X + ph[0]) * np.cos(my * k * Y + ph[1])
            comps[c] = f
        out.append(ModeProfile(p=i + 1, sigma="xy"[i % 2], omega_p=TWO_PI * rng.uniform(0.2e12, 0.8e12),
                               Q=rng.uniform(20, 200), a=A, grid=comps))
    return tuple(out)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n_modes=st.integers(1, 4), B=st.floats(0.05, 10.0),
       log_ne=st.floats(13.0, 17.0))
def test_bogoliubov_norms_random_configurations(seed, n_modes, B, log_ne):
    m = HopfieldModel(random_profiles(seed, n_modes), PhysParams(n_e=10**log_ne))
    sol = m.solve(B)
    assert sol.is_stable
    assert np.all(np.isreal(sol.omega)) and np.all(sol.omega > 0)
    np.testing.assert_allclose(sol.symplectic_norms(), 1.0, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e11, 5e12), min_size=1, max_size=5), st.floats(1e11, 5e12))
def test_zero_coupling_returns_bare_modes(w, wc):
    w = np.array(w)
    M = assemble(w, wc, np.zeros((len(w), 2)), np.zeros((len(w), len(w))), HamiltonianFlags())
    sol = diagonalize(HopfieldMatrix(M, len(w), 2, tuple((i, "y") for i in range(len(w))), (("G", 0, 0),) * 2, w, wc))
    np.testing.assert_allclose(sol.omega, np.sort(np.r_[w, wc, wc]), rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(eps=st.floats(0.0, 1.0), B=st.floats(0.05, 5.0))
def test_toy_spectrum_real_and_normalized(eps, B):
    sol = toy_model(eps, grid_n=16).solve(B)
    assert sol.is_stable and sol.n_modes == 6
    np.testing.assert_allclose(sol.symplectic_norms(), 1.0, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n_modes=st.integers(2, 4), B=st.floats(0.05, 5.0))
def test_overlap_matrix_hermitian_and_bounded(seed, n_modes, B):
    xi = couplings_at_field(random_profiles(seed, n_modes), B).xi
    np.testing.assert_allclose(xi, xi.conj().T, atol=1e-12)
    assert np.all(np.abs(xi) <= 1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e10, 1e10), min_size=1, max_size=40), st.integers(1, 40), st.randoms())
def test_deviation_permutation_invariant(r, N, rnd):
    p = list(r)
    rnd.shuffle(p)
    assert np.isclose(deviation_D(r, N), deviation_D(p, N), rtol=1e-12, atol=0)
