import numpy as np
import pytest
from oracles import two_port_lorentzian

from mmusc.core import ModeProfile, grid_axis
from mmusc.core.params import TWO_PI
from mmusc.hopfield import HamiltonianFlags, HopfieldModel, assemble, dispersion_sweep, toy_model
from mmusc.hopfield.hamiltonian import HopfieldMatrix
from mmusc.inout import (DissipationSpec, SingularResponse, map_array, ridge_frequencies, transmission_map,
                         transmission_spectrum, write_map_csv, write_map_matrix, write_spectrum_csv)

A = 333e-6
WP = TWO_PI * 0.339e12
GP = WP / 72


def _bare(labels, w, omega_c=TWO_PI * 0.3e12):
    w = np.asarray(w, dtype=float)
    M = assemble(w, omega_c, np.zeros((len(w), 1)), None, HamiltonianFlags(include_a2=False))
    return HopfieldMatrix(M, len(w), 1, tuple(labels), (("G", 0, 0),), w, omega_c)


def _grid_for(center, half, df):
    n = int(round(2 * half / df)) + 1
    return np.linspace(center - half, center + half, n)


def test_single_mode_lorentzian_oracle():
    H = _bare([(1, "y")], [WP])
    f = _grid_for(WP / TWO_PI, 30e9, 0.01e9)
    s = transmission_spectrum(H, DissipationSpec([GP], TWO_PI * 5.7e9), f, "y", "y")
    ref = two_port_lorentzian(TWO_PI * f, WP, GP)
    np.testing.assert_allclose(s.T, ref, atol=1e-12)
    assert s.T.max() == pytest.approx(1.0, abs=1e-6)
    assert abs(f[s.T.argmax()] - WP / TWO_PI) <= f[1] - f[0]
    above = f[s.T >= 0.5]
    fwhm = TWO_PI * (above[-1] - above[0])
    assert fwhm == pytest.approx(GP, rel=0.05)


def test_orthogonal_polarization_without_cross_terms_is_zero():
    H = _bare([(1, "x"), (2, "y")], [WP, 1.1 * WP])
    f = np.linspace(0.3e12, 0.4e12, 201)
    s = transmission_spectrum(H, DissipationSpec([GP, GP], 1e10), f, "x", "y")
    assert np.all(s.T == 0.0)


def test_unknown_polarization_rejected():
    H = _bare([(1, "y")], [WP])
    with pytest.raises(ValueError):
        transmission_spectrum(H, DissipationSpec([GP], 1e10), [3e11], "x", "y")


def test_rates_must_be_positive():
    with pytest.raises(ValueError):
        DissipationSpec([GP, 0.0], 1e10)
    with pytest.raises(ValueError):
        DissipationSpec.from_quality([WP], [-3.0])


def test_input_amplitude_cancels():
    H = toy_model(1.0, grid_n=16).hamiltonian(0.81)
    d = DissipationSpec.for_model(toy_model(1.0, grid_n=16).profiles)
    f = np.linspace(0.2e12, 0.6e12, 301)
    a = transmission_spectrum(H, d, f, "y", "y", amplitude=1.0).T
    b = transmission_spectrum(H, d, f, "y", "y", amplitude=3.7 - 2j).T
    np.testing.assert_allclose(a, b, rtol=1e-12)
    assert np.all(a >= 0) and np.all(np.isfinite(a))


def test_zero_damping_on_resonance_is_singular():
    from mmusc.inout.transmission import DissipationSpec as DS
    H = _bare([(1, "y")], [WP])
    d = DS([GP], 1e10)
    object.__setattr__(d, "Gamma_p", np.array([1e-30]))
    object.__setattr__(d, "Gamma_c", 1e-30)
    with pytest.raises(SingularResponse):
        transmission_spectrum(H, d, [WP / TWO_PI], "y", "y")


def _chiral_model():
    n = 16
    x = grid_axis(n, A)
    X, Y = np.meshgrid(x, x, indexing="ij")
    k = TWO_PI / A

    def prof(p, sig, f, ex, ey, Q):
        return ModeProfile(p=p, sigma=sig, omega_p=TWO_PI * f, Q=Q, a=A, grid={"x": ex, "y": ey})

    return HopfieldModel((
        prof(1, "x", 0.339e12, np.sin(k * X) * np.sin(k * Y), 0.3 * np.cos(k * Y), 72),
        prof(1, "y", 0.345e12, 0.2 * np.sin(k * Y), np.sin(k * X) * np.cos(k * Y), 72),
        prof(2, "x", 0.384e12, np.cos(k * X) * np.sin(2 * k * Y), 0.1 * np.sin(k * X), 70),
        prof(2, "y", 0.390e12, 0.4 * np.sin(k * X + 0.3), np.cos(2 * k * X) * np.sin(k * Y), 70),
    ))


@pytest.mark.parametrize("B", [0.5, 0.81, 1.3])
def test_reciprocity_under_field_reversal(B):
    m = _chiral_model()
    d = DissipationSpec.for_model(m.profiles)
    f = np.linspace(0.2e12, 0.6e12, 401)
    for si, so in (("x", "y"), ("x", "x"), ("y", "y")):
        a = transmission_spectrum(m.hamiltonian(B), d, f, si, so).T
        b = transmission_spectrum(m.hamiltonian(-B), d, f, so, si).T
        np.testing.assert_allclose(a, b, atol=1e-8)
    assert transmission_spectrum(m.hamiltonian(B), d, f, "x", "y").T.max() > 1e-4


def test_far_detuned_field_approaches_bare_cavity():
    m = toy_model(1.0, grid_n=32)
    bare = m.with_flags(HamiltonianFlags(include_hint=False, include_a2=False))
    d = DissipationSpec.for_model(m.profiles)
    f = np.linspace(0.25e12, 0.5e12, 1001)
    B = 50.0  # omega_c about 60 times the cavity frequencies
    a = transmission_spectrum(m.hamiltonian(B), d, f, "y", "y").T
    b = transmission_spectrum(bare.hamiltonian(B), d, f, "y", "y").T
    assert np.abs(a - b).max() <= 0.01 * b.max()


def test_zero_coupling_map_has_horizontal_ridges():
    from mmusc.core import PhysParams
    m = toy_model(1.0, grid_n=16, params=PhysParams(n_e=1e4))
    f = np.linspace(0.3e12, 0.42e12, 1201)
    series = transmission_map(m, [0.3, 0.8, 1.4], f, "y")
    for s in series:
        np.testing.assert_allclose(ridge_frequencies(s), [0.339e12, 0.384e12], atol=f[1] - f[0])


def test_ridges_follow_bright_eigenvalues():
    m = toy_model(1.0, grid_n=32)
    B = np.linspace(0.3, 1.5, 13)
    f = np.linspace(0.15e12, 0.6e12, 901)
    df = f[1] - f[0]
    d = DissipationSpec.for_model(m.profiles)
    tol = max(df, d.Gamma_c / TWO_PI / 4)
    sweep = dispersion_sweep(m, B)
    bright = sweep.bright()
    for i, s in enumerate(transmission_map(m, B, f, "y")):
        ridges = ridge_frequencies(s)
        ev = sweep.freq_hz[i][bright[i]]
        assert len(ridges) > 0
        assert np.abs(ridges[:, None] - ev[None, :]).min(axis=1).max() <= tol


def test_map_export(tmp_path):
    m = toy_model(1.0, grid_n=16)
    f = np.linspace(0.3e12, 0.4e12, 11)
    series = transmission_map(m, [0.5, 0.9], f, "y")
    assert map_array(series).shape == (2, 11)
    lines = write_map_csv(series, tmp_path / "long.csv").read_text().splitlines()
    assert lines[0] == "B_T,freq_GHz,T" and len(lines) == 23
    assert write_spectrum_csv(series[0], tmp_path / "s.csv").read_text().startswith("freq_GHz,T\n")
    write_map_matrix(series, tmp_path / "mat.csv")
    assert (tmp_path / "mat.csv").stat().st_size > 0
