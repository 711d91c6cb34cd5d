"""Scenario runners: each writes CSV/JSON artifacts and returns a summary dict."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..core.couplings import fom_eta, fom_lambda, overlap_xi
from ..core.params import TWO_PI, PhysParams
from ..core.profile_io import ProfileFormatError, read_profile
from ..hopfield import (HamiltonianFlags, HopfieldModel, NoMiddlePolariton, collapse_deviation, collapse_paths,
                        dispersion_sweep, ground_state_correlations, mp_weights, toy_model)
from ..hopfield.bogoliubov import DiagonalizationError
from ..inout import DissipationSpec, map_array, transmission_map, write_map_csv, write_map_matrix
from ..magnetofilm import GyroParams, Layer, LayerStack, cr_dip_frequency, film_transmission
from ..spectro import (FitModel, GaussianDip, deviation_report, read_waveform_csv, track_peaks,
                       window_and_fft)
from .config import ConfigError, RunConfig

log = logging.getLogger(__name__)


class NumericalInstability(RuntimeError):
    pass


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


@dataclass
class RunContext:
    cfg: RunConfig
    base_dir: Path
    out_dir: Path
    threads: int = 1
    seed: int = 0
    plots: bool = True
    artifacts: list[Path] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    instabilities: list[str] = field(default_factory=list)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.artifacts.append(p)
        return p

    def write_csv(self, name: str, header, rows, comment: str | None = None) -> Path:
        p = self.path(name)
        with p.open("w", newline="") as fh:
            if comment:
                fh.write(f"# {comment}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
        return p

    def write_json(self, name: str, obj) -> Path:
        p = self.path(name)
        p.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return p

    def plot(self, fn, name: str, *args, **kw):
        if self.plots:
            fn(*args, path=self.path(name), **kw)


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(ctx: RunContext, config_text: str, summary: dict) -> Path:
    entries = [{"path": p.relative_to(ctx.out_dir).as_posix(), "sha256": sha256(p), "bytes": p.stat().st_size}
               for p in sorted(set(ctx.artifacts))]
    manifest = {
        "tool": "mmusc",
        "version": __version__,
        "scenario": ctx.cfg.scenario,
        "seed": ctx.seed,
        "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        "artifacts": entries,
        "summary": summary,
        "diagnostics": ctx.diagnostics,
    }
    p = ctx.out_dir / "manifest.json"
    p.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return p


# ---------------------------------------------------------------- model setup

def _cavity_model(ctx: RunContext) -> HopfieldModel:
    cfg = ctx.cfg
    params = cfg.params.physical()
    flags = HamiltonianFlags.preset(cfg.flags)
    if cfg.scenario == "toy" or cfg.profiles is None:
        t = cfg.toy
        return toy_model(t.eps, t.f1_THz * 1e12, t.f2_THz * 1e12, params, flags, t.grid_n, t.Q)
    profiles = []
    for f in cfg.profiles.files:
        path = (ctx.base_dir / f)
        if not path.exists():
            raise ConfigError(f"profile file not found: {path}")
        try:
            prof = read_profile(path)
        except ProfileFormatError as exc:
            raise ConfigError(str(exc)) from None
        if not np.isclose(prof.a, params.a, rtol=1e-9):
            raise ConfigError(f"{path}: lattice constant {prof.a * 1e6:g} um differs from params.lattice_um "
                              f"{params.a * 1e6:g} um")
        profiles.append(prof)
    return HopfieldModel(tuple(profiles), params, flags, cfg.profiles.drop_tol)


def _label(lab) -> str:
    return f"{lab[0]}{lab[1]}"


def _fom_summary(model: HopfieldModel, B: float) -> dict:
    cs = model.couplings(B)
    labels = cs.labels
    out = {"B_T": B, "omega_c_GHz": cs.omega_c / TWO_PI / 1e9, "modes": {}, "xi": {}, "eta": {}, "Lambda": {},
           "D_GHz": {}}
    for lab, w, om in zip(labels, cs.omega, cs.Omega):
        out["modes"][_label(lab)] = {"freq_GHz": w / TWO_PI / 1e9, "Omega_GHz": om / TWO_PI / 1e9,
                                     "Omega_over_omega": om / w}
    D = cs.D
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if j <= i:
                continue
            key = f"{_label(a)}-{_label(b)}"
            out["D_GHz"][key] = float(D[i, j].real / TWO_PI / 1e9)
            if cs.Omega[i] > 0 and cs.Omega[j] > 0:
                xi = overlap_xi(cs, a[0], b[0], a[1], b[1])
                out["xi"][key] = {"abs": abs(xi), "phase": float(np.angle(xi))}
            if a[1] == b[1]:
                eta = fom_eta(cs, a[0], b[0], a[1])
                out["eta"][key] = {"value": eta.value, "phase": eta.phase}
                if cs.omega[i] != cs.omega[j]:
                    lam = fom_lambda(cs, a[1], a[0], b[0])
                    out["Lambda"][key] = {"value": lam.value, "phase": lam.phase}
    return out


def _ghz(w):
    return np.asarray(w) / TWO_PI / 1e9


def _check_stability(ctx: RunContext, where: str, B_values):
    for B in B_values:
        msg = f"{where}: unstable polariton spectrum (complex eigenfrequency) at B = {B:.6g} T"
        ctx.diagnostics.append(msg)
        ctx.instabilities.append(msg)


# ---------------------------------------------------------------- cavity tasks

def _task_sweep(ctx: RunContext, model: HopfieldModel, summary: dict):
    from .plotting import plot_dispersion

    sc = ctx.cfg.sweep
    B = sc.B_T.array()
    sw = dispersion_sweep(model, B, threads=ctx.threads, keep_solutions=True)
    _check_stability(ctx, "sweep", sw.unstable_B)
    rows = [(b, k, f, int(s)) for i, b in enumerate(sw.B)
            for k, (f, s) in enumerate(zip(_ghz(sw.omega[i]), sw.stable[i]))]
    ctx.write_csv("dispersion.csv", ["B_T", "branch_index", "freq_GHz", "stability_flag"], rows)
    ctx.write_csv("photon_fraction.csv", ["B_T", "branch_index", "photon_fraction"],
                  [(b, k, pf) for i, b in enumerate(sw.B) for k, pf in enumerate(sw.photon_fraction[i])])
    labels = [_label(l) for l in sw.photon_labels]
    pairs = [(i, j) for i in range(len(labels)) for j in range(i, len(labels))]
    corr_rows = []
    for b, sol in zip(sw.B, sw.solutions):
        if sol.is_stable:
            C = ground_state_correlations(sol)
            corr_rows += [(b, labels[i], labels[j], C[i, j].real, C[i, j].imag) for i, j in pairs]
    ctx.write_csv("correlations_vs_B.csv", ["B_T", "mode", "mode2", "re", "im"], corr_rows)
    if sc.correlations_at_T is not None:
        sol = model.solve(sc.correlations_at_T)
        if sol.is_stable:
            C = ground_state_correlations(sol)
            ctx.write_csv("correlations.csv", ["mode"] + [f"{l}_re" for l in labels] + [f"{l}_im" for l in labels],
                          [[labels[i]] + list(C[i].real) + list(C[i].imag) for i in range(len(labels))],
                          comment=f"<a_p^dag a_p'> in the polariton vacuum at B = {sc.correlations_at_T:g} T")
        else:
            _check_stability(ctx, "correlations", [sc.correlations_at_T])
    info = {"n_branches": sw.n_branches, "n_bright_max": int(sw.bright().sum(1).max()),
            "unstable_B_T": [float(b) for b in sw.unstable_B]}
    if sc.jump_threshold_GHz is not None:
        info["discontinuities"] = [{"B_T": b, "branch": k} for b, k in
                                   sw.discontinuities(TWO_PI * sc.jump_threshold_GHz * 1e9)]
    if sc.mp_weights:
        try:
            Bs, w = mp_weights(sw)
            info["mp_crossing"] = {"B_T": Bs, "weights": dict(zip(labels, map(float, w)))}
        except NoMiddlePolariton as exc:
            info["mp_crossing"] = str(exc)
    summary["sweep"] = info
    ctx.plot(plot_dispersion, "dispersion.png", sw.B, _ghz(sw.omega), sw.bright(), _ghz(sw.omega_c),
             _ghz(np.unique(model.couplings(B[-1]).omega)))


def _task_transmission(ctx: RunContext, model: HopfieldModel, summary: dict):
    from .plotting import plot_map

    tc = ctx.cfg.transmission
    B, f = tc.B_T.array(), tc.freq_GHz.array() * 1e9
    sig_out = tc.sigma_out or tc.sigma_in
    diss = DissipationSpec.for_model(model.profiles, model.params)
    series = transmission_map(model, B, f, tc.sigma_in, sig_out, diss)
    ctx.path("transmission_long.csv")
    write_map_csv(series, ctx.out_dir / "transmission_long.csv")
    ctx.path("transmission_matrix.csv")
    write_map_matrix(series, ctx.out_dir / "transmission_matrix.csv")
    summary["transmission"] = {"sigma_in": tc.sigma_in, "sigma_out": sig_out, "n_B": len(B), "n_freq": len(f),
                               "T_max": float(map_array(series).max())}
    ctx.plot(plot_map, "transmission_map.png", B, f / 1e9, map_array(series), title=f"T {tc.sigma_in}{sig_out}")


def _task_collapse(ctx: RunContext, summary: dict):
    from .plotting import plot_lines

    cc = ctx.cfg.collapse
    params = ctx.cfg.params.physical()
    paths = collapse_paths(cc.B_T, cc.points, cc.f_max_THz * 1e12, params, HamiltonianFlags.preset(ctx.cfg.flags))
    rows = [(name, x, e, c.real, c.imag) for name, p in paths.items()
            for x, e, c in zip(p.parameter, p.eta, p.corr)]
    ctx.write_csv("collapse.csv", ["path", "parameter", "eta12", "corr12_re", "corr12_im"], rows,
                  comment="parameter: Hz for omega1/omega2 paths, overlap for eps path")
    dev, n = collapse_deviation(paths, cc.eta_rtol)
    summary["collapse"] = {"max_relative_deviation": dev, "matched_pairs": n, "eta_rtol": cc.eta_rtol}
    ctx.plot(plot_lines, "collapse.png", {k: p.eta for k, p in paths.items()},
             {k: p.corr.real for k, p in paths.items()}, "eta_12", "<a1^dag a2>", style="o")


def _task_toggles(ctx: RunContext, summary: dict):
    from .plotting import plot_lines

    tg = ctx.cfg.toggles
    t = ctx.cfg.toy
    params = ctx.cfg.params.physical()
    B = tg.B_T.array()
    rows, series, unstable = [], {}, {}
    for name in tg.presets:
        model = toy_model(t.eps, t.f1_THz * 1e12, t.f2_THz * 1e12, params, HamiltonianFlags.preset(name),
                          t.grid_n, t.Q)
        vals = []
        for b in B:
            try:
                sol = model.solve(b)
            except (DiagonalizationError, ValueError) as exc:
                ctx.diagnostics.append(f"toggles/{name}: B = {b:.6g} T: {exc}")
                vals.append(np.nan)
                continue
            if not sol.is_stable:
                _check_stability(ctx, f"toggles/{name}", [b])
                unstable.setdefault(name, []).append(float(b))
                vals.append(np.nan)
                continue
            C = ground_state_correlations(sol)
            vals.append(C[0, 1].real)
            rows.append((b, name, C[0, 0].real, C[0, 1].real, C[1, 1].real))
        series[name] = np.array(vals)
    ctx.write_csv("toggles.csv", ["B_T", "preset", "n11", "corr12", "n22"], rows)
    info = {}
    for name, v in series.items():
        ok = v[np.isfinite(v)]
        info[name] = {"min": float(ok.min()) if ok.size else None, "max": float(ok.max()) if ok.size else None}
    if "antiresonant" in series and "full" in series:
        info["antiresonant_ge_full"] = bool(np.all(series["antiresonant"] >= series["full"]))
    summary["toggles"] = info
    ctx.plot(plot_lines, "toggles.png", B, series, "B (T)", "<a1^dag a2>")


def run_cavity(ctx: RunContext) -> dict:
    model = _cavity_model(ctx)
    summary = {}
    ref_B = ctx.cfg.profiles.reference_B_T if ctx.cfg.profiles else 0.81
    summary["figures_of_merit"] = _fom_summary(model, ref_B)
    ctx.write_json("figures_of_merit.json", summary["figures_of_merit"])
    if ctx.cfg.sweep:
        _task_sweep(ctx, model, summary)
    if ctx.cfg.transmission:
        _task_transmission(ctx, model, summary)
    if ctx.cfg.collapse:
        _task_collapse(ctx, summary)
    if ctx.cfg.toggles:
        _task_toggles(ctx, summary)
    return summary


# ---------------------------------------------------------------- magnetofilm

def run_magnetofilm(ctx: RunContext) -> dict:
    from .plotting import plot_lines

    fc = ctx.cfg.film
    pp = ctx.cfg.params.physical()
    f = fc.freq_GHz.array() * 1e9
    if np.any(f <= 0):
        raise ConfigError("film.freq_GHz must be positive")
    layers = (Layer(fc.substrate_um * 1e-6, fc.eps_substrate),) if fc.substrate_um > 0 else ()
    stack = LayerStack(layers, sheet_index=0)
    summary = {"time_convention": "exp(-i w t)", "spectra": []}
    curves = {}
    for B in fc.B_T:
        gp = GyroParams(eps_bg=fc.eps_bg, n_e=fc.n_e_m2 if fc.n_e_m2 is not None else pp.n_e, m_eff=pp.m_eff,
                        gamma=TWO_PI * fc.gamma_GHz * 1e9, d=fc.d_um * 1e-6, B=B)
        spec = film_transmission(stack, gp, f)
        name = f"film_B{B:+.4f}T.csv"
        ctx.path(name)
        spec.to_csv(ctx.out_dir / name)
        entry = {"B_T": B, "file": name, "omega_c_GHz": gp.omega_c / TWO_PI / 1e9}
        if B != 0:
            entry["cr_absorption_peak_GHz"] = cr_dip_frequency(stack, gp, f, "minus" if B > 0 else "plus") / 1e9
        summary["spectra"].append(entry)
        curves[f"T- {B:g} T"] = spec.T_minus
    ctx.plot(plot_lines, "film.png", f / 1e9, curves, "frequency (GHz)", "T (CR-active channel)")
    return summary


# ---------------------------------------------------------------- spectroscopy

def _synthetic_spectra(ctx: RunContext):
    sp = ctx.cfg.spectro.synthetic
    t = ctx.cfg.toy
    params = ctx.cfg.params.physical()
    from ..hopfield.hamiltonian import HamiltonianFlags as HF

    if t is None:
        from .config import ToyCfg

        t = ToyCfg()
    model = toy_model(t.eps, t.f1_THz * 1e12, t.f2_THz * 1e12, params, HF.preset(ctx.cfg.flags), t.grid_n, t.Q)
    B, f = sp.B_T.array(), sp.freq_GHz.array() * 1e9
    S = map_array(transmission_map(model, B, f, "y"))
    for fd in sp.fp_dips_GHz:
        S = S - sp.fp_depth * S.max() * np.exp(-0.5 * ((f - fd * 1e9) / (sp.fp_width_GHz * 1e9)) ** 2)
    rng = np.random.default_rng(ctx.seed)
    S = S + sp.noise * S.max() * rng.standard_normal(S.shape)
    sw = dispersion_sweep(model, B)
    ref = []
    for i in range(len(B)):
        br = sw.omega[i][sw.bright()[i]]
        ref.append(br[sp.branch] / TWO_PI if sp.branch < br.size else np.nan)
    return B, f, S, np.array(ref)


def _waveform_spectra(ctx: RunContext):
    sc = ctx.cfg.spectro
    entries = sorted(sc.waveforms, key=lambda e: e.B_T)
    B, S, f = [], [], None
    for e in entries:
        path = ctx.base_dir / e.file
        if not path.exists():
            raise ConfigError(f"waveform file not found: {path}")
        try:
            spec = window_and_fft(read_waveform_csv(path), None if sc.t_cut_ps is None else sc.t_cut_ps * 1e-12,
                                  sc.pad_factor)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if f is not None and (spec.freq_hz.shape != f.shape or not np.allclose(spec.freq_hz, f)):
            raise ConfigError(f"{path}: waveform sampling differs from the first waveform")
        f = spec.freq_hz
        B.append(e.B_T)
        S.append(spec.amplitude)
        name = f"spectrum_B{e.B_T:+.4f}T.csv"
        ctx.path(name)
        spec.to_csv(ctx.out_dir / name)
    ref = np.array(sc.reference_GHz) * 1e9 if sc.reference_GHz is not None else None
    if ref is not None and ref.size != len(B):
        raise ConfigError("spectro.reference_GHz needs one value per waveform")
    return np.array(B), f, np.array(S), ref


def run_spectro(ctx: RunContext) -> dict:
    from .plotting import plot_lines

    sc = ctx.cfg.spectro
    B, f, S, ref = _synthetic_spectra(ctx) if sc.synthetic else _waveform_spectra(ctx)
    if sc.fit_window_GHz is not None:
        lo, hi = (x * 1e9 for x in sc.fit_window_GHz)
        keep = (f >= lo) & (f <= hi)
        if keep.sum() < 8:
            raise ConfigError("spectro.fit_window_GHz keeps fewer than 8 frequency points")
        f, S = f[keep], S[:, keep]
    it = sc.init
    c0 = it.center_GHz * 1e9 if it.center_GHz is not None else f[np.argmax(S[0])]
    dips = tuple(GaussianDip(d * 1e9, it.dip_width_GHz * 1e9, 0.02 * float(S.max())) for d in it.dips_GHz)
    init = FitModel(c0, it.fwhm_GHz * 1e9, float(S[0].max()), dips, 0.0)
    tr = track_peaks(f, S, B, init, drift_tol=sc.drift_tol,
                     window=None if sc.window_GHz is None else sc.window_GHz * 1e9)
    rows = []
    for i, r in enumerate(tr.fits):
        row = [B[i], r.model.center / 1e9, r.model.fwhm / 1e9, int(tr.lost[i]), int(r.converged)]
        if ref is not None:
            row += [ref[i] / 1e9, (r.model.center - ref[i]) / 1e9]
        rows.append(row)
    header = ["B_T", "peak_GHz", "fwhm_GHz", "lost", "converged"]
    if ref is not None:
        header += ["reference_GHz", "delta_GHz"]
    ctx.write_csv("peaks.csv", header, rows)
    rep = ctx.path("fit_reports.txt")
    rep.write_text("".join(f"[B_T = {b:.10g}]\n{r.report()}\n" for b, r in zip(B, tr.fits)))
    summary = {"n_spectra": len(B), "lost_B_T": [float(b) for b, l in zip(B, tr.lost) if l],
               "fabry_perot_dips": [bool(x) for x in tr.fp_dips]}
    if ref is not None:
        ok = ~tr.lost & np.isfinite(ref)
        if ok.any():
            d = deviation_report(tr.centers[ok] - ref[ok], int(ok.sum()))
            summary["deviation"] = {"D_GHz": d.D / 1e9, "N": d.N, "max_abs_delta_GHz": float(np.abs(d.delta_f).max()) / 1e9}
    for b, l in zip(B, tr.lost):
        if l:
            ctx.diagnostics.append(f"spectro: lost track at B = {b:.6g} T")
    curves = {"fit": tr.centers / 1e9}
    if ref is not None:
        curves["reference"] = ref / 1e9
    ctx.plot(plot_lines, "peaks.png", B, curves, "B (T)", "peak frequency (GHz)", style="o-")
    return summary


RUNNERS = {"toy": run_cavity, "ingest-profiles": run_cavity, "magnetofilm": run_magnetofilm,
           "spectro-pipeline": run_spectro}


def run_scenario(ctx: RunContext) -> dict:
    ctx.out_dir.mkdir(parents=True, exist_ok=True)
    return RUNNERS[ctx.cfg.scenario](ctx)
