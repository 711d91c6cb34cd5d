"""Composite Lorentzian-plus-Gaussian-dip line fits and B-field peak tracking."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks


@dataclass(frozen=True)
class GaussianDip:
    center: float
    width: float  # standard deviation [Hz]
    depth: float


@dataclass(frozen=True)
class FitModel:
    """baseline + Lorentzian(center, fwhm, amplitude) - sum of Gaussian dips."""

    center: float
    fwhm: float
    amplitude: float
    dips: tuple[GaussianDip, ...] = ()
    baseline: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "dips", tuple(self.dips))
        if not self.fwhm > 0:
            raise ValueError("fwhm must be positive")
        for d in self.dips:
            if not d.width > 0 or d.depth < 0:
                raise ValueError("dip widths must be positive and depths non-negative")

    def lorentzian(self, f) -> np.ndarray:
        hw = 0.5 * self.fwhm
        return self.amplitude * hw**2 / ((np.asarray(f) - self.center) ** 2 + hw**2)

    def __call__(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        y = self.baseline + self.lorentzian(f)
        for d in self.dips:
            y = y - d.depth * np.exp(-0.5 * ((f - d.center) / d.width) ** 2)
        return y

    # parameter vector: [center, fwhm, amplitude, baseline, (c, w, depth) per dip]
    def to_vector(self) -> np.ndarray:
        v = [self.center, self.fwhm, self.amplitude, self.baseline]
        for d in self.dips:
            v += [d.center, d.width, d.depth]
        return np.array(v, dtype=float)

    @classmethod
    def from_vector(cls, v) -> "FitModel":
        v = np.asarray(v, dtype=float)
        dips = tuple(GaussianDip(*v[4 + 3 * k:7 + 3 * k]) for k in range((len(v) - 4) // 3))
        return cls(v[0], v[1], v[2], dips, v[3])

    def param_names(self) -> list[str]:
        names = ["center", "fwhm", "amplitude", "baseline"]
        for k in range(len(self.dips)):
            names += [f"dip{k}_center", f"dip{k}_width", f"dip{k}_depth"]
        return names


@dataclass
class FitResult:
    model: FitModel
    converged: bool
    residual_norm: float
    nfev: int
    message: str
    stderr: np.ndarray
    covariance: np.ndarray
    fixed: np.ndarray = field(default_factory=lambda: np.zeros(0, bool))

    def report(self) -> str:
        """Structured text record: one ``key = value`` per line."""
        lines = [f"converged = {str(self.converged).lower()}",
                 f"residual_norm = {self.residual_norm:.10g}",
                 f"nfev = {self.nfev}",
                 f"message = {self.message}"]
        for name, val, err, fx in zip(self.model.param_names(), self.model.to_vector(), self.stderr, self.fixed):
            lines.append(f"{name} = {val:.10g} +- {err:.3g}{' (fixed)' if fx else ''}")
        return "\n".join(lines) + "\n"


def _bounds(init: FitModel, f: np.ndarray, y: np.ndarray):
    span = f[-1] - f[0]
    df = np.min(np.diff(f)) if f.size > 1 else span
    ymax = np.max(np.abs(y)) or 1.0
    # features narrower than the sampling are not resolvable
    lo = [f[0], df, 0.0, -np.inf]
    hi = [f[-1], 10 * span, np.inf, np.inf]
    for _ in init.dips:
        lo += [f[0], 0.5 * df, 0.0]
        hi += [f[-1], span, 10 * ymax]
    return np.array(lo), np.array(hi)


def fit_composite(freq, amp, init: FitModel, bounds=None, fixed=None, max_nfev: int = 500,
                  ftol: float = 1e-10) -> FitResult:
    """Bounded least-squares fit of ``init``'s model family to a spectrum.

    ``fixed`` is a boolean mask (or list of parameter names) held at their
    initial values. Frequencies and amplitudes are rescaled internally so the
    optimizer works with O(1) numbers. A fit that runs out of evaluations is
    returned with ``converged=False`` and the best point found.
    """
    f = np.asarray(freq, dtype=float)
    y = np.asarray(amp, dtype=float)
    if f.shape != y.shape or f.size < 4:
        raise ValueError("need matching frequency and amplitude arrays with at least 4 points")
    if not f[0] <= init.center <= f[-1]:
        raise ValueError("initial center outside the spectrum")
    p0 = init.to_vector()
    names = init.param_names()
    if fixed is None:
        mask = np.zeros(p0.size, bool)
    elif len(fixed) and isinstance(next(iter(fixed)), str):
        unknown = set(fixed) - set(names)
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}")
        mask = np.array([n in fixed for n in names])
    else:
        mask = np.asarray(fixed, dtype=bool)
    lo, hi = bounds if bounds is not None else _bounds(init, f, y)
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)

    # scale: x' = (x - f0)/fs for centers, x/fs for widths, y/ys for amplitudes
    f0, fs = 0.5 * (f[0] + f[-1]), 0.5 * (f[-1] - f[0]) or 1.0
    ys = np.max(np.abs(y)) or 1.0
    kind = np.array(["c", "w", "a", "a"] + ["c", "w", "a"] * len(init.dips))
    off = np.where(kind == "c", f0, 0.0)
    sc = np.where(kind == "a", ys, fs)

    def to_scaled(v):
        return (v - off) / sc

    def from_scaled(u):
        return u * sc + off

    free = ~mask
    u0 = to_scaled(p0)
    ulo, uhi = to_scaled(lo), to_scaled(hi)
    u0 = np.clip(u0, ulo, uhi)
    xs = (f - f0) / fs

    def resid(uf):
        u = u0.copy()
        u[free] = uf
        m = FitModel.from_vector(from_scaled(u))
        return (m(xs * fs + f0) - y) / ys

    if not np.any(free):
        r = resid(u0[free])
        return FitResult(init, True, float(np.linalg.norm(r) * ys), 1, "all parameters fixed",
                         np.zeros(p0.size), np.zeros((p0.size, p0.size)), mask)
    # keep the start strictly inside the box
    with np.errstate(invalid="ignore"):
        lo_in = np.where(np.isfinite(ulo), ulo + 1e-12 * (1 + np.abs(ulo)), -np.inf)
        hi_in = np.where(np.isfinite(uhi), uhi - 1e-12 * (1 + np.abs(uhi)), np.inf)
    start = np.clip(u0[free], lo_in[free], hi_in[free])
    sol = least_squares(resid, start, bounds=(ulo[free], uhi[free]), method="trf", ftol=ftol,
                        xtol=1e-12, gtol=1e-12, max_nfev=max_nfev, x_scale="jac")
    u = u0.copy()
    u[free] = sol.x
    vec = from_scaled(u)

    cov = np.full((p0.size, p0.size), np.nan)
    dof = max(f.size - int(free.sum()), 1)
    s2 = 2 * sol.cost / dof
    try:
        cf = np.linalg.inv(sol.jac.T @ sol.jac) * s2
        sfree = sc[free]
        cov_free = cf * np.outer(sfree, sfree)
        cov[np.ix_(free, free)] = cov_free
    except np.linalg.LinAlgError:
        pass
    cov[mask, :] = 0.0
    cov[:, mask] = 0.0
    err = np.sqrt(np.clip(np.diag(cov), 0, None))
    model = FitModel.from_vector(vec)
    return FitResult(model, bool(sol.status > 0), float(np.linalg.norm(sol.fun) * ys), int(sol.nfev),
                     str(sol.message), err, cov, mask)


def seed_dips(freq, amp, n: int, width: float | None = None) -> tuple[GaussianDip, ...]:
    """Guess ``n`` dips from the deepest local minima of a spectrum."""
    f = np.asarray(freq, dtype=float)
    y = np.asarray(amp, dtype=float)
    idx, props = find_peaks(-y, prominence=0)
    order = np.argsort(props["prominences"])[::-1][:n]
    w = width if width is not None else 3 * (f[1] - f[0])
    return tuple(GaussianDip(float(f[i]), w, float(props["prominences"][k])) for k, i in zip(order, idx[order]))


@dataclass
class TrackResult:
    B: np.ndarray
    fits: list
    lost: np.ndarray  # per B
    fp_dips: np.ndarray  # per dip: classified as B-independent (Fabry-Perot)
    active: np.ndarray  # (nB, n_dips): dip inside the fit window and free

    @property
    def centers(self) -> np.ndarray:
        return np.array([r.model.center for r in self.fits])

    @property
    def fwhm(self) -> np.ndarray:
        return np.array([r.model.fwhm for r in self.fits])

    def table(self) -> list[tuple[float, float, bool]]:
        """(B, peak frequency, lost flag) rows."""
        return [(float(b), float(c), bool(l)) for b, c, l in zip(self.B, self.centers, self.lost)]


def _track_pass(freq, spectra, init, fixed_dips, max_jump, window):
    fits, lost, active = [], [], []
    model = init
    for y in spectra:
        if window is not None:
            sel = np.abs(freq - model.center) <= window
            if sel.sum() < 8:
                sel = np.ones_like(freq, dtype=bool)
        else:
            sel = np.ones_like(freq, dtype=bool)
        f, yy = freq[sel], y[sel]
        inside = [f[0] <= d.center <= f[-1] for d in model.dips]
        mask = []
        for k in range(len(model.dips)):
            hold = fixed_dips[k] or not inside[k]
            mask += [hold, hold, hold and not inside[k]]
        fixed = np.array([False] * 4 + mask, dtype=bool)
        start = model if f[0] <= model.center <= f[-1] else replace(model, center=float(f[np.argmax(yy)]))
        res = fit_composite(f, yy, start, fixed=fixed, bounds=_bounds_with_outside(start, f, yy))
        jump = abs(res.model.center - model.center)
        limit = max_jump if max_jump is not None else 5 * model.fwhm
        bad = (not res.converged) or jump > limit
        fits.append(res)
        lost.append(bad)
        active.append([inside[k] and not fixed_dips[k] for k in range(len(model.dips))])
        if not bad:
            model = res.model
    return fits, np.array(lost, dtype=bool), np.array(active, dtype=bool).reshape(len(fits), len(init.dips))


def _bounds_with_outside(model: FitModel, f, y):
    # dips outside the window keep their (fixed) values, so their bounds must admit them
    lo, hi = _bounds(model, f, y)
    v = model.to_vector()
    return np.minimum(lo, v), np.maximum(hi, v)


def track_peaks(freq, spectra, B, init: FitModel, drift_tol: float = 0.01,
                max_jump: float | None = None, window: float | None = None) -> TrackResult:
    """Fit a peak across a field series, each B seeded from the previous result.

    ``window`` restricts every fit to ``|f - center| <= window`` around the
    seed; dips outside it are held at their current values. Dips whose
    fitted centers drift by less than ``drift_tol`` (relative) over the fits
    where they were free are classified as Fabry-Perot artifacts, and the
    series is refitted with their centers and widths fixed at the median
    values. With a single spectrum there is no drift statistic and the dips
    are used as given.
    """
    B = np.asarray(B, dtype=float)
    freq = np.asarray(freq, dtype=float)
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    if spectra.shape[0] != B.size:
        raise ValueError("one spectrum per field value required")
    if B.size > 1 and np.any(np.diff(B) == 0):
        raise ValueError("field values must be distinct and ordered")
    nd = len(init.dips)
    fits, lost, active = _track_pass(freq, spectra, init, [False] * nd, max_jump, window)
    fp = np.zeros(nd, dtype=bool)
    if B.size > 1 and nd:
        cent = np.array([[d.center for d in r.model.dips] for r in fits])
        wid = np.array([[d.width for d in r.model.dips] for r in fits])
        use = active & ~lost[:, None]
        dips = list(init.dips)
        for k in range(nd):
            ck = cent[use[:, k], k]
            if ck.size < 2:
                continue
            fp[k] = (ck.max() - ck.min()) / abs(np.median(ck)) < drift_tol
            if fp[k]:
                dips[k] = replace(dips[k], center=float(np.median(ck)), width=float(np.median(wid[use[:, k], k])))
        if np.any(fp):
            fits, lost, active = _track_pass(freq, spectra, replace(init, dips=tuple(dips)), list(fp), max_jump, window)
    return TrackResult(B, fits, lost, fp, active)
