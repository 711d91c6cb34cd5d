"""Static plots of computed results (no numeric contract)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# no timestamps or version strings, so reruns are byte identical
_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_META)
    plt.close(fig)
    return path


def plot_dispersion(B, freq_ghz, bright, omega_c_ghz, photon_ghz, path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    for k in range(freq_ghz.shape[1]):
        f = np.where(bright[:, k], freq_ghz[:, k], np.nan)
        ax.plot(B, f, "k-", lw=1)
    ax.plot(B, omega_c_ghz, "g:", lw=1, label="CR")
    for f in photon_ghz:
        ax.axhline(f, ls="--", lw=0.8, color="tab:red")
    ax.set_xlabel("B (T)")
    ax.set_ylabel("frequency (GHz)")
    ax.set_ylim(0, 1.6 * max(photon_ghz))
    ax.legend(loc="upper left")
    return _save(fig, Path(path))


def plot_map(B, freq_ghz, T, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.pcolormesh(B, freq_ghz, np.asarray(T).T, shading="auto", cmap="viridis")
    fig.colorbar(im, ax=ax, label="T")
    ax.set_xlabel("B (T)")
    ax.set_ylabel("frequency (GHz)")
    ax.set_title(title)
    return _save(fig, Path(path))


def plot_lines(x, ys: dict, xlabel: str, ylabel: str, path, style: str = "-") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    for name, y in ys.items():
        xv = x[name] if isinstance(x, dict) else x
        ax.plot(xv, y, style, ms=3, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    return _save(fig, Path(path))
