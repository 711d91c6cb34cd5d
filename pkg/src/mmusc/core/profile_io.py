"""Versioned on-disk format for cavity mode profiles.

A profile is a plain-text manifest plus a numeric payload. Manifest lines are
``key = value``; ``#`` starts a comment. Keys (format_version 1):

=======================  ==========================================================
``format_version``       ``1``
``lattice_a_um``         lattice constant [um]
``omega_GHz``            mode frequency omega_p / 2pi [GHz]
``Q``                    quality factor
``polarization``         ``x`` or ``y``
``p_index``              mode index p
``grid_nx``, ``grid_ny`` in-plane samples per axis (must be equal)
``grid_nz``              optional; number of z samples (z-resolved payload)
``z_samples_um``         comma-separated z samples [um], required with grid_nz
``z_2deg_um``            height of the 2DEG plane [um], required with grid_nz
``components``           comma-separated subset of ``x,y,z,eps`` in payload order
``normalization_constant``  payload values are divided by this constant
``data_file``            payload path, relative to the manifest
``data_format``          ``binary`` or ``csv``
``data_layout``          must be ``row_major_float64_little_endian``
=======================  ==========================================================

Binary payload: for each component in ``components`` order, an array of shape
``(grid_nx, grid_ny[, grid_nz])`` in C order, float64 little endian, with the
sample ``[ix, iy, iz]`` at ``x = ix a / nx``, ``y = iy a / ny``,
``z = z_samples[iz]``. CSV payload: header ``ix,iy[,iz],<components>`` and one
row per sample in the same C order.

After division by ``normalization_constant`` the field obeys
``int drho dz eps E.E = a^3`` over the computational cell. ``eps`` is never
rescaled.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .params import TWO_PI
from .profiles import ModeProfile

FORMAT_VERSION = 1
LAYOUT = "row_major_float64_little_endian"
_DTYPE = np.dtype("<f8")
_REQUIRED = ("format_version", "lattice_a_um", "omega_GHz", "Q", "polarization", "p_index",
             "grid_nx", "grid_ny", "components", "normalization_constant", "data_file",
             "data_layout")
_OPTIONAL = ("grid_nz", "z_samples_um", "z_2deg_um", "data_format")


class ProfileFormatError(ValueError):
    pass


def parse_manifest(text: str, source: str = "<manifest>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProfileFormatError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _REQUIRED and key not in _OPTIONAL:
            raise ProfileFormatError(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ProfileFormatError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    missing = [k for k in _REQUIRED if k not in out]
    if missing:
        raise ProfileFormatError(f"{source}: missing keys {missing}")
    if int(out["format_version"]) != FORMAT_VERSION:
        raise ProfileFormatError(f"{source}: unsupported format_version {out['format_version']}")
    if out["data_layout"] != LAYOUT:
        raise ProfileFormatError(f"{source}: data_layout must be {LAYOUT}")
    return out


def read_profile(manifest_path: str | Path) -> ModeProfile:
    """Load a profile, rescaling the payload by the declared normalization constant."""
    manifest_path = Path(manifest_path)
    m = parse_manifest(manifest_path.read_text(), str(manifest_path))
    nx, ny = int(m["grid_nx"]), int(m["grid_ny"])
    if nx != ny:
        raise ProfileFormatError(f"{manifest_path}: grid must be square, got {nx}x{ny}")
    nz = int(m.get("grid_nz", 0) or 0)
    comps = [c.strip() for c in m["components"].split(",") if c.strip()]
    bad = [c for c in comps if c not in ("x", "y", "z", "eps")]
    if bad or not comps:
        raise ProfileFormatError(f"{manifest_path}: bad components {comps}")
    shape = (nx, ny, nz) if nz else (nx, ny)
    fmt = m.get("data_format", "binary")
    data_path = manifest_path.parent / m["data_file"]
    if fmt == "binary":
        flat = np.fromfile(data_path, dtype=_DTYPE)
        size = int(np.prod(shape))
        if flat.size != size * len(comps):
            raise ProfileFormatError(f"{data_path}: expected {size * len(comps)} values, got {flat.size}")
        arrays = {c: flat[k * size:(k + 1) * size].reshape(shape).astype(float) for k, c in enumerate(comps)}
    elif fmt == "csv":
        arrays = _read_csv_payload(data_path, comps, shape)
    else:
        raise ProfileFormatError(f"{manifest_path}: data_format must be binary or csv")

    scale = float(m["normalization_constant"])
    if not scale > 0:
        raise ProfileFormatError(f"{manifest_path}: normalization_constant must be positive")
    eps = arrays.pop("eps", None)
    grid = {c: v / scale for c, v in arrays.items()}
    z = z2 = None
    if nz:
        z = np.array([float(s) for s in m["z_samples_um"].split(",")]) * 1e-6
        if len(z) != nz:
            raise ProfileFormatError(f"{manifest_path}: {len(z)} z samples for grid_nz={nz}")
        if "z_2deg_um" not in m:
            raise ProfileFormatError(f"{manifest_path}: z-resolved profile needs z_2deg_um")
        z2 = float(m["z_2deg_um"]) * 1e-6
    return ModeProfile(
        p=int(m["p_index"]), sigma=m["polarization"], omega_p=TWO_PI * float(m["omega_GHz"]) * 1e9,
        Q=float(m["Q"]), a=float(m["lattice_a_um"]) * 1e-6, grid=grid, z=z, eps=eps, z_2deg=z2,
        meta={"source": str(manifest_path), "normalization_constant": scale},
    )


def _read_csv_payload(path: Path, comps: list[str], shape: tuple[int, ...]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        idx_cols = ["ix", "iy", "iz"][: len(shape)]
        if header != idx_cols + comps:
            raise ProfileFormatError(f"{path}: header {header} != {idx_cols + comps}")
        rows = np.array([[float(v) for v in row] for row in reader if row])
    if rows.shape[0] != int(np.prod(shape)):
        raise ProfileFormatError(f"{path}: expected {int(np.prod(shape))} rows, got {rows.shape[0]}")
    out = {c: np.zeros(shape) for c in comps}
    idx = tuple(rows[:, k].astype(int) for k in range(len(shape)))
    for k, c in enumerate(comps):
        out[c][idx] = rows[:, len(shape) + k]
    return out


def write_profile(profile: ModeProfile, manifest_path: str | Path, data_format: str = "binary",
                  normalization_constant: float = 1.0) -> Path:
    """Write ``profile`` (grid representation) as manifest + payload.

    Field values are multiplied by ``normalization_constant`` on disk so that
    :func:`read_profile` returns the original profile.
    """
    if profile.grid is None:
        raise ValueError("only grid profiles can be written")
    if any(np.iscomplexobj(v) for v in profile.grid.values()):
        raise ValueError("the profile file format stores real fields only")
    manifest_path = Path(manifest_path)
    comps = [c for c in ("x", "y", "z") if c in profile.grid]
    arrays = {c: profile.grid[c] * normalization_constant for c in comps}
    if profile.eps is not None:
        comps.append("eps")
        arrays["eps"] = np.broadcast_to(profile.eps, profile.grid[comps[0]].shape)
    shape = arrays[comps[0]].shape
    suffix = ".bin" if data_format == "binary" else ".csv"
    data_path = manifest_path.with_suffix(suffix)

    if data_format == "binary":
        np.concatenate([np.ascontiguousarray(arrays[c], dtype=_DTYPE).ravel() for c in comps]).tofile(data_path)
    elif data_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ix", "iy", "iz"][: len(shape)] + comps)
        stacked = np.stack([np.asarray(arrays[c], dtype=float).ravel() for c in comps], axis=1)
        for flat_i, idx in enumerate(np.ndindex(*shape)):
            w.writerow(list(idx) + [repr(float(v)) for v in stacked[flat_i]])
        data_path.write_text(buf.getvalue())
    else:
        raise ValueError("data_format must be 'binary' or 'csv'")

    n = profile.grid_n
    lines = [
        "# mode profile manifest",
        f"format_version = {FORMAT_VERSION}",
        f"lattice_a_um = {profile.a * 1e6!r}",
        f"omega_GHz = {profile.omega_p / TWO_PI / 1e9!r}",
        f"Q = {profile.Q if profile.Q is not None else 0.0!r}",
        f"polarization = {profile.sigma}",
        f"p_index = {profile.p}",
        f"grid_nx = {n}",
        f"grid_ny = {n}",
    ]
    if profile.z_resolved:
        lines += [
            f"grid_nz = {len(profile.z)}",
            "z_samples_um = " + ",".join(repr(float(z) * 1e6) for z in profile.z),
            f"z_2deg_um = {profile.z_2deg * 1e6!r}",
        ]
    lines += [
        f"components = {','.join(comps)}",
        f"normalization_constant = {normalization_constant!r}",
        f"data_file = {data_path.name}",
        f"data_format = {data_format}",
        f"data_layout = {LAYOUT}",
    ]
    manifest_path.write_text("\n".join(lines) + "\n")
    return manifest_path


def convert_profile(src: str | Path, dst: str | Path, data_format: str) -> Path:
    """Re-encode a profile payload (binary <-> csv), preserving the normalization constant."""
    prof = read_profile(src)
    scale = float(prof.meta.get("normalization_constant", 1.0))
    return write_profile(prof, dst, data_format=data_format, normalization_constant=scale)
