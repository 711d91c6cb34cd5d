"""YAML run configuration: schema, unit conversion and line-referenced errors.

Configs use GHz/THz, tesla and micrometres; everything is converted to SI
here and nowhere else.
"""
from __future__ import annotations

from pathlib import Path
from typing import Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.params import GAAS_MASS_RATIO, TWO_PI, PhysParams
from ..hopfield.hamiltonian import PRESETS

SCENARIOS = {
    "toy": ("toy", "Two-mode toy cavity: dispersion, MP weights, transmission maps, correlation collapse, term toggles"),
    "ingest-profiles": ("profiles", "Mode profiles read from manifest files: figures of merit, dispersion, transmission"),
    "magnetofilm": ("film", "Gyrotropic 2DEG sheet on a dielectric stack: circular and linear transmission"),
    "spectro-pipeline": ("spectro", "Synthetic or measured spectra: FFT windowing, composite fits, peak tracking, deviation D"),
}


class ConfigError(ValueError):
    """Schema or semantic error with a line-referenced message."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Grid(_Strict):
    """Either ``values`` or ``start``/``stop``/``num``."""

    start: float | None = None
    stop: float | None = None
    num: int | None = Field(default=None, ge=1)
    values: list[float] | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.values is not None:
            if any(v is not None for v in (self.start, self.stop, self.num)):
                raise ValueError("give either 'values' or 'start/stop/num', not both")
            if not self.values:
                raise ValueError("'values' must not be empty")
        elif None in (self.start, self.stop, self.num):
            raise ValueError("grid needs 'start', 'stop' and 'num' (or 'values')")
        return self

    def array(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        return np.linspace(self.start, self.stop, self.num)


class ParamsCfg(_Strict):
    n_e_m2: float = Field(3.08e16, gt=0)
    m_eff_ratio: float = Field(GAAS_MASS_RATIO, gt=0)
    lattice_um: float = Field(333.0, gt=0)
    gamma_c_GHz: float = Field(5.7, gt=0, description="CR decay rate / 2 pi")
    d_qw_um: float = Field(2.0, gt=0)

    def physical(self) -> PhysParams:
        from scipy.constants import m_e

        return PhysParams(n_e=self.n_e_m2, m_eff=self.m_eff_ratio * m_e, a=self.lattice_um * 1e-6,
                          gamma_c=TWO_PI * self.gamma_c_GHz * 1e9, d_qw=self.d_qw_um * 1e-6)


class OutputCfg(_Strict):
    dir: str = "out"
    plots: bool = True


class ToyCfg(_Strict):
    eps: float = Field(1.0, ge=0, le=1)
    f1_THz: float = Field(0.339, gt=0)
    f2_THz: float = Field(0.384, gt=0)
    Q: tuple[float, float] = (72.0, 70.0)
    grid_n: int = Field(128, ge=8)


class ProfilesCfg(_Strict):
    files: list[str] = Field(min_length=1)
    drop_tol: float = Field(1e-8, gt=0)
    reference_B_T: float = Field(0.81, gt=0)


class SweepCfg(_Strict):
    B_T: Grid
    jump_threshold_GHz: float | None = Field(None, gt=0)
    correlations_at_T: float | None = Field(None, gt=0)
    mp_weights: bool = True


class TransmissionCfg(_Strict):
    B_T: Grid
    freq_GHz: Grid
    sigma_in: Literal["x", "y"] = "y"
    sigma_out: Literal["x", "y"] | None = None


class CollapseCfg(_Strict):
    B_T: float = Field(0.81, gt=0)
    points: int = Field(400, ge=10)
    f_max_THz: float = Field(1.8, gt=0)
    eta_rtol: float = Field(1e-3, gt=0)


class TogglesCfg(_Strict):
    B_T: Grid
    presets: list[Literal[PRESETS]] = ["full", "rwa", "antiresonant", "a2-only", "hint-only"]


class FilmCfg(_Strict):
    eps_bg: float = Field(12.96, gt=1)
    n_e_m2: float | None = Field(None, ge=0)
    gamma_GHz: float = Field(5.7, ge=0, description="scattering rate / 2 pi")
    d_um: float = Field(2.0, gt=0)
    substrate_um: float = Field(60.0, ge=0)
    eps_substrate: float = Field(12.96, ge=1)
    B_T: list[float] = Field(min_length=1)
    freq_GHz: Grid


class SyntheticSpectraCfg(_Strict):
    """Spectra generated from the toy transmission map plus injected artifacts."""

    B_T: Grid
    freq_GHz: Grid
    branch: int = Field(0, ge=0, description="bright branch index to track (0 = lowest)")
    noise: float = Field(0.01, ge=0)
    fp_dips_GHz: list[float] = []
    fp_depth: float = Field(0.05, ge=0)
    fp_width_GHz: float = Field(2.0, gt=0)


class WaveformEntry(_Strict):
    B_T: float
    file: str


class FitInitCfg(_Strict):
    center_GHz: float | None = None
    fwhm_GHz: float = Field(5.0, gt=0)
    dips_GHz: list[float] = []
    dip_width_GHz: float = Field(2.0, gt=0)


class SpectroCfg(_Strict):
    synthetic: SyntheticSpectraCfg | None = None
    waveforms: list[WaveformEntry] | None = None
    t_cut_ps: float | None = Field(None, gt=0)
    pad_factor: float = Field(4.0, ge=1)
    fit_window_GHz: tuple[float, float] | None = None
    init: FitInitCfg = FitInitCfg()
    drift_tol: float = Field(0.01, gt=0)
    window_GHz: float | None = Field(None, gt=0, description="half-width of the per-field fit window")
    reference_GHz: list[float] | None = None

    @model_validator(mode="after")
    def _source(self):
        if (self.synthetic is None) == (self.waveforms is None):
            raise ValueError("give exactly one of 'synthetic' or 'waveforms'")
        return self


class RunConfig(_Strict):
    scenario: Literal[tuple(SCENARIOS)]
    seed: int = 0
    threads: int | None = Field(None, ge=1)
    flags: Literal[PRESETS] = "full"
    params: ParamsCfg = ParamsCfg()
    output: OutputCfg = OutputCfg()
    toy: ToyCfg | None = None
    profiles: ProfilesCfg | None = None
    sweep: SweepCfg | None = None
    transmission: TransmissionCfg | None = None
    collapse: CollapseCfg | None = None
    toggles: TogglesCfg | None = None
    film: FilmCfg | None = None
    spectro: SpectroCfg | None = None

    @model_validator(mode="after")
    def _scenario_sections(self):
        need = SCENARIOS[self.scenario][0]
        if getattr(self, need) is None:
            raise ValueError(f"scenario '{self.scenario}' requires a '{need}' section")
        if self.scenario in ("toy", "ingest-profiles"):
            tasks = [self.sweep, self.transmission, self.collapse, self.toggles]
            if self.scenario == "ingest-profiles":
                tasks.append(self.profiles)
            if all(t is None for t in tasks):
                raise ValueError("nothing to compute: add 'sweep', 'transmission', 'collapse' or 'toggles'")
        if self.scenario != "toy" and (self.collapse or self.toggles):
            raise ValueError("'collapse' and 'toggles' are toy-model studies")
        return self


def _line_map(node, path=(), out=None) -> dict:
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out[path + (k.value,)] = k.start_mark.line + 1
            _line_map(v, path + (k.value,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_map(v, path + (i,), out)
    return out


def _line_for(loc: tuple, lines: dict) -> int | None:
    loc = tuple(x for x in loc if not (isinstance(x, str) and x in ("function-after", "list", "tuple")))
    for n in range(len(loc), -1, -1):
        key = tuple(str(x) if not isinstance(x, int) else x for x in loc[:n])
        if key in lines:
            return lines[key]
    return None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Validate YAML text; errors name the offending line."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark else source
        raise ConfigError(f"{where}: YAML syntax error: {getattr(exc, 'problem', exc)}") from None
    if node is None or data is None:
        raise ConfigError(f"{source}:1: configuration is empty")
    if not isinstance(data, dict):
        raise ConfigError(f"{source}:1: top level must be a mapping")
    lines = _line_map(node)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        msgs = []
        for err in exc.errors():
            loc = tuple(err["loc"])
            line = _line_for(loc, lines) or 1
            field = ".".join(str(x) for x in loc) or "(top level)"
            msgs.append(f"{source}:{line}: {field}: {err['msg']}")
        raise ConfigError("\n".join(msgs)) from None


def load_config(path) -> tuple[RunConfig, Path]:
    """Read and validate a config file; returns the config and its directory."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_config(text, str(path)), path.resolve().parent
