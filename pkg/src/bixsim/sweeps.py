"""Power and detuning sweeps of the emission spectrum, plus peak analysis.

Each sweep evaluates the stationary spectrum row by row while one control
parameter varies, and collects the rows into a SweepMap.  Rows are
independent, so an optional thread pool distributes them; results are
order-preserving and identical to the serial path.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .dressed import drive_for_splitting
from .errors import ConfigurationError, SolverError
from .liouville import SpectrumResult
from .system import (
    SystemConfig,
    compute_spectrum_y,
    config_hash,
    delta_cl_x,
    detunings,
)

__all__ = [
    "SweepMap",
    "PeakReport",
    "power_sweep",
    "detuning_sweep",
    "phonon_comparison",
    "extract_peaks",
]

_DARK_ROW = 1e-300


@dataclass(frozen=True)
class SweepMap:
    """Rectangular intensity map: rows follow axis1, columns axis2 (ueV)."""

    axis1: np.ndarray
    axis2: np.ndarray
    values: np.ndarray
    axis1_name: str
    normalization: str
    metadata: dict

    def __post_init__(self):
        a1 = np.asarray(self.axis1, dtype=float)
        a2 = np.asarray(self.axis2, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (a1.size, a2.size):
            raise ConfigurationError(
                f"map shape {vals.shape} does not match axes "
                f"({a1.size}, {a2.size})"
            )
        if not (np.all(np.isfinite(a1)) and np.all(np.isfinite(a2))):
            raise ConfigurationError("sweep axes must be finite")
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("sweep values must be finite")
        if vals.size and vals.min() < 0.0:
            raise ConfigurationError("sweep values must be nonnegative")
        object.__setattr__(self, "axis1", a1)
        object.__setattr__(self, "axis2", a2)
        object.__setattr__(self, "values", vals)

    def row(self, i: int) -> SpectrumResult:
        meta = dict(self.metadata)
        meta[self.axis1_name] = float(self.axis1[i])
        return SpectrumResult(self.axis2.copy(), self.values[i].copy(), meta)


def _raw_row(cfg: SystemConfig) -> np.ndarray:
    return compute_spectrum_y(replace(cfg, normalize=False)).intensity


def _run_rows(configs, labels, label_name, threads):
    def work(pair):
        cfg, label = pair
        try:
            return _raw_row(cfg)
        except SolverError as exc:
            raise SolverError(f"row at {label_name}={label:g} failed: {exc}") from exc

    pairs = list(zip(configs, labels))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, pairs))
    else:
        rows = [work(p) for p in pairs]
    return np.array(rows)


def _normalize_map(values: np.ndarray, normalization: str) -> np.ndarray:
    if normalization == "none":
        return values
    if normalization == "global":
        top = values.max() if values.size else 0.0
        return values / top if top > _DARK_ROW else values
    if normalization == "per-row":
        out = values.copy()
        for i in range(out.shape[0]):
            top = out[i].max()
            if top > _DARK_ROW:
                out[i] = out[i] / top
        return out
    raise ConfigurationError(
        f"unknown normalization {normalization!r}; "
        "expected 'per-row', 'global' or 'none'"
    )


def power_sweep(
    cfg: SystemConfig,
    omega_values=None,
    n_rows: int = 41,
    max_splitting: float = 300.0,
    normalization: str = "per-row",
    threads: int = 1,
) -> SweepMap:
    """Spectrum map versus bare drive amplitude.

    Without explicit omega_values the rows run from zero drive up to the
    amplitude whose phonon-free doublet splitting equals max_splitting.
    """
    if omega_values is None:
        det = detunings(cfg)
        top = drive_for_splitting(
            max_splitting,
            det.delta3,
            delta_cl_x(cfg),
            cfg.rates.kappa_x,
            cfg.couplings.g1x,
            cfg.couplings.g2x,
        )
        omega_values = np.linspace(0.0, top, n_rows)
    omega_values = np.asarray(omega_values, dtype=float)
    if omega_values.size < 2:
        raise ConfigurationError("power sweep needs at least two drive values")
    configs = [
        replace(cfg, drive=replace(cfg.drive, omega=float(w), eta1=None, eta2=None))
        for w in omega_values
    ]
    values = _run_rows(configs, omega_values, "Omega", threads)
    values = _normalize_map(values, normalization)
    meta = {
        "base_config_hash": config_hash(cfg),
        "sweep": "power",
        "normalization": normalization,
    }
    return SweepMap(omega_values, _grid(cfg), values, "omega_drive", normalization, meta)


def detuning_sweep(
    cfg: SystemConfig,
    detuning_values=None,
    n_rows: int = 41,
    span: float | None = None,
    normalization: str = "per-row",
    threads: int = 1,
) -> SweepMap:
    """Spectrum map versus laser detuning at fixed drive power.

    The drive amplitude entering the filter stays constant; the effective
    eta and the two-photon detuning track each row automatically.  Default
    rows cover +-2 kappa_x around zero.
    """
    if detuning_values is None:
        half = 2.0 * cfg.rates.kappa_x if span is None else span
        detuning_values = np.linspace(-half, half, n_rows)
    detuning_values = np.asarray(detuning_values, dtype=float)
    if detuning_values.size < 2:
        raise ConfigurationError("detuning sweep needs at least two rows")
    configs = [replace(cfg, laser_detuning=float(d)) for d in detuning_values]
    values = _run_rows(configs, detuning_values, "laser_detuning", threads)
    values = _normalize_map(values, normalization)
    meta = {
        "base_config_hash": config_hash(cfg),
        "sweep": "detuning",
        "normalization": normalization,
    }
    return SweepMap(
        detuning_values, _grid(cfg), values, "laser_detuning", normalization, meta
    )


def _grid(cfg: SystemConfig) -> np.ndarray:
    n = cfg.numerics
    return np.linspace(-n.omega_half_span, n.omega_half_span, n.n_omega)


def phonon_comparison(cfg: SystemConfig) -> tuple[SpectrumResult, SpectrumResult]:
    """Spectra with and without the phonon channel, on a common scale.

    The two configs differ only in phonon.enable; both raw spectra are
    divided by their common maximum so relative weights stay comparable.
    """
    cfg_on = replace(cfg, phonon=replace(cfg.phonon, enable=True), normalize=False)
    cfg_off = replace(cfg, phonon=replace(cfg.phonon, enable=False), normalize=False)
    res_on = compute_spectrum_y(cfg_on)
    res_off = compute_spectrum_y(cfg_off)
    top = max(res_on.intensity.max(), res_off.intensity.max())
    scale = 1.0 / top if top > _DARK_ROW else 1.0

    def rescale(res, label):
        meta = dict(res.metadata)
        meta["comparison"] = label
        meta["common_scale"] = top
        return SpectrumResult(res.omega_offsets, res.intensity * scale, meta)

    return rescale(res_on, "phonons-on"), rescale(res_off, "phonons-off")


@dataclass(frozen=True)
class PeakReport:
    """Peak positions/heights plus cluster splittings of a single spectrum."""

    positions: np.ndarray
    heights: np.ndarray
    upper_splittings: np.ndarray
    lower_splittings: np.ndarray
    left_sum: float
    right_sum: float

    @property
    def n_peaks(self) -> int:
        return int(self.positions.size)


def extract_peaks(
    result: SpectrumResult,
    min_prominence: float = 0.01,
    cluster_offset: float = 500.0,
) -> PeakReport:
    """Locate spectral peaks and group them into detuned clusters.

    Peaks are found by prominence relative to the spectrum maximum and
    refined with a three-point parabola.  Clusters beyond +-cluster_offset
    from the laser are reported with their internal splittings; left/right
    sums aggregate peak heights below/above the laser.
    """
    x = np.asarray(result.omega_offsets, dtype=float)
    y = np.asarray(result.intensity, dtype=float)
    top = y.max() if y.size else 0.0
    if top <= 0.0:
        empty = np.array([])
        return PeakReport(empty, empty, empty.copy(), empty.copy(), 0.0, 0.0)
    idx, _ = find_peaks(y, prominence=min_prominence * top)
    positions = []
    heights = []
    for i in idx:
        xi, yi = x[i], y[i]
        if 0 < i < y.size - 1:
            denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
            if denom < 0.0:
                shift = 0.5 * (y[i - 1] - y[i + 1]) / denom
                shift = float(np.clip(shift, -1.0, 1.0))
                xi = x[i] + shift * (x[i] - x[i - 1])
                yi = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift
        positions.append(float(xi))
        heights.append(float(yi))
    positions = np.array(positions)
    heights = np.array(heights)

    def splittings(mask):
        pts = np.sort(positions[mask])
        return np.diff(pts) if pts.size > 1 else np.array([])

    return PeakReport(
        positions=positions,
        heights=heights,
        upper_splittings=splittings(positions > cluster_offset),
        lower_splittings=splittings(positions < -cluster_offset),
        left_sum=float(heights[positions < 0.0].sum()),
        right_sum=float(heights[positions > 0.0].sum()),
    )
