"""Deterministic on-disk formats for spectra and sweep maps.

CSV columns are written with 17 significant digits so floats round-trip
exactly; JSON carries the same arrays in one document.  Every export drops
a .meta.json sidecar with the metadata dict (config hash, tool version).
Nothing time- or host-dependent is written, so repeated exports of the
same result are byte-identical.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ConfigurationError
from .liouville import SpectrumResult
from .sweeps import SweepMap

__all__ = [
    "export_spectrum",
    "import_spectrum",
    "export_map",
    "import_map",
    "render_spectrum",
    "render_heatmap",
]

_FMT = "%.17g"


def _write_meta(meta: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_meta(path: str) -> dict:
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def export_spectrum(
    result: SpectrumResult,
    out_dir: str,
    fmt: str = "csv",
    stem: str = "spectrum",
    render: bool = False,
) -> list[str]:
    """Write one spectrum to out_dir; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "csv":
        path = os.path.join(out_dir, f"{stem}.csv")
        header = "offset_ueV,intensity"
        data = np.column_stack([result.omega_offsets, result.intensity])
        np.savetxt(path, data, fmt=_FMT, delimiter=",", header=header, comments="")
        written.append(path)
    elif fmt == "json":
        path = os.path.join(out_dir, f"{stem}.json")
        payload = {
            "omega_offsets": result.omega_offsets.tolist(),
            "intensity": result.intensity.tolist(),
            "metadata": result.metadata,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    else:
        raise ConfigurationError(f"unknown export format {fmt!r}; use csv or json")
    meta_path = os.path.join(out_dir, f"{stem}.meta.json")
    _write_meta(dict(result.metadata), meta_path)
    written.append(meta_path)
    if render:
        written.append(render_spectrum(result, os.path.join(out_dir, f"{stem}.png")))
    return written


def import_spectrum(path: str) -> SpectrumResult:
    """Read a spectrum exported by export_spectrum (csv or json)."""
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return SpectrumResult(
            np.asarray(payload["omega_offsets"], dtype=float),
            np.asarray(payload["intensity"], dtype=float),
            payload.get("metadata", {}),
        )
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    meta = _read_meta(path[: -len(".csv")] + ".meta.json" if path.endswith(".csv") else path + ".meta.json")
    return SpectrumResult(data[:, 0], data[:, 1], meta)


def export_map(
    sweep: SweepMap,
    out_dir: str,
    fmt: str = "csv",
    stem: str = "map",
    render: bool = False,
) -> list[str]:
    """Write a sweep map to out_dir; returns the created paths.

    CSV splits the map into {stem}_axis1/axis2/values.csv; JSON keeps one
    document.  The sidecar records axis names and normalization.
    """
    os.makedirs(out_dir, exist_ok=True)
    meta = dict(sweep.metadata)
    meta["axis1_name"] = sweep.axis1_name
    meta["normalization"] = sweep.normalization
    written = []
    if fmt == "csv":
        for name, arr in (("axis1", sweep.axis1), ("axis2", sweep.axis2)):
            path = os.path.join(out_dir, f"{stem}_{name}.csv")
            np.savetxt(path, arr, fmt=_FMT, delimiter=",", header=name, comments="")
            written.append(path)
        path = os.path.join(out_dir, f"{stem}_values.csv")
        np.savetxt(path, sweep.values, fmt=_FMT, delimiter=",")
        written.append(path)
    elif fmt == "json":
        path = os.path.join(out_dir, f"{stem}.json")
        payload = {
            "axis1": sweep.axis1.tolist(),
            "axis2": sweep.axis2.tolist(),
            "values": sweep.values.tolist(),
            "metadata": meta,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    else:
        raise ConfigurationError(f"unknown export format {fmt!r}; use csv or json")
    meta_path = os.path.join(out_dir, f"{stem}.meta.json")
    _write_meta(meta, meta_path)
    written.append(meta_path)
    if render:
        written.append(render_heatmap(sweep, os.path.join(out_dir, f"{stem}.png")))
    return written


def import_map(out_dir_or_json: str, stem: str = "map") -> SweepMap:
    """Read a sweep map written by export_map."""
    if out_dir_or_json.endswith(".json"):
        with open(out_dir_or_json, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        meta = payload.get("metadata", {})
        axis1 = np.asarray(payload["axis1"], dtype=float)
        axis2 = np.asarray(payload["axis2"], dtype=float)
        values = np.asarray(payload["values"], dtype=float)
    else:
        meta = _read_meta(os.path.join(out_dir_or_json, f"{stem}.meta.json"))
        axis1 = np.loadtxt(
            os.path.join(out_dir_or_json, f"{stem}_axis1.csv"), skiprows=1, ndmin=1
        )
        axis2 = np.loadtxt(
            os.path.join(out_dir_or_json, f"{stem}_axis2.csv"), skiprows=1, ndmin=1
        )
        values = np.loadtxt(
            os.path.join(out_dir_or_json, f"{stem}_values.csv"),
            delimiter=",",
            ndmin=2,
        )
    return SweepMap(
        axis1=axis1,
        axis2=axis2,
        values=values,
        axis1_name=meta.get("axis1_name", "axis1"),
        normalization=meta.get("normalization", "none"),
        metadata=meta,
    )


def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg", force=False)
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise ConfigurationError(
            "rendering needs matplotlib (install the 'render' extra)"
        ) from exc
    return plt


def render_spectrum(result: SpectrumResult, path: str) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(result.omega_offsets, result.intensity, lw=1.0)
    ax.set_xlabel("offset from laser (ueV)")
    ax.set_ylabel("intensity (arb.)")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path


def render_heatmap(sweep: SweepMap, path: str) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 5))
    extent = [
        sweep.axis2[0],
        sweep.axis2[-1],
        sweep.axis1[0],
        sweep.axis1[-1],
    ]
    im = ax.imshow(
        sweep.values,
        origin="lower",
        aspect="auto",
        extent=extent,
        cmap="viridis",
    )
    ax.set_xlabel("offset from laser (ueV)")
    ax.set_ylabel(sweep.axis1_name)
    fig.colorbar(im, ax=ax, label="intensity (arb.)")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path
