"""Configuration schema and assembly of the reduced master equation.

The model is a four-level emitter (ground, two fine-structure-split
excitons, biexciton) inside a bimodal micropillar.  The x-polarized mode is
driven by a resonant laser and adiabatically eliminated: it enters only
through the effective drive amplitudes eta1, eta2 = g1x * alpha, g2x * alpha
with alpha the stationary filter amplitude.  The y-polarized mode is kept as
a quantized oscillator.

All energies live in ueV, in the frame rotating with the laser.  Level
positions in the config are offsets from the x-mode frequency: omega_x and
omega_y are one-photon offsets of the excitons, omega_xx is the biexciton
offset from twice the x-mode frequency so that two-photon resonance at zero
laser detuning reads omega_xx = 0.

Dissipation channels: radiative decay of the four dipole transitions, pure
dephasing realized as level-projector dissipators whose rates are solved
from the per-transition dephasing targets, y-mode photon loss, and (when
enabled) the polaron-frame phonon scattering term.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import __version__ as _version
from .dressed import DetuningSet, DriveParams, drive_for_splitting
from .errors import ConfigurationError
from .hilbert import (
    HilbertSpec,
    embed_photon_annihilator,
    embed_qd_projector,
    embed_qd_transition,
)
from .liouville import (
    SpectrumResult,
    emission_spectrum,
    lindblad_dissipator,
    liouvillian,
    steady_state,
)
from .phonons import PhononParams, build_kernels, polaron_dissipator

__all__ = [
    "EnergyLevels",
    "Couplings",
    "Rates",
    "DriveConfig",
    "PhononConfig",
    "Numerics",
    "SystemConfig",
    "default_config",
    "load_config",
    "save_config",
    "config_from_dict",
    "config_to_dict",
    "config_hash",
    "detunings",
    "drive_params",
    "two_photon_laser_detuning",
    "dephasing_projector_rates",
    "build_reduced_hamiltonian",
    "assemble_liouvillian",
    "source_operator",
    "compute_spectrum_y",
    "calibrate_drive",
]

_SOURCES = ("y-dipole", "y-cavity", "both")


@dataclass(frozen=True)
class EnergyLevels:
    """Level offsets relative to the x cavity mode (ueV).

    omega_x, omega_y: exciton energies minus the x-mode frequency.
    omega_xx: biexciton energy minus twice the x-mode frequency (the
    biexciton is reached by two laser photons).
    """

    omega_x: float = 990.0
    omega_y: float = 965.0
    omega_xx: float = 0.0


@dataclass(frozen=True)
class Couplings:
    """Emitter-mode couplings (ueV); 1 = exciton step, 2 = biexciton step."""

    g1x: float = 26.7
    g2x: float = 26.7 * math.sqrt(0.88 / 0.56)
    g1y: float = 26.7
    g2y: float = 26.7 * math.sqrt(0.88 / 0.56)


@dataclass(frozen=True)
class Rates:
    """Radiative, dephasing and photon-loss rates (ueV)."""

    gamma_x_g: float = 0.56
    gamma_y_g: float = 0.56
    gamma_xx_x: float = 0.88
    gamma_xx_y: float = 0.88
    dephasing_x_g: float = 8.2
    dephasing_y_g: float = 8.2
    dephasing_xx_x: float = 8.2
    dephasing_xx_y: float = 8.2
    kappa_x: float = 74.0
    kappa_y: float = 132.0


@dataclass(frozen=True)
class DriveConfig:
    """Laser power, either as filter input Omega or as direct amplitudes.

    `omega` is the bare drive amplitude fed to the x-mode filter.  The
    eta overrides bypass the filter for diagnostics; setting both a nonzero
    omega and an override is rejected.
    """

    omega: float = 0.0
    eta1: complex | None = None
    eta2: complex | None = None


@dataclass(frozen=True)
class PhononConfig:
    """Phonon environment switch and parameters (alpha_p in ps^2)."""

    enable: bool = True
    alpha_p: float = 0.06
    omega_b: float = 1000.0
    temperature: float = 6.8
    xx_scaling: float = 2.0

    def params(self) -> PhononParams:
        return PhononParams(
            alpha_p_ps2=self.alpha_p,
            omega_b=self.omega_b,
            temperature=self.temperature,
            xx_scaling=self.xx_scaling,
        )


@dataclass(frozen=True)
class Numerics:
    """Truncation and grid controls."""

    n_max_y: int = 2
    n_omega: int = 1601
    omega_half_span: float = 1400.0
    steady_rtol: float = 1e-10
    phonon_n_t: int = 1601
    phonon_t_max: float | None = None


@dataclass(frozen=True)
class SystemConfig:
    """Full model description; immutable so sweep workers can share it."""

    energies: EnergyLevels = field(default_factory=EnergyLevels)
    couplings: Couplings = field(default_factory=Couplings)
    rates: Rates = field(default_factory=Rates)
    drive: DriveConfig = field(default_factory=DriveConfig)
    phonon: PhononConfig = field(default_factory=PhononConfig)
    numerics: Numerics = field(default_factory=Numerics)
    cavity_split: float = 320.0
    laser_detuning: float = 0.0
    source: str = "y-dipole"
    normalize: bool = True

    def __post_init__(self):
        r = self.rates
        for name in (
            "gamma_x_g",
            "gamma_y_g",
            "gamma_xx_x",
            "gamma_xx_y",
            "dephasing_x_g",
            "dephasing_y_g",
            "dephasing_xx_x",
            "dephasing_xx_y",
            "kappa_x",
            "kappa_y",
        ):
            if getattr(r, name) < 0:
                raise ConfigurationError(f"rate {name} must be nonnegative")
        if self.rates.kappa_x <= 0:
            raise ConfigurationError("kappa_x must be positive (filter linewidth)")
        c = self.couplings
        for name in ("g1x", "g2x", "g1y", "g2y"):
            if getattr(c, name) < 0:
                raise ConfigurationError(f"coupling {name} must be nonnegative")
        if self.source not in _SOURCES:
            raise ConfigurationError(
                f"unknown source {self.source!r}; expected one of {_SOURCES}"
            )
        d = self.drive
        override = d.eta1 is not None or d.eta2 is not None
        if override and (d.eta1 is None or d.eta2 is None):
            raise ConfigurationError("eta overrides must set both eta1 and eta2")
        if override and d.omega != 0.0:
            raise ConfigurationError(
                "drive is overdetermined: set either omega or the eta pair"
            )
        n = self.numerics
        if n.n_omega < 3:
            raise ConfigurationError("n_omega must be at least 3")
        if n.omega_half_span <= 0:
            raise ConfigurationError("omega_half_span must be positive")
        if (c.g1y != 0.0 or c.g2y != 0.0) and n.n_max_y < 1:
            raise ConfigurationError(
                "n_max_y must be >= 1 when the y mode is coupled"
            )


def default_config() -> SystemConfig:
    """The documented baseline parameter set (bimodal pillar, 6.8 K)."""
    return SystemConfig()


# -- config (de)serialization -------------------------------------------------


def _encode_value(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def config_to_dict(cfg: SystemConfig) -> dict:
    raw = asdict(cfg)

    def walk(node):
        if isinstance(node, dict):
            return {k: walk(v) for k, v in node.items()}
        return _encode_value(node)

    return walk(raw)


def _decode_complex(v):
    if v is None or isinstance(v, (int, float)):
        return v
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    raise ConfigurationError(f"cannot parse complex amplitude from {v!r}")


def _build_dataclass(cls, data: dict):
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigurationError(
            f"unknown key(s) {sorted(unknown)} for {cls.__name__}"
        )
    return cls(**data)


def config_from_dict(data: dict) -> SystemConfig:
    """Build a SystemConfig from a plain dict (e.g. parsed JSON).

    Unknown keys raise ConfigurationError so typos do not silently fall
    back to defaults.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be a JSON object")
    data = dict(data)
    data.pop("_notes", None)
    kwargs = {}
    nested = {
        "energies": EnergyLevels,
        "couplings": Couplings,
        "rates": Rates,
        "phonon": PhononConfig,
        "numerics": Numerics,
    }
    for key, cls in nested.items():
        if key in data:
            sub = data.pop(key)
            if not isinstance(sub, dict):
                raise ConfigurationError(f"{key} must be an object")
            kwargs[key] = _build_dataclass(cls, sub)
    if "drive" in data:
        sub = data.pop("drive")
        if not isinstance(sub, dict):
            raise ConfigurationError("drive must be an object")
        sub = dict(sub)
        for k in ("eta1", "eta2"):
            if k in sub:
                sub[k] = _decode_complex(sub[k])
        kwargs["drive"] = _build_dataclass(DriveConfig, sub)
    top = {f.name for f in fields(SystemConfig)}
    unknown = set(data) - top
    if unknown:
        raise ConfigurationError(f"unknown top-level config key(s) {sorted(unknown)}")
    kwargs.update(data)
    try:
        return SystemConfig(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config(path) -> SystemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def save_config(cfg: SystemConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")


def config_hash(cfg: SystemConfig) -> str:
    """Stable content hash of the full configuration."""
    blob = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# -- derived quantities -------------------------------------------------------


def detunings(cfg: SystemConfig) -> DetuningSet:
    """Rotating-frame detunings implied by the level offsets and the laser."""
    d = cfg.laser_detuning
    return DetuningSet(
        delta2=cfg.energies.omega_y - d,
        delta3=cfg.energies.omega_x - d,
        delta4=cfg.energies.omega_xx - 2.0 * d,
    )


def delta_cl_x(cfg: SystemConfig) -> float:
    """x-mode detuning from the laser, omega_c^x - omega_L."""
    return -cfg.laser_detuning


def delta_cl_y(cfg: SystemConfig) -> float:
    """y-mode detuning from the laser, omega_c^y - omega_L."""
    return -cfg.cavity_split - cfg.laser_detuning


def drive_params(cfg: SystemConfig) -> DriveParams:
    """Effective drive amplitudes, through the filter or from overrides."""
    d = cfg.drive
    if d.eta1 is not None:
        return DriveParams(eta1=complex(d.eta1), eta2=complex(d.eta2))
    return DriveParams.from_cavity_filter(
        d.omega, delta_cl_x(cfg), cfg.rates.kappa_x, cfg.couplings.g1x, cfg.couplings.g2x
    )


def two_photon_laser_detuning(cfg: SystemConfig) -> float:
    """Laser detuning that puts the biexciton at two-photon resonance."""
    return 0.5 * cfg.energies.omega_xx


def calibrate_drive(cfg: SystemConfig, target_splitting: float) -> SystemConfig:
    """Copy of cfg with omega set for a target doublet splitting.

    Exact for the phonon-free dressed ladder at two-photon resonance; with
    phonons enabled the realized splitting is further reduced by the
    coupling renormalization.
    """
    det = detunings(cfg)
    omega = drive_for_splitting(
        target_splitting,
        det.delta3,
        delta_cl_x(cfg),
        cfg.rates.kappa_x,
        cfg.couplings.g1x,
        cfg.couplings.g2x,
    )
    return replace(cfg, drive=replace(cfg.drive, omega=omega, eta1=None, eta2=None))


# -- dephasing ----------------------------------------------------------------

_TRANSITION_PAIRS = (
    ("dephasing_x_g", "X", "G"),
    ("dephasing_y_g", "Y", "G"),
    ("dephasing_xx_x", "XX", "X"),
    ("dephasing_xx_y", "XX", "Y"),
)
_LEVEL_ORDER = ("G", "Y", "X", "XX")


def dephasing_projector_rates(rates: Rates) -> tuple[dict, float]:
    """Level-projector dephasing rates from per-transition targets.

    A projector dissipator on level s with rate r_s damps the coherence
    between a and b at (r_a + r_b)/2, so the four transition targets give a
    linear system for the four level rates.  The system has a one-parameter
    family when consistent; the minimum-norm least-squares solution is used
    and the residual returned (zero for the uniform default).  Negative
    solutions beyond rounding are rejected.
    """
    a = np.zeros((4, 4))
    b = np.zeros(4)
    for row, (name, hi, lo) in enumerate(_TRANSITION_PAIRS):
        a[row, _LEVEL_ORDER.index(hi)] = 0.5
        a[row, _LEVEL_ORDER.index(lo)] = 0.5
        b[row] = getattr(rates, name)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.max(np.abs(a @ sol - b)))
    out = {}
    for level, val in zip(_LEVEL_ORDER, sol):
        if val < -1e-9:
            raise ConfigurationError(
                "per-transition dephasing targets cannot be realized with "
                f"nonnegative projector rates (level {level}: {val:.3e})"
            )
        out[level] = max(float(val), 0.0)
    return out, residual


# -- Hamiltonian and Liouvillian ---------------------------------------------


def _coupling_terms(cfg: SystemConfig, spec: HilbertSpec, kernels):
    """Renormalized raising halves of all coherent couplings.

    Returns a list of (raising_op, displacement_factor); the factor is 1
    for exciton steps and xx_scaling - 1 for biexciton steps.
    """
    dp = drive_params(cfg)
    c = cfg.couplings
    a = embed_photon_annihilator(spec)
    if kernels is None:
        b1 = b2 = 1.0
        f2 = 1.0
    else:
        f2 = kernels.params.displacement_factor(involves_biexciton=True)
        b1 = kernels.bracket(1.0)
        b2 = kernels.bracket(f2)
    terms = [
        (b1 * dp.eta1 * embed_qd_transition(spec, "G", "X"), 1.0),
        (b2 * dp.eta2 * embed_qd_transition(spec, "X", "XX"), f2),
        (b1 * c.g1y * (embed_qd_transition(spec, "G", "Y") @ a), 1.0),
        (b2 * c.g2y * (embed_qd_transition(spec, "Y", "XX") @ a), f2),
    ]
    return terms


def _kernels_for(cfg: SystemConfig):
    if not (cfg.phonon.enable and cfg.phonon.alpha_p > 0.0):
        return None
    return build_kernels(
        cfg.phonon.params(),
        t_max=cfg.numerics.phonon_t_max,
        n_t=cfg.numerics.phonon_n_t,
    )


def build_reduced_hamiltonian(cfg: SystemConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian on the emitter (x) y-mode space.

    Diagonal part carries the level detunings and the y-mode detuning;
    the off-diagonal part carries the drive amplitudes and the y-mode
    couplings, renormalized by the phonon factor when phonons are enabled.
    """
    spec = HilbertSpec(cfg.numerics.n_max_y)
    return _assemble_hamiltonian(cfg, spec, _kernels_for(cfg))


def _assemble_hamiltonian(cfg, spec, kernels) -> np.ndarray:
    det = detunings(cfg)
    a = embed_photon_annihilator(spec)
    h = (
        det.delta4 * embed_qd_projector(spec, "XX")
        + det.delta3 * embed_qd_projector(spec, "X")
        + det.delta2 * embed_qd_projector(spec, "Y")
        + delta_cl_y(cfg) * (a.conj().T @ a)
    )
    for op, _ in _coupling_terms(cfg, spec, kernels):
        h = h + op + op.conj().T
    return h


def assemble_liouvillian(cfg: SystemConfig) -> np.ndarray:
    """Full generator: coherent part, Lindblad channels, phonon scattering."""
    spec = HilbertSpec(cfg.numerics.n_max_y)
    kernels = _kernels_for(cfg)
    h = _assemble_hamiltonian(cfg, spec, kernels)

    r = cfg.rates
    dissipators = [
        lindblad_dissipator(embed_qd_transition(spec, "X", "G"), r.gamma_x_g),
        lindblad_dissipator(embed_qd_transition(spec, "Y", "G"), r.gamma_y_g),
        lindblad_dissipator(embed_qd_transition(spec, "XX", "X"), r.gamma_xx_x),
        lindblad_dissipator(embed_qd_transition(spec, "XX", "Y"), r.gamma_xx_y),
        lindblad_dissipator(embed_photon_annihilator(spec), r.kappa_y),
    ]
    proj_rates, _ = dephasing_projector_rates(r)
    for level, rate in proj_rates.items():
        if rate > 0.0:
            dissipators.append(
                lindblad_dissipator(embed_qd_projector(spec, level), rate)
            )

    extras = []
    if kernels is not None:
        extras.append(
            polaron_dissipator(h, _coupling_terms(cfg, spec, kernels), kernels)
        )
    return liouvillian(h, dissipators, extras)


def source_operator(cfg: SystemConfig, which: str | None = None) -> np.ndarray:
    """Lowering operator of the requested emission channel."""
    spec = HilbertSpec(cfg.numerics.n_max_y)
    which = which or cfg.source
    if which == "y-dipole":
        return embed_qd_transition(spec, "Y", "G") + embed_qd_transition(
            spec, "XX", "Y"
        )
    if which == "y-cavity":
        return embed_photon_annihilator(spec)
    raise ConfigurationError(f"unknown source {which!r}")


def compute_spectrum_y(cfg: SystemConfig, keep_coherent: bool = False) -> SpectrumResult:
    """Stationary y-polarized emission spectrum of the driven system.

    Builds the Liouvillian, solves for the steady state, and evaluates the
    normal-ordered emission spectrum of the configured source on the
    configured grid.  Positive offsets are above the laser.  The elastic
    line is removed unless keep_coherent is set; tiny negative values from
    the resolvent are clamped to zero.  With source="both" the dipole and
    cavity spectra are summed before normalization.
    """
    liouv = assemble_liouvillian(cfg)
    rho_ss = steady_state(liouv, kernel_rtol=cfg.numerics.steady_rtol)
    n = cfg.numerics
    grid = np.linspace(-n.omega_half_span, n.omega_half_span, n.n_omega)

    sources = ["y-dipole", "y-cavity"] if cfg.source == "both" else [cfg.source]
    total = np.zeros(grid.size)
    for which in sources:
        raw = emission_spectrum(
            liouv, source_operator(cfg, which), rho_ss, grid, keep_coherent
        )
        total = total + raw
    total = np.clip(total, 0.0, None)
    if cfg.normalize and total.max() > 0.0:
        total = total / total.max()

    meta = {
        "config_hash": config_hash(cfg),
        "source": cfg.source,
        "phonons": bool(cfg.phonon.enable and cfg.phonon.alpha_p > 0.0),
        "normalized": bool(cfg.normalize),
        "laser_detuning": cfg.laser_detuning,
        "keep_coherent": bool(keep_coherent),
        "tool": f"bixsim {_version}",
    }
    return SpectrumResult(omega_offsets=grid, intensity=total, metadata=meta)
