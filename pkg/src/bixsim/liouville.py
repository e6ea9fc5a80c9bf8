"""Dense superoperator algebra: Lindblad generators, steady states, spectra.

Vectorization is column stacking throughout: ``vec(rho)`` stacks the columns
of rho, so ``vec(A rho B) = (B^T kron A) vec(rho)``.  A superoperator on a
d-dimensional Hilbert space is a dense (d^2, d^2) complex matrix.

The Lindblad dissipator convention is

    D[O] rho = (rate / 2) * (2 O rho O+ - O+ O rho - rho O+ O)

so `rate` is the full population decay rate of the channel (a two-level
excited state decays as exp(-rate * t), its coherence as exp(-rate * t / 2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, SolverError
from .hilbert import is_hermitian

__all__ = [
    "vec",
    "unvec",
    "spre",
    "spost",
    "sandwich",
    "lindblad_dissipator",
    "hamiltonian_superop",
    "liouvillian",
    "steady_state",
    "validate_density_matrix",
    "SpectrumResult",
    "regression_spectrum",
    "emission_spectrum",
    "solver_hygiene",
]


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization of a matrix."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of `vec`; the length must be a perfect square."""
    v = np.asarray(v, dtype=complex)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ConfigurationError("vector length is not a perfect square")
    return v.reshape((d, d), order="F")


def spre(a: np.ndarray) -> np.ndarray:
    """Superoperator for left multiplication, rho -> a rho."""
    a = np.asarray(a, dtype=complex)
    return np.kron(np.eye(a.shape[0], dtype=complex), a)


def spost(b: np.ndarray) -> np.ndarray:
    """Superoperator for right multiplication, rho -> rho b."""
    b = np.asarray(b, dtype=complex)
    return np.kron(b.T, np.eye(b.shape[0], dtype=complex))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> a rho b."""
    return np.kron(np.asarray(b, dtype=complex).T, np.asarray(a, dtype=complex))


def lindblad_dissipator(op: np.ndarray, rate: float) -> np.ndarray:
    """Lindblad dissipator superoperator for a single jump operator.

    Implements (rate/2) (2 O rho O+ - O+ O rho - rho O+ O).  Negative rates
    are rejected: they do not generate a completely positive map.
    """
    if rate < 0:
        raise ConfigurationError(f"negative dissipation rate {rate}")
    op = np.asarray(op, dtype=complex)
    opd_op = op.conj().T @ op
    return 0.5 * rate * (2.0 * sandwich(op, op.conj().T) - spre(opd_op) - spost(opd_op))


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    """Coherent part -i [H, rho] as a superoperator."""
    return -1j * (spre(h) - spost(h))


def liouvillian(
    h: np.ndarray,
    dissipators: list[np.ndarray] | None = None,
    extra_terms: list[np.ndarray] | None = None,
    hermit_rtol: float = 1e-12,
) -> np.ndarray:
    """Assemble L rho = -i[H, rho] + sum of dissipator superoperators.

    `dissipators` are pre-built superoperators (e.g. from
    `lindblad_dissipator`); `extra_terms` allows non-Lindblad but
    trace-preserving contributions such as a polaron scattering block.
    Raises if H is not Hermitian within `hermit_rtol`.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, rtol=hermit_rtol):
        raise ConfigurationError("Hamiltonian is not Hermitian within tolerance")
    liouv = hamiltonian_superop(h)
    for term in dissipators or []:
        liouv = liouv + term
    for term in extra_terms or []:
        liouv = liouv + term
    return liouv


def steady_state(
    liouv: np.ndarray,
    kernel_rtol: float = 1e-10,
    residual_tol: float = 1e-9,
) -> np.ndarray:
    """Steady-state density matrix from the kernel of the Liouvillian.

    The kernel is located by SVD.  Raises SolverError if the kernel is
    empty or degenerate at the given relative tolerance, if the kernel
    vector is traceless, or if the final residual ||L vec(rho)|| exceeds
    `residual_tol`.
    """
    liouv = np.asarray(liouv, dtype=complex)
    _, s, vh = np.linalg.svd(liouv)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        raise SolverError("Liouvillian is identically zero")
    kdim = int(np.sum(s <= kernel_rtol * smax))
    if kdim == 0:
        raise SolverError(
            "no steady state found: smallest singular value "
            f"{s[-1]:.3e} exceeds tolerance {kernel_rtol * smax:.3e}"
        )
    if kdim > 1:
        raise SolverError(
            f"steady state is not unique: Liouvillian kernel dimension {kdim}"
        )
    rho = unvec(vh[-1].conj())
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise SolverError("kernel vector is traceless; no physical steady state")
    rho = rho / tr
    residual = np.linalg.norm(liouv @ vec(rho))
    if residual > residual_tol:
        raise SolverError(
            f"steady-state residual {residual:.3e} exceeds {residual_tol:.1e}"
        )
    return rho


def validate_density_matrix(
    rho: np.ndarray,
    hermit_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    eig_floor: float = -1e-8,
) -> None:
    """Raise SolverError unless rho is Hermitian, unit trace and positive.

    Small negative eigenvalues above `eig_floor` are tolerated as numerical
    noise.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = np.linalg.norm(rho - rho.conj().T)
    if herm > hermit_tol:
        raise SolverError(f"density matrix not Hermitian: deviation {herm:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise SolverError(f"density matrix trace {tr!r} deviates from 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < eig_floor:
        raise SolverError(f"density matrix eigenvalue {w.min():.3e} below floor")


@dataclass(frozen=True)
class SpectrumResult:
    """A one-sided emission spectrum on a frequency grid.

    omega_offsets are energies relative to the drive laser (ueV), positive
    values above the laser.  `intensity` is nonnegative (arbitrary units,
    unit maximum if normalized).  `metadata` records provenance.
    """

    omega_offsets: np.ndarray
    intensity: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "omega_offsets", np.asarray(self.omega_offsets, dtype=float)
        )
        object.__setattr__(self, "intensity", np.asarray(self.intensity, dtype=float))
        if self.omega_offsets.shape != self.intensity.shape:
            raise ConfigurationError("grid and intensity shapes differ")


def _trace_row(a: np.ndarray) -> np.ndarray:
    # Tr(A rho) = vec(A^T) . vec(rho) under column stacking
    return np.asarray(a, dtype=complex).T.reshape(-1, order="F")


def regression_spectrum(
    liouv: np.ndarray,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho_ss: np.ndarray,
    omega_grid: np.ndarray,
    keep_coherent: bool = False,
    steady_tol: float = 1e-8,
) -> np.ndarray:
    """Quantum-regression spectrum S(w) = Re Int_0^inf dt e^{iwt} <A(t) B(0)>.

    Evaluated without time stepping through the resolvent,
    S(w) = Re Tr[A (-iw - L)^{-1} vec(B rho_ss)], using one
    eigendecomposition of L for the whole grid.  By default the component
    of B rho_ss along the Liouvillian kernel is projected out, which removes
    the elastic (delta-function) line and leaves the incoherent spectrum;
    pass keep_coherent=True to retain it.

    Raises SolverError if rho_ss is not stationary under L or if some grid
    frequency coincides with an undamped Liouvillian eigenvalue (add
    dissipation to every channel before asking for a spectrum).
    """
    liouv = np.asarray(liouv, dtype=complex)
    omega_grid = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    rho_v = vec(rho_ss)
    scale = max(np.linalg.norm(liouv), 1.0)
    if np.linalg.norm(liouv @ rho_v) > steady_tol * scale:
        raise SolverError("rho_ss is not a steady state of the given Liouvillian")

    start = vec(np.asarray(op_b, dtype=complex) @ np.asarray(rho_ss, dtype=complex))
    if not keep_coherent:
        # left kernel of a trace-preserving L is the trace functional, so the
        # kernel component of B rho_ss has coefficient Tr(B rho_ss)
        start = start - np.trace(op_b @ rho_ss) * rho_v

    evals, vecs = np.linalg.eig(liouv)
    try:
        amp = np.linalg.solve(vecs, start)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"Liouvillian eigenbasis is singular: {exc}") from exc
    weights = (_trace_row(op_a) @ vecs) * amp

    out = np.empty(omega_grid.size, dtype=float)
    for i, w in enumerate(omega_grid):
        denom = -1j * w - evals
        bad = np.abs(denom) < 1e-12 * scale
        if np.any(bad & (np.abs(weights) > 1e-14 * max(np.abs(weights).max(), 1.0))):
            raise SolverError(
                f"resolvent singular at omega={w:g}: an undamped eigenvalue "
                "coincides with the grid; every channel needs nonzero dissipation"
            )
        out[i] = np.sum(weights / np.where(bad, np.inf, denom)).real
    return out


def emission_spectrum(
    liouv: np.ndarray,
    lowering_op: np.ndarray,
    rho_ss: np.ndarray,
    omega_grid: np.ndarray,
    keep_coherent: bool = False,
) -> np.ndarray:
    """Normal-ordered emission spectrum of a source with lowering operator s.

    Returns Re Int_0^inf dt e^{iwt} <s+(0) s(t)>_ss on `omega_grid`, which
    is the regression spectrum of (A, B) = (s+, s) evaluated at -w.  With
    this orientation a transition above the laser appears at positive
    offset, so red/blue asymmetries read off the grid directly.
    """
    s = np.asarray(lowering_op, dtype=complex)
    grid = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    return regression_spectrum(
        liouv, s.conj().T, s, rho_ss, -grid, keep_coherent=keep_coherent
    )


def solver_hygiene(liouv: np.ndarray, rho_ss: np.ndarray) -> dict:
    """Collect solver health metrics for a Liouvillian/steady-state pair.

    Returns trace error, Hermiticity deviation, minimum eigenvalue and the
    stationarity residual; the caller decides which to assert.
    """
    rho = np.asarray(rho_ss, dtype=complex)
    return {
        "trace_error": abs(np.trace(rho).real - 1.0),
        "hermiticity": float(np.linalg.norm(rho - rho.conj().T)),
        "min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()),
        "residual": float(np.linalg.norm(np.asarray(liouv) @ vec(rho))),
    }


def propagate(liouv: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """Evolve rho0 for time t under L by dense matrix exponential."""
    return unvec(sla.expm(np.asarray(liouv) * t) @ vec(rho0))
