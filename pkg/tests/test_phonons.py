"""Phonon influence functional and polaron scattering term."""

import numpy as np
import pytest

from bixsim.errors import ConfigurationError, SolverError
from bixsim.liouville import unvec, vec
from bixsim.phonons import (
    PhononParams,
    bracket_b,
    build_kernels,
    phi,
    polaron_dissipator,
    spectral_density,
)
from bixsim.units import alpha_ps2_to_internal

PARAMS = PhononParams(alpha_p_ps2=0.06, omega_b=1000.0, temperature=6.8, xx_scaling=2.0)
COLD = PhononParams(alpha_p_ps2=0.06, omega_b=1000.0, temperature=0.0, xx_scaling=2.0)


def test_spectral_density_shape():
    w = np.linspace(0.0, 4000.0, 8001)
    j = np.array([spectral_density(x, PARAMS) for x in w])
    assert j[0] == 0.0
    assert np.all(j >= 0.0)
    # cubic superohmic density peaks at sqrt(3) omega_b
    assert abs(w[np.argmax(j)] - np.sqrt(3.0) * 1000.0) <= w[1] - w[0]
    with pytest.raises(ConfigurationError):
        spectral_density(-1.0, PARAMS)


def test_phi_zero_time_zero_temperature():
    # closed form: phi(0) = alpha * omega_b^2 at T = 0
    val = phi(0.0, COLD)
    expected = alpha_ps2_to_internal(0.06) * 1000.0**2
    assert val.real == pytest.approx(expected, rel=1e-8)
    assert val.imag == pytest.approx(0.0, abs=1e-12)


def test_phi_zero_time_is_real_and_grows_with_temperature():
    vals = [phi(0.0, PhononParams(0.06, 1000.0, t, 2.0)).real for t in (0.0, 4.0, 10.0)]
    assert all(v > 0.0 for v in vals)
    assert vals[0] < vals[1] < vals[2]
    assert abs(phi(0.0, PARAMS).imag) < 1e-12


def test_phi_decays_by_cutoff_time():
    assert abs(phi(10.0 / 1000.0, PARAMS)) < 1e-8


def test_bracket_monotone_in_temperature():
    temps = (0.0, 4.0, 10.0, 30.0)
    vals = [bracket_b(PhononParams(0.06, 1000.0, t, 2.0)) for t in temps]
    assert all(0.0 < v <= 1.0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert bracket_b(PhononParams(0.0, 1000.0, 6.8, 2.0)) == 1.0


def test_kernel_tabulation_matches_quadrature():
    kern = build_kernels(PARAMS, n_t=201)
    idx = [0, 17, 50, 120, 200]
    for k in idx:
        direct = phi(float(kern.t_grid[k]), PARAMS)
        assert kern.phi_t[k] == pytest.approx(direct, rel=1e-6, abs=1e-10)


def test_kernel_grid_validation():
    with pytest.raises(ConfigurationError):
        build_kernels(PARAMS, n_t=200)  # needs odd count for Simpson weights
    with pytest.raises(SolverError):
        build_kernels(PARAMS, t_max=5e-4, n_t=201)  # phi has not decayed yet


def test_correlations_include_displacement_scaling():
    strong = PhononParams(alpha_p_ps2=0.06, omega_b=1000.0, temperature=6.8,
                          xx_scaling=3.0)
    kern = build_kernels(strong, n_t=201)
    f = strong.displacement_factor(involves_biexciton=True)
    assert f == pytest.approx(2.0)
    g_g, g_u = kern.correlations(1.0, f)
    pref = kern.bracket_b * kern.bracket_b ** (f * f)
    assert np.allclose(g_g, pref * (np.cosh(f * kern.phi_t) - 1.0), rtol=1e-12)
    assert np.allclose(g_u, pref * np.sinh(f * kern.phi_t), rtol=1e-12)
    zero_g, zero_u = kern.correlations(0.0, f)
    assert not np.any(zero_g) and not np.any(zero_u)


def _four_level_setup(eta1=150.0, eta2=180.0):
    h = np.diag([0.0, 965.0, 990.0, 0.0]).astype(complex)
    up_x = np.zeros((4, 4), dtype=complex)
    up_x[2, 0] = 1.0  # raises G to X
    up_xx = np.zeros((4, 4), dtype=complex)
    up_xx[3, 2] = 1.0  # raises X to XX
    h = h + eta1 * (up_x + up_x.conj().T) + eta2 * (up_xx + up_xx.conj().T)
    terms = [(eta1 * up_x, 1.0), (eta2 * up_xx, 1.0)]
    return h, terms


def test_polaron_dissipator_preserves_trace_and_hermiticity():
    kern = build_kernels(PARAMS, n_t=401)
    h, terms = _four_level_setup()
    dis = polaron_dissipator(h, terms, kern)
    # trace row annihilated
    row = vec(np.eye(4, dtype=complex)).conj().T @ dis
    assert np.max(np.abs(row)) < 1e-10 * max(np.max(np.abs(dis)), 1.0)
    # Hermiticity preserved on random Hermitian inputs
    rng = np.random.default_rng(3)
    for _ in range(5):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = m + m.conj().T
        out = unvec(dis @ vec(rho))
        assert np.max(np.abs(out - out.conj().T)) < 1e-10 * max(
            np.max(np.abs(out)), 1.0
        )


def test_polaron_dissipator_vanishes_without_coupling():
    kern = build_kernels(PhononParams(0.0, 1000.0, 6.8, 2.0), n_t=201)
    h, terms = _four_level_setup()
    dis = polaron_dissipator(h, terms, kern)
    assert np.max(np.abs(dis)) < 1e-14


def test_polaron_dissipator_damps_dressed_coherences():
    # the scattering term must relax the driven system toward the dressed
    # basis: adding it to a purely coherent evolution creates decay
    kern = build_kernels(PARAMS, n_t=401)
    h, terms = _four_level_setup()
    dis = polaron_dissipator(h, terms, kern)
    evals = np.linalg.eigvals(dis)
    assert evals.real.min() < -1e-3  # some channels genuinely dissipate
    assert evals.real.max() < 1e-10  # none amplify


def test_params_validation():
    with pytest.raises(ConfigurationError):
        PhononParams(-0.01, 1000.0, 6.8, 2.0)
    with pytest.raises(ConfigurationError):
        PhononParams(0.06, 0.0, 6.8, 2.0)
    with pytest.raises(ConfigurationError):
        PhononParams(0.06, 1000.0, -1.0, 2.0)
