import math

import numpy as np
import pytest
import sympy as sp

from franson_swap.network import (
    BeamSplitterConvention,
    MachZehnderParams,
    WindowOverflowError,
    apply_mz_time_domain,
    mz_coefficients,
    shift_samples,
)
from franson_swap.spectral import FrequencyGrid, GridError, gaussian_spectrum, to_spectral, to_temporal

OMEGA = 40.0


@pytest.fixture(scope="module")
def spec():
    return gaussian_spectrum(OMEGA, 1.0, FrequencyGrid.for_time_step(OMEGA, 0.25, 4096))


def test_params_validation():
    with pytest.raises(ValueError):
        MachZehnderParams(5.0, 5.0)
    mz = MachZehnderParams(1.0, 4.0, 0.2)
    assert mz.delay == 3.0
    assert mz.with_phase(1.0).phase == 1.0


def test_balanced_coefficients():
    w = np.linspace(-5, 5, 11)
    # vanishing imbalance, zero phase: everything exits port 1
    c0, c1 = mz_coefficients(w, MachZehnderParams(2.0, 2.0 + 1e-15))
    assert np.abs(c0).max() < 1e-12
    assert np.allclose(c1, 1j * np.exp(1j * w * 2.0))


def test_unitarity_random():
    rng = np.random.default_rng(7)
    w = rng.uniform(-100, 100, 10**6)
    mz = MachZehnderParams(rng.uniform(0, 5), rng.uniform(6, 40), rng.uniform(-math.pi, math.pi))
    c0, c1 = mz_coefficients(w, mz)
    assert np.abs(np.abs(c0) ** 2 + np.abs(c1) ** 2 - 1).max() < 1e-12


def test_destructive_port_one():
    w, ts, tl, phi = sp.symbols("omega t_s t_l phi", real=True)
    c0 = (sp.exp(sp.I * w * ts) - sp.exp(sp.I * (w * tl + phi))) / 2
    p0 = sp.simplify(sp.expand_complex(c0 * sp.conjugate(c0)))
    # p0 = (1 - cos(w (t_l - t_s) + phi)) / 2
    assert sp.simplify(p0 - (1 - sp.cos(w * (tl - ts) + phi)) / 2) == 0
    mz = MachZehnderParams(1.0, 31.0, math.pi - 40.0 * 30.0)
    c0n, c1n = mz_coefficients(40.0, mz)
    assert abs(c0n) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert abs(c1n) < 1e-6


def test_time_domain_two_pulses(spec):
    g = to_temporal(spec)
    mz = MachZehnderParams(5.0, 35.0, 0.7)
    total = 0.0
    for port in (0, 1):
        out = apply_mz_time_domain(g, mz, port)
        w = np.abs(out.samples) ** 2 * out.dt
        early = w[np.abs(out.times - 5.0) < 6].sum()
        late = w[np.abs(out.times - 35.0) < 6].sum()
        assert early == pytest.approx(0.25, abs=1e-8)
        assert late == pytest.approx(0.25, abs=1e-8)
        total += out.norm_squared()
    assert total == pytest.approx(1.0, abs=1e-8)


def test_time_domain_needs_lattice_delays(spec):
    g = to_temporal(spec)
    with pytest.raises(GridError):
        apply_mz_time_domain(g, MachZehnderParams(5.0, 35.1), 0)


def test_frequency_and_time_domain_agree(spec):
    g = to_temporal(spec)
    mz = MachZehnderParams(5.0, 35.0, 1.3)
    coeffs = mz_coefficients(spec.grid.omegas, mz)
    for port in (0, 1):
        back = to_spectral(apply_mz_time_domain(g, mz, port), spec.grid)
        assert np.abs(back.samples - coeffs[port] * spec.samples).max() < 1e-8


def test_overflow(spec):
    g = to_temporal(spec)
    with pytest.raises(WindowOverflowError):
        apply_mz_time_domain(g, MachZehnderParams(5.0, 600.0), 0)
    with pytest.raises(ValueError):
        apply_mz_time_domain(g, MachZehnderParams(5.0, 35.0), 2)


def test_shift_samples_zero_fill():
    x = np.array([0, 1, 2, 0, 0], dtype=complex)
    assert np.array_equal(shift_samples(x, 2), [0, 0, 0, 1, 2])
    assert np.array_equal(shift_samples(x, -1), [1, 2, 0, 0, 0])
    with pytest.raises(WindowOverflowError):
        shift_samples(x, 3)


def test_beam_splitter_matrix():
    m = BeamSplitterConvention().matrix
    assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-15)
    assert np.allclose(m, m.T)
    assert np.allclose(m @ m, 1j * np.array([[0, 1], [1, 0]]))
    assert BeamSplitterConvention().amplitude(0, 1) == pytest.approx(1j / math.sqrt(2))
    with pytest.raises(ValueError):
        BeamSplitterConvention(np.ones((2, 2)))
