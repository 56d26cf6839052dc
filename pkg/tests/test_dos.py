import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from nanophonon.dos import (
    DEBYE_BOOKKEEPING,
    DEFAULT_LINEWIDTH,
    DosSpectrum,
    FrequencyGrid,
    band_integral,
    cutoff_frequency,
    debye_dos,
    diameter_for_cutoff,
    particle_dos,
    suppression_factor,
)
from nanophonon.errors import DomainError, ValidationError
from nanophonon.lamb_modes import Eigenmode, ModeIndex
from nanophonon.materials import Particle, get_preset
from nanophonon.spin_dynamics import zeeman_splitting


def _mode(l, f_hz):
    return Eigenmode(ModeIndex("spheroidal", l, 1), 2 * math.pi * f_hz)


@pytest.fixture(scope="module")
def spectra(modes_12nm, particle_12nm):
    grid = FrequencyGrid.with_spacing(0.0, 3e12, 0.2e9)
    return particle_dos(modes_12nm, DEFAULT_LINEWIDTH, grid), debye_dos(particle_12nm, grid)


def test_single_mode_peak_value():
    dw = DEFAULT_LINEWIDTH
    grid = FrequencyGrid(100e9, 300e9, 2001)
    s = particle_dos([_mode(3, 200e9)], dw, grid)
    assert s.values[1000] == pytest.approx(7 / (math.pi**2 * dw), rel=1e-12)


def test_single_mode_integral_by_quadrature():
    dw = DEFAULT_LINEWIDTH
    w0 = 2 * math.pi * 200e9
    lorentz = lambda x: 5 * dw / (2 * math.pi) ** 2 / ((x - w0) ** 2 + (dw / 2) ** 2)
    # integrate in units of the linewidth so quad sees O(1) scales
    u = lambda y: lorentz(w0 + y * dw) * dw
    cuts = [-np.inf, -50.0, 50.0, np.inf]
    total = sum(quad(u, a, b, limit=200)[0] for a, b in zip(cuts, cuts[1:]))
    assert total == pytest.approx(5 / (2 * math.pi), rel=1e-8)
    grid = FrequencyGrid(150e9, 250e9, 7)
    s = particle_dos([_mode(2, 200e9)], dw, grid)
    np.testing.assert_allclose(s.values, lorentz(2 * math.pi * grid.freqs), rtol=1e-12)


def test_band_integral_counts_modes():
    dw = DEFAULT_LINEWIDTH
    modes = [_mode(1, 200e9), _mode(2, 230e9), _mode(0, 260e9)]  # 3 + 5 + 1 states
    grid = FrequencyGrid.with_spacing(0.0, 600e9, 0.05e9)
    s = particle_dos(modes, dw, grid)
    raw = band_integral(s, 150e9, 310e9, states=False)
    assert raw == pytest.approx(9 / (2 * math.pi), rel=0.02)
    assert band_integral(s, 150e9, 310e9) == pytest.approx(9, rel=0.02)


def test_empty_modes_rejected():
    with pytest.raises(ValidationError):
        particle_dos([], DEFAULT_LINEWIDTH, FrequencyGrid(0, 1e12, 10))
    with pytest.raises(ValidationError):
        particle_dos([_mode(1, 1e11)], 0.0, FrequencyGrid(0, 1e12, 10))


def test_particle_dos_gap_below_180ghz(spectra):
    nano, _ = spectra
    f = nano.freqs
    first_peak = nano.values[(f > 230e9) & (f < 260e9)].max()
    assert nano.values[f < 180e9].max() < 1e-3 * first_peak


def test_debye_scaling(particle_12nm, fig1):
    grid = FrequencyGrid(0.0, 1e12, 11)
    s = debye_dos(particle_12nm, grid).values
    assert s[0] == 0.0
    assert s[10] == pytest.approx(4 * s[5], rel=1e-14)
    big = debye_dos(Particle(fig1, 24e-9), grid).values
    np.testing.assert_allclose(big, 8 * s, rtol=1e-14)


def test_debye_integral_is_state_count(particle_12nm):
    m = particle_12nm.material
    grid = FrequencyGrid(0.0, 1e12, 20001)
    w = 2 * math.pi * 1e12
    expected = particle_12nm.volume * w**3 / (6 * math.pi**2) * (1 / m.c_l**3 + 2 / m.c_t**3)
    assert band_integral(debye_dos(particle_12nm, grid), 0, 1e12) == pytest.approx(expected, rel=1e-6)


def test_cutoff_frequency_values():
    assert cutoff_frequency(3677.962131031953, 12e-9, 2.05) == pytest.approx(200e9, rel=1e-14)
    assert cutoff_frequency(3677, 12e-9) == pytest.approx(2.0e11, rel=1e-3)
    assert cutoff_frequency(3677, 12e-9, 4.1) == pytest.approx(2 * cutoff_frequency(3677, 12e-9, 2.05))


@given(c=st.floats(100, 1e4), d=st.floats(1e-9, 1e-6), eta=st.floats(0.5, 5))
def test_cutoff_round_trip(c, d, eta):
    assert diameter_for_cutoff(c, cutoff_frequency(c, d, eta), eta) == pytest.approx(d, rel=1e-12)


def test_cutoff_domain():
    with pytest.raises(DomainError):
        cutoff_frequency(0.0, 1e-9)
    with pytest.raises(DomainError):
        diameter_for_cutoff(1.0, -1.0)


def test_suppression_identity(particle_12nm):
    grid = FrequencyGrid(0.0, 1e12, 101)
    bulk = debye_dos(particle_12nm, grid)
    for f in grid.freqs[1:]:
        assert suppression_factor(bulk, bulk, f) == pytest.approx(1.0, rel=1e-14)


def test_suppression_below_cutoff_is_zero(spectra):
    nano, bulk = spectra
    lowest = nano.lowest_mode
    for f in np.linspace(1e9, lowest - 10.01e9, 50):
        assert suppression_factor(nano, bulk, f) == 0.0


def test_suppression_at_zeeman_frequency(spectra):
    nano, bulk = spectra
    f = zeeman_splitting(13.6, 1.0)
    assert suppression_factor(nano, bulk, f) < 0.05


def test_suppression_nonnegative(spectra):
    nano, bulk = spectra
    for f in np.linspace(1e9, 2.9e12, 300):
        assert suppression_factor(nano, bulk, f) >= 0


def test_suppression_errors(spectra, particle_12nm):
    nano, bulk = spectra
    with pytest.raises(DomainError):
        suppression_factor(nano, bulk, 4e12)
    with pytest.raises(DomainError):
        suppression_factor(nano, bulk, 0.0)
    coarse = particle_dos([_mode(2, 5e11)], DEFAULT_LINEWIDTH, FrequencyGrid(0, 3e12, 101))
    with pytest.raises(ValidationError, match="linewidth/5"):
        suppression_factor(coarse, bulk, 5e11)


def test_high_frequency_consistency_trend(spectra):
    """Particle/Debye band ratio tends to 1; the excess is a surface term ~ 1/f."""
    nano, bulk = spectra
    f_c = nano.lowest_mode
    ratios = [band_integral(nano, a * f_c, 2 * a * f_c) / band_integral(bulk, a * f_c, 2 * a * f_c)
              for a in (2, 3, 4, 5, 6)]
    # shell structure makes the sequence ripple, so compare the ends only
    assert all(r > 1 for r in ratios)
    assert ratios[-1] < ratios[0] - 0.4
    assert ratios[-1] < 1.2


def test_state_density_bookkeeping(spectra):
    nano, bulk = spectra
    np.testing.assert_array_equal(nano.state_density(), nano.values * DEBYE_BOOKKEEPING)
    np.testing.assert_array_equal(bulk.state_density(), bulk.values)


def test_spectrum_invariants():
    grid = FrequencyGrid(0, 1, 3)
    with pytest.raises(ValidationError):
        DosSpectrum(grid, [0.0, -1.0, 0.0], 1.0, "particle")
    with pytest.raises(ValidationError):
        DosSpectrum(grid, [0.0, 1.0], 1.0, "particle")
    with pytest.raises(ValidationError):
        FrequencyGrid(1.0, 1.0, 5)
    with pytest.raises(ValidationError):
        FrequencyGrid(0.0, 1.0, 1)


def test_grid_with_spacing():
    g = FrequencyGrid.with_spacing(0.0, 1e12, 0.2e9)
    assert g.points == 5001
    assert g.spacing == pytest.approx(0.2e9)
