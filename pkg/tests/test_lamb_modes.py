import math

import numpy as np
import pytest

import oracles
from nanophonon.dos import cutoff_frequency
from nanophonon.errors import DomainError, ModeCountError, ValidationError
from nanophonon.lamb_modes import (
    SPHEROIDAL,
    TORSIONAL,
    ModeIndex,
    characteristic_function,
    enumerate_modes,
    find_roots,
    lowest_root,
    spheroidal_char,
    spheroidal_l0_char,
    spheroidal_matrix,
    torsional_char,
)
from nanophonon.materials import MaterialParams, Particle, get_preset


def test_torsional_l1_roots_are_j2_zeros():
    roots = find_roots(characteristic_function(TORSIONAL, 1, 1.8), 20.0)
    ref = oracles.zeros_of_j2(20.0)
    assert len(roots) == len(ref)
    np.testing.assert_allclose(roots, ref, rtol=0, atol=1e-10)
    assert roots[:3] == pytest.approx([5.7635, 9.0950, 12.3229], abs=1e-4)


def test_torsional_l2_first_root():
    roots = find_roots(characteristic_function(TORSIONAL, 2, 1.8), 5.0)
    assert roots[0] == pytest.approx(2.50, abs=0.005)
    # straddles the root
    assert torsional_char(2, roots[0] - 1e-6) * torsional_char(2, roots[0] + 1e-6) < 0


def test_torsional_vanishes_at_origin():
    assert abs(torsional_char(1, 1e-4)) < 1e-12


def test_torsional_l0_rejected():
    with pytest.raises(DomainError):
        torsional_char(0, 1.0)


def test_breathing_mode_r2():
    roots = find_roots(characteristic_function(SPHEROIDAL, 0, 2.0), 5.0)
    assert 2.7 < roots[0] < 2.8
    for perturb in (1e-6,):
        lo = spheroidal_l0_char(roots[0] - perturb, 2.0)
        hi = spheroidal_l0_char(roots[0] + perturb, 2.0)
        assert lo * hi < 0


def test_breathing_origin_is_third_order():
    for xi in (1e-2, 1e-3):
        assert abs(spheroidal_l0_char(xi, 2.0)) < 10 * xi**3


def test_breathing_root_matches_scan_oracle():
    # independent scan at step 1e-3 then bisection to 1e-10 on the closed form
    def f(x):
        return math.sin(x) * (4 - 4 * x * x) - 4 * x * math.cos(x)

    x = 1e-3
    while f(x) * f(x + 1e-3) > 0:
        x += 1e-3
    a, b = x, x + 1e-3
    while b - a > 1e-10:
        m = 0.5 * (a + b)
        a, b = (m, b) if f(a) * f(m) > 0 else (a, m)
    root = find_roots(characteristic_function(SPHEROIDAL, 0, 2.0), 5.0)[0]
    assert root == pytest.approx(0.5 * (a + b), abs=1e-9)


def test_spheroidal_l2_lowest_root_in_anchor_band():
    roots = find_roots(characteristic_function(SPHEROIDAL, 2, 1.8), 10.0)
    assert 2.0 <= roots[0] <= 2.7
    assert roots[0] == pytest.approx(2.6434, abs=1e-3)
    assert all(b > a for a, b in zip(roots, roots[1:]))


def test_spheroidal_l0_delegated():
    with pytest.raises(DomainError, match="spheroidal_l0_char"):
        spheroidal_char(0, 1.0, 1.8)


def test_spheroidal_matrix_l0_column_is_breathing_equation():
    # at l = 0, M11 * (2 xi) equals the breathing function of xi
    r = 1.8
    eta = np.linspace(0.3, 9, 50)
    m11 = spheroidal_matrix(0, eta, r)[0]
    xi = eta / r
    np.testing.assert_allclose(2 * xi * m11, spheroidal_l0_char(xi, r), atol=1e-12)


def test_spheroidal_matrix_matches_symbolic_traction():
    """Tractions from u = grad(phi) + curl curl(r chi) via finite differences."""
    from scipy.special import spherical_jn as jn
    from scipy.special import eval_legendre

    l, kl, kt, r, th = 2, 1.3, 2.2, 1.0, 0.7
    lam = kt**2 / kl**2 - 2.0  # mu = 1
    h = 1e-5

    def P(t):
        return eval_legendre(l, math.cos(t))

    def dP(t):
        return (P(t + h) - P(t - h)) / (2 * h)

    def u_phi(rr, t):
        ur = (jn(l, kl * (rr + h)) - jn(l, kl * (rr - h))) / (2 * h) * P(t)
        return ur, jn(l, kl * rr) / rr * dP(t)

    def u_chi(rr, t):
        ur = l * (l + 1) * jn(l, kt * rr) / rr * P(t)
        g = lambda s: s * jn(l, kt * s)
        return ur, (g(rr + h) - g(rr - h)) / (2 * h) / rr * dP(t)

    def tractions(u):
        ur, ut = u(r, th)
        dur_dr = (u(r + h, th)[0] - u(r - h, th)[0]) / (2 * h)
        dur_dt = (u(r, th + h)[0] - u(r, th - h)[0]) / (2 * h)
        dut_dr = (u(r + h, th)[1] - u(r - h, th)[1]) / (2 * h)
        div = (((r + h) ** 2 * u(r + h, th)[0] - (r - h) ** 2 * u(r - h, th)[0]) / (2 * h) / r**2
               + (math.sin(th + h) * u(r, th + h)[1] - math.sin(th - h) * u(r, th - h)[1])
               / (2 * h) / (r * math.sin(th)))
        srr = lam * div + 2 * dur_dr
        srt = dur_dt / r + dut_dr - ut / r
        return srr / P(th), srt / dP(th)

    m11, m12, m21, m22 = spheroidal_matrix(l, kt, kt / kl)
    srr_a, srt_a = tractions(u_phi)
    srr_b, srt_b = tractions(u_chi)
    np.testing.assert_allclose([srr_a, srt_a, srr_b, srt_b],
                               [2 * m11, 2 * m21, 2 * m12, 2 * m22], rtol=1e-4, atol=1e-6)


def test_find_roots_empty_below_first_root():
    assert find_roots(characteristic_function(TORSIONAL, 1, 1.8), 5.0) == []


def test_find_roots_precondition():
    with pytest.raises(ValidationError):
        find_roots(lambda x: x, 1e-3, 1e-2)


@pytest.mark.parametrize("sigma, l", [(TORSIONAL, 1), (TORSIONAL, 3), (SPHEROIDAL, 0),
                                      (SPHEROIDAL, 1), (SPHEROIDAL, 2), (SPHEROIDAL, 5)])
def test_scan_refinement_stable(sigma, l):
    f = characteristic_function(sigma, l, 1.8)
    coarse = find_roots(f, 25.0, 1e-3)
    fine = find_roots(f, 25.0, 5e-4)
    assert len(coarse) == len(fine)
    np.testing.assert_allclose(coarse, fine, rtol=1e-11)


def test_lowest_root_is_torsional_l2():
    eta, sigma, l = lowest_root(1.8)
    assert (sigma, l) == (TORSIONAL, 2)
    assert eta == pytest.approx(2.5011326, abs=1e-6)


def test_mode_index_invariants():
    with pytest.raises(ValidationError):
        ModeIndex(TORSIONAL, 0, 1)
    with pytest.raises(ValidationError):
        ModeIndex(SPHEROIDAL, 1, 0)


def test_enumerate_12nm(modes_12nm, particle_12nm):
    lowest = modes_12nm[0]
    assert lowest.index == ModeIndex(TORSIONAL, 2, 1)
    eta, _, _ = lowest_root(particle_12nm.material.velocity_ratio)
    predicted = cutoff_frequency(particle_12nm.material.c_t, 12e-9, eta)
    assert lowest.freq_hz == pytest.approx(predicted, rel=0.05)
    assert lowest.freq_hz > 200e9
    assert all(m.degeneracy == 2 * m.index.l + 1 for m in modes_12nm)
    assert all(m.omega > 0 for m in modes_12nm)
    freqs = [m.omega for m in modes_12nm]
    assert freqs == sorted(freqs)


def test_no_duplicates_and_j_ordering(modes_12nm):
    keys = [m.index for m in modes_12nm]
    assert len(keys) == len(set(keys))
    by_family = {}
    for m in modes_12nm:
        by_family.setdefault((m.index.sigma, m.index.l), []).append(m)
    for family in by_family.values():
        family.sort(key=lambda m: m.index.j)
        assert [m.index.j for m in family] == list(range(1, len(family) + 1))
        assert all(b.omega > a.omega for a, b in zip(family, family[1:]))


def test_enumerate_below_lowest_is_empty(particle_12nm):
    assert enumerate_modes(particle_12nm, 200e9) == []


def test_size_scaling(fig1):
    a = enumerate_modes(Particle(fig1, 12e-9), 1.2e12)
    b = enumerate_modes(Particle(fig1, 6e-9), 2.4e12)
    assert [m.index for m in a] == [m.index for m in b]
    np.testing.assert_allclose([m.omega * 2 for m in a], [m.omega for m in b], rtol=1e-11)


def test_velocity_scaling(fig1):
    fast = MaterialParams("fast", fig1.g, fig1.R0, fig1.alpha_ff, fig1.alpha_D,
                          c_t=fig1.c_t * 1.5, c_l=fig1.c_l * 1.5)
    a = enumerate_modes(Particle(fig1, 12e-9), 1.2e12)
    b = enumerate_modes(Particle(fast, 12e-9), 1.8e12)
    assert [m.index for m in a] == [m.index for m in b]
    np.testing.assert_allclose([m.omega * 1.5 for m in a], [m.omega for m in b], rtol=1e-11)


def test_mode_count_grows_as_cube(modes_12nm):
    """Log-log slope of the cumulative state count well above the cutoff."""
    f_c = modes_12nm[0].freq_hz
    f = np.linspace(5 * f_c, 10 * f_c, 40)
    freqs = np.array([m.freq_hz for m in modes_12nm])
    deg = np.array([m.degeneracy for m in modes_12nm])
    N = np.array([deg[freqs <= x].sum() for x in f])
    slope = np.polyfit(np.log(f), np.log(N), 1)[0]
    assert slope == pytest.approx(3.0, rel=0.15)


def test_character_labels(modes_12nm):
    labels = {m.label for m in modes_12nm}
    assert labels == {"torsional", "spheroidal-transverse", "spheroidal-longitudinal"}
    breathing = [m for m in modes_12nm if m.index.sigma == SPHEROIDAL and m.index.l == 0]
    assert all(m.character == "longitudinal" for m in breathing)


def test_mode_ceiling(particle_12nm):
    with pytest.raises(ModeCountError):
        enumerate_modes(particle_12nm, 3e12, max_modes=100)


def test_velocity_ratio_must_exceed_one():
    with pytest.raises(DomainError):
        spheroidal_char(2, 1.0, 1.0)
