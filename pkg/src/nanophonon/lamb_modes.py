"""Acoustic eigenmodes of a free, isotropic, elastic sphere.

Modes split into two solver families:

* torsional (l >= 1), pure shear: ``(l-1) j_l(eta) - eta j_{l+1}(eta) = 0``
  with ``eta = omega R / c_t``;
* spheroidal, coupling compression and shear. For l = 0 (breathing modes)
  ``sin(xi)(4 - r^2 xi^2) - 4 xi cos(xi) = 0`` with ``xi = omega R / c_l`` and
  ``r = c_l / c_t``. For l >= 1 the eigenvalues are the roots of the 2x2
  stress-free boundary determinant, see :func:`spheroidal_matrix`.

Roots are bracketed by a sign-change scan and refined by bisection. The
characteristic functions used here are entire in eta (no poles), so every
sign change is a genuine root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ModeCountError, ValidationError
from .special import spherical_jn_pair

__all__ = [
    "TORSIONAL",
    "SPHEROIDAL",
    "ModeIndex",
    "Eigenmode",
    "CharacteristicFunction",
    "torsional_char",
    "spheroidal_l0_char",
    "spheroidal_matrix",
    "spheroidal_char",
    "characteristic_function",
    "find_roots",
    "lowest_root",
    "enumerate_modes",
    "MODE_HEADER",
]

TORSIONAL = "torsional"
SPHEROIDAL = "spheroidal"
MODE_HEADER = ("sigma", "l", "j", "degeneracy", "freq_Hz")

DEFAULT_SCAN_STEP = 1e-3
DEFAULT_MAX_MODES = 10**6


@dataclass(frozen=True, order=True)
class ModeIndex:
    sigma: str
    l: int
    j: int

    def __post_init__(self):
        if self.sigma not in (TORSIONAL, SPHEROIDAL):
            raise ValidationError(f"unknown mode family {self.sigma!r}", field="sigma")
        if self.l < 0 or (self.sigma == TORSIONAL and self.l < 1):
            raise ValidationError(f"invalid l={self.l} for {self.sigma} mode", field="l")
        if self.j < 1:
            raise ValidationError(f"radial index j must be >= 1, got {self.j}", field="j")


@dataclass(frozen=True)
class Eigenmode:
    """One (2l+1)-fold degenerate eigenmode.

    ``character`` is ``"transverse"`` or ``"longitudinal"`` and records which
    velocity dominates the surface displacement; torsional modes are always
    transverse.
    """

    index: ModeIndex
    omega: float
    character: str = "transverse"

    @property
    def degeneracy(self):
        return 2 * self.index.l + 1

    @property
    def freq_hz(self):
        return self.omega / (2.0 * math.pi)

    @property
    def label(self):
        if self.index.sigma == TORSIONAL:
            return TORSIONAL
        return f"{SPHEROIDAL}-{self.character}"


# ---------------------------------------------------------------------------
# characteristic functions


def torsional_char(l, eta):
    """``(l-1) j_l(eta) - eta j_{l+1}(eta)``; roots are omega R / c_t."""
    if l < 1:
        raise DomainError("torsional modes require l >= 1 (there is no l = 0 torsional mode)",
                          field="l")
    jl, jl1 = spherical_jn_pair(l, eta)
    return (l - 1) * jl - eta * jl1


def spheroidal_l0_char(xi, r):
    """Breathing-mode function ``sin(xi)(4 - r^2 xi^2) - 4 xi cos(xi)``; roots are omega R / c_l."""
    if not r > 1:
        raise DomainError(f"velocity ratio c_l/c_t must exceed 1, got {r}", field="r")
    xi = np.asarray(xi, dtype=float)
    return np.sin(xi) * (4.0 - r * r * xi * xi) - 4.0 * xi * np.cos(xi)


def spheroidal_matrix(l, eta, r):
    """Stress-free boundary matrix for spheroidal modes, l >= 1.

    Displacement ``u = grad(phi) + curl curl(r chi)`` with
    ``phi = A j_l(k_l r) Y_lm`` and ``chi = B j_l(k_t r) Y_lm``. Rows are the
    radial and tangential tractions at the surface in units of 2 mu / R^2,
    columns the (A, B) amplitudes. With xi = eta / r::

        M11 = (l(l-1) - eta^2/2) j_l(xi) + 2 xi j_{l+1}(xi)
        M12 = l(l+1) [(l-1) j_l(eta) - eta j_{l+1}(eta)]
        M21 = (l-1) j_l(xi) - xi j_{l+1}(xi)
        M22 = (l^2 - 1 - eta^2/2) j_l(eta) + eta j_{l+1}(eta)

    Reference: T. Takagahara, J. Lumin. 70, 129 (1996); H. Lamb, Proc. London
    Math. Soc. 13, 189 (1882). The entries were re-derived symbolically from
    the Navier equation; the l = 0 column reproduces :func:`spheroidal_l0_char`.
    """
    eta = np.asarray(eta, dtype=float)
    xi = eta / r
    jx, jx1 = spherical_jn_pair(l, xi)
    je, je1 = spherical_jn_pair(l, eta)
    half_eta2 = 0.5 * eta * eta
    m11 = (l * (l - 1) - half_eta2) * jx + 2.0 * xi * jx1
    m12 = l * (l + 1) * ((l - 1) * je - eta * je1)
    m21 = (l - 1) * jx - xi * jx1
    m22 = (l * l - 1 - half_eta2) * je + eta * je1
    return m11, m12, m21, m22


def spheroidal_char(l, eta, r):
    """Determinant of :func:`spheroidal_matrix`; roots are omega R / c_t."""
    if l == 0:
        raise DomainError("l = 0 spheroidal modes use spheroidal_l0_char(xi, r)", field="l")
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}", field="l")
    if not r > 1:
        raise DomainError(f"velocity ratio c_l/c_t must exceed 1, got {r}", field="r")
    m11, m12, m21, m22 = spheroidal_matrix(l, eta, r)
    det = m11 * m22 - m12 * m21
    if not np.all(np.isfinite(det)):
        raise DomainError("spheroidal determinant is not finite at the probe point")
    return det


@dataclass(frozen=True)
class CharacteristicFunction:
    """Scalar function of a dimensionless frequency whose positive roots are eigenvalues.

    ``unit`` is the velocity the argument is scaled by: ``"c_t"`` (eta) or
    ``"c_l"`` (xi).
    """

    sigma: str
    l: int
    ratio: float
    func: Callable
    unit: str = "c_t"

    def __call__(self, x):
        return self.func(x)


def characteristic_function(sigma, l, ratio):
    """Build the characteristic function for a mode family and angular momentum."""
    if sigma == TORSIONAL:
        if l < 1:
            raise DomainError("torsional modes require l >= 1", field="l")
        return CharacteristicFunction(sigma, l, ratio, lambda x: torsional_char(l, x))
    if sigma == SPHEROIDAL:
        if l == 0:
            return CharacteristicFunction(sigma, 0, ratio,
                                          lambda x: spheroidal_l0_char(x, ratio), unit="c_l")
        return CharacteristicFunction(sigma, l, ratio, lambda x: spheroidal_char(l, x, ratio))
    raise ValidationError(f"unknown mode family {sigma!r}", field="sigma")


# ---------------------------------------------------------------------------
# root finding


def find_roots(f, eta_max, scan_step=DEFAULT_SCAN_STEP, rtol=1e-12):
    """All roots of ``f`` on ``(0, eta_max]`` bracketed at resolution ``scan_step``.

    The scan starts at ``scan_step`` so the origin is never reported. Brackets
    are refined together by vectorised bisection until the bracket width is
    below ``rtol`` times its midpoint. Roots are returned in ascending order.
    """
    if not (eta_max > scan_step > 0):
        raise ValidationError(f"need eta_max > scan_step > 0, got {eta_max}, {scan_step}")
    n = int(math.floor(eta_max / scan_step))
    grid = scan_step * np.arange(1, n + 1, dtype=float)
    if grid[-1] < eta_max:
        grid = np.append(grid, eta_max)
    values = np.asarray(f(grid), dtype=float)
    sign = np.sign(values)

    # exact zeros (including underflow near the origin) are skipped; a sign
    # change across them still yields a bracket
    nz = np.nonzero(sign)[0]
    change = np.nonzero(sign[nz[:-1]] * sign[nz[1:]] < 0)[0]
    lo, hi = grid[nz[change]].copy(), grid[nz[change + 1]].copy()
    s_lo = sign[nz[change]]
    while lo.size:
        mid = 0.5 * (lo + hi)
        s_mid = np.sign(np.asarray(f(mid), dtype=float))
        left = s_mid == s_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
        # an exact zero at the midpoint collapses the bracket
        hit = s_mid == 0
        lo = np.where(hit, mid, lo)
        hi = np.where(hit, mid, hi)
        if np.all(hi - lo <= rtol * 0.5 * (lo + hi)):
            break
    return sorted(float(x) for x in 0.5 * (lo + hi))


def lowest_root(ratio, scan_step=DEFAULT_SCAN_STEP, l_max=4):
    """Lowest nonzero eigenvalue omega R / c_t over all families with l <= ``l_max``.

    Returns ``(eta, sigma, l)``. The global minimum of a sphere is reached at
    l = 2 for any physical velocity ratio; ``l_max`` only bounds the search.
    """
    best = None
    for l in range(0, l_max + 1):
        families = [SPHEROIDAL] if l == 0 else [TORSIONAL, SPHEROIDAL]
        for sigma in families:
            cf = characteristic_function(sigma, l, ratio)
            factor = ratio if cf.unit == "c_l" else 1.0
            roots = find_roots(cf, 12.0 / factor, scan_step)
            if roots and (best is None or roots[0] * factor < best[0]):
                best = (roots[0] * factor, sigma, l)
    return best


# ---------------------------------------------------------------------------
# enumeration


def _character(l, eta, r):
    """Classify a spheroidal mode by which potential dominates the surface displacement."""
    if l == 0:
        return "longitudinal"
    m11, m12, m21, m22 = (float(v) for v in spheroidal_matrix(l, eta, r))
    # null vector of the boundary matrix, taken from its better-conditioned row
    if abs(m11) + abs(m12) >= abs(m21) + abs(m22):
        a, b = m12, -m11
    else:
        a, b = m22, -m21
    xi = eta / r
    jx, jx1 = spherical_jn_pair(l, xi)
    je, je1 = spherical_jn_pair(l, eta)
    ll1 = l * (l + 1)
    # grad(phi): u_r = xi j_l'(xi), u_t = j_l(xi); curl curl: u_r = l(l+1) j_l(eta), u_t = j_l + eta j_l'
    djx = l * jx - xi * jx1
    dje = l * je - eta * je1
    longitudinal = a * a * (djx**2 + ll1 * jx**2)
    transverse = b * b * ((ll1 * je) ** 2 + ll1 * (je + dje) ** 2)
    return "longitudinal" if longitudinal > transverse else "transverse"


def _debye_state_estimate(particle, f_max):
    m = particle.material
    w = 2 * math.pi * f_max
    return particle.volume * w**3 / (6 * math.pi**2) * (1 / m.c_l**3 + 2 / m.c_t**3)


def enumerate_modes(particle, f_max, scan_step=DEFAULT_SCAN_STEP, max_modes=DEFAULT_MAX_MODES):
    """All eigenmodes of ``particle`` with frequency <= ``f_max`` (Hz), sorted by frequency.

    Angular momentum is increased until two consecutive l > 2 contribute no
    mode in range; the lowest root grows roughly linearly with l.
    ``max_modes`` bounds the number of states counted with degeneracy; the
    Debye estimate (with a 2x allowance for surface modes) is checked before
    solving.
    """
    if not f_max > 0:
        raise ValidationError(f"f_max must be > 0, got {f_max}", field="f_max")
    estimate = 2.0 * _debye_state_estimate(particle, f_max)
    if estimate > max_modes:
        raise ModeCountError(
            f"about {estimate:.3g} states below {f_max:.3g} Hz exceed the ceiling of {max_modes}"
        )

    m = particle.material
    R = particle.radius
    r = m.velocity_ratio
    eta_max = 2 * math.pi * f_max * R / m.c_t

    modes = []
    states = 0
    empty_run = 0
    l = 0
    # the lowest mode sits at l = 2, so never stop before l = 3
    while l <= 2 or empty_run < 2:
        found = 0
        families = [SPHEROIDAL] if l == 0 else [TORSIONAL, SPHEROIDAL]
        for sigma in families:
            cf = characteristic_function(sigma, l, r)
            if cf.unit == "c_l":
                x_max, to_omega = eta_max / r, m.c_l / R
            else:
                x_max, to_omega = eta_max, m.c_t / R
            if x_max <= scan_step:
                continue
            for j, x in enumerate(find_roots(cf, x_max, scan_step), start=1):
                if sigma == TORSIONAL:
                    character = "transverse"
                else:
                    character = _character(l, x * r if cf.unit == "c_l" else x, r)
                modes.append(Eigenmode(ModeIndex(sigma, l, j), x * to_omega, character))
                found += 1
                states += 2 * l + 1
                if states > max_modes:
                    raise ModeCountError(f"more than {max_modes} states below {f_max:.3g} Hz")
        empty_run = 0 if found else empty_run + 1
        l += 1
    modes.sort(key=lambda e: (e.omega, e.index.l, e.index.j, e.index.sigma))
    return modes
