"""Spin-flip rate model, spectral-diffusion linewidth and effective linewidth.

The total rate is the sum of a residual term, a flip-flop term and the
one-phonon direct term::

    R(B, T) = R0 + a_ff g^4 sech^2(x) + a_D g^3 B^5 coth(x),   x = g mu_B B / (2 k T)

The direct term can be scaled by ``direct_scale`` in [0, 1] to model
suppression of the resonant phonon density of states (0 = fully suppressed,
1 = bulk). The model is a low-temperature approximation meant for T below
about 4 K; the code does not enforce that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ValidationError
from .materials import CONSTANTS

__all__ = [
    "RateBreakdown",
    "LinewidthPoint",
    "SweepRow",
    "SWEEP_HEADER",
    "zeeman_splitting",
    "zeeman_argument",
    "rate_breakdown",
    "gamma_sd",
    "gamma_eff",
    "sweep_field",
    "crossover_field",
]

SWEEP_HEADER = ("B_T", "R0_Hz", "R_ff_Hz", "R_direct_Hz", "R_total_Hz", "Gamma_SD_Hz", "Gamma_eff_Hz")

_CLAMP = 300.0  # exp(2*300) is still finite in double precision
_SERIES_BELOW = 1e-6


@dataclass(frozen=True)
class RateBreakdown:
    """Additive contributions to the spin-flip rate, all in s^-1."""

    r0: float
    flip_flop: float
    direct: float

    @property
    def total(self):
        return self.r0 + self.flip_flop + self.direct


@dataclass(frozen=True)
class LinewidthPoint:
    field: float
    gamma_sd: float
    gamma_eff: float
    delay: float


@dataclass(frozen=True)
class SweepRow:
    field: float
    rates: RateBreakdown
    linewidth: LinewidthPoint

    def as_tuple(self):
        r = self.rates
        return (self.field, r.r0, r.flip_flop, r.direct, r.total,
                self.linewidth.gamma_sd, self.linewidth.gamma_eff)


def zeeman_splitting(g, B):
    """Zeeman splitting g mu_B B / h in Hz."""
    return g * CONSTANTS.mu_B * B / CONSTANTS.h


def zeeman_argument(g, B, T_k):
    """Dimensionless ratio x = g mu_B B / (2 k T)."""
    _check_temperature(T_k)
    return g * CONSTANTS.mu_B * B / (2.0 * CONSTANTS.k_B * T_k)


def _check_temperature(T_k):
    if not T_k > 0:
        raise DomainError(f"temperature must be > 0 K, got {T_k}", field="T_k")


def _check_field(B):
    if not B >= 0:
        raise DomainError(f"magnetic field must be >= 0 T, got {B}", field="B")


def _sech2(x):
    x = abs(x)
    if x > _CLAMP:
        return 0.0
    e = math.exp(-2.0 * x)
    return 4.0 * e / (1.0 + e) ** 2


def _b5_coth(B, x, B_per_x):
    """B^5 coth(x) with the B -> 0 limit handled by its series.

    ``B_per_x`` is B/x = 2kT/(g mu_B), which stays finite at B = 0.
    """
    if x < _SERIES_BELOW:
        # coth(x) = 1/x + x/3 + O(x^3)
        return B**4 * B_per_x * (1.0 + x * x / 3.0)
    if x > _CLAMP:
        return B**5
    return B**5 / math.tanh(x)


def rate_breakdown(m, B, T_k, direct_scale=1.0):
    """Evaluate the three rate contributions at field ``B`` (T) and ``T_k`` (K).

    The returned ``direct`` already includes ``direct_scale``.
    """
    _check_field(B)
    x = zeeman_argument(m.g, B, T_k)
    _check_scale(direct_scale)
    R0, a_ff, a_D = m.rates_si()
    B_per_x = 2.0 * CONSTANTS.k_B * T_k / (m.g * CONSTANTS.mu_B)
    flip_flop = a_ff * m.g**4 * _sech2(x)
    direct = a_D * m.g**3 * _b5_coth(B, x, B_per_x)
    return RateBreakdown(r0=R0, flip_flop=flip_flop, direct=direct_scale * direct)


def gamma_sd(m, B, T_k):
    """Spectral-diffusion linewidth Gamma_max sech^2(x) in Hz."""
    _check_field(B)
    return m.gamma_max * _sech2(zeeman_argument(m.g, B, T_k))


def _check_scale(direct_scale):
    if not 0.0 <= direct_scale <= 1.0:
        raise DomainError(f"direct_scale must lie in [0, 1], got {direct_scale}",
                          field="direct_scale")


def _gamma_eff(m, sd, total_rate, t):
    return m.gamma_0 + 0.5 * sd * -math.expm1(-total_rate * t)


def gamma_eff(m, B, T_k, t, direct_scale=1.0):
    """Effective linewidth after delay ``t`` (s): Gamma_0 + Gamma_SD (1 - exp(-R t)) / 2."""
    if not t >= 0:
        raise DomainError(f"delay must be >= 0 s, got {t}", field="t")
    rates = rate_breakdown(m, B, T_k, direct_scale)
    return _gamma_eff(m, gamma_sd(m, B, T_k), rates.total, t)


def sweep_field(m, B_grid, T_k, t, direct_scale=1.0):
    """Evaluate rates and linewidths on a strictly increasing field grid.

    ``direct_scale`` is either a scalar or a sequence with one entry per grid point.
    """
    B_grid = [float(b) for b in B_grid]
    if not B_grid:
        raise ValidationError("field grid is empty", field="B_grid")
    if B_grid[0] < 0:
        raise DomainError("field grid must be non-negative", field="B_grid")
    for a, b in zip(B_grid, B_grid[1:]):
        if not b > a:
            raise ValidationError(f"field grid must be strictly increasing ({a} -> {b})",
                                  field="B_grid")
    if not t >= 0:
        raise DomainError(f"delay must be >= 0 s, got {t}", field="t")
    if isinstance(direct_scale, (int, float)):
        scales = [float(direct_scale)] * len(B_grid)
    else:
        scales = [float(s) for s in direct_scale]
        if len(scales) != len(B_grid):
            raise ValidationError("direct_scale length does not match the field grid",
                                  field="direct_scale")

    rows = []
    for B, s in zip(B_grid, scales):
        rates = rate_breakdown(m, B, T_k, s)
        sd = gamma_sd(m, B, T_k)
        lw = LinewidthPoint(field=B, gamma_sd=sd, gamma_eff=_gamma_eff(m, sd, rates.total, t),
                            delay=t)
        rows.append(SweepRow(field=B, rates=rates, linewidth=lw))
    return rows


def crossover_field(m, T_k, B_lo=1e-3, B_hi=20.0, tol=1e-12):
    """Field where the direct term overtakes the flip-flop term, or None.

    Flip-flop decreases and direct increases monotonically in B, so there is at
    most one crossing; it is located by bisection on ``[B_lo, B_hi]``.
    """
    def diff(B):
        r = rate_breakdown(m, B, T_k)
        return r.direct - r.flip_flop

    lo, hi = B_lo, B_hi
    f_lo, f_hi = diff(lo), diff(hi)
    if f_lo == 0:
        return lo
    if f_lo * f_hi > 0:
        return None
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
