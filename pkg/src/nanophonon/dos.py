"""Phonon density of states of a nanoparticle and of the bulk Debye continuum.

Particle DOS: each eigenmode is a Lorentzian of constant full width
``delta_omega`` weighted by its degeneracy::

    rho(w) = sum (2l+1) dw / ((2 pi)^2 [(w - w_mode)^2 + (dw/2)^2])

With this normalisation every mode integrates to (2l+1)/(2 pi), not 2l+1.
The Debye DOS uses the per-branch form
``V w^2 [1/c_l^3 + 2/c_t^3] / (2 pi^2)``, which integrates to the number of
states. Comparisons between the two therefore multiply particle values by
``DEBYE_BOOKKEEPING = 2 pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "DEBYE_BOOKKEEPING",
    "DEFAULT_LINEWIDTH",
    "DOS_HEADER",
    "FrequencyGrid",
    "DosSpectrum",
    "particle_dos",
    "debye_dos",
    "cutoff_frequency",
    "diameter_for_cutoff",
    "suppression_factor",
    "band_integral",
]

DEBYE_BOOKKEEPING = 2.0 * math.pi
DEFAULT_LINEWIDTH = 2.0 * math.pi * 1e9  # rad/s, 1 GHz
ETA_MIN_SPHERE = 2.05
DOS_HEADER = ("freq_Hz", "dos_per_rad_s")
PARTICLE = "particle"
_trapezoid = getattr(np, "trapezoid", None) or np.trapz
DEBYE = "debye"


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of ``points`` frequencies (Hz) from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if not (self.stop > self.start >= 0):
            raise ValidationError(f"need stop > start >= 0, got {self.start}, {self.stop}")
        if int(self.points) != self.points or self.points < 2:
            raise ValidationError(f"need an integer number of points >= 2, got {self.points}")

    @property
    def freqs(self):
        return np.linspace(self.start, self.stop, int(self.points))

    @property
    def spacing(self):
        return (self.stop - self.start) / (self.points - 1)

    @classmethod
    def with_spacing(cls, start, stop, spacing):
        """Smallest uniform grid on [start, stop] whose spacing does not exceed ``spacing``."""
        n = int(math.ceil((stop - start) / spacing - 1e-9)) + 1
        return cls(start, stop, max(n, 2))


@dataclass(frozen=True, eq=False)
class DosSpectrum:
    """Sampled DOS in states per rad/s.

    ``lowest_mode`` (Hz) is set for particle spectra and marks the bottom of
    the discrete spectrum.
    """

    grid: FrequencyGrid
    values: np.ndarray
    linewidth: float
    source: str
    lowest_mode: float | None = None

    def __post_init__(self):
        if self.source not in (PARTICLE, DEBYE):
            raise ValidationError(f"unknown DOS source {self.source!r}")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.points,):
            raise ValidationError("DOS values do not match the grid length")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("DOS values must be finite and non-negative")
        object.__setattr__(self, "values", values)

    @property
    def freqs(self):
        return self.grid.freqs

    def state_density(self):
        """Values rescaled so that integrating over omega counts states."""
        if self.source == PARTICLE:
            return self.values * DEBYE_BOOKKEEPING
        return self.values


def particle_dos(modes, delta_omega, grid):
    """Sum of degeneracy-weighted Lorentzians of full width ``delta_omega`` (rad/s)."""
    if not modes:
        raise ValidationError("mode list is empty", field="modes")
    if not delta_omega > 0:
        raise ValidationError(f"linewidth must be > 0, got {delta_omega}", field="delta_omega")
    w = 2 * math.pi * grid.freqs
    centers = np.array([m.omega for m in modes])
    weights = np.array([m.degeneracy for m in modes], dtype=float)
    half2 = (0.5 * delta_omega) ** 2
    prefactor = delta_omega / (2 * math.pi) ** 2
    values = np.zeros_like(w)
    # chunk over modes to bound memory
    for k in range(0, len(centers), 256):
        c = centers[k:k + 256]
        wt = weights[k:k + 256]
        values += (wt[None, :] / ((w[:, None] - c[None, :]) ** 2 + half2)).sum(axis=1)
    values *= prefactor
    return DosSpectrum(grid, values, delta_omega, PARTICLE,
                       lowest_mode=min(m.freq_hz for m in modes))


def debye_dos(particle, grid):
    """Bulk Debye DOS of a particle-sized volume: V w^2 (1/c_l^3 + 2/c_t^3) / (2 pi^2)."""
    m = particle.material
    w = 2 * math.pi * grid.freqs
    values = particle.volume * w**2 * (1 / m.c_l**3 + 2 / m.c_t**3) / (2 * math.pi**2)
    return DosSpectrum(grid, values, 0.0, DEBYE)


def cutoff_frequency(c, d, eta_min=ETA_MIN_SPHERE):
    """Lowest vibrational frequency eta_min c / (pi d) of a particle of diameter ``d``."""
    _positive(c=c, d=d, eta_min=eta_min)
    return eta_min * c / (math.pi * d)


def diameter_for_cutoff(c, nu_min, eta_min=ETA_MIN_SPHERE):
    """Particle diameter whose cutoff frequency is ``nu_min``."""
    _positive(c=c, nu_min=nu_min, eta_min=eta_min)
    return eta_min * c / (math.pi * nu_min)


def _positive(**kwargs):
    for name, v in kwargs.items():
        if not v > 0:
            raise DomainError(f"{name} must be > 0, got {v}", field=name)


def suppression_factor(nano, bulk, f):
    """Ratio of particle to bulk state density at frequency ``f`` (Hz).

    Both spectra are linearly interpolated and compared on the state-counting
    convention. A finite particle has no modes below its lowest eigenmode, so
    the factor is exactly 0 more than 10 linewidths below it; above that the
    Lorentzian tails are kept. Particle grids must resolve the linewidth
    (spacing <= delta_omega / 5).
    """
    for s in (nano, bulk):
        if not s.grid.start <= f <= s.grid.stop:
            raise DomainError(
                f"frequency {f:.6g} Hz outside the DOS grid [{s.grid.start:.6g}, {s.grid.stop:.6g}]",
                field="f",
            )
        if s.source == PARTICLE and s.grid.spacing > s.linewidth / (2 * math.pi) / 5 * (1 + 1e-9):
            raise ValidationError(
                f"grid spacing {s.grid.spacing:.4g} Hz is coarser than linewidth/5 "
                f"({s.linewidth / (2 * math.pi) / 5:.4g} Hz)",
                field="grid",
            )
    b = float(np.interp(f, bulk.freqs, bulk.state_density()))
    if not b > 0:
        raise DomainError(f"bulk DOS vanishes at {f:.6g} Hz", field="bulk")
    if nano.source == PARTICLE and nano.lowest_mode is not None:
        if f < nano.lowest_mode - 10 * nano.linewidth / (2 * math.pi):
            return 0.0
    return float(np.interp(f, nano.freqs, nano.state_density())) / b


def band_integral(spectrum, f_lo, f_hi, states=True):
    """Integral of the DOS over omega on [f_lo, f_hi] by the trapezoidal rule.

    With ``states=True`` the state-counting convention is used.
    """
    f = spectrum.freqs
    values = spectrum.state_density() if states else spectrum.values
    mask = (f >= f_lo) & (f <= f_hi)
    if mask.sum() < 2:
        raise ValidationError("band contains fewer than two grid points")
    return float(_trapezoid(values[mask], 2 * math.pi * f[mask]))
