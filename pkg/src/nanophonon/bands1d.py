"""Band gaps of a one-dimensional bilayer phononic lattice.

Normal-incidence longitudinal waves in a periodic stack of two layers obey::

    cos(q L) = cos(k1 d1) cos(k2 d2) - (Z1/Z2 + Z2/Z1)/2 sin(k1 d1) sin(k2 d2)

with k_i = 2 pi f / c_i, Z_i = rho_i c_i and L = d1 + d2. Frequencies where
the right-hand side exceeds 1 in magnitude have no propagating Bloch wave.
This is a reduced-order stand-in for a full 3D phononic crystal: it captures
gap opening and gap tuning, not the spectrum of any particular 3D geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InfeasibleError, ValidationError

__all__ = [
    "Layer",
    "UnitCell1D",
    "BandGap",
    "BAND_HEADER",
    "GAP_HEADER",
    "dispersion_rhs",
    "find_gaps",
    "quarter_wave_cell",
    "tune_cell",
    "TuneResult",
    "bragg_gap",
    "transit_time",
]

BAND_HEADER = ("freq_Hz", "cos_qL", "in_gap")
GAP_HEADER = ("f_low_Hz", "f_high_Hz", "center_Hz", "width_Hz")


@dataclass(frozen=True)
class Layer:
    thickness: float
    density: float
    velocity: float

    def __post_init__(self):
        for name in ("thickness", "density", "velocity"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"layer {name} must be > 0, got {v}", field=name)

    @property
    def impedance(self):
        return self.density * self.velocity


@dataclass(frozen=True)
class UnitCell1D:
    a: Layer
    b: Layer

    @property
    def period(self):
        return self.a.thickness + self.b.thickness

    def scaled(self, s):
        """Copy with both thicknesses multiplied by ``s``."""
        return UnitCell1D(replace(self.a, thickness=self.a.thickness * s),
                          replace(self.b, thickness=self.b.thickness * s))


@dataclass(frozen=True)
class BandGap:
    f_low: float
    f_high: float

    def __post_init__(self):
        if not self.f_high > self.f_low:
            raise ValidationError(f"gap edges out of order: {self.f_low} >= {self.f_high}")

    @property
    def center(self):
        return 0.5 * (self.f_low + self.f_high)

    @property
    def width(self):
        return self.f_high - self.f_low


def dispersion_rhs(cell, f):
    """cos(q L) as a function of frequency ``f`` (Hz, scalar or array)."""
    a, b = cell.a, cell.b
    if isinstance(f, (float, int, np.floating)):
        p1 = 2 * math.pi * f * a.thickness / a.velocity
        p2 = 2 * math.pi * f * b.thickness / b.velocity
        z = a.impedance / b.impedance
        return math.cos(p1) * math.cos(p2) - 0.5 * (z + 1.0 / z) * math.sin(p1) * math.sin(p2)
    f = np.asarray(f, dtype=float)
    p1 = 2 * math.pi * f * a.thickness / a.velocity
    p2 = 2 * math.pi * f * b.thickness / b.velocity
    z = a.impedance / b.impedance
    mix = 0.5 * (z + 1.0 / z)
    out = np.cos(p1) * np.cos(p2) - mix * np.sin(p1) * np.sin(p2)
    return float(out) if out.ndim == 0 else out


# |cos qL| may exceed 1 by rounding in a pass band (e.g. matched impedances)
GAP_THRESHOLD = 1e-12


def _excess(cell, f):
    return abs(dispersion_rhs(cell, f)) - 1.0


def _refine_edge(cell, outside, inside, rtol):
    """Bisect between a pass-band point and a gap point."""
    for _ in range(200):
        if abs(inside - outside) <= rtol * max(abs(inside), abs(outside)):
            break
        mid = 0.5 * (outside + inside)
        if _excess(cell, mid) > 0:
            inside = mid
        else:
            outside = mid
    return 0.5 * (outside + inside)


def find_gaps(cell, f_lo, f_hi, resolution, rtol=1e-13):
    """Stop bands on ``[f_lo, f_hi]`` detected on a scan of step ``resolution``.

    Edges inside the range are refined by bisection on ``|cos qL| - 1``; a gap
    running into either end of the range is truncated there. The default edge
    tolerance is well below the scan resolution so that gap edges are
    reproducible across scans with different grids.
    """
    if not (f_hi > f_lo >= 0):
        raise ValidationError(f"need f_hi > f_lo >= 0, got {f_lo}, {f_hi}")
    if not resolution > 0:
        raise ValidationError(f"resolution must be > 0, got {resolution}", field="resolution")
    n = int(math.ceil((f_hi - f_lo) / resolution)) + 1
    f = np.linspace(f_lo, f_hi, n)
    in_gap = _excess(cell, f) > GAP_THRESHOLD
    if not in_gap.any():
        return []

    gaps = []
    edges = np.diff(in_gap.astype(np.int8))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    stops = list(np.nonzero(edges == -1)[0])
    if in_gap[0]:
        starts.insert(0, 0)
    if in_gap[-1]:
        stops.append(n - 1)
    for i, k in zip(starts, stops):
        low = f[0] if i == 0 else _refine_edge(cell, f[i - 1], f[i], rtol)
        high = f[-1] if k == n - 1 else _refine_edge(cell, f[k + 1], f[k], rtol)
        if high > low:
            gaps.append(BandGap(low, high))
    return gaps


def quarter_wave_cell(center, rho_a, c_a, rho_b, c_b):
    """Bilayer whose layers are each a quarter wavelength thick at ``center`` (Hz)."""
    return UnitCell1D(Layer(c_a / (4 * center), rho_a, c_a), Layer(c_b / (4 * center), rho_b, c_b))


def transit_time(cell):
    """One-way travel time through a unit cell; Bragg order n sits at n / (2 T)."""
    return cell.a.thickness / cell.a.velocity + cell.b.thickness / cell.b.velocity


def bragg_gap(cell, n, rtol=1e-13):
    """The stop band of Bragg order ``n`` (None when it is closed).

    At the Bragg frequency n/(2T) the total phase is n pi and
    ``|cos qL| = cos^2 p + mix sin^2 p >= 1``, so gap ``n`` always contains
    it. Each Bragg interval holds exactly one pass band, inside which cos qL
    changes sign once; the zeros on either side bracket the gap edges.
    """
    if int(n) != n or n < 1:
        raise ValidationError(f"Bragg order must be a positive integer, got {n}", field="n")
    f0 = 0.5 / transit_time(cell)
    fn = n * f0
    if _excess(cell, fn) <= GAP_THRESHOLD:
        return None
    low = _refine_edge(cell, _sign_change(cell, fn - f0, fn), fn, rtol)
    high = _refine_edge(cell, _sign_change(cell, fn, fn + f0), fn, rtol)
    return BandGap(low, high) if high > low else None


def _sign_change(cell, a, b):
    """Zero of cos qL between consecutive Bragg frequencies."""
    fa = dispersion_rhs(cell, a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = dispersion_rhs(cell, mid)
        if fm == 0 or b - a <= 1e-15 * b:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@dataclass(frozen=True)
class TuneResult:
    cell: UnitCell1D
    gap: BandGap | None
    evaluations: int
    order: int = 0


def tune_cell(target_center, target_width, materials, bounds=(0.05, 20.0), split_points=400):
    """Choose layer thicknesses so a band gap sits at ``target_center`` with ``target_width``.

    ``materials`` is a pair of ``(density, velocity)`` tuples. Thicknesses are
    written as ``d_i = 2 w_i k c_i / (4 target_center)``: a quarter-wave stack
    has split ``w_a = 1 - w_b = 0.5`` and scale ``k = 1``. Rescaling a cell
    rescales all gap edges, so for every split and Bragg order the scale that
    puts the gap center on target is exact, and the fractional width
    ``width / center`` depends on the split alone. The search walks the split
    outward from the quarter-wave value on a uniform grid for each order,
    bisects the first sign change of ``width / center - target``, and keeps
    the lowest order whose thicknesses stay within ``bounds`` times the
    quarter-wave values. Without an exact solution the closest admissible
    candidate is returned. The search is deterministic.

    Raises
    ------
    InfeasibleError
        If no admissible cell has a gap, or the best width is more than 50%
        away from the target.
    """
    if not target_center > 0:
        raise ValidationError(f"target center must be > 0, got {target_center}",
                              field="target_center")
    if not target_width > 0:
        raise ValidationError(
            "target width must be > 0; a zero-width gap is a pass band. "
            "Request a finite width, or use find_gaps to inspect an existing cell.",
            field="target_width",
        )
    (rho_a, c_a), (rho_b, c_b) = materials
    base = quarter_wave_cell(target_center, rho_a, c_a, rho_b, c_b)
    d0 = np.array([base.a.thickness, base.b.thickness])
    lo_bound, hi_bound = bounds
    target_rel = target_width / target_center
    evals = 0

    def cell_for(w, k=1.0):
        d = d0 * 2.0 * np.array([w, 1.0 - w]) * k
        return UnitCell1D(Layer(d[0], rho_a, c_a), Layer(d[1], rho_b, c_b))

    def fractional_width(w, n):
        nonlocal evals
        evals += 1
        gap = bragg_gap(cell_for(w), n, rtol=1e-12)
        return 0.0 if gap is None else gap.width / gap.center

    def finish(w, n):
        gap = bragg_gap(cell_for(w), n)
        if gap is None:
            return None
        cell = cell_for(w, gap.center / target_center)
        ratio = np.array([cell.a.thickness, cell.b.thickness]) / d0
        if np.any(ratio < lo_bound) or np.any(ratio > hi_bound):
            return None
        return TuneResult(cell, bragg_gap(cell, n), evals, n)

    # splits ordered by distance from the quarter-wave stack
    grid = np.linspace(0.0, 1.0, 2 * split_points + 1)[1:-1]
    grid = grid[np.argsort(np.abs(grid - 0.5), kind="stable")]
    half = grid[0::2], grid[1::2]  # the two sides of 0.5, moving outward
    best, best_miss = None, math.inf
    for n in range(1, int(math.ceil(hi_bound)) + 1):
        center = None
        for side in half:
            side = np.concatenate([[0.5], side[np.abs(side - 0.5) > 0]])
            prev_w, prev_r = None, None
            for w in side:
                r = fractional_width(w, n) - target_rel
                if prev_r is not None and (r > 0) != (prev_r > 0):
                    a, b, ra = prev_w, w, prev_r
                    for _ in range(80):
                        mid = 0.5 * (a + b)
                        rm = fractional_width(mid, n) - target_rel
                        if (rm > 0) == (ra > 0):
                            a, ra = mid, rm
                        else:
                            b = mid
                    result = finish(0.5 * (a + b), n)
                    if result is not None:
                        center = result
                        break
                cand = finish(w, n) if abs(r) < best_miss else None
                if cand is not None:
                    best, best_miss = cand, abs(r)
                prev_w, prev_r = w, r
            if center is not None:
                return replace(center, evaluations=evals)

    if best is None or best.gap is None or abs(best.gap.width / target_width - 1) > 0.5:
        achieved = 0.0 if best is None or best.gap is None else best.gap.width
        raise InfeasibleError(
            f"cannot reach a {target_width:.4g} Hz gap near {target_center:.4g} Hz; "
            f"best achievable width {achieved:.4g} Hz",
            best=best if best is not None else TuneResult(base, None, evals),
        )
    return replace(best, evaluations=evals)
