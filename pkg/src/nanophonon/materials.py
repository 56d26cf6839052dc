"""Material parameter sets, physical constants and the preset registry.

Rate coefficients are kept in the units used in the literature (kHz and
kHz/T^5) so published parameter sets can be typed in verbatim. The single
conversion to SI rates happens in :meth:`MaterialParams.rates_si`.

Sound velocities for Y2SiO5 are not available from the source data. The
default transverse velocity is back-solved from the particle cutoff relation
using a 12 nm particle with a 200 GHz cutoff and eta_min = 2.05; the
longitudinal velocity is 1.8 times that. Both are *derived, not measured*
and can be overridden in a config file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ConfigParseError, NotFoundError, ValidationError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "MaterialParams",
    "Particle",
    "CONFIG_KEYS",
    "DERIVED_C_T",
    "DEFAULT_VELOCITY_RATIO",
    "load_material",
    "dump_material",
    "builtin_presets",
    "get_preset",
]

KHZ = 1e3


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants. k_B and h are exact since the 2019 redefinition; mu_B is CODATA 2018."""

    mu_B: float = 9.2740100783e-24  # J/T
    k_B: float = 1.380649e-23  # J/K
    h: float = 6.62607015e-34  # J s


CONSTANTS = PhysicalConstants()

# Cutoff relation solved for c: c = pi * d * nu_min / eta_min, d = 12 nm, nu_min = 200 GHz.
DERIVED_C_T = math.pi * 12e-9 * 200e9 / 2.05
DEFAULT_VELOCITY_RATIO = 1.8


@dataclass(frozen=True)
class MaterialParams:
    """Spin and lattice parameters of a rare-earth-doped crystal.

    Parameters
    ----------
    name : str
        Identifier.
    g : float
        () effective g-factor.
    R0 : float
        (kHz) field-independent residual relaxation rate.
    alpha_ff : float
        (kHz) flip-flop coefficient.
    alpha_D : float
        (kHz/T^5) direct-process coupling.
    gamma_max : float
        (Hz) maximum spectral-diffusion linewidth.
    gamma_0 : float
        (Hz) homogeneous linewidth without spectral diffusion.
    c_t, c_l : float
        (m/s) transverse and longitudinal sound velocities.
    user_supplied : tuple of str
        Fields holding placeholder values that must be supplied by the user.
    """

    name: str
    g: float
    R0: float
    alpha_ff: float
    alpha_D: float
    gamma_max: float = 0.0
    gamma_0: float = 0.0
    c_t: float = DERIVED_C_T
    c_l: float = DERIVED_C_T * DEFAULT_VELOCITY_RATIO
    user_supplied: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise ValidationError("name must be a non-empty string", field="name")
        for f in ("g", "R0", "alpha_ff", "alpha_D", "gamma_max", "gamma_0", "c_t", "c_l"):
            v = getattr(self, f)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{f} must be a finite number, got {v!r}", field=f)
        if self.g <= 0:
            raise ValidationError(f"g must be > 0, got {self.g}", field="g")
        for f in ("R0", "alpha_ff", "alpha_D", "gamma_max", "gamma_0"):
            if getattr(self, f) < 0:
                raise ValidationError(f"{f} must be >= 0, got {getattr(self, f)}", field=f)
        if self.c_t <= 0:
            raise ValidationError(f"c_t must be > 0, got {self.c_t}", field="c_t")
        if self.c_l <= self.c_t:
            raise ValidationError(
                f"c_l must exceed c_t ({self.c_l} <= {self.c_t})", field="c_l"
            )

    @property
    def velocity_ratio(self):
        return self.c_l / self.c_t

    def rates_si(self):
        """Return ``(R0, alpha_ff, alpha_D)`` in s^-1, s^-1 and s^-1 T^-5."""
        return self.R0 * KHZ, self.alpha_ff * KHZ, self.alpha_D * KHZ


@dataclass(frozen=True)
class Particle:
    """Free spherical particle of a given material."""

    material: MaterialParams
    diameter: float

    def __post_init__(self):
        if not (self.diameter > 0 and math.isfinite(self.diameter)):
            raise ValidationError(f"diameter must be > 0, got {self.diameter}", field="diameter")

    @property
    def radius(self):
        return 0.5 * self.diameter

    @property
    def volume(self):
        return math.pi * self.diameter**3 / 6.0


# config key -> MaterialParams field
CONFIG_KEYS = {
    "name": "name",
    "g": "g",
    "R0_kHz": "R0",
    "alpha_ff_kHz": "alpha_ff",
    "alpha_D_kHz_per_T5": "alpha_D",
    "gamma_max_Hz": "gamma_max",
    "gamma_0_Hz": "gamma_0",
    "c_t_m_per_s": "c_t",
    "c_l_m_per_s": "c_l",
}
_REQUIRED = ("name", "g", "R0_kHz", "alpha_ff_kHz", "alpha_D_kHz_per_T5")


def load_material(config_text):
    """Parse flat ``key=value`` text into a validated :class:`MaterialParams`.

    Blank lines and ``#`` comments are ignored. Unknown or duplicate keys are
    errors. ``gamma_max_Hz`` and ``gamma_0_Hz`` default to 0; ``c_t_m_per_s``
    defaults to the derived value and ``c_l_m_per_s`` to 1.8 * c_t.
    """
    values = {}
    for lineno, raw in enumerate(config_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigParseError(
                f"line {lineno}: unknown key {key!r}; accepted keys: {', '.join(CONFIG_KEYS)}"
            )
        if key in values:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigParseError(f"line {lineno}: empty value for {key!r}")
        if key != "name":
            try:
                value = float(value)
            except ValueError:
                raise ConfigParseError(f"line {lineno}: {key} is not a number: {value!r}") from None
        values[key] = value

    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigParseError(f"missing required keys: {', '.join(missing)}")

    kwargs = {CONFIG_KEYS[k]: v for k, v in values.items()}
    if "c_t" in kwargs and "c_l" not in kwargs:
        kwargs["c_l"] = DEFAULT_VELOCITY_RATIO * kwargs["c_t"]
    return MaterialParams(**kwargs)


def dump_material(m):
    """Serialize to config text that :func:`load_material` reparses exactly."""
    lines = [f"# material {m.name}"]
    for key, attr in CONFIG_KEYS.items():
        v = getattr(m, attr)
        lines.append(f"{key} = {v if key == 'name' else repr(float(v))}")
    return "\n".join(lines) + "\n"


_ERYSO_FIG1 = MaterialParams(name="ErYSO-fig1", g=14.0, R0=0.1, alpha_ff=2.0, alpha_D=5e-4)
_ERYSO_FIG2 = replace(_ERYSO_FIG1, name="ErYSO-fig2", gamma_max=5e10, gamma_0=10e3)

_PRESETS = (
    _ERYSO_FIG1,
    _ERYSO_FIG2,
    # b-axis g-factor quoted in the text; rate/linewidth coefficients as for fig2
    replace(_ERYSO_FIG2, name="ErYSO-b-axis", g=13.6),
    # Only the qualitative structure is known: negligible R0. Everything else
    # is a placeholder copied from the Y2SiO5 set.
    replace(
        _ERYSO_FIG2,
        name="ErLiNbO3",
        R0=0.0,
        user_supplied=("g", "alpha_ff", "alpha_D", "gamma_max", "gamma_0", "c_t", "c_l"),
    ),
    # Unusually small R0 and weak flip-flops: only the direct process matters.
    replace(
        _ERYSO_FIG2,
        name="ErKTiOPO4",
        R0=0.0,
        alpha_ff=0.0,
        user_supplied=("g", "alpha_D", "gamma_max", "gamma_0", "c_t", "c_l"),
    ),
)


def builtin_presets():
    """Return all built-in material presets."""
    return list(_PRESETS)


def get_preset(name):
    for m in _PRESETS:
        if m.name == name:
            return m
    raise NotFoundError(
        f"no preset named {name!r}; available: {', '.join(p.name for p in _PRESETS)}"
    )
