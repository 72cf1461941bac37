"""Physical constants (frozen CODATA 2018 snapshot) and unit conventions.

Every quantity in this package is SI. Angular frequencies are rad/s
internally; anything quoted in Hz crosses the boundary through
``hz_to_angular`` / ``angular_to_hz`` exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used by every formula in the package."""

    e: float      # elementary charge [C]
    m_e: float    # electron mass [kg]
    hbar: float   # reduced Planck constant [J s]
    k_B: float    # Boltzmann constant [J/K]
    c: float      # speed of light [m/s]
    m_p: float    # proton mass [kg]
    g_e: float    # electron g-factor magnitude (dimensionless)

    def __post_init__(self) -> None:
        for name in ("e", "m_e", "hbar", "k_B", "c", "m_p", "g_e"):
            if getattr(self, name) <= 0:
                raise ValueError(f"constant {name} must be positive")


# Values frozen from the CODATA 2018 adjustment; scipy tracks newer
# adjustments, so these are pinned here to keep golden numbers bit-stable.
CODATA2018 = PhysicalConstants(
    e=1.602176634e-19,
    m_e=9.1093837015e-31,
    hbar=1.054571817e-34,
    k_B=1.380649e-23,
    c=299792458.0,
    m_p=1.67262192369e-27,
    g_e=2.00231930436256,
)

E = CODATA2018.e
M_E = CODATA2018.m_e
HBAR = CODATA2018.hbar
K_B = CODATA2018.k_B
C_LIGHT = CODATA2018.c
M_P = CODATA2018.m_p
G_E = CODATA2018.g_e

# (mass [kg], |charge| [C]) presets accepted in scenario files
PARTICLES: dict[str, tuple[float, float]] = {
    "electron": (M_E, E),
    "positron": (M_E, E),
    "proton": (M_P, E),
}


def hz_to_angular(f: float) -> float:
    """Convert a frequency in Hz to rad/s (multiply by 2*pi)."""
    return TWO_PI * f


def angular_to_hz(omega: float) -> float:
    """Convert an angular frequency in rad/s to Hz (divide by 2*pi)."""
    return omega / TWO_PI


def cyclotron_frequency(B: float, q: float = E, m: float = M_E) -> float:
    """Cyclotron frequency |q|B/m in rad/s for a charge q in field B.

    B and m must be positive; q may carry either sign.
    """
    if B <= 0:
        raise ValueError("magnetic field must be positive")
    if m <= 0:
        raise ValueError("mass must be positive")
    if q == 0:
        raise ValueError("charge must be nonzero")
    return abs(q) * B / m


def particle_mass_charge(name: str) -> tuple[float, float]:
    """Look up the (mass, |charge|) preset for a particle name."""
    try:
        return PARTICLES[name]
    except KeyError:
        raise ValueError(
            f"unknown particle {name!r}; expected one of {sorted(PARTICLES)}"
        ) from None
