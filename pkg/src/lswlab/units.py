"""Conversions between laboratory units and natural units (powers of eV).

Every physics kernel in this package works in natural units (hbar = c = 1),
with the two definitional constants

    1 T  = 195 eV^2
    1 m  = 5e6 eV^-1

kept as exact, rounded values so that results quoted in the literature are
reproduced bit-for-bit.  The full-precision factors differ from these by
less than 0.3% (1 T = 195.35 eV^2, 1 m = 5.068e6 eV^-1); anyone needing
CODATA-grade conversions should not use this module.

Photon energy from wavelength uses the full-precision value of hbar*c
because no rounded convention exists for it.
"""

import math

# Definitional conversion constants (exact by convention, see module docstring).
TESLA_TO_EV2 = 195.0          # [eV^2 / T]
METER_TO_INV_EV = 5.0e6       # [eV^-1 / m]

# Full-precision physical constants.
HBARC_EV_M = 197.327e-9       # [eV m]
C_LIGHT_M_S = 2.998e8         # [m / s]


def _require_nonnegative_finite(x: float, name: str) -> None:
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"{name} must be finite and non-negative, got {x!r}")


def tesla_to_ev2(b: float) -> float:
    """Magnetic field, tesla -> eV^2."""
    _require_nonnegative_finite(b, "magnetic field")
    return TESLA_TO_EV2 * b


def meter_to_inv_ev(length: float) -> float:
    """Length, meter -> eV^-1."""
    _require_nonnegative_finite(length, "length")
    return METER_TO_INV_EV * length


def photon_energy_from_wavelength(wavelength_m: float) -> float:
    """Photon energy in eV for a vacuum wavelength in meters.

    omega = 2*pi*hbar*c / lambda.  Configs may specify the photon energy
    directly instead; this helper exists so either form is accepted.
    """
    if not math.isfinite(wavelength_m) or wavelength_m <= 0:
        raise ValueError(f"wavelength must be finite and positive, got {wavelength_m!r}")
    return 2.0 * math.pi * HBARC_EV_M / wavelength_m
