"""Closed-form oscillation physics for photon <-> weakly coupled boson mixing.

Covers photoregeneration ("light shining through the wall") probabilities for
axion-like particles and paraphotons, the axion-induced ellipticity acquired
inside a magnetic field region, Fabry-Perot finesse/lifetime relations, and
reference magnetic-birefringence constants.

All functions take laboratory units (tesla, meter, seconds) at the boundary
and convert internally to powers of eV via :mod:`lswlab.units`.  They are
pure and operate on immutable value types, so they can be evaluated
concurrently, including elementwise over mass grids.

Conventions
-----------
* The probability formulas are perturbative: they assume the field-mixing
  phase is small, which holds for every experimentally relevant coupling.
  Inputs outside that regime return values > 1 rather than raising.
* Light polarization is taken parallel to the magnetic field (the coupling
  configuration the photoregeneration formula assumes); polarization
  dynamics are not modeled.
* The magnetic field is treated as homogeneous over the magnet's equivalent
  length; no field-profile integration is performed.
* The ellipticity oscillation factor uses the dimensionless phase
  (oscillation wavenumber times length) so that it shares the phase
  convention of the photoregeneration probability and stays dimensionally
  consistent.  See :func:`axion_ellipticity`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .units import C_LIGHT_M_S, meter_to_inv_ev, tesla_to_ev2

# Series switchover points.  |x| below the threshold evaluates a Taylor
# series instead of the direct expression.  sinc itself is well conditioned,
# so its threshold only needs to dodge 0/0; (1 - sinc) loses ~2 leading
# digits per decade below x ~ 1, so its branch point sits where the direct
# subtraction still carries ~13 good digits and the 4-term series is exact
# to machine precision.  Both branches agree to better than 1e-12 relative
# at their threshold.
SINC_SERIES_THRESHOLD = 1.0e-4
ONE_MINUS_SINC_SERIES_THRESHOLD = 0.05

# Field-induced vacuum index anisotropy per tesla^2 (rounded literature
# value, kept exact for reproducibility).
QED_DELTA_N_PER_T2 = 4.0e-24


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MagnetSpec:
    """One pulsed magnet: peak field [T] and equivalent length [m]."""

    b0_tesla: float
    length_m: float

    def __post_init__(self):
        if not (math.isfinite(self.b0_tesla) and self.b0_tesla >= 0):
            raise ValueError(f"magnet b0_tesla must be finite and >= 0, got {self.b0_tesla!r}")
        if not (math.isfinite(self.length_m) and self.length_m > 0):
            raise ValueError(f"magnet length_m must be finite and > 0, got {self.length_m!r}")


@dataclass(frozen=True)
class AxionParams:
    """Axion-like particle: mass [eV] and inverse two-photon coupling [eV].

    A larger inverse coupling means a more weakly coupled particle;
    ``inverse_coupling_ev = math.inf`` is accepted as the exact decoupling
    limit.
    """

    mass_ev: float
    inverse_coupling_ev: float

    def __post_init__(self):
        if not (math.isfinite(self.mass_ev) and self.mass_ev >= 0):
            raise ValueError(f"axion mass_ev must be finite and >= 0, got {self.mass_ev!r}")
        if math.isnan(self.inverse_coupling_ev) or self.inverse_coupling_ev <= 0:
            raise ValueError(
                f"axion inverse_coupling_ev must be > 0, got {self.inverse_coupling_ev!r}"
            )


@dataclass(frozen=True)
class ParaphotonParams:
    """Paraphoton (hidden photon): mass [eV] and kinetic mixing amplitude."""

    mass_ev: float
    mixing: float

    def __post_init__(self):
        if not (math.isfinite(self.mass_ev) and self.mass_ev >= 0):
            raise ValueError(f"paraphoton mass_ev must be finite and >= 0, got {self.mass_ev!r}")
        if not (0 <= self.mixing < 1):
            raise ValueError(f"paraphoton mixing must lie in [0, 1), got {self.mixing!r}")


@dataclass(frozen=True)
class OpticalPath:
    """Free-propagation lengths [m] on either side of the wall.

    ``l1_m``: entrance lens to wall.  ``l2_m``: blind flange to the lens
    coupling regenerated photons into the detection fiber.
    """

    l1_m: float
    l2_m: float

    def __post_init__(self):
        for name in ("l1_m", "l2_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"optical path {name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class CavitySpec:
    """Fabry-Perot cavity: mirror spacing [m] and finesse."""

    length_m: float
    finesse: float

    def __post_init__(self):
        if not (math.isfinite(self.length_m) and self.length_m > 0):
            raise ValueError(f"cavity length_m must be finite and > 0, got {self.length_m!r}")
        if not (math.isfinite(self.finesse) and self.finesse > 0):
            raise ValueError(f"cavity finesse must be finite and > 0, got {self.finesse!r}")


@dataclass(frozen=True)
class ReferenceBirefringence:
    """Reference magnetic-birefringence values, for scale comparisons.

    ``qed_vacuum_per_t2`` is the predicted vacuum index anisotropy per
    tesla^2.  ``nitrogen_at_1atm`` is the measured anisotropy of molecular
    nitrogen at 1 atm, 273.15 K, and 1 T.  ``bmv_vacuum_per_t2`` is a
    measured vacuum value (compatible with zero) with its 1-sigma
    uncertainty.
    """

    qed_vacuum_per_t2: float = QED_DELTA_N_PER_T2
    nitrogen_at_1atm: float = -2.49e-13
    nitrogen_at_1atm_sigma: float = 0.05e-13
    bmv_vacuum_per_t2: float = -10.0e-17
    bmv_vacuum_per_t2_sigma: float = 23.0e-17


REFERENCE_BIREFRINGENCE = ReferenceBirefringence()


# ---------------------------------------------------------------------------
# Numerical helpers
# ---------------------------------------------------------------------------

def sinc(x):
    """sin(x)/x with sinc(0) = 1, accepting scalars or arrays.

    Below ``SINC_SERIES_THRESHOLD`` the two-term Taylor series is used;
    there the quartic correction is already below double rounding.
    """
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, arr)
    x2 = arr * arr
    series = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    out = np.where(small, series, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def one_minus_sinc(x):
    """1 - sin(x)/x, evaluated without cancellation near x = 0.

    The direct subtraction loses half the significand by x ~ 1e-4, so the
    series branch extends to ``ONE_MINUS_SINC_SERIES_THRESHOLD`` where the
    direct form still carries ~13 digits and the series is exact to
    machine precision.
    """
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < ONE_MINUS_SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, arr)
    x2 = arr * arr
    series = x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    out = np.where(small, series, 1.0 - np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Oscillation kernels
# ---------------------------------------------------------------------------

def mixing_term(b0_tesla: float, inverse_coupling_ev: float) -> float:
    """Photon-axion field mixing element B0/(2M) in eV.

    ``b0_tesla`` is the transverse field [T]; ``inverse_coupling_ev`` the
    inverse two-photon coupling [eV].
    """
    if math.isnan(inverse_coupling_ev) or inverse_coupling_ev <= 0:
        raise ValueError(
            f"inverse_coupling_ev must be > 0, got {inverse_coupling_ev!r}"
        )
    return tesla_to_ev2(b0_tesla) / (2.0 * inverse_coupling_ev)


def oscillation_wavenumber(mass_ev, omega_ev: float):
    """Momentum mismatch m^2/(2 omega) in eV between photon and massive state.

    ``mass_ev`` may be a scalar or an array of masses.
    """
    if not (math.isfinite(omega_ev) and omega_ev > 0):
        raise ValueError(f"omega_ev must be finite and > 0, got {omega_ev!r}")
    mass = np.asarray(mass_ev, dtype=float)
    if np.any(mass < 0) or not np.all(np.isfinite(mass)):
        raise ValueError("mass_ev must be finite and >= 0")
    out = mass * mass / (2.0 * omega_ev)
    return float(out) if out.ndim == 0 else out


def axion_conversion_probability(magnet: MagnetSpec, axion: AxionParams,
                                 omega_ev: float) -> float:
    """One-pass photon -> axion-like particle conversion probability.

    p = (Delta_mix * L)^2 * sinc^2(Delta_osc * L / 2) with L the magnet
    length in eV^-1.  The sinc factor is exactly 1 at zero mass, and the
    result is bounded by the envelope (Delta_mix * L)^2.
    """
    mix = mixing_term(magnet.b0_tesla, axion.inverse_coupling_ev)
    wavenumber = oscillation_wavenumber(axion.mass_ev, omega_ev)
    length = meter_to_inv_ev(magnet.length_m)
    return (mix * length) ** 2 * sinc(wavenumber * length / 2.0) ** 2


def axion_regeneration_probability(generation: MagnetSpec, regeneration: MagnetSpec,
                                   axion: AxionParams, omega_ev: float) -> float:
    """Photon regeneration probability behind the wall.

    Factorizes as conversion-in-the-first-magnet times reconversion-in-the-
    second; for identical magnets this is the one-pass probability squared.
    """
    return (axion_conversion_probability(generation, axion, omega_ev)
            * axion_conversion_probability(regeneration, axion, omega_ev))


def paraphoton_regeneration_probability(path: OpticalPath, paraphoton: ParaphotonParams,
                                        omega_ev: float) -> float:
    """Photon regeneration probability via kinetic photon-paraphoton mixing.

    P = 16 chi^4 sin^2(mu^2 L1 / 4 omega) sin^2(mu^2 L2 / 4 omega), with
    lengths in eV^-1.  No external field is involved, so the result is the
    same whether a magnet is pulsed or not; the envelope is 16 chi^4.
    """
    if not (math.isfinite(omega_ev) and omega_ev > 0):
        raise ValueError(f"omega_ev must be finite and > 0, got {omega_ev!r}")
    mu2 = paraphoton.mass_ev ** 2
    phase1 = mu2 * meter_to_inv_ev(path.l1_m) / (4.0 * omega_ev)
    phase2 = mu2 * meter_to_inv_ev(path.l2_m) / (4.0 * omega_ev)
    return 16.0 * paraphoton.mixing ** 4 * math.sin(phase1) ** 2 * math.sin(phase2) ** 2


def axion_ellipticity(magnet: MagnetSpec, axion: AxionParams, omega_ev: float,
                      cavity: CavitySpec | None = None) -> float:
    """Ellipticity [rad] acquired by light crossing the field region.

    psi = (Delta_mix^2 L / Delta_osc) * (1 - sinc(Delta_osc * L)), times
    2F/pi when a resonant cavity folds the optical path.  The oscillation
    factor takes the dimensionless phase Delta_osc * L, the same phase
    convention as the photoregeneration probability.

    At zero mass the bracket vanishes like (Delta_osc * L)^2 / 6, so the
    analytic limit 0 is returned instead of evaluating 0/0.
    """
    mix = mixing_term(magnet.b0_tesla, axion.inverse_coupling_ev)
    wavenumber = oscillation_wavenumber(axion.mass_ev, omega_ev)
    if wavenumber == 0.0:
        return 0.0
    length = meter_to_inv_ev(magnet.length_m)
    psi = mix ** 2 * length / wavenumber * one_minus_sinc(wavenumber * length)
    if cavity is not None:
        psi *= 2.0 * cavity.finesse / math.pi
    return psi


# ---------------------------------------------------------------------------
# Cavity and birefringence relations
# ---------------------------------------------------------------------------

def lifetime_from_finesse(cavity: CavitySpec) -> float:
    """Photon lifetime tau = F L / (pi c) [s] of a Fabry-Perot cavity."""
    return cavity.finesse * cavity.length_m / (math.pi * C_LIGHT_M_S)


def finesse_from_lifetime(tau_s: float, length_m: float) -> float:
    """Finesse from a measured photon lifetime; exact inverse of
    :func:`lifetime_from_finesse`."""
    if not (math.isfinite(tau_s) and tau_s > 0):
        raise ValueError(f"tau_s must be finite and > 0, got {tau_s!r}")
    if not (math.isfinite(length_m) and length_m > 0):
        raise ValueError(f"length_m must be finite and > 0, got {length_m!r}")
    return math.pi * C_LIGHT_M_S * tau_s / length_m


def qed_vacuum_birefringence(b_tesla: float) -> float:
    """Vacuum index anisotropy Delta n induced by a transverse field [T].

    Quadratic in the field, normalized to the rounded reference coefficient
    ``QED_DELTA_N_PER_T2`` at 1 T.
    """
    if not (math.isfinite(b_tesla) and b_tesla >= 0):
        raise ValueError(f"b_tesla must be finite and >= 0, got {b_tesla!r}")
    return QED_DELTA_N_PER_T2 * b_tesla * b_tesla
