"""Detection statistics for a null-result photon counting campaign.

With zero counts observed, the strongest statement available is an upper
bound on how many signal photons the detector could have missed.  For a
detector of efficiency eta, the chance that n photons all evade detection
is (1 - eta)^n, so demanding confidence CL gives

    n_missed = log(1 - CL) / log(1 - eta) - 1,

kept as a real number for limit computation and only rounded up for
human-readable reporting.  Dividing by the effective number of incident
photons turns it into an upper bound on the regeneration probability.

Dark counts never enter these bounds (the analysis conditions on zero
observed counts); they matter only to the campaign simulator.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DetectorSpec:
    """Single-photon detector: efficiency and dark-count budget per gate."""

    eta_det: float
    dark_per_gate: float
    gate_ns: float

    def __post_init__(self):
        if not (0 < self.eta_det < 1):
            raise ValueError(f"eta_det must lie in (0, 1), got {self.eta_det!r}")
        if not (0 <= self.dark_per_gate < 1):
            raise ValueError(f"dark_per_gate must lie in [0, 1), got {self.dark_per_gate!r}")
        if not (math.isfinite(self.gate_ns) and self.gate_ns > 0):
            raise ValueError(f"gate_ns must be finite and > 0, got {self.gate_ns!r}")


@dataclass(frozen=True)
class CampaignTally:
    """Pulse counts and per-pulse photon budget of one campaign.

    ``extra_loss`` is a residual multiplicative transmission factor in
    (0, 1] covering everything not broken out explicitly (optics
    transmission, timing coincidence, beam steering losses).
    """

    pulses_total: int
    pulses_with_field: int
    photons_per_pulse: float
    eta_coupling: float
    extra_loss: float = 1.0

    def __post_init__(self):
        if self.pulses_total < 0:
            raise ValueError(f"pulses_total must be >= 0, got {self.pulses_total!r}")
        if not (0 <= self.pulses_with_field <= self.pulses_total):
            raise ValueError(
                f"pulses_with_field must lie in [0, pulses_total], got {self.pulses_with_field!r}"
            )
        if not (math.isfinite(self.photons_per_pulse) and self.photons_per_pulse > 0):
            raise ValueError(f"photons_per_pulse must be > 0, got {self.photons_per_pulse!r}")
        if not (0 < self.eta_coupling <= 1):
            raise ValueError(f"eta_coupling must lie in (0, 1], got {self.eta_coupling!r}")
        if not (0 < self.extra_loss <= 1):
            raise ValueError(f"extra_loss must lie in (0, 1], got {self.extra_loss!r}")


def n_missed(confidence_level: float, eta_det: float) -> float:
    """Upper number of photons the detector may have missed, as a real.

    Satisfies (1 - eta)^(n_missed + 1) = 1 - CL.  Clamped at 0: a vanishing
    confidence level demands no missed photons.
    """
    if not (0 < confidence_level < 1):
        raise ValueError(f"confidence_level must lie in (0, 1), got {confidence_level!r}")
    if not (0 < eta_det < 1):
        raise ValueError(f"eta_det must lie in (0, 1), got {eta_det!r}")
    value = math.log(1.0 - confidence_level) / math.log(1.0 - eta_det) - 1.0
    return max(0.0, value)


def n_missed_int(confidence_level: float, eta_det: float) -> int:
    """Integer missed-photon bound, for reporting: ceil of :func:`n_missed`."""
    return math.ceil(n_missed(confidence_level, eta_det))


def effective_photons(tally: CampaignTally, pulses: str = "with_field") -> float:
    """Effective number of incident photons N_eff for the campaign.

    N_eff = n_pulses * photons_per_pulse * eta_coupling * extra_loss.

    ``pulses`` selects the pulse count: ``"with_field"`` (default) for
    field-dependent signals, ``"all"`` for field-independent ones, where
    every pulse probes the hypothesis regardless of magnet state.
    """
    if pulses == "with_field":
        n_pulses = tally.pulses_with_field
    elif pulses == "all":
        n_pulses = tally.pulses_total
    else:
        raise ValueError(f"pulses must be 'with_field' or 'all', got {pulses!r}")
    return n_pulses * tally.photons_per_pulse * tally.eta_coupling * tally.extra_loss


def upper_probability(n_missed_value: float, n_effective: float) -> float:
    """Upper regeneration probability n_missed / N_eff for a null result."""
    if not (n_missed_value >= 0):
        raise ValueError(f"n_missed_value must be >= 0, got {n_missed_value!r}")
    if not (n_effective > 0):
        raise ValueError(f"n_effective must be > 0, got {n_effective!r}")
    return n_missed_value / n_effective
