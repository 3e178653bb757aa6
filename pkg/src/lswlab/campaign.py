"""Monte Carlo model of a pulsed photoregeneration campaign.

Each laser pulse is one detection gate: the expected number of regenerated
photons reaching the detector is

    lambda = photons_per_pulse * eta_coupling * extra_loss * P(hypothesis)

with P the regeneration probability of the configured hypothesis (zero for
an axion-like hypothesis while the field is off, field-independent for a
paraphoton one, zero with no hypothesis).  Detected signal counts are drawn
as Poisson(lambda * eta_det) by CDF inversion; lambda is far below one in
every physical regime, where Poisson and per-photon Bernoulli thinning are
indistinguishable.  Dark counts are one Bernoulli(dark_per_gate) draw per
gate.

Timing (trigger jitter, field flat top, gate/pulse coincidence) is not
simulated; campaigns fold any coincidence inefficiency into
``extra_loss``.  Every draw comes from a counter-based stream keyed by
(seed, pulse index), so pulses can be simulated in any order or in
parallel with bit-identical results.
"""

from dataclasses import dataclass

from .kernels import (
    AxionParams,
    MagnetSpec,
    OpticalPath,
    ParaphotonParams,
    axion_regeneration_probability,
    paraphoton_regeneration_probability,
)
from .rng import poisson_inverse_cdf, uniform, uniform_block
from .statistics import CampaignTally, DetectorSpec


@dataclass(frozen=True)
class CampaignConfig:
    """Everything a simulated campaign needs, including the seed.

    The seed fully determines the output record.  ``hypothesis`` is an
    :class:`AxionParams`, a :class:`ParaphotonParams`, or None for the
    null world.
    """

    detector: DetectorSpec
    tally: CampaignTally
    omega_ev: float
    generation_magnet: MagnetSpec
    regeneration_magnet: MagnetSpec
    optical_path: OpticalPath
    hypothesis: AxionParams | ParaphotonParams | None
    seed: int

    def __post_init__(self):
        if not (self.omega_ev > 0):
            raise ValueError(f"omega_ev must be > 0, got {self.omega_ev!r}")
        if self.hypothesis is not None and not isinstance(
                self.hypothesis, (AxionParams, ParaphotonParams)):
            raise ValueError(f"unsupported hypothesis type {type(self.hypothesis).__name__}")


@dataclass(frozen=True)
class PulseOutcome:
    """One simulated pulse: magnet state, expectation and drawn counts."""

    pulse: int
    field_on: bool
    lambda_expected: float
    signal_counts: int
    dark_counts: int


@dataclass(frozen=True)
class CampaignRecord:
    """Per-pulse outcomes plus totals; totals always equal the sums."""

    pulses: tuple
    total_signal: int
    total_dark: int

    def __post_init__(self):
        if any(p.signal_counts < 0 or p.dark_counts < 0 for p in self.pulses):
            raise ValueError("counts must be non-negative")
        if (self.total_signal != sum(p.signal_counts for p in self.pulses)
                or self.total_dark != sum(p.dark_counts for p in self.pulses)):
            raise ValueError("record totals must equal the sum of the entries")

    @classmethod
    def from_pulses(cls, pulses) -> "CampaignRecord":
        pulses = tuple(pulses)
        return cls(pulses=pulses,
                   total_signal=sum(p.signal_counts for p in pulses),
                   total_dark=sum(p.dark_counts for p in pulses))


def _regeneration_probability(config: CampaignConfig, field_on: bool) -> float:
    hypothesis = config.hypothesis
    if hypothesis is None:
        return 0.0
    if isinstance(hypothesis, AxionParams):
        if not field_on:
            return 0.0
        return axion_regeneration_probability(config.generation_magnet,
                                              config.regeneration_magnet,
                                              hypothesis, config.omega_ev)
    return paraphoton_regeneration_probability(config.optical_path, hypothesis,
                                               config.omega_ev)


def simulate_campaign(config: CampaignConfig) -> CampaignRecord:
    """Simulate one campaign; bit-identical output for identical configs.

    The field-on pulses are placed first in the sequence.  Only the counts
    enter any downstream statistics, so the placement is a labeling
    convention, not a physics assumption.
    """
    tally = config.tally
    per_pulse_photons = (tally.photons_per_pulse * tally.eta_coupling * tally.extra_loss)
    eta = config.detector.eta_det
    dark_p = config.detector.dark_per_gate

    # The probability only depends on the field state; compute each once.
    lam_on = per_pulse_photons * _regeneration_probability(config, True)
    lam_off = per_pulse_photons * _regeneration_probability(config, False)

    outcomes = []
    for pulse in range(tally.pulses_total):
        field_on = pulse < tally.pulses_with_field
        lam = lam_on if field_on else lam_off
        signal = poisson_inverse_cdf(lam * eta, uniform(config.seed, pulse, 0))
        dark = 1 if uniform(config.seed, pulse, 1) < dark_p else 0
        outcomes.append(PulseOutcome(pulse=pulse, field_on=field_on,
                                     lambda_expected=lam, signal_counts=signal,
                                     dark_counts=dark))
    return CampaignRecord.from_pulses(outcomes)


def detection_probability_oracle(eta: float, n_photons: int, trials: int,
                                 seed: int = 0) -> float:
    """Empirical probability that at least one of n photons is detected.

    Brute-force check of the missed-photon bound: each trial draws
    ``n_photons`` independent Bernoulli(eta) detections and scores whether
    any succeeded.  Converges to 1 - (1 - eta)^n.
    """
    if not (0 < eta < 1):
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
    if n_photons < 0:
        raise ValueError(f"n_photons must be >= 0, got {n_photons!r}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if n_photons == 0:
        return 0.0
    draws = uniform_block(seed, 0, trials * n_photons).reshape(trials, n_photons)
    return float((draws < eta).any(axis=1).mean())
