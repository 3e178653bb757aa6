"""lswlab: photon oscillations into weakly coupled massive particles.

Models "light shining through the wall" photoregeneration and cavity
ellipticity signals, turns null counting results into upper probability
bounds, and inverts those bounds into exclusion curves on particle mass
and coupling.
"""

__version__ = "0.1.0"

from .campaign import (
    CampaignConfig,
    CampaignRecord,
    PulseOutcome,
    detection_probability_oracle,
    simulate_campaign,
)
from .config import ConfigError, ExperimentConfig, load_config
from .kernels import (
    REFERENCE_BIREFRINGENCE,
    AxionParams,
    CavitySpec,
    MagnetSpec,
    OpticalPath,
    ParaphotonParams,
    ReferenceBirefringence,
    axion_conversion_probability,
    axion_ellipticity,
    axion_regeneration_probability,
    finesse_from_lifetime,
    lifetime_from_finesse,
    mixing_term,
    oscillation_wavenumber,
    paraphoton_regeneration_probability,
    qed_vacuum_birefringence,
)
from .limits import (
    BandSummary,
    ExclusionCurve,
    MassGrid,
    axion_limit_curve,
    band_summary,
    ellipticity_limit_curve,
    paraphoton_envelope,
    paraphoton_limit_curve,
)
from .statistics import (
    CampaignTally,
    DetectorSpec,
    effective_photons,
    n_missed,
    n_missed_int,
    upper_probability,
)
from .units import (
    meter_to_inv_ev,
    photon_energy_from_wavelength,
    tesla_to_ev2,
)
