"""Experiment description files: TOML schema, strict loading, validation.

A config is a flat TOML document with one table per value type.  All
quantities are given in laboratory units and converted to eV powers exactly
once, here; the photon energy may be given directly (``omega_ev``) or as a
vacuum wavelength (``wavelength_m``), never both.  Unknown keys are
rejected so typos cannot silently fall back to defaults.

Two example configs ship with the package: ``luli`` (a pulsed two-magnet
photoregeneration campaign) and ``bmv`` (a cavity ellipticity setup).  Load
them by name or copy them as starting points.
"""

import math
import os
from dataclasses import dataclass
from importlib import resources

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .kernels import CavitySpec, MagnetSpec, OpticalPath
from .limits import MassGrid
from .statistics import CampaignTally, DetectorSpec
from .units import photon_energy_from_wavelength


class ConfigError(Exception):
    """Malformed or invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment, fully validated, with all quantities in lab units
    except the photon energy, which is resolved to eV on load."""

    experiment: str
    omega_ev: float
    omega_source: str  # "omega_ev" or "wavelength_m", whichever the file set
    generation_magnet: MagnetSpec
    regeneration_magnet: MagnetSpec
    optical_path: OpticalPath
    detector: DetectorSpec
    tally: CampaignTally
    confidence_level: float
    grid: MassGrid
    cavity: CavitySpec | None = None
    psi_limit_rad: float | None = None


def bundled_config_names() -> tuple:
    """Names accepted by :func:`load_config` in place of a file path."""
    return ("luli", "bmv")


def bundled_config_text(name: str) -> str:
    if name not in bundled_config_names():
        raise ConfigError(f"no bundled config named {name!r}")
    return resources.files("lswlab").joinpath(f"configs/{name}.toml").read_text()


class _Table:
    """One TOML table with typed, tracked key access."""

    def __init__(self, name, data):
        self.name = name
        self.data = dict(data)
        self.seen = set()

    def _get(self, key, kind, required, default):
        self.seen.add(key)
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._path(key)}")
            return default
        value = self.data[key]
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{self._path(key)} must be a number, got {value!r}")
            return float(value)
        if kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{self._path(key)} must be an integer, got {value!r}")
            return value
        if not isinstance(value, str):
            raise ConfigError(f"{self._path(key)} must be a string, got {value!r}")
        return value

    def _path(self, key):
        return f"{self.name}.{key}" if self.name else key

    def require(self, key, kind=float):
        return self._get(key, kind, True, None)

    def optional(self, key, kind=float, default=None):
        return self._get(key, kind, False, default)

    def reject_unknown(self):
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            raise ConfigError(f"unknown key {self._path(unknown[0])}")


def _build(section, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as err:
        raise ConfigError(f"[{section}] {err}") from err


def _parse(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"TOML parse error: {err}") from err

    top = _Table("", raw)
    experiment = top.require("experiment", str)
    omega_ev = top.optional("omega_ev")
    wavelength_m = top.optional("wavelength_m")
    confidence_level = top.require("confidence_level")
    psi_limit_rad = top.optional("psi_limit_rad")

    if (omega_ev is None) == (wavelength_m is None):
        raise ConfigError("exactly one of omega_ev or wavelength_m must be set")
    if omega_ev is None:
        try:
            omega_ev = photon_energy_from_wavelength(wavelength_m)
        except ValueError as err:
            raise ConfigError(f"wavelength_m: {err}") from err
        omega_source = "wavelength_m"
    else:
        omega_source = "omega_ev"
    if not (math.isfinite(omega_ev) and omega_ev > 0):
        raise ConfigError(f"omega_ev must be finite and > 0, got {omega_ev!r}")
    if not (0 < confidence_level < 1):
        raise ConfigError(f"confidence_level must lie in (0, 1), got {confidence_level!r}")
    if psi_limit_rad is not None and not (math.isfinite(psi_limit_rad) and psi_limit_rad > 0):
        raise ConfigError(f"psi_limit_rad must be finite and > 0, got {psi_limit_rad!r}")

    def table(name, required=True):
        top.seen.add(name)
        if name not in raw:
            if required:
                raise ConfigError(f"missing required section [{name}]")
            return None
        if not isinstance(raw[name], dict):
            raise ConfigError(f"{name} must be a table")
        return _Table(name, raw[name])

    magnets = {}
    for section in ("generation_magnet", "regeneration_magnet"):
        t = table(section)
        magnets[section] = _build(section, MagnetSpec,
                                  b0_tesla=t.require("b0_tesla"),
                                  length_m=t.require("length_m"))
        t.reject_unknown()

    t = table("optical_path")
    optical_path = _build("optical_path", OpticalPath,
                          l1_m=t.require("l1_m"), l2_m=t.require("l2_m"))
    t.reject_unknown()

    t = table("detector")
    detector = _build("detector", DetectorSpec,
                      eta_det=t.require("eta_det"),
                      dark_per_gate=t.require("dark_per_gate"),
                      gate_ns=t.require("gate_ns"))
    t.reject_unknown()

    t = table("tally")
    tally = _build("tally", CampaignTally,
                   pulses_total=t.require("pulses_total", int),
                   pulses_with_field=t.require("pulses_with_field", int),
                   photons_per_pulse=t.require("photons_per_pulse"),
                   eta_coupling=t.require("eta_coupling"),
                   extra_loss=t.optional("extra_loss", default=1.0))
    t.reject_unknown()

    t = table("grid")
    grid = _build("grid", MassGrid,
                  min_mass_ev=t.require("min_mass_ev"),
                  max_mass_ev=t.require("max_mass_ev"),
                  points=t.optional("points", int, 2000),
                  spacing=t.optional("spacing", str, "logarithmic"))
    t.reject_unknown()

    t = table("cavity", required=False)
    cavity = None
    if t is not None:
        cavity = _build("cavity", CavitySpec,
                        length_m=t.require("length_m"),
                        finesse=t.require("finesse"))
        t.reject_unknown()

    top.reject_unknown()

    return ExperimentConfig(
        experiment=experiment,
        omega_ev=omega_ev,
        omega_source=omega_source,
        generation_magnet=magnets["generation_magnet"],
        regeneration_magnet=magnets["regeneration_magnet"],
        optical_path=optical_path,
        detector=detector,
        tally=tally,
        confidence_level=confidence_level,
        grid=grid,
        cavity=cavity,
        psi_limit_rad=psi_limit_rad,
    )


def load_config(path_or_name: str) -> ExperimentConfig:
    """Load and validate a config from a file path or a bundled name.

    An existing file path wins; otherwise ``luli`` and ``bmv`` resolve to
    the bundled examples.  Raises :class:`ConfigError` on parse or
    validation failure, naming the offending key.
    """
    if os.path.exists(path_or_name):
        with open(path_or_name, "rb") as fh:
            text = fh.read().decode("utf-8")
    elif path_or_name in bundled_config_names():
        text = bundled_config_text(path_or_name)
    else:
        raise ConfigError(f"config file not found: {path_or_name}")
    return _parse(text)
