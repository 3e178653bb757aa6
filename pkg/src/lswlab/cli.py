"""Command-line surface and output serialization.

Subcommands (all take ``--config``, a file path or a bundled name):

* ``prob axion|paraphoton --mass --coupling``: print a regeneration
  probability.
* ``ellipticity --mass --coupling``: print the ellipticity [rad], cavity
  enhanced when the config defines a cavity.
* ``nmissed``: print the real-valued and integer missed-photon bounds.
* ``limit axion|paraphoton|ellipticity --out``: write an exclusion curve.
* ``band axion|paraphoton|ellipticity --min --max --convention``: print a
  one-number band summary of the corresponding curve.
* ``simulate --seed --out``: write a simulated campaign record.
* ``cavity --finesse|--lifetime``: convert between finesse and photon
  lifetime.

Exit codes: 0 on success, 2 for configuration or usage problems, 3 for
numeric domain violations.  Output files are byte-stable: identical config
and arguments produce identical bytes (shortest round-trip float text,
fixed column order, newline-only line endings) and every file starts with
a ``#``-prefixed metadata header that makes it self-describing.
"""

import argparse
import json
import math
import sys

from . import __version__
from .campaign import CampaignConfig, CampaignRecord, simulate_campaign
from .config import ConfigError, ExperimentConfig, load_config
from .kernels import (
    AxionParams,
    CavitySpec,
    ParaphotonParams,
    axion_ellipticity,
    axion_regeneration_probability,
    finesse_from_lifetime,
    lifetime_from_finesse,
    paraphoton_regeneration_probability,
)
from .limits import (
    ExclusionCurve,
    axion_limit_curve,
    band_summary,
    ellipticity_limit_curve,
    paraphoton_limit_curve,
)
from .statistics import effective_photons, n_missed, n_missed_int, upper_probability

CURVE_FORMAT = "lswlab-curve-v1"
RECORD_FORMAT = "lswlab-record-v1"
CURVE_COLUMNS = ("mass_ev", "bound", "constrained")
RECORD_COLUMNS = ("pulse", "field_on", "lambda_expected", "signal_counts", "dark_counts")


def _fmt(x: float) -> str:
    """Shortest decimal text that round-trips to the same float."""
    return repr(float(x))


# ---------------------------------------------------------------------------
# Serializers
# ---------------------------------------------------------------------------

def _metadata_lines(metadata: dict) -> list:
    return [f"# {key}: {value}" for key, value in metadata.items()]


def curve_to_csv(curve: ExclusionCurve, metadata: dict) -> str:
    lines = _metadata_lines(metadata)
    lines.append(",".join(CURVE_COLUMNS))
    for mass, bound, flag in zip(curve.masses_ev, curve.bounds, curve.constrained):
        bound_text = _fmt(bound) if flag else ""
        lines.append(f"{_fmt(mass)},{bound_text},{1 if flag else 0}")
    return "\n".join(lines) + "\n"


def curve_to_json(curve: ExclusionCurve, metadata: dict) -> str:
    points = [
        {"mass_ev": float(mass), "bound": float(bound) if flag else None,
         "constrained": bool(flag)}
        for mass, bound, flag in zip(curve.masses_ev, curve.bounds, curve.constrained)
    ]
    return json.dumps({"metadata": metadata, "points": points}, indent=1) + "\n"


def record_to_csv(record: CampaignRecord, metadata: dict) -> str:
    lines = _metadata_lines(metadata)
    lines.append(",".join(RECORD_COLUMNS))
    for p in record.pulses:
        lines.append(f"{p.pulse},{1 if p.field_on else 0},{_fmt(p.lambda_expected)},"
                     f"{p.signal_counts},{p.dark_counts}")
    return "\n".join(lines) + "\n"


def record_to_json(record: CampaignRecord, metadata: dict) -> str:
    pulses = [
        {"pulse": p.pulse, "field_on": p.field_on,
         "lambda_expected": p.lambda_expected,
         "signal_counts": p.signal_counts, "dark_counts": p.dark_counts}
        for p in record.pulses
    ]
    return json.dumps({"metadata": metadata, "pulses": pulses}, indent=1) + "\n"


def _write(path: str, content: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(content)


# ---------------------------------------------------------------------------
# Shared command plumbing
# ---------------------------------------------------------------------------

def _positive_finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be finite and positive: {text!r}")
    return value


def _hypothesis_from_args(args) -> AxionParams | ParaphotonParams:
    if args.target == "axion":
        return AxionParams(mass_ev=args.mass, inverse_coupling_ev=args.coupling)
    return ParaphotonParams(mass_ev=args.mass, mixing=args.coupling)


def _p_upper_metadata(cfg: ExperimentConfig, args, pulses: str) -> tuple:
    """Resolve the upper probability for a limit, plus provenance metadata."""
    if args.p_upper is not None:
        return args.p_upper, {"p_upper_source": "flag"}
    missed = n_missed(cfg.confidence_level, cfg.detector.eta_det)
    n_eff = effective_photons(cfg.tally, pulses=pulses)
    p_upper = upper_probability(missed, n_eff)
    return p_upper, {
        "p_upper_source": "config",
        "pulse_tally": pulses,
        "confidence_level": _fmt(cfg.confidence_level),
        "n_missed": _fmt(missed),
        "n_effective": _fmt(n_eff),
    }


def _resolve_psi_limit(cfg: ExperimentConfig, args) -> float:
    if getattr(args, "psi_limit", None) is not None:
        return args.psi_limit
    if cfg.psi_limit_rad is None:
        raise ConfigError("ellipticity limits need psi_limit_rad in the config "
                          "or --psi-limit on the command line")
    return cfg.psi_limit_rad


def _build_curve(cfg: ExperimentConfig, args) -> tuple:
    """Compute the requested exclusion curve and its file metadata."""
    target = args.target
    metadata = {"format": CURVE_FORMAT, "version": __version__,
                "experiment": cfg.experiment, "target": target}
    if target == "axion":
        p_upper, extra = _p_upper_metadata(cfg, args, pulses="with_field")
        curve = axion_limit_curve(p_upper, cfg.generation_magnet,
                                  cfg.regeneration_magnet, cfg.omega_ev, cfg.grid)
    elif target == "paraphoton":
        # Paraphoton mixing needs no external field, so every pulse counts.
        p_upper, extra = _p_upper_metadata(cfg, args, pulses="all")
        curve = paraphoton_limit_curve(p_upper, cfg.optical_path, cfg.omega_ev, cfg.grid)
    else:
        if cfg.cavity is None:
            raise ConfigError("ellipticity limits need a [cavity] section in the config")
        psi_limit = _resolve_psi_limit(cfg, args)
        extra = {"psi_limit_source": "flag" if getattr(args, "psi_limit", None) is not None
                 else "config"}
        curve = ellipticity_limit_curve(psi_limit, cfg.generation_magnet, cfg.cavity,
                                        cfg.omega_ev, cfg.grid)
    metadata.update(curve.metadata)
    metadata.update(extra)
    return curve, metadata


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_prob(args) -> int:
    cfg = load_config(args.config)
    hypothesis = _hypothesis_from_args(args)
    if args.target == "axion":
        p = axion_regeneration_probability(cfg.generation_magnet, cfg.regeneration_magnet,
                                           hypothesis, cfg.omega_ev)
    else:
        p = paraphoton_regeneration_probability(cfg.optical_path, hypothesis, cfg.omega_ev)
    print(_fmt(p))
    return 0


def cmd_ellipticity(args) -> int:
    cfg = load_config(args.config)
    axion = AxionParams(mass_ev=args.mass, inverse_coupling_ev=args.coupling)
    psi = axion_ellipticity(cfg.generation_magnet, axion, cfg.omega_ev, cavity=cfg.cavity)
    print(_fmt(psi))
    return 0


def cmd_nmissed(args) -> int:
    cfg = load_config(args.config)
    print(f"n_missed: {_fmt(n_missed(cfg.confidence_level, cfg.detector.eta_det))}")
    print(f"n_missed_int: {n_missed_int(cfg.confidence_level, cfg.detector.eta_det)}")
    return 0


def cmd_limit(args) -> int:
    cfg = load_config(args.config)
    curve, metadata = _build_curve(cfg, args)
    content = (curve_to_json if args.format == "json" else curve_to_csv)(curve, metadata)
    _write(args.out, content)
    return 0


def cmd_band(args) -> int:
    cfg = load_config(args.config)
    curve, _ = _build_curve(cfg, args)
    summary = band_summary(curve, args.min, args.max, args.convention)
    print(f"bound: {_fmt(summary.bound)}")
    print(f"bound_kind: {summary.bound_kind}")
    print(f"convention: {summary.convention}")
    print(f"band_min_ev: {_fmt(summary.band_min_ev)}")
    print(f"band_max_ev: {_fmt(summary.band_max_ev)}")
    print(f"n_points: {summary.n_points}")
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    hypothesis = None
    hypothesis_text = "none"
    if args.hypothesis is not None:
        if args.mass is None or args.coupling is None:
            raise ConfigError("--hypothesis needs both --mass and --coupling")
        args.target = args.hypothesis
        hypothesis = _hypothesis_from_args(args)
        hypothesis_text = f"{args.hypothesis} mass_ev={_fmt(args.mass)} coupling={_fmt(args.coupling)}"
    sim = CampaignConfig(detector=cfg.detector, tally=cfg.tally, omega_ev=cfg.omega_ev,
                         generation_magnet=cfg.generation_magnet,
                         regeneration_magnet=cfg.regeneration_magnet,
                         optical_path=cfg.optical_path, hypothesis=hypothesis,
                         seed=args.seed)
    record = simulate_campaign(sim)
    metadata = {
        "format": RECORD_FORMAT, "version": __version__,
        "experiment": cfg.experiment, "seed": str(args.seed),
        "hypothesis": hypothesis_text,
        "total_signal": str(record.total_signal), "total_dark": str(record.total_dark),
    }
    content = (record_to_json if args.format == "json" else record_to_csv)(record, metadata)
    _write(args.out, content)
    return 0


def cmd_cavity(args) -> int:
    cfg = load_config(args.config)
    length = args.length
    if length is None:
        if cfg.cavity is None:
            raise ConfigError("cavity conversion needs a [cavity] section or --length")
        length = cfg.cavity.length_m
    if args.finesse is not None:
        print(f"tau_s: {_fmt(lifetime_from_finesse(CavitySpec(length_m=length, finesse=args.finesse)))}")
    else:
        print(f"finesse: {_fmt(finesse_from_lifetime(args.lifetime, length))}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lswlab",
        description="Photon oscillation workbench: probabilities, counting bounds, "
                    "exclusion curves and campaign simulation.")
    parser.add_argument("--version", action="version", version=f"lswlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True,
                       help="experiment config (path, or bundled name: luli, bmv)")

    p = sub.add_parser("prob", help="print a regeneration probability")
    p.add_argument("target", choices=("axion", "paraphoton"))
    add_config(p)
    p.add_argument("--mass", type=float, required=True, help="particle mass [eV]")
    p.add_argument("--coupling", type=_positive_finite, required=True,
                   help="inverse coupling [eV] (axion) or mixing amplitude (paraphoton)")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("ellipticity", help="print the induced ellipticity [rad]")
    add_config(p)
    p.add_argument("--mass", type=float, required=True, help="particle mass [eV]")
    p.add_argument("--coupling", type=_positive_finite, required=True,
                   help="inverse coupling [eV]")
    p.set_defaults(func=cmd_ellipticity)

    p = sub.add_parser("nmissed", help="print the missed-photon bound")
    add_config(p)
    p.set_defaults(func=cmd_nmissed)

    p = sub.add_parser("limit", help="write an exclusion curve")
    p.add_argument("target", choices=("axion", "paraphoton", "ellipticity"))
    add_config(p)
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--p-upper", dest="p_upper", type=_positive_finite, default=None,
                   help="override the upper probability instead of deriving it "
                        "from the config tally")
    p.add_argument("--psi-limit", dest="psi_limit", type=_positive_finite, default=None,
                   help="ellipticity sensitivity [rad] (ellipticity target only)")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("band", help="print a band summary of an exclusion curve")
    p.add_argument("target", choices=("axion", "paraphoton", "ellipticity"))
    add_config(p)
    p.add_argument("--min", type=_positive_finite, required=True, help="band lower edge [eV]")
    p.add_argument("--max", type=_positive_finite, required=True, help="band upper edge [eV]")
    p.add_argument("--convention", default="envelope_best",
                   help="envelope_best, worst_constrained, or quantile:<q>")
    p.add_argument("--p-upper", dest="p_upper", type=_positive_finite, default=None)
    p.add_argument("--psi-limit", dest="psi_limit", type=_positive_finite, default=None)
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("simulate", help="write a simulated campaign record")
    add_config(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--hypothesis", choices=("axion", "paraphoton"), default=None,
                   help="inject a signal hypothesis (default: null world)")
    p.add_argument("--mass", type=float, default=None, help="hypothesis mass [eV]")
    p.add_argument("--coupling", type=_positive_finite, default=None,
                   help="hypothesis coupling")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cavity", help="convert between finesse and photon lifetime")
    add_config(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--finesse", type=float, default=None)
    group.add_argument("--lifetime", type=float, default=None, help="photon lifetime [s]")
    p.add_argument("--length", type=float, default=None,
                   help="cavity length [m]; defaults to the config cavity")
    p.set_defaults(func=cmd_cavity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
