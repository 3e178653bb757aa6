"""Figure construction: exclusion regions and campaign count records.

The renderer consumes the public CSV contract only and never reinterprets
numbers: the sole transformations are the display-unit factors (exactly
1e-9 for eV to GeV, exactly 1e3 for eV to meV).  Unconstrained points stay
NaN, so lines and shaded regions break instead of bridging oscillation
nodes with fabricated exclusion.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .curvefile import CurveFile, RecordFile

MASS_UNIT_FACTORS = {"ev": 1.0, "mev": 1e3}
COUPLING_UNIT_FACTORS = {"ev": 1.0, "gev": 1e-9}

FIGSIZE = (6.4, 4.4)
DPI = 150
SHADE_ALPHA = 0.35


def build_exclusion_figure(curves, mass_unit="ev", coupling_unit="ev"):
    """Assemble the exclusion figure; returns it for saving or inspection.

    All curves must share a bound kind: an inverse-coupling bound excludes
    couplings below the curve, a mixing bound excludes amplitudes above
    it, and mixing the two on one axis would shade contradictory sides.
    """
    if mass_unit not in MASS_UNIT_FACTORS:
        raise ValueError(f"mass unit must be one of {sorted(MASS_UNIT_FACTORS)}")
    if coupling_unit not in COUPLING_UNIT_FACTORS:
        raise ValueError(f"coupling unit must be one of {sorted(COUPLING_UNIT_FACTORS)}")
    if not curves:
        raise ValueError("no curves to draw")

    kinds = {curve.bound_kind for curve in curves}
    if len(kinds) > 1:
        raise ValueError(f"cannot overlay curves with different bound kinds: {sorted(kinds)}")
    kind = kinds.pop()
    for curve in curves:
        if not curve.constrained.any():
            raise ValueError(f"curve '{curve.label}' has an empty constrained set; "
                             "nothing to draw")

    mass_factor = MASS_UNIT_FACTORS[mass_unit]
    coupling_factor = COUPLING_UNIT_FACTORS[coupling_unit] if kind != "mixing" else 1.0

    fig, ax = plt.subplots(figsize=FIGSIZE)
    low = min(np.nanmin(c.bounds) for c in curves) * coupling_factor
    high = max(np.nanmax(c.bounds) for c in curves) * coupling_factor

    for index, curve in enumerate(curves):
        masses = curve.masses_ev * mass_factor
        bounds = curve.bounds * coupling_factor
        color = f"C{index}"
        ax.plot(masses, bounds, color=color, linewidth=1.2, label=curve.label)
        if kind == "mixing":
            # Stronger mixing than the bound would have shown a signal.
            ax.fill_between(masses, bounds, high * 10.0, color=color, alpha=SHADE_ALPHA,
                            linewidth=0)
        else:
            # Couplings stronger than the bound (smaller M) are excluded.
            ax.fill_between(masses, low / 10.0, bounds, color=color, alpha=SHADE_ALPHA,
                            linewidth=0)

    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_ylim(low / 10.0, high * 10.0)
    unit_text = {"ev": "eV", "mev": "meV"}[mass_unit]
    ax.set_xlabel(f"mass ({unit_text})")
    if kind == "mixing":
        ax.set_ylabel("kinetic mixing amplitude")
    else:
        ax.set_ylabel(f"inverse coupling ({'GeV' if coupling_unit == 'gev' else 'eV'})")
    ax.legend(loc="best", fontsize="small")
    ax.set_title("excluded regions (shaded)")
    fig.tight_layout()
    return fig


def render_exclusion(curves, out, mass_unit="ev", coupling_unit="ev", style=None):
    """Render one or more curves to an image file and return its path."""
    if style is not None:
        plt.style.use(style)
    fig = build_exclusion_figure(curves, mass_unit=mass_unit, coupling_unit=coupling_unit)
    try:
        fig.savefig(out, dpi=DPI)
    finally:
        plt.close(fig)
    return out


def build_campaign_figure(record: RecordFile):
    """Per-pulse stem plot of counts with field-on pulses distinguished."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    on = record.field_on
    counts = record.signal_counts + record.dark_counts

    for mask, color, label in ((on, "C0", "field on"), (~on, "C7", "field off")):
        if not mask.any():
            continue
        ax.vlines(record.pulse[mask], 0, counts[mask], color=color, linewidth=1.5)
        ax.plot(record.pulse[mask], counts[mask], linestyle="none", marker="o",
                markersize=3.5, color=color, label=label)
    if record.dark_counts.any():
        dark_at = record.dark_counts > 0
        ax.plot(record.pulse[dark_at], record.dark_counts[dark_at], linestyle="none",
                marker="x", markersize=5, color="C3", label="dark counts")

    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("pulse")
    ax.set_ylabel("counts")
    ax.set_ylim(-0.08, max(1.0, counts.max() * 1.2))
    total_signal = record.metadata.get("total_signal", str(int(record.signal_counts.sum())))
    total_dark = record.metadata.get("total_dark", str(int(record.dark_counts.sum())))
    experiment = record.metadata.get("experiment", "campaign")
    ax.set_title(f"{experiment}: {total_signal} signal, {total_dark} dark")
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    return fig


def render_campaign(record: RecordFile, out, style=None):
    """Render a campaign record to an image file and return its path."""
    if style is not None:
        plt.style.use(style)
    fig = build_campaign_figure(record)
    try:
        fig.savefig(out, dpi=DPI)
    finally:
        plt.close(fig)
    return out
