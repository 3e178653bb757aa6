import math

import numpy as np
import pytest

from lswlab.kernels import (
    AxionParams,
    CavitySpec,
    MagnetSpec,
    OpticalPath,
    ParaphotonParams,
    axion_ellipticity,
    axion_regeneration_probability,
    paraphoton_regeneration_probability,
)
from lswlab.limits import (
    SHAPE_FACTOR_THRESHOLD,
    ExclusionCurve,
    MassGrid,
    axion_limit_curve,
    band_summary,
    ellipticity_limit_curve,
    paraphoton_envelope,
    paraphoton_limit_curve,
)
from lswlab.units import meter_to_inv_ev

MAGNET = MagnetSpec(b0_tesla=12.0, length_m=0.365)
PATH = OpticalPath(l1_m=20.2, l2_m=1.0)
CAVITY = CavitySpec(length_m=2.237, finesse=3000.0)
OMEGA = 1.17
GRID = MassGrid(min_mass_ev=1e-5, max_mass_ev=1e-2, points=2000)


# ---------------------------------------------------------------------------
# MassGrid
# ---------------------------------------------------------------------------

def test_grid_masses_log_and_linear():
    log_masses = MassGrid(1e-5, 1e-2, points=31).masses()
    assert log_masses.size == 31
    assert np.all(np.diff(log_masses) > 0)
    assert log_masses[0] == pytest.approx(1e-5, rel=1e-12)
    assert log_masses[-1] == pytest.approx(1e-2, rel=1e-12)
    ratios = log_masses[1:] / log_masses[:-1]
    assert ratios == pytest.approx(ratios[0], rel=1e-9)

    lin = MassGrid(1e-5, 1e-2, points=11, spacing="linear").masses()
    steps = np.diff(lin)
    assert steps == pytest.approx(steps[0], rel=1e-9)


def test_grid_validation():
    with pytest.raises(ValueError):
        MassGrid(0.0, 1e-2)
    with pytest.raises(ValueError):
        MassGrid(1e-2, 1e-5)
    with pytest.raises(ValueError):
        MassGrid(1e-5, 1e-2, points=1)
    with pytest.raises(ValueError):
        MassGrid(1e-5, 1e-2, spacing="cubic")


# ---------------------------------------------------------------------------
# Axion limit
# ---------------------------------------------------------------------------

def test_axion_limit_low_mass_value():
    curve = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, GRID)
    # At the lowest grid mass the shape factor is ~1, so the bound reduces
    # to (B L / 2) / P^(1/4) = 8.9e14 eV, within a few percent of 9.1e5 GeV.
    assert curve.constrained[0]
    assert curve.bounds[0] == pytest.approx(8.909e14, rel=1e-3)
    assert curve.bounds[0] == pytest.approx(9.1e14, rel=0.05)
    assert curve.metadata["bound_kind"] == "inverse_coupling_ev"


def test_axion_limit_sinc_suppression_at_1mev():
    grid = MassGrid(1e-5, 1e-2, points=4000)
    curve = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, grid)
    masses = curve.masses_ev
    idx = int(np.argmin(np.abs(masses - 1e-3)))
    mass = masses[idx]
    x = mass ** 2 / (2 * OMEGA) * meter_to_inv_ev(0.365) / 2.0
    expected = curve.bounds[0] * abs(math.sin(x) / x)
    assert curve.bounds[idx] == pytest.approx(expected, rel=1e-3)
    # 0.39 rad of phase costs ~2.5% of the bound.
    assert math.sin(x) / x == pytest.approx(0.9749, rel=1e-3)


def test_axion_limit_node_unconstrained():
    node = math.sqrt(4 * math.pi * OMEGA / meter_to_inv_ev(0.365))
    grid = MassGrid(node, node * 10, points=50)
    curve = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, grid)
    assert not curve.constrained[0]
    assert math.isnan(curve.bounds[0])
    assert node == pytest.approx(2.84e-3, rel=1e-3)


def test_axion_limit_round_trip():
    curve = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, GRID)
    masses = curve.masses_ev[curve.constrained]
    bounds = curve.bounds[curve.constrained]
    assert masses.size > 1900
    for mass, bound in zip(masses, bounds):
        axion = AxionParams(mass_ev=float(mass), inverse_coupling_ev=float(bound))
        p = axion_regeneration_probability(MAGNET, MAGNET, axion, OMEGA)
        assert p == pytest.approx(3.3e-23, rel=1e-10)


def test_axion_limit_distinct_magnets_round_trip():
    other = MagnetSpec(b0_tesla=9.0, length_m=0.5)
    p_upper = 1e-20
    curve = axion_limit_curve(p_upper, MAGNET, other, OMEGA,
                              MassGrid(1e-5, 2e-3, points=200))
    for mass, bound, ok in zip(curve.masses_ev, curve.bounds, curve.constrained):
        if not ok:
            continue
        axion = AxionParams(mass_ev=float(mass), inverse_coupling_ev=float(bound))
        assert axion_regeneration_probability(MAGNET, other, axion, OMEGA) == pytest.approx(
            p_upper, rel=1e-10)


def test_axion_limit_p_upper_scaling():
    weak = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, GRID)
    strong = axion_limit_curve(3.3e-25, MAGNET, MAGNET, OMEGA, GRID)
    ok = weak.constrained
    assert np.array_equal(ok, strong.constrained)
    ratio = strong.bounds[ok] / weak.bounds[ok]
    assert ratio == pytest.approx(100 ** 0.25, rel=1e-12)


def test_axion_limit_p_upper_domain():
    with pytest.raises(ValueError):
        axion_limit_curve(0.0, MAGNET, MAGNET, OMEGA, GRID)
    with pytest.raises(ValueError):
        axion_limit_curve(1.0, MAGNET, MAGNET, OMEGA, GRID)


# ---------------------------------------------------------------------------
# Paraphoton limit
# ---------------------------------------------------------------------------

def test_paraphoton_envelope_value():
    assert paraphoton_envelope(9.4e-24) == pytest.approx(8.754915681134768e-07, rel=1e-12)
    assert paraphoton_envelope(9.4e-24) == pytest.approx(8.76e-7, rel=5e-3)


def test_paraphoton_limit_bounds_above_envelope():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    envelope = paraphoton_envelope(9.4e-24)
    assert np.all(curve.bounds[curve.constrained] >= envelope * (1 - 1e-12))


def test_paraphoton_limit_round_trip():
    p_upper = 9.4e-24
    curve = paraphoton_limit_curve(p_upper, PATH, OMEGA, GRID)
    masses = curve.masses_ev[curve.constrained]
    bounds = curve.bounds[curve.constrained]
    for mass, bound in zip(masses, bounds):
        para = ParaphotonParams(mass_ev=float(mass), mixing=float(bound))
        p = paraphoton_regeneration_probability(PATH, para, OMEGA)
        assert p == pytest.approx(p_upper, rel=1e-10)


def test_paraphoton_limit_node_unconstrained():
    mu = math.sqrt(4 * math.pi * OMEGA / meter_to_inv_ev(PATH.l1_m))
    grid = MassGrid(mu, mu * 100, points=10)
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, grid)
    assert not curve.constrained[0]
    assert math.isnan(curve.bounds[0])


def test_paraphoton_limit_vacuous_bounds_flagged():
    # Drive the bound formula above chi = 1 with a huge upper probability;
    # points that would "exclude" chi >= 1 must come back unconstrained.
    curve = paraphoton_limit_curve(0.9999, PATH, OMEGA,
                                   MassGrid(1e-7, 1e-5, points=500))
    for bound, ok in zip(curve.bounds, curve.constrained):
        assert (not ok) or bound < 1.0


def test_paraphoton_limit_p_upper_scaling():
    weak = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    strong = paraphoton_limit_curve(9.4e-26, PATH, OMEGA, GRID)
    both = weak.constrained & strong.constrained
    ratio = strong.bounds[both] / weak.bounds[both]
    assert ratio == pytest.approx(0.01 ** 0.25, rel=1e-12)


# ---------------------------------------------------------------------------
# Ellipticity limit
# ---------------------------------------------------------------------------

def test_ellipticity_limit_all_constrained_and_round_trip():
    psi_limit = 1e-8
    curve = ellipticity_limit_curve(psi_limit, MAGNET, CAVITY, OMEGA,
                                    MassGrid(1e-5, 1e-2, points=300))
    assert np.all(curve.constrained)
    for mass, bound in zip(curve.masses_ev, curve.bounds):
        axion = AxionParams(mass_ev=float(mass), inverse_coupling_ev=float(bound))
        psi = axion_ellipticity(MAGNET, axion, OMEGA, cavity=CAVITY)
        assert psi == pytest.approx(psi_limit, rel=1e-10)


def test_ellipticity_limit_finesse_scaling():
    base = ellipticity_limit_curve(1e-8, MAGNET, CAVITY, OMEGA, GRID)
    doubled = ellipticity_limit_curve(
        1e-8, MAGNET, CavitySpec(length_m=CAVITY.length_m, finesse=2 * CAVITY.finesse),
        OMEGA, GRID)
    assert doubled.bounds == pytest.approx(base.bounds * math.sqrt(2.0), rel=1e-12)


def test_ellipticity_limit_psi_scaling():
    base = ellipticity_limit_curve(1e-8, MAGNET, CAVITY, OMEGA, GRID)
    quadrupled = ellipticity_limit_curve(4e-8, MAGNET, CAVITY, OMEGA, GRID)
    assert quadrupled.bounds == pytest.approx(base.bounds / 2.0, rel=1e-12)


def test_ellipticity_limit_vanishes_at_low_mass():
    curve = ellipticity_limit_curve(1e-8, MAGNET, CAVITY, OMEGA,
                                    MassGrid(1e-8, 1e-2, points=100))
    # No low-mass constraint from ellipticity alone: the bound falls off
    # linearly in mass toward zero.
    assert curve.bounds[0] < 1e-3 * curve.bounds[-1]
    ratio = curve.bounds[1] / curve.bounds[0]
    mass_ratio = curve.masses_ev[1] / curve.masses_ev[0]
    assert ratio == pytest.approx(mass_ratio, rel=1e-3)


def test_ellipticity_limit_domain():
    with pytest.raises(ValueError):
        ellipticity_limit_curve(0.0, MAGNET, CAVITY, OMEGA, GRID)
    with pytest.raises(ValueError):
        ellipticity_limit_curve(-1e-8, MAGNET, CAVITY, OMEGA, GRID)


# ---------------------------------------------------------------------------
# Curve container
# ---------------------------------------------------------------------------

def test_curve_validation():
    with pytest.raises(ValueError):
        ExclusionCurve(np.array([1.0, 1.0]), np.array([1.0, 1.0]),
                       np.array([True, True]))
    with pytest.raises(ValueError):
        ExclusionCurve(np.array([1.0, 2.0]), np.array([1.0, -1.0]),
                       np.array([True, True]))
    with pytest.raises(ValueError):
        # Unconstrained points must not carry values.
        ExclusionCurve(np.array([1.0, 2.0]), np.array([1.0, 2.0]),
                       np.array([True, False]))
    curve = ExclusionCurve(np.array([1.0, 2.0]), np.array([1.0, np.nan]),
                           np.array([True, False]))
    assert len(curve) == 2
    with pytest.raises(ValueError):
        curve.bounds[0] = 5.0  # read-only storage


def test_constrained_flag_threshold_is_explicit():
    assert SHAPE_FACTOR_THRESHOLD == 1e-9


# ---------------------------------------------------------------------------
# Band summary
# ---------------------------------------------------------------------------

def test_band_summary_envelope_best_matches_analytic():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    summary = band_summary(curve, 1e-3, 1e-2, "envelope_best")
    assert summary.bound == pytest.approx(paraphoton_envelope(9.4e-24), rel=5e-3)
    assert summary.convention == "envelope_best"
    assert summary.bound_kind == "mixing"


def test_band_summary_brackets_published_band_value():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    best = band_summary(curve, 1e-3, 1e-2, "envelope_best").bound
    worst = band_summary(curve, 1e-3, 1e-2, "worst_constrained").bound
    assert best <= 1.1e-6 <= worst


def test_band_summary_ordering_for_mixing_curves():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    best = band_summary(curve, 1e-3, 1e-2, "envelope_best").bound
    median = band_summary(curve, 1e-3, 1e-2, "quantile:0.5").bound
    worst = band_summary(curve, 1e-3, 1e-2, "worst_constrained").bound
    assert best <= median <= worst


def test_band_summary_inverse_coupling_sense():
    curve = axion_limit_curve(3.3e-23, MAGNET, MAGNET, OMEGA, GRID)
    best = band_summary(curve, 1e-5, 1e-3, "envelope_best").bound
    worst = band_summary(curve, 1e-5, 1e-3, "worst_constrained").bound
    # A stronger inverse-coupling bound is a larger M.
    assert best >= worst


def test_band_summary_single_point_band():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    idx = int(np.flatnonzero(curve.constrained)[1000])
    mass = curve.masses_ev[idx]
    for convention in ("envelope_best", "worst_constrained", "quantile:0.25"):
        summary = band_summary(curve, mass * (1 - 1e-9), mass * (1 + 1e-9), convention)
        assert summary.n_points == 1
        assert summary.bound == pytest.approx(curve.bounds[idx], rel=1e-14)


def test_band_summary_errors():
    curve = paraphoton_limit_curve(9.4e-24, PATH, OMEGA, GRID)
    with pytest.raises(ValueError):
        band_summary(curve, 1e-2, 1e-3)  # inverted band
    with pytest.raises(ValueError):
        band_summary(curve, 1e-7, 1e-6)  # outside grid
    with pytest.raises(ValueError):
        band_summary(curve, 1e-3, 1e-2, "median")  # unknown convention
    with pytest.raises(ValueError):
        band_summary(curve, 1e-3, 1e-2, "quantile:1.5")


def test_band_summary_no_constrained_points():
    masses = np.array([1e-3, 2e-3, 3e-3])
    curve = ExclusionCurve(masses, np.full(3, np.nan), np.zeros(3, dtype=bool),
                           {"bound_kind": "mixing"})
    with pytest.raises(ValueError):
        band_summary(curve, 1e-3, 3e-3)
