import math
import warnings

import mpmath as mp
import numpy as np
import pytest

from oracles import slot_voltage
from slotcap import (
    ArrayGeometry,
    MediumSpec,
    SpectralContext,
    infinite_array_impedance,
    spectral_function,
    voltage_profile,
)
from slotcap.errors import ConvergenceError, RangeError, SingularityError
from slotcap.spectral import ZETA0, SlotIntegrator

FREE = MediumSpec.free_space()
SILICON = MediumSpec.half_space(11.7)
GEOM = ArrayGeometry(slot_width=1e-3, feed_pitch=0.03, element_count=4)


def rel(a, b):
    return abs(a - b) / abs(b)


# spectral function


def test_spectral_function_at_zero():
    ctx = SpectralContext(1e9)
    z = complex(0.25 * 1e-3 * ctx.k0)
    expected = ctx.k0 / ZETA0 * complex(mp.besselj(0, z) * (mp.besselj(0, z) - 1j * mp.bessely(0, z)))
    assert rel(spectral_function(0.0, ctx, FREE, 1e-3), expected) <= 1e-12


def test_spectral_function_matches_mpmath_composition():
    # evanescent point: s = -j k0 sqrt(1.25)
    ctx = SpectralContext(1e9)
    k0 = mp.mpf(2) * mp.pi * 1e9 / 299792458
    kx = mp.mpf("1.5") * k0
    with mp.workdps(40):
        s = -1j * mp.sqrt(kx**2 - k0**2)
        z = mp.mpf("0.25e-3") * s
        value = (k0**2 - kx**2) * mp.besselj(0, z) * (mp.besselj(0, z) - 1j * mp.bessely(0, z)) / (k0 * ZETA0)
    got = spectral_function(1.5 * ctx.k0, ctx, FREE, 1e-3)
    assert rel(got, complex(value)) <= 1e-10


def test_spectral_function_even():
    ctx = SpectralContext(2e9)
    rng = np.random.default_rng(3)
    kx = ctx.k0 * (rng.uniform(-30, 30, 50) + 1j * rng.uniform(-0.3, 0.3, 50))
    for medium in (FREE, SILICON):
        d_plus = spectral_function(kx, ctx, medium, 1e-3)
        d_minus = spectral_function(-kx, ctx, medium, 1e-3)
        assert np.max(np.abs(d_plus - d_minus) / np.abs(d_plus)) <= 1e-14


def test_unit_permittivity_backing_is_free_space():
    ctx = SpectralContext(1.3e9)
    kx = ctx.k0 * np.array([0.2, 0.9 + 0.05j, 3.0, 40.0])
    assert np.array_equal(
        spectral_function(kx, ctx, MediumSpec.half_space(1.0), 1e-3),
        spectral_function(kx, ctx, FREE, 1e-3),
    )


def test_branch_point_is_singular():
    ctx = SpectralContext(1e9)
    with pytest.raises(SingularityError) as info:
        spectral_function(ctx.k0 * (1 + 1e-14), ctx, FREE, 1e-3)
    assert info.value.point == pytest.approx(ctx.k0)
    k_d = ctx.k0 * math.sqrt(11.7)
    with pytest.raises(SingularityError):
        spectral_function(-k_d, ctx, SILICON, 1e-3)


# voltage profile


@pytest.mark.parametrize("medium,eps", [(FREE, (1.0, 1.0)), (SILICON, (1.0, 11.7))])
@pytest.mark.parametrize("x", [0.0, 0.03, 0.12])
def test_voltage_matches_independent_quadrature(medium, eps, x):
    ctx = SpectralContext(1e9)
    ref = slot_voltage(x, 1e9, 1e-3, 1e-3, eps)
    assert rel(voltage_profile(x, 1.0, ctx, GEOM, medium), ref) <= 1e-8


def test_delta_feed_matches_independent_quadrature():
    geom = ArrayGeometry(1e-3, 0.03, 2, feed_gap=0.0)
    ctx = SpectralContext(2e9)
    ref = slot_voltage(0.03, 2e9, 1e-3, 0.0)
    assert rel(voltage_profile(0.03, 1.0, ctx, geom, FREE), ref) <= 1e-8


def test_voltage_even_and_linear():
    ctx = SpectralContext(1e9)
    x = np.array([0.03, 0.06, 0.45])
    v = voltage_profile(x, 1.0, ctx, GEOM, FREE)
    assert np.array_equal(voltage_profile(-x, 1.0, ctx, GEOM, FREE), v)
    assert np.array_equal(voltage_profile(x, 2.0, ctx, GEOM, FREE), 2.0 * v)
    assert np.array_equal(voltage_profile(x, 0.5j, ctx, GEOM, FREE), 0.5j * v)


@pytest.mark.parametrize("frequency", [1e9, 3.7e9])
def test_contour_depth_invariance(frequency):
    x = np.array([0.03, 0.06, 0.12])
    ref = voltage_profile(x, 1.0, SpectralContext(frequency, detour=0.05), GEOM, SILICON)
    for detour in (0.02, 0.1):
        v = voltage_profile(x, 1.0, SpectralContext(frequency, detour=detour), GEOM, SILICON)
        assert np.max(np.abs(v - ref) / np.abs(ref)) <= 1e-6


def test_tail_cut_invariance():
    ctx40 = SpectralContext(1e9, k_max=40 * 2 * math.pi * 1e9 / 299792458.0)
    ctx80 = SpectralContext(1e9, k_max=80 * 2 * math.pi * 1e9 / 299792458.0)
    a = voltage_profile(0.03, 1.0, ctx40, GEOM, FREE)
    b = voltage_profile(0.03, 1.0, ctx80, GEOM, FREE)
    assert rel(a, b) <= 1e-6


def test_gap_only_matters_near_the_feed():
    delta = ArrayGeometry(1e-3, 0.03, 2, feed_gap=0.0)
    ctx = SpectralContext(1e9)
    # sinc(k gap / 2) differs from 1 at O((k gap)^2); far from the feed that is tiny
    assert rel(voltage_profile(0.3, 1.0, ctx, GEOM, FREE), voltage_profile(0.3, 1.0, ctx, delta, FREE)) <= 1e-4


def test_self_resistance_positive_and_dielectric_lowers_it():
    ctx = SpectralContext(1e9)
    z_free = voltage_profile(0.0, 1.0, ctx, GEOM, FREE)
    z_si = voltage_profile(0.0, 1.0, ctx, GEOM, SILICON)
    assert z_free.real > 0 and z_si.real > 0
    assert z_si.real < z_free.real


def test_delta_feed_self_term_is_singular():
    delta = ArrayGeometry(1e-3, 0.03, 2, feed_gap=0.0)
    with pytest.raises(SingularityError):
        voltage_profile(0.0, 1.0, SpectralContext(1e9), delta, FREE)


def test_offset_on_gap_edge_is_rejected():
    with pytest.raises(RangeError, match="gap"):
        voltage_profile(0.5e-3, 1.0, SpectralContext(1e9), GEOM, FREE)


def test_convergence_failure_reports_both_estimates():
    # successive refinements cannot agree below the rounding level
    ctx = SpectralContext(1e9, rtol=1e-20, max_refinements=1)
    with pytest.raises(ConvergenceError) as info:
        voltage_profile(0.03, 1.0, ctx, GEOM, FREE)
    coarse, fine = info.value.estimates
    assert coarse.shape == fine.shape == (1,)
    assert np.all(np.isfinite(coarse)) and np.all(np.isfinite(fine))


# impedance matrix


def test_toeplitz_symmetric_exact():
    z = infinite_array_impedance(SpectralContext(2e9), ArrayGeometry(1e-3, 0.03, 6), SILICON)
    assert z.shape == (6, 6)
    assert np.array_equal(z[1:, 1:], z[:-1, :-1])
    assert np.array_equal(z, z.T)


def test_edge_ports_extend_the_matrix():
    geom = ArrayGeometry(1e-3, 0.03, 5)
    ctx = SpectralContext(1e9)
    inner = infinite_array_impedance(ctx, geom, FREE)
    outer = infinite_array_impedance(ctx, geom, FREE, include_edge_ports=True)
    assert outer.shape == (7, 7)
    assert np.max(np.abs(outer[1:6, 1:6] - inner)) <= 1e-9 * np.abs(inner).max()
    assert geom.slot_length == pytest.approx(6 * 0.03)


def test_two_element_off_diagonal_is_standalone_voltage():
    geom = ArrayGeometry(1e-3, 0.03, 2)
    ctx = SpectralContext(1e9)
    z = infinite_array_impedance(ctx, geom, FREE)
    v = voltage_profile(0.03, 1.0, ctx, geom, FREE)
    assert rel(z[0, 1], v) <= 1e-12


def test_single_element():
    z = infinite_array_impedance(SpectralContext(1e9), ArrayGeometry(1e-3, 0.03, 1), FREE)
    assert z.shape == (1, 1)


def test_full_geometry_runs_at_top_of_band():
    geom = ArrayGeometry(1e-3, 0.03, 64)
    z = infinite_array_impedance(SpectralContext(5e9), geom, SILICON, include_edge_ports=True)
    assert z.shape == (66, 66)
    assert np.all(np.isfinite(z))
    assert geom.slot_length == pytest.approx(1.95)
    assert 64 * geom.feed_pitch == pytest.approx(1.92)


# validation


def test_geometry_validation():
    with pytest.raises(RangeError):
        ArrayGeometry(0.0, 0.03, 4)
    with pytest.raises(RangeError):
        ArrayGeometry(1e-3, -0.03, 4)
    with pytest.raises(RangeError):
        ArrayGeometry(1e-3, 0.03, 0)
    with pytest.raises(RangeError):
        ArrayGeometry(1e-3, 0.03, 2.5)
    with pytest.raises(RangeError):
        ArrayGeometry(1e-3, 0.03, 2, feed_gap=-1e-3)
    assert ArrayGeometry(1e-3, 0.03, 2).feed_gap == 1e-3


def test_narrow_slot_check():
    wide = ArrayGeometry(4e-3, 0.03, 2)
    # lambda at 5 GHz is 6 cm: 4 mm is above lambda/20 but below lambda/10
    with pytest.warns(UserWarning, match="lambda/20"):
        SlotIntegrator(SpectralContext(5e9), wide, FREE)
    with pytest.raises(RangeError, match="lambda/10"):
        SlotIntegrator(SpectralContext(9e9), wide, FREE)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SlotIntegrator(SpectralContext(5e9), GEOM, FREE)


def test_context_validation():
    with pytest.raises(RangeError):
        SpectralContext(0.0)
    with pytest.raises(RangeError):
        SpectralContext(1e9, detour=0.0)
    with pytest.raises(RangeError):
        SpectralContext(1e9, detour=0.6)
    with pytest.raises(RangeError):
        SpectralContext(1e9, k_max=10.0)
    with pytest.raises(RangeError):
        SpectralContext(1e9, n_quad=100)
    with pytest.raises(RangeError):
        SpectralContext(1e9, rtol=0.0)
    with pytest.raises(RangeError):
        SpectralContext(1e9, max_refinements=0)
    with pytest.raises(RangeError):
        MediumSpec.half_space(0.5)
    ctx = SpectralContext(1e9)
    assert ctx.k_max == pytest.approx(60 * ctx.k0)
