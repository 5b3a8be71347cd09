"""Hologram encoding: blaze depth, quantization, panel frames."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from oamsim import (
    GratingSpec,
    HologramImage,
    SlmGeometry,
    blaze_depth_from_intensity,
    first_order_efficiency,
    fit_waist,
    pixels_per_period,
    quantize_phase,
    render_target,
    spectrum_from_weights,
    synthesize_hologram,
)
from oamsim.errors import GeometryError
from oamsim.hologram import grating_phase, gray_to_phase
from oamsim.modes import FieldGrid, peak_radius

TWO_PI = 2.0 * math.pi


class TestSlmGeometry:
    def test_default_active_area(self):
        g = SlmGeometry()
        assert g.width * g.pitch == pytest.approx(15.84e-3)
        assert g.height * g.pitch == pytest.approx(12.0e-3)

    def test_only_256_levels_supported(self):
        with pytest.raises(ValueError):
            SlmGeometry(gray_levels=128)

    def test_bad_dimensions_rejected(self):
        with pytest.raises(ValueError):
            SlmGeometry(width=0)


class TestGratingSpec:
    def test_default_carrier(self):
        g = GratingSpec()
        assert g.carrier == pytest.approx((1.0 / 6.0, 0.0))

    def test_orientation_normalized(self):
        g = GratingSpec(period=5.0, orientation=(3.0, 4.0))
        assert math.hypot(*g.orientation) == pytest.approx(1.0)
        assert g.carrier == pytest.approx((0.6 / 5.0, 0.8 / 5.0))

    def test_subpixel_period_rejected(self):
        with pytest.raises(ValueError):
            GratingSpec(period=1.0)

    def test_zero_orientation_rejected(self):
        with pytest.raises(ValueError):
            GratingSpec(orientation=(0.0, 0.0))


class TestBlazeDepth:
    def test_endpoints_exact(self):
        assert blaze_depth_from_intensity(1.0) == 1.0
        assert blaze_depth_from_intensity(0.0) == 0.0

    def test_half_intensity(self):
        # independent root from brentq on the same efficiency curve
        oracle = brentq(lambda m: np.sinc(1.0 - m) ** 2 - 0.5, 0.0, 1.0, xtol=1e-14)
        assert blaze_depth_from_intensity(0.5) == pytest.approx(0.5570, abs=1e-4)
        assert blaze_depth_from_intensity(0.5) == pytest.approx(oracle, abs=1e-12)

    def test_round_trip(self):
        targets = np.linspace(0.0, 1.0, 101)
        depths = blaze_depth_from_intensity(targets)
        np.testing.assert_allclose(first_order_efficiency(depths), targets, atol=1e-9)

    def test_monotone(self):
        depths = blaze_depth_from_intensity(np.linspace(0.0, 1.0, 257))
        assert np.all(np.diff(depths) >= 0)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            blaze_depth_from_intensity(1.2)
        with pytest.raises(ValueError):
            blaze_depth_from_intensity(-0.1)

    def test_efficiency_endpoints(self):
        assert first_order_efficiency(1.0) == 1.0
        assert first_order_efficiency(0.0) == pytest.approx(0.0, abs=1e-30)


class TestQuantizePhase:
    def test_pinned_values(self):
        assert quantize_phase(0.0) == 0
        assert quantize_phase(math.pi) == 128
        assert quantize_phase(TWO_PI - 1e-6) == 255
        assert quantize_phase(TWO_PI) == 0

    def test_periodic(self):
        rng = np.random.default_rng(11)
        phases = rng.uniform(0.0, TWO_PI, 1000)
        np.testing.assert_array_equal(
            quantize_phase(phases), quantize_phase(phases + TWO_PI)
        )

    def test_wraparound_clamp(self):
        # a tiny negative phase wraps to (numerically) 2*pi: top bin
        assert quantize_phase(-1e-18) == 255

    def test_bin_centers_invert(self):
        grays = np.arange(256)
        assert np.array_equal(quantize_phase(gray_to_phase(grays)), grays)

    def test_inverse_within_half_bin(self):
        rng = np.random.default_rng(3)
        phases = rng.uniform(0.0, TWO_PI, 500)
        back = gray_to_phase(quantize_phase(phases))
        assert np.abs(back - phases).max() <= math.pi / 256 + 1e-12


class TestGratingPhase:
    def test_horizontal_ramp(self):
        ramp = grating_phase(GratingSpec(period=6.0), 12, 2)
        np.testing.assert_allclose(ramp[0], TWO_PI * (np.arange(12) % 6) / 6.0)
        np.testing.assert_array_equal(ramp[0], ramp[1])

    def test_vertical_ramp(self):
        ramp = grating_phase(GratingSpec(period=4.0, orientation=(0.0, 1.0)), 3, 8)
        np.testing.assert_allclose(ramp[:, 0], TWO_PI * (np.arange(8) % 4) / 4.0)
        np.testing.assert_array_equal(ramp[:, 0], ramp[:, 2])

    def test_wrapped_into_one_turn(self):
        ramp = grating_phase(GratingSpec(period=2.5, orientation=(1.0, 1.0)), 64, 64)
        assert ramp.min() >= 0.0 and ramp.max() < TWO_PI


class TestPixelsPerPeriod:
    def test_outer_circumference_budget(self):
        # 2666-pixel circumference shared by 400 phase periods
        budget = pixels_per_period(2666.0 / TWO_PI, 400)
        assert budget == pytest.approx(2666.0 / 400.0)
        assert 6.0 <= budget <= 7.0

    def test_radius_equals_harmonic(self):
        assert pixels_per_period(100.0, 100) == pytest.approx(TWO_PI)

    def test_moderate_harmonic(self):
        assert pixels_per_period(2666.0 / TWO_PI, 120) == pytest.approx(2666.0 / 120.0)

    def test_sign_of_harmonic_ignored(self):
        assert pixels_per_period(50.0, -25) == pixels_per_period(50.0, 25)

    def test_zero_harmonic_rejected(self):
        with pytest.raises(ValueError):
            pixels_per_period(50.0, 0)

    def test_bad_radius_rejected(self):
        with pytest.raises(ValueError):
            pixels_per_period(0.0, 10)


class TestFitWaist:
    def test_places_ring_at_margin(self):
        w = fit_waist(120)
        geometry = SlmGeometry()
        half = 0.5 * min(geometry.width, geometry.height) * geometry.pitch
        assert peak_radius(120, w) == pytest.approx(0.95 * half, rel=1e-12)

    def test_sign_insensitive(self):
        assert fit_waist(-80) == fit_waist(80)

    def test_ell_zero_rejected(self):
        with pytest.raises(ValueError):
            fit_waist(0)

    def test_bad_margin_rejected(self):
        with pytest.raises(ValueError):
            fit_waist(50, margin=0.0)


class TestHologramImage:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            HologramImage(SlmGeometry(), np.zeros((10, 10), dtype=np.uint8))

    def test_range_checked(self):
        geometry = SlmGeometry(width=4, height=4)
        bad = np.full((4, 4), 300)
        with pytest.raises(ValueError):
            HologramImage(geometry, bad)


class TestSynthesizeHologram:
    def test_zero_target_gives_blank_frame(self):
        geometry = SlmGeometry(width=24, height=12)
        target = FieldGrid(24, 12, geometry.pitch, np.zeros((12, 24), dtype=complex))
        holo = synthesize_hologram(target, geometry=geometry)
        assert holo.gray.max() == 0

    def test_uniform_target_gives_pure_grating(self):
        geometry = SlmGeometry(width=24, height=8)
        target = FieldGrid(24, 8, geometry.pitch, np.ones((8, 24), dtype=complex))
        holo = synthesize_hologram(target, GratingSpec(period=6.0), geometry)
        expected_column = np.tile([0, 42, 85, 128, 170, 213], 4)
        for row in holo.gray:
            np.testing.assert_array_equal(row, expected_column)

    def test_geometry_mismatch_rejected(self):
        geometry = SlmGeometry(width=24, height=12)
        target = FieldGrid(20, 12, geometry.pitch, np.ones((12, 20), dtype=complex))
        with pytest.raises(GeometryError):
            synthesize_hologram(target, geometry=geometry)

    def test_pitch_mismatch_rejected(self):
        geometry = SlmGeometry(width=24, height=12)
        target = FieldGrid(24, 12, 1e-5, np.ones((12, 24), dtype=complex))
        with pytest.raises(GeometryError):
            synthesize_hologram(target, geometry=geometry)

    def test_global_phase_shifts_grays_cyclically(self):
        # uniform amplitude keeps the blaze depth at 1 everywhere, so a
        # 32/256-turn phase offset must advance every gray by exactly 32
        geometry = SlmGeometry(width=64, height=32)
        rows = np.arange(32)[:, None] * 0.139
        cols = np.arange(64)[None, :] * 0.711
        phase = 0.173 + rows + cols
        base = FieldGrid(64, 32, geometry.pitch, np.exp(1j * phase))
        delta = 32 * TWO_PI / 256.0
        shifted = FieldGrid(64, 32, geometry.pitch, np.exp(1j * (phase + delta)))
        h1 = synthesize_hologram(base, geometry=geometry)
        h2 = synthesize_hologram(shifted, geometry=geometry)
        diff = (h2.gray.astype(int) - h1.gray.astype(int)) % 256
        assert np.all(diff == 32)

    def test_intensity_shaping_off_encodes_bare_phase(self):
        geometry = SlmGeometry(width=24, height=12)
        rng = np.random.default_rng(5)
        samples = rng.normal(size=(12, 24)) + 1j * rng.normal(size=(12, 24))
        target = FieldGrid(24, 12, geometry.pitch, samples)
        grating = GratingSpec(period=6.0)
        holo = synthesize_hologram(
            target, grating, geometry, intensity_shaping=False
        )
        ramp = grating_phase(grating, 24, 12)
        expected = quantize_phase(np.angle(samples) + ramp)
        np.testing.assert_array_equal(holo.gray, expected)

    def test_vortex_phase_survives_encoding(self):
        # unwrap the hologram phase along the outermost ring: the ell = 120
        # component must contribute exactly 120 phase turns over the ramp
        w = fit_waist(120)
        spectrum = spectrum_from_weights([(120, 0.68), (80, 0.57), (50, 0.46)], w)
        target = render_target(spectrum)
        grating = GratingSpec()
        holo = synthesize_hologram(target, grating)
        geometry = holo.geometry

        r_px = peak_radius(120, w) / geometry.pitch
        m = 4096
        theta = TWO_PI * np.arange(m) / m
        cols = np.rint(geometry.width / 2 - 0.5 + r_px * np.cos(theta)).astype(int)
        rows = np.rint(geometry.height / 2 - 0.5 + r_px * np.sin(theta)).astype(int)
        ramp = grating_phase(grating, geometry.width, geometry.height)
        winding = gray_to_phase(holo.gray[rows, cols]) - ramp[rows, cols]
        unwrapped = np.unwrap(winding)
        gap = unwrapped[1] - unwrapped[0]
        turns = (unwrapped[-1] - unwrapped[0] + gap) / TWO_PI
        assert round(turns) == 120
