"""Phase-only hologram synthesis for a pixelated spatial light modulator.

Adding a linear phase ramp (a blazed grating) to the desired phase steers
the shaped beam into the first diffraction order, away from the unmodulated
zero order.  Scaling the total wrapped phase by a depth M in [0, 1] then
throttles the first-order efficiency pixel by pixel: a blaze of depth M
diffracts the fraction sinc^2(pi*(1 - M)) of the light into the first
order, so inverting that relation turns a phase-only panel into an
amplitude-and-phase shaper.

The partial blaze also rotates the first order: the first Fourier
coefficient of exp(i*M*psi) over one wrapped period is
sinc(pi*(1-M)) * exp(i*pi*(M-1)), so a depth below 1 drags a
depth-dependent phase along with the amplitude.  `synthesize_hologram`
pre-adds pi*(1-M) to the encoded phase, which cancels that term exactly
and leaves the first order carrying arg(target) itself; without the
offset, ring-shaped targets (whose flanks sweep M over its whole range)
lose a third of their reconstruction fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .modes import FieldGrid, SpiralSpectrum, synthesize_field

_TWO_PI = 2.0 * math.pi

#: Grayscale levels of the panel; gray g represents phase in
#: [g, g+1) * 2*pi/256.
GRAY_LEVELS = 256


@dataclass(frozen=True)
class SlmGeometry:
    """Pixel layout of the modulator panel (defaults: 792 x 600 pixels of
    20 um pitch, 8-bit phase)."""

    width: int = 792
    height: int = 600
    pitch: float = 20e-6
    gray_levels: int = GRAY_LEVELS

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("panel dimensions must be positive")
        if not self.pitch > 0:
            raise ValueError("pixel pitch must be positive")
        if self.gray_levels != GRAY_LEVELS:
            raise ValueError(f"panel is {GRAY_LEVELS}-level; got {self.gray_levels}")


@dataclass(frozen=True)
class GratingSpec:
    """Blazed carrier grating: period in pixels along a unit direction.

    The default, 6 px horizontally, divides the 792-px panel width exactly
    (the carrier lands on a whole frequency bin, so recentering leaves no
    residual tilt) and puts the carrier at 1/6 cycles/px: the matching
    half-carrier iris then has radius 1/12, wide enough to pass the
    far-field ring of an ell = 120 component at the default fitted waist
    (radius about 0.067 cycles/px).  A coarser 8-px grating would clip
    that ring.
    """

    period: float = 6.0
    orientation: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self) -> None:
        if not (self.period > 1.0 and math.isfinite(self.period)):
            raise ValueError(f"grating period must exceed 1 pixel, got {self.period}")
        ux, uy = self.orientation
        norm = math.hypot(ux, uy)
        if not (norm > 0 and math.isfinite(norm)):
            raise ValueError("grating orientation must be a nonzero vector")
        object.__setattr__(self, "orientation", (ux / norm, uy / norm))

    @property
    def carrier(self) -> tuple[float, float]:
        """Carrier spatial frequency (fx, fy) in cycles per pixel."""
        ux, uy = self.orientation
        return (ux / self.period, uy / self.period)


@dataclass
class HologramImage:
    """Quantized grayscale frame ready for the panel, indexed [row, col]."""

    geometry: SlmGeometry
    gray: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.gray = np.asarray(self.gray)
        if self.gray.shape != (self.geometry.height, self.geometry.width):
            raise ValueError(
                f"gray shape {self.gray.shape} does not match panel "
                f"({self.geometry.height}, {self.geometry.width})"
            )
        if self.gray.dtype != np.uint8:
            if self.gray.min() < 0 or self.gray.max() >= GRAY_LEVELS:
                raise ValueError("gray values out of range for an 8-bit panel")
            self.gray = self.gray.astype(np.uint8)


def first_order_efficiency(depth):
    """First-order diffraction efficiency sinc^2(pi*(1 - depth)) of a blaze
    of the given depth, elementwise.  (np.sinc(x) is sin(pi x)/(pi x).)"""
    return np.sinc(1.0 - np.asarray(depth, dtype=float)) ** 2


def blaze_depth_from_intensity(intensity):
    """Invert first_order_efficiency on its monotone branch [0, 1].

    Accepts scalars or arrays of desired relative intensities in [0, 1];
    returns depths of matching shape.  Exact endpoints map exactly.
    Solved by 64 steps of elementwise bisection, which pins the root to
    one part in 2**64 of the bracket.
    """
    arr = np.asarray(intensity, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("desired intensities must lie in [0, 1]")
    lo = np.zeros_like(arr)
    hi = np.ones_like(arr)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = first_order_efficiency(mid) < arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out = np.where(arr == 0.0, 0.0, out)
    out = np.where(arr == 1.0, 1.0, out)
    return float(out[0]) if scalar else out


def quantize_phase(phase):
    """Map phase (radians) to gray level: floor((phase mod 2pi)/2pi * 256),
    clamped to 255.

    The clamp catches the one representable case where the wrapped value
    equals 2pi itself (a tiny negative input rounded up by the modulo).
    """
    wrapped = np.mod(np.asarray(phase, dtype=float), _TWO_PI)
    gray = np.floor(wrapped * float(GRAY_LEVELS) / _TWO_PI)
    return np.minimum(gray, GRAY_LEVELS - 1).astype(np.uint8)


def gray_to_phase(gray):
    """Representative phase of a gray level: the bin center
    (gray + 0.5) * 2pi/256."""
    return (np.asarray(gray, dtype=float) + 0.5) * (_TWO_PI / GRAY_LEVELS)


def grating_phase(grating: GratingSpec, width: int, height: int) -> np.ndarray:
    """Linear carrier phase 2pi*(ux*col + uy*row)/period on an integer
    pixel lattice, shape (height, width), pre-wrapped into [0, 2pi).

    The ramp is reduced mod one period *before* scaling by 2pi: fractions
    like 15/6 reduce exactly, whereas wrapping 5*pi mod 2*pi afterwards
    picks up a 1-ulp error, enough to flip a quantized gray level sitting
    on a bin edge.
    """
    ux, uy = grating.orientation
    cols = np.arange(width, dtype=float)
    rows = np.arange(height, dtype=float)
    cycles = (ux * cols[None, :] + uy * rows[:, None]) / grating.period
    return _TWO_PI * np.mod(cycles, 1.0)


def pixels_per_period(radius_px: float, harmonic: int) -> float:
    """Pixels per azimuthal fringe period on a circle of radius_px carrying
    the given phase winding: 2*pi*radius/|harmonic|."""
    if harmonic == 0:
        raise ValueError("harmonic must be nonzero")
    if not (radius_px > 0 and math.isfinite(radius_px)):
        raise ValueError(f"radius must be positive, got {radius_px}")
    return _TWO_PI * radius_px / abs(harmonic)


def fit_waist(ell_max: int, geometry: SlmGeometry = SlmGeometry(), margin: float = 0.95) -> float:
    """Waist that places the ring of |ell_max| at margin/2 of the shorter
    panel side: margin * min(W, H)*pitch/2 / sqrt(|ell_max|/2)."""
    if ell_max == 0:
        raise ValueError("ell_max = 0 has no ring to fit; choose a waist directly")
    if not (0 < margin <= 1):
        raise ValueError(f"margin must be in (0, 1], got {margin}")
    half_extent = 0.5 * min(geometry.width, geometry.height) * geometry.pitch
    return margin * half_extent / math.sqrt(abs(ell_max) / 2.0)


def render_target(spectrum: SpiralSpectrum, geometry: SlmGeometry = SlmGeometry()) -> FieldGrid:
    """Sample the superposition on the panel's pixel grid.

    The fit check is skipped: a waist from fit_waist(margin=0.95) puts the
    outer ring slightly past the synthesize_field budget on purpose, using
    the full panel.
    """
    return synthesize_field(
        spectrum, geometry.width, geometry.height, geometry.pitch, fit_check=False
    )


def synthesize_hologram(
    target: FieldGrid,
    grating: GratingSpec = GratingSpec(),
    geometry: SlmGeometry = SlmGeometry(),
    intensity_shaping: bool = True,
) -> HologramImage:
    """Encode a complex target field as a quantized phase-only frame.

    Per pixel: wrap the encoded phase plus the carrier ramp into [0, 2pi),
    scale by the blaze depth M that yields the target's relative intensity
    (normalized to its own peak), and quantize to 256 levels.  The encoded
    phase is arg(target) + pi*(1 - M), the offset cancelling the
    depth-dependent phase the partial blaze would otherwise imprint on the
    first order (see the module docstring); at full depth the offset is
    zero.  With intensity_shaping=False the depth is held at 1 everywhere
    and the bare phase is encoded.
    """
    if (target.width, target.height) != (geometry.width, geometry.height):
        raise GeometryError(
            f"target grid {target.width}x{target.height} does not match "
            f"panel {geometry.width}x{geometry.height}"
        )
    if target.pitch != geometry.pitch:
        raise GeometryError(
            f"target pitch {target.pitch} differs from panel pitch {geometry.pitch}"
        )
    ramp = grating_phase(grating, geometry.width, geometry.height)
    if intensity_shaping:
        intensity = np.abs(target.samples) ** 2
        peak = intensity.max()
        relative = intensity / peak if peak > 0 else intensity
        depth = blaze_depth_from_intensity(relative)
        encoded = np.angle(target.samples) + math.pi * (1.0 - depth)
    else:
        depth = 1.0
        encoded = np.angle(target.samples)
    wrapped = np.mod(encoded + ramp, _TWO_PI)
    return HologramImage(geometry, quantize_phase(wrapped * depth))
