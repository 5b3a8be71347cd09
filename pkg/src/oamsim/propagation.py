"""Far-field propagation and first-order reconstruction.

The far field of a sampled aperture is its centered discrete Fourier
transform.  The transform is unitary (1/sqrt(W*H) scaling), so Parseval
holds exactly and mode weights survive propagation unchanged.  Absolute
far-field scale (focal lengths, wavelength) is not modeled: frequency
axes are in cycles per source pixel, and only the relative mode content
of the reconstruction is meaningful.

`reconstruct_first_order` plays back a quantized hologram: illuminate,
transform, keep the disk around the carrier (the iris), re-center it,
and transform back.  This is the numerical twin of the 4f relay plus
pinhole that isolates the shaped beam from the undiffracted zero order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, GeometryError
from .hologram import GratingSpec, HologramImage, gray_to_phase
from .modes import FieldGrid, grid_coordinates

#: Half-width (in frequency bins) reserved around the zero order when
#: checking that an iris keeps clear of it.
ZERO_ORDER_GUARD_BINS = 4.0


@dataclass(frozen=True)
class IrisSpec:
    """Circular passband in the far-field plane.

    center is (fx, fy) in cycles per pixel of the source plane; radius is
    in the same units.
    """

    center: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"iris radius must be positive, got {self.radius}")
        fx, fy = self.center
        if not (math.isfinite(fx) and math.isfinite(fy)):
            raise ValueError("iris center must be finite")


def default_iris(grating: GratingSpec) -> IrisSpec:
    """Iris centered on the grating's first order with radius half the
    carrier frequency, the widest disk that cannot touch the zero order."""
    fx, fy = grating.carrier
    return IrisSpec((fx, fy), 0.5 * math.hypot(fx, fy))


def plane_wave(width: int, height: int, pitch: float) -> FieldGrid:
    """Unit-amplitude, flat-phase illumination covering the panel."""
    return FieldGrid(width, height, pitch, np.ones((height, width), dtype=complex))


def gaussian_illumination(width: int, height: int, pitch: float, waist: float) -> FieldGrid:
    """Gaussian illumination exp(-rho^2/waist^2), peak amplitude 1, for
    modeling a beam expanded onto the panel rather than an ideal plane wave."""
    if not (waist > 0 and math.isfinite(waist)):
        raise ValueError(f"waist must be positive and finite, got {waist}")
    x, y = grid_coordinates(width, height, pitch)
    return FieldGrid(width, height, pitch, np.exp(-(x * x + y * y) / waist**2) + 0j)


def _require_even(field: FieldGrid) -> None:
    if field.width % 2 or field.height % 2:
        raise GeometryError(
            f"transform requires even dimensions, got {field.width}x{field.height}"
        )


def far_field(field: FieldGrid) -> FieldGrid:
    """Centered unitary DFT of the field.

    Frequency samples lie at (k - N/2)/N cycles per pixel along each axis,
    k = 0..N-1, with bin N/2 at the array center after the shift.  The
    pitch attribute is carried through unchanged; see the module note on
    scale.
    """
    _require_even(field)
    spec = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(field.samples)))
    spec /= math.sqrt(field.width * field.height)
    return FieldGrid(field.width, field.height, field.pitch, spec)


def inverse_far_field(field: FieldGrid) -> FieldGrid:
    """Inverse of far_field (exactly, up to floating-point roundoff)."""
    _require_even(field)
    spatial = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(field.samples)))
    spatial *= math.sqrt(field.width * field.height)
    return FieldGrid(field.width, field.height, field.pitch, spatial)


def frequency_coordinates(width: int, height: int):
    """Frequency arrays (FX, FY) in cycles per pixel matching far_field's
    layout, each of shape (height, width)."""
    fx = (np.arange(width) - width / 2) / width
    fy = (np.arange(height) - height / 2) / height
    return np.meshgrid(fx, fy)


def normalized_overlap(a: FieldGrid, b: FieldGrid) -> float:
    """Mode fidelity |<a|b>|^2 / (<a|a><b|b>), in [0, 1]."""
    if (a.width, a.height) != (b.width, b.height):
        raise GeometryError("overlap requires identical grid shapes")
    num = abs(np.vdot(a.samples, b.samples)) ** 2
    den = float(np.vdot(a.samples, a.samples).real * np.vdot(b.samples, b.samples).real)
    if den == 0.0:
        raise ValueError("overlap with an all-zero field is undefined")
    return float(num / den)


def reconstruct_first_order(
    hologram: HologramImage,
    illumination: FieldGrid,
    iris: IrisSpec,
) -> FieldGrid:
    """Simulate playback of a hologram and isolate its first order.

    The illumination is multiplied by exp(i*phase) of the quantized frame
    (bin-center phases), transformed, masked by the iris, rolled so the
    iris center lands on the frequency origin, and transformed back.  The
    roll is by the nearest whole bin; any sub-bin remainder of the carrier
    stays as a small linear phase on the output.

    Raises ConfigurationError if the iris disk comes within a few bins of
    the zero order, where the undiffracted light would leak through.
    """
    geom = hologram.geometry
    if (illumination.width, illumination.height) != (geom.width, geom.height):
        raise GeometryError(
            f"illumination grid {illumination.width}x{illumination.height} "
            f"does not match panel {geom.width}x{geom.height}"
        )
    _require_even(illumination)

    fx, fy = iris.center
    guard = ZERO_ORDER_GUARD_BINS / min(geom.width, geom.height)
    if math.hypot(fx, fy) < iris.radius + guard:
        raise ConfigurationError(
            f"iris at |f| = {math.hypot(fx, fy):.4g} cycles/px with radius "
            f"{iris.radius:.4g} overlaps the zero order (guard {guard:.4g}); "
            "use a finer grating or a smaller iris"
        )

    modulated = FieldGrid(
        geom.width,
        geom.height,
        illumination.pitch,
        illumination.samples * np.exp(1j * gray_to_phase(hologram.gray)),
    )
    spectrum = far_field(modulated)
    freq_x, freq_y = frequency_coordinates(geom.width, geom.height)
    mask = np.hypot(freq_x - fx, freq_y - fy) <= iris.radius
    passed = spectrum.samples * mask
    shift_cols = round(fx * geom.width)
    shift_rows = round(fy * geom.height)
    recentered = np.roll(passed, (-shift_rows, -shift_cols), axis=(0, 1))
    return inverse_far_field(
        FieldGrid(geom.width, geom.height, illumination.pitch, recentered)
    )
