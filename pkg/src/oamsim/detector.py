"""Photon-counting camera model.

The sensor sees an intensity pattern, integrates it over its pixels, and
reports independent Poisson photon counts per pixel, optionally smeared
by Gaussian read noise.  Electron-multiplying excess noise is not
modeled: counts are ideal photon statistics.

The absolute exposure is set by `mean_flux`, the mean photons per pixel
over the *illuminated* part of the frame, defined as pixels brighter than
1% of the frame maximum.  Anchoring the flux to illuminated pixels keeps
the requested signal level meaningful regardless of how much dark border
the frame carries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .interferometer import Interferogram

#: Fraction of the frame maximum above which a pixel counts as illuminated.
ILLUMINATION_THRESHOLD = 0.01


@dataclass(frozen=True)
class DetectorSpec:
    """Sensor geometry and exposure (defaults: 768 x 288 pixel frame).

    mean_flux: mean photons per illuminated pixel.
    read_noise_sigma: rms of additive Gaussian read noise, in counts;
        0 disables it.
    seed: PRNG seed; equal seeds give identical frames.
    """

    width: int = 768
    height: int = 288
    mean_flux: float = 1.0
    read_noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("detector dimensions must be positive")
        if not (self.mean_flux >= 0 and math.isfinite(self.mean_flux)):
            raise ValueError(f"mean_flux must be >= 0, got {self.mean_flux}")
        if not (self.read_noise_sigma >= 0 and math.isfinite(self.read_noise_sigma)):
            raise ValueError(
                f"read_noise_sigma must be >= 0, got {self.read_noise_sigma}"
            )


@dataclass
class CountImage:
    """Integer photon counts per pixel, indexed [row, col]."""

    width: int
    height: int
    pitch: float
    counts: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if not (self.pitch > 0 and math.isfinite(self.pitch)):
            raise ValueError(f"pitch must be positive and finite, got {self.pitch}")
        self.counts = np.asarray(self.counts)
        if self.counts.shape != (self.height, self.width):
            raise ValueError(
                f"counts shape {self.counts.shape} does not match "
                f"(height, width) = ({self.height}, {self.width})"
            )
        if not np.issubdtype(self.counts.dtype, np.integer):
            raise ValueError("counts must be integers")
        if self.counts.min() < 0:
            raise ValueError("counts must be nonnegative")
        self.counts = self.counts.astype(np.int64)


def resample(image: Interferogram, spec: DetectorSpec = DetectorSpec()) -> Interferogram:
    """Rebin an intensity image onto the coarser sensor grid of spec.

    The integer bin factor is the largest b with spec.width*b <= source
    width and spec.height*b <= source height; the source is center-cropped
    to (spec.height*b, spec.width*b) and each b x b block is averaged.
    Pixels stay square (one shared factor), so ring geometry survives; the
    output pitch is b times the input pitch.

    Integrated intensity (sum * pixel area) is conserved exactly when the
    sensor shape divides the source shape; when the aspect ratios differ,
    light outside the centered crop leaves the field of view, as it would
    on a real sensor.  Raises GeometryError if the target is finer than
    the source along either axis.
    """
    width, height = spec.width, spec.height
    factor = min(image.width // width, image.height // height)
    if factor < 1:
        raise GeometryError(
            f"target {width}x{height} is finer than source "
            f"{image.width}x{image.height}; rebinning cannot upsample"
        )
    crop_w = width * factor
    crop_h = height * factor
    col0 = (image.width - crop_w) // 2
    row0 = (image.height - crop_h) // 2
    cropped = image.intensity[row0 : row0 + crop_h, col0 : col0 + crop_w]
    binned = cropped.reshape(height, factor, width, factor).mean(axis=(1, 3))
    return Interferogram(width, height, image.pitch * factor, binned)


def photon_sample(image: Interferogram, spec: DetectorSpec = DetectorSpec()) -> CountImage:
    """Draw one photon-count frame from an intensity pattern.

    The pattern must already be at sensor resolution (use `resample`
    first if not).  Expected counts are the intensity scaled so that the
    mean over illuminated pixels (above 1% of the frame maximum) equals
    spec.mean_flux; each pixel then draws an independent Poisson variate.
    If read_noise_sigma > 0, a rounded Gaussian is added and the result
    clipped at zero.

    Draw order is fixed and documented for reproducibility: a PCG64
    generator seeded with spec.seed first fills the whole frame with
    Poisson draws (C order), then, only if read noise is enabled, fills
    the frame again with Gaussian draws.
    """
    if (image.width, image.height) != (spec.width, spec.height):
        raise GeometryError(
            f"image {image.width}x{image.height} does not match detector "
            f"{spec.width}x{spec.height}; resample first"
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    peak = float(image.intensity.max())
    if peak > 0 and spec.mean_flux > 0:
        illuminated = image.intensity > ILLUMINATION_THRESHOLD * peak
        mean_lit = float(image.intensity[illuminated].mean())
        expected = image.intensity * (spec.mean_flux / mean_lit)
        counts = rng.poisson(expected)
    else:
        counts = np.zeros((image.height, image.width), dtype=np.int64)
    if spec.read_noise_sigma > 0:
        noise = np.rint(
            rng.normal(0.0, spec.read_noise_sigma, size=counts.shape)
        ).astype(np.int64)
        counts = np.maximum(counts + noise, 0)
    return CountImage(image.width, image.height, image.pitch, counts.astype(np.int64))
