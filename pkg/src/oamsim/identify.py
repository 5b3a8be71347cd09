"""Inverse problem: read a spiral spectrum off a spoke interferogram.

The forward model leaves three fingerprints in the image, each invertible
on its own:

  ring radius    r_k = waist * sqrt(|ell_k| / 2)
  spoke count    n_k = 2 * n_fold * |ell_k|
  brightness     b_k proportional to |alpha_k|^2 / sqrt(|ell_k|)

The pipeline finds the beam center, collapses the image to a radial
profile, picks out ring peaks, counts spokes on each ring with an
azimuthal Fourier transform, and inverts the three relations above into
mode indices, weights, and (absent a hint) the waist.

Signs of ell and relative phases between components are invisible here:
the mirror interferometer responds only to |ell|, so recovered amplitudes
are real nonnegative weights.  Two components sharing |ell| and n_fold
land on the same ring and merge into one recovered term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.ndimage import map_coordinates, uniform_filter1d
from scipy.signal import find_peaks

from .detector import CountImage
from .errors import NyquistError
from .interferometer import Interferogram
from .modes import ModeIndex, SpiralComponent, SpiralSpectrum

#: Peaks closer to the axis than this (pixels) are treated as the axial
#: blob of an ell = 0 component, not as rings.
MIN_RING_RADIUS_PX = 3.0

#: Radial bins covering fewer pixels than this are statistically useless
#: and are dropped from profiles.
MIN_BIN_PIXELS = 8

#: Peak prominence threshold, as a fraction of the profile's global max.
RING_PROMINENCE = 0.05

#: Half-width of the integer-pixel search box used to refine the center.
CENTER_SEARCH_PX = 3


@dataclass(frozen=True)
class RingReport:
    """Measurements of one detected ring.

    inferred_abs_ell is the rational n/(2*N); integer_ell records whether
    it is a whole number under the assumed n_fold (a False everywhere
    suggests the wrong N was assumed).  weight is this ring's share of the
    recovered power (0 for rings that failed the integer check).
    """

    radius_px: float
    radius_m: float
    spoke_count: int
    harmonic_power_fraction: float
    brightness: float
    inferred_abs_ell: float
    integer_ell: bool
    weight: float

    def __post_init__(self) -> None:
        if self.spoke_count < 0:
            raise ValueError("spoke_count must be >= 0")
        if not (0.0 <= self.harmonic_power_fraction <= 1.0):
            raise ValueError("harmonic_power_fraction must lie in [0, 1]")


@dataclass
class IdentificationResult:
    """Everything recovered from one image.

    recovered is None when no ring yielded an integer |ell| (including the
    no-rings case); rings still carries whatever was measured, for
    diagnosis.  axial_blob reports center-peaked light (an ell = 0 term),
    which is excluded from the ring list.
    """

    rings: list[RingReport]
    recovered: SpiralSpectrum | None
    assumed_n_fold: int
    axial_blob: bool = False

    @property
    def status(self) -> str:
        if self.recovered is not None:
            return "ok"
        return "no-rings" if not self.rings else "inconsistent-n-fold"


def _as_intensity(image) -> tuple[np.ndarray, float]:
    """Float intensity view plus pixel pitch of either image type."""
    if isinstance(image, Interferogram):
        return image.intensity, image.pitch
    if isinstance(image, CountImage):
        return image.counts.astype(float), image.pitch
    raise TypeError(f"expected Interferogram or CountImage, got {type(image).__name__}")


def _profile_of_array(arr: np.ndarray, center: tuple[float, float]):
    """Azimuthal means in 1-pixel annuli around center = (col, row)."""
    h, w = arr.shape
    cx, cy = center
    cols = np.arange(w) - cx
    rows = np.arange(h) - cy
    r = np.hypot(cols[None, :], rows[:, None])
    bins = np.floor(r).astype(np.intp).ravel()
    count = np.bincount(bins)
    total = np.bincount(bins, weights=arr.ravel())
    keep = count >= MIN_BIN_PIXELS
    radii = np.nonzero(keep)[0] + 0.5
    means = total[keep] / count[keep]
    return radii.astype(float), means


def radial_profile_of(image, center: tuple[float, float]):
    """Radial intensity profile: (radii, mean_intensity) arrays, one entry
    per 1-pixel-wide annulus around center = (col, row) in pixels.

    Annuli with fewer than 8 covered pixels (the innermost bin, extreme
    corners) are dropped.  Radii are bin centers in pixels.
    """
    arr, _ = _as_intensity(image)
    h, w = arr.shape
    cx, cy = center
    if not (-0.5 <= cx <= w - 0.5 and -0.5 <= cy <= h - 0.5):
        raise ValueError(f"center {center} lies outside the {w}x{h} image")
    return _profile_of_array(arr, center)


def find_center(image) -> tuple[float, float]:
    """Beam center (col, row) in pixel coordinates.

    Starts from the intensity centroid, then searches integer offsets
    within +-3 px for the center that maximizes the sharpness of the
    radial profile, measured as the sum of squares of the smoothed
    profile: off-center guesses smear rings across neighboring annuli,
    which spreads the same total intensity over more bins and strictly
    lowers that concentration.  Aggregating over every bin keeps the
    metric stable under photon noise, where the height of any single peak
    bin is an extreme-value statistic too noisy to compare.  A blank image
    falls back to the geometric center.
    """
    arr, _ = _as_intensity(image)
    h, w = arr.shape
    total = float(arr.sum())
    if total <= 0.0:
        return ((w - 1) / 2.0, (h - 1) / 2.0)
    cx0 = float((arr.sum(axis=0) * np.arange(w)).sum() / total)
    cy0 = float((arr.sum(axis=1) * np.arange(h)).sum() / total)

    best = None
    for dy in range(-CENTER_SEARCH_PX, CENTER_SEARCH_PX + 1):
        for dx in range(-CENTER_SEARCH_PX, CENTER_SEARCH_PX + 1):
            cand = (
                min(max(cx0 + dx, 0.0), w - 1.0),
                min(max(cy0 + dy, 0.0), h - 1.0),
            )
            _, means = _profile_of_array(arr, cand)
            if means.size == 0:
                continue
            smooth = uniform_filter1d(means, 3, mode="nearest")
            sharp = float((smooth * smooth).sum())
            if best is None or sharp > best[0]:
                best = (sharp, cand)
    return best[1] if best is not None else (cx0, cy0)


def detect_rings(radii, intensities) -> list[tuple[float, float]]:
    """Pick ring peaks from a radial profile.

    The profile is smoothed by a 3-bin moving average; local maxima with
    prominence of at least 5% of the smoothed global maximum qualify.
    Peaks within MIN_RING_RADIUS_PX of the axis are the axial blob of an
    on-axis component, not rings, and are excluded (see has_axial_blob).
    Returns (radius, peak_height) pairs in increasing radius order; empty
    list when nothing qualifies.
    """
    radii = np.asarray(radii, dtype=float)
    intensities = np.asarray(intensities, dtype=float)
    if radii.size == 0:
        raise ValueError("empty radial profile")
    smooth = uniform_filter1d(intensities, 3, mode="nearest")
    top = float(smooth.max())
    if top <= 0.0:
        return []
    peaks, _ = find_peaks(smooth, prominence=RING_PROMINENCE * top)
    return [
        (float(radii[i]), float(smooth[i]))
        for i in peaks
        if radii[i] >= MIN_RING_RADIUS_PX
    ]


def has_axial_blob(radii, intensities) -> bool:
    """True when the profile is brightest at (or hard against) the axis,
    the signature of an ell = 0 component rather than a ring."""
    radii = np.asarray(radii, dtype=float)
    intensities = np.asarray(intensities, dtype=float)
    if radii.size == 0:
        raise ValueError("empty radial profile")
    smooth = uniform_filter1d(intensities, 3, mode="nearest")
    return bool(radii[int(np.argmax(smooth))] < MIN_RING_RADIUS_PX)


def annulus_power(image, center: tuple[float, float], radius: float, half_width: float) -> float:
    """Integrated intensity in the annulus |r - radius| <= half_width.

    Alternative brightness estimator to the profile peak height used by
    recover_spectrum: integrating over the ring instead of reading its
    crest is less sensitive to radial sampling, but mixes in neighbor
    light when rings crowd together.  Returned in intensity*pixel units.
    """
    if not (radius > 0 and math.isfinite(radius)):
        raise ValueError(f"radius must be positive, got {radius}")
    if not (half_width > 0 and math.isfinite(half_width)):
        raise ValueError(f"half_width must be positive, got {half_width}")
    arr, _ = _as_intensity(image)
    h, w = arr.shape
    cx, cy = center
    cols = np.arange(w) - cx
    rows = np.arange(h) - cy
    r = np.hypot(cols[None, :], rows[:, None])
    mask = np.abs(r - radius) <= half_width
    return float(arr[mask].sum())


def count_spokes_on_ring(
    image, center: tuple[float, float], radius: float, max_harmonic: int
) -> tuple[int, float]:
    """Dominant azimuthal harmonic on one circle.

    Samples the image by bilinear interpolation at 4*max_harmonic uniform
    angles on the circle, Fourier transforms the sequence, and returns the
    harmonic with the most power among 1..2*max_harmonic together with
    that harmonic's share of the total nonzero-harmonic power.  A ring
    with no azimuthal structure (all power in the mean) reports (0, 0.0).

    The guard circumference >= 4*max_harmonic, i.e. at least two image
    pixels per cycle of the highest countable harmonic, rejects circles
    too small to carry the requested harmonics.
    """
    if max_harmonic < 1:
        raise ValueError(f"max_harmonic must be >= 1, got {max_harmonic}")
    if not (radius > 0 and math.isfinite(radius)):
        raise ValueError(f"radius must be positive, got {radius}")
    circumference = 2.0 * math.pi * radius
    if circumference < 4 * max_harmonic:
        need = 4 * max_harmonic / (2.0 * math.pi)
        raise NyquistError(
            f"circumference {circumference:.1f} px cannot support harmonics up "
            f"to {max_harmonic}; need radius >= {need:.1f} px at this resolution"
        )
    arr, _ = _as_intensity(image)
    cx, cy = center
    m = 4 * max_harmonic
    theta = 2.0 * math.pi * np.arange(m) / m
    sample_cols = cx + radius * np.cos(theta)
    sample_rows = cy + radius * np.sin(theta)
    values = map_coordinates(
        arr, [sample_rows, sample_cols], order=1, mode="constant", cval=0.0
    )
    spectrum = np.fft.rfft(values)
    power = np.abs(spectrum) ** 2
    # Interior rfft bins stand for a conjugate pair; weight them double so
    # shares are true fractions of the real signal's AC power.
    power[1:-1] *= 2.0
    dc = power[0]
    ac = power[1:]
    total_ac = float(ac.sum())
    if total_ac <= 1e-12 * max(dc, 1e-300):
        return 0, 0.0
    n = int(np.argmax(ac)) + 1
    return n, float(ac[n - 1] / total_ac)


def spokes_from_arc(theta_deg: float, n0: int) -> float:
    """Full-circle spoke count extrapolated from n0 spokes counted over an
    arc of theta_deg degrees: 360*n0/theta."""
    if not (0.0 < theta_deg <= 360.0):
        raise ValueError(f"arc must lie in (0, 360] degrees, got {theta_deg}")
    if n0 < 1:
        raise ValueError(f"arc spoke count must be >= 1, got {n0}")
    return 360.0 * n0 / theta_deg


def _fit_waist(rings: list[RingReport]) -> float:
    """Least-squares waist through radius_k = w*sqrt(ell_k/2), meters."""
    s = np.array([math.sqrt(r.inferred_abs_ell / 2.0) for r in rings])
    radii = np.array([r.radius_m for r in rings])
    return float((s * radii).sum() / (s * s).sum())


def recover_spectrum(
    image, assumed_n_fold: int = 1, waist_hint: float | None = None
) -> IdentificationResult:
    """Full inverse pipeline on an interferogram or count image.

    Finds the center, detects rings, counts spokes per ring (budgeting
    harmonics to each ring's own circumference), infers |ell| = n/(2*N)
    under the assumed n_fold, and converts ring brightnesses into
    normalized weights via |alpha|^2 proportional to brightness*sqrt(|ell|).
    The waist is least-squares fitted to the ring radii unless a hint is
    given.  Rings whose spoke count is not a multiple of 2*N are kept in
    the report, flagged, and excluded from the recovered spectrum; two
    rings inferring the same |ell| merge their weights.
    """
    if assumed_n_fold < 1:
        raise ValueError(f"assumed_n_fold must be >= 1, got {assumed_n_fold}")
    if waist_hint is not None and not (waist_hint > 0 and math.isfinite(waist_hint)):
        raise ValueError(f"waist_hint must be positive, got {waist_hint}")

    _, pitch = _as_intensity(image)
    center = find_center(image)
    radii, means = radial_profile_of(image, center)
    peaks = detect_rings(radii, means)
    axial = has_axial_blob(radii, means)

    reports: list[RingReport] = []
    for ring_radius, brightness in peaks:
        budget = int(2.0 * math.pi * ring_radius / 4.0)
        if budget < 1:
            continue
        n, fraction = count_spokes_on_ring(image, center, ring_radius, budget)
        ratio = n / (2.0 * assumed_n_fold)
        ok = n > 0 and n % (2 * assumed_n_fold) == 0
        reports.append(
            RingReport(
                radius_px=ring_radius,
                radius_m=ring_radius * pitch,
                spoke_count=n,
                harmonic_power_fraction=fraction,
                brightness=brightness,
                inferred_abs_ell=ratio,
                integer_ell=ok,
                weight=0.0,
            )
        )

    usable = [r for r in reports if r.integer_ell]
    if not usable:
        return IdentificationResult(reports, None, assumed_n_fold, axial)

    raw = {}
    for r in usable:
        ell = int(round(r.inferred_abs_ell))
        raw[ell] = raw.get(ell, 0.0) + r.brightness * math.sqrt(ell)
    total = math.fsum(raw.values())
    weights = {ell: v / total for ell, v in raw.items()}

    reports = [
        replace(r, weight=weights[int(round(r.inferred_abs_ell))])
        if r.integer_ell
        else r
        for r in reports
    ]

    waist = waist_hint if waist_hint is not None else _fit_waist(usable)
    components = tuple(
        SpiralComponent(ModeIndex(0, ell, assumed_n_fold), math.sqrt(w))
        for ell, w in sorted(weights.items())
    )
    recovered = SpiralSpectrum(components, waist)
    return IdentificationResult(reports, recovered, assumed_n_fold, axial)


def format_report(result: IdentificationResult) -> str:
    """Human-readable multi-line summary of an identification."""
    lines = [
        f"status: {result.status}",
        f"assumed n_fold: {result.assumed_n_fold}",
        f"axial blob: {'yes' if result.axial_blob else 'no'}",
        f"rings detected: {len(result.rings)}",
    ]
    for i, r in enumerate(result.rings):
        flag = "" if r.integer_ell else "  [non-integer |ell|: check n_fold]"
        lines.append(
            f"  ring {i}: radius {r.radius_px:.2f} px ({r.radius_m:.6g} m), "
            f"{r.spoke_count} spokes (fraction {r.harmonic_power_fraction:.3f}), "
            f"brightness {r.brightness:.6g}, |ell| = {r.inferred_abs_ell:g}, "
            f"weight {r.weight:.4f}{flag}"
        )
    if result.recovered is not None:
        lines.append(f"fitted waist: {result.recovered.waist:.6g} m")
        terms = ", ".join(
            f"|{c.mode.ell}> x {abs(c.amplitude):.4f}"
            for c in result.recovered.components
        )
        lines.append(f"recovered spectrum: {terms}")
    return "\n".join(lines) + "\n"
