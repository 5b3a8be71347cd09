"""Laguerre-Gaussian mode mathematics at the beam waist plane.

A standard mode with radial index p and azimuthal index ell has the field

    R_p^ell(rho) * exp(i*ell*phi),

    R_p^ell(rho) = A * (sqrt(2)*rho/w)**|ell| * exp(-rho**2/w**2)
                     * L_p^|ell|(2*rho**2/w**2),

where L is a generalized Laguerre polynomial and the constant
A = sqrt(2*p!/(pi*(p+|ell|)!))/w makes the transverse profile unit norm:
the integral of R**2 * rho over the plane is 1.

A high-helicity variant keeps the compact p = 0 radial profile but winds
the phase n_fold times faster,

    R_0^ell(rho) * exp(i*n_fold*ell*phi),

so a beam whose bright ring has the radius of a modest ell can still carry
n_fold*ell units of orbital angular momentum per photon.  Such a variant is
not itself a pure standard mode; `decompose_nfold` expands it over standard
modes of azimuthal index n_fold*ell.

Radial factors are evaluated in log space so that azimuthal indices of
several hundred neither overflow the |ell|-th power nor underflow the
Gaussian envelope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import GeometryError, GridClipError, QuadratureError

_SQRT2 = math.sqrt(2.0)

# Fraction of the half-extent of the shorter grid side that the outermost
# bright ring may reach before synthesize_field refuses the grid.
FIT_MARGIN = 0.45


@dataclass(frozen=True)
class ModeIndex:
    """Identifies one mode: radial index p, azimuthal index ell, and the
    helicity multiplier n_fold (1 for a standard mode)."""

    p: int
    ell: int
    n_fold: int = 1

    def __post_init__(self) -> None:
        if self.p < 0:
            raise ValueError(f"radial index p must be >= 0, got {self.p}")
        if self.n_fold < 1:
            raise ValueError(f"n_fold must be >= 1, got {self.n_fold}")

    @property
    def helicity(self) -> int:
        """Total phase winding number n_fold*ell."""
        return self.n_fold * self.ell


@dataclass(frozen=True)
class SpiralComponent:
    """One weighted term of a superposition."""

    mode: ModeIndex
    amplitude: complex

    def __post_init__(self) -> None:
        amp = complex(self.amplitude)
        if not cmath.isfinite(amp):
            raise ValueError(f"amplitude must be finite, got {amp!r}")
        object.__setattr__(self, "amplitude", amp)


@dataclass(frozen=True)
class SpiralSpectrum:
    """A superposition of modes sharing one waist.

    Components must be unique in (p, ell, n_fold).  Amplitudes are complex
    and carry both the weight and the relative phase of each term.
    """

    components: tuple[SpiralComponent, ...]
    waist: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not (self.waist > 0 and math.isfinite(self.waist)):
            raise ValueError(f"waist must be positive and finite, got {self.waist}")
        seen = set()
        for comp in self.components:
            key = (comp.mode.p, comp.mode.ell, comp.mode.n_fold)
            if key in seen:
                raise ValueError(f"duplicate mode (p, ell, n_fold) = {key}")
            seen.add(key)

    def total_power(self) -> float:
        return math.fsum(abs(c.amplitude) ** 2 for c in self.components)


@dataclass
class FieldGrid:
    """A complex field sampled on a centered Cartesian grid.

    Samples are indexed [row, column] with shape (height, width) and pixel
    pitch in meters.  Pixel centers sit at

        x = (column - width/2 + 0.5) * pitch
        y = (row - height/2 + 0.5) * pitch

    so no sample lies exactly on either axis for even dimensions.
    """

    width: int
    height: int
    pitch: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if not (self.pitch > 0 and math.isfinite(self.pitch)):
            raise ValueError(f"pitch must be positive and finite, got {self.pitch}")
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != (self.height, self.width):
            raise ValueError(
                f"samples shape {self.samples.shape} does not match "
                f"(height, width) = ({self.height}, {self.width})"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("field samples must be finite")

    def power(self) -> float:
        """Discrete L2 power: sum |E|^2 * pitch^2."""
        mag2 = np.abs(self.samples) ** 2
        return float(mag2.sum() * self.pitch**2)


def grid_coordinates(width: int, height: int, pitch: float):
    """Pixel-center coordinate arrays (X, Y), each of shape (height, width)."""
    x = (np.arange(width) - width / 2 + 0.5) * pitch
    y = (np.arange(height) - height / 2 + 0.5) * pitch
    return np.meshgrid(x, y)


def laguerre(p: int, alpha: float, x):
    """Generalized Laguerre polynomial L_p^alpha(x), elementwise on x.

    Uses the three-term recurrence

        L_0 = 1
        L_1 = 1 + alpha - x
        k*L_k = (2k - 1 + alpha - x)*L_{k-1} - (k - 1 + alpha)*L_{k-2}

    which is stable for the argument range used here.
    """
    if p < 0:
        raise ValueError(f"order p must be >= 0, got {p}")
    x_arr = np.asarray(x, dtype=float)
    prev = np.ones_like(x_arr)
    if p == 0:
        return prev if x_arr.ndim else float(prev)
    cur = 1.0 + alpha - x_arr
    for k in range(2, p + 1):
        cur, prev = ((2 * k - 1 + alpha - x_arr) * cur - (k - 1 + alpha) * prev) / k, cur
    return cur if x_arr.ndim else float(cur)


def _log_radial_norm(p: int, abs_ell: int, waist: float) -> float:
    """log of the normalization constant sqrt(2*p!/(pi*(p+|ell|)!))/waist."""
    return 0.5 * (
        math.log(2.0)
        + math.lgamma(p + 1)
        - math.log(math.pi)
        - math.lgamma(p + abs_ell + 1)
    ) - math.log(waist)


def radial_profile(mode: ModeIndex, waist: float, rho):
    """Real radial factor R_p^|ell| at radius rho (meters), elementwise.

    Normalized so that 2*pi * integral R**2 * rho drho = 1.  The magnitude
    is assembled in log space; only the sign of the Laguerre factor is kept
    out of the logarithm, so ell up to several hundred stays finite.
    """
    if not (waist > 0 and math.isfinite(waist)):
        raise ValueError(f"waist must be positive and finite, got {waist}")
    rho_arr = np.asarray(rho, dtype=float)
    scalar = rho_arr.ndim == 0
    rho_arr = np.atleast_1d(rho_arr)

    a = abs(mode.ell)
    u = rho_arr / waist
    lag = laguerre(mode.p, a, 2.0 * u * u)
    log_mag = _log_radial_norm(mode.p, a, waist) - u * u
    if a > 0:
        with np.errstate(divide="ignore"):
            log_mag = log_mag + a * np.log(_SQRT2 * u)
    with np.errstate(divide="ignore"):
        log_lag = np.log(np.abs(lag))
    out = np.sign(lag) * np.exp(log_mag + log_lag)
    # rho = 0 with a > 0 gives log 0 = -inf, exp -inf = 0: correct limit.
    return float(out[0]) if scalar else out


def peak_radius(ell: int, waist: float) -> float:
    """Radius of the bright ring of a p = 0 mode: waist*sqrt(|ell|/2).

    Defined only for ell != 0; an ell = 0 beam peaks on axis and has no
    ring, so asking for its ring radius is a caller bug.
    """
    if ell == 0:
        raise GeometryError("peak_radius is undefined for ell = 0 (no ring)")
    if not (waist > 0 and math.isfinite(waist)):
        raise ValueError(f"waist must be positive and finite, got {waist}")
    return waist * math.sqrt(abs(ell) / 2.0)


def _evaluate(spectrum: SpiralSpectrum, rho: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Sum of amplitude * R(rho) * exp(i*helicity*phi) over components."""
    out = np.zeros(np.broadcast(rho, phi).shape, dtype=np.complex128)
    for comp in spectrum.components:
        radial = radial_profile(comp.mode, spectrum.waist, rho)
        out += comp.amplitude * radial * np.exp(1j * comp.mode.helicity * phi)
    return out


def max_ring_radius(spectrum: SpiralSpectrum) -> float:
    """Largest bright-ring radius over the spectrum's components.

    Zero when every component sits on axis (ell = 0).
    """
    return max(
        (
            peak_radius(c.mode.ell, spectrum.waist)
            for c in spectrum.components
            if c.mode.ell != 0
        ),
        default=0.0,
    )


def synthesize_field(
    spectrum: SpiralSpectrum,
    width: int,
    height: int,
    pitch: float,
    fit_check: bool = True,
) -> FieldGrid:
    """Sample the superposition on a centered grid.

    Refuses grids whose shorter side would clip the outermost bright ring:
    the ring radius must not exceed FIT_MARGIN * min(width, height) * pitch.
    Pass fit_check=False to evaluate anyway (used when painting a target
    onto fixed modulator hardware that barely contains the ring).
    """
    if fit_check:
        r_out = max_ring_radius(spectrum)
        limit = FIT_MARGIN * min(width, height) * pitch
        if r_out > limit:
            raise GridClipError(
                f"outermost ring radius {r_out:.6g} m exceeds the grid budget "
                f"{limit:.6g} m ({FIT_MARGIN} * min(width, height) * pitch); "
                "enlarge the grid or shrink the waist"
            )
    x, y = grid_coordinates(width, height, pitch)
    rho = np.hypot(x, y)
    phi = np.arctan2(y, x)
    return FieldGrid(width, height, pitch, _evaluate(spectrum, rho, phi))


def grid_overlap(a: FieldGrid, b: FieldGrid) -> complex:
    """Discrete inner product <a|b> = sum conj(a)*b * pitch^2."""
    if (a.width, a.height) != (b.width, b.height) or a.pitch != b.pitch:
        raise ValueError("overlap requires identical grid geometry")
    return complex(np.vdot(a.samples, b.samples) * a.pitch**2)


def normalize(spectrum: SpiralSpectrum) -> SpiralSpectrum:
    """Rescale amplitudes so the total power sum |alpha|^2 is 1.

    A spectrum already unit-norm to within 1e-12 is returned unchanged, so
    amplitudes that are exact by construction are not churned by a
    gratuitous multiply-divide round trip.
    """
    power = spectrum.total_power()
    if power == 0.0:
        raise ValueError("cannot normalize a spectrum with zero total power")
    if abs(power - 1.0) < 1e-12:
        return spectrum
    scale = 1.0 / math.sqrt(power)
    comps = tuple(
        SpiralComponent(c.mode, c.amplitude * scale) for c in spectrum.components
    )
    return SpiralSpectrum(comps, spectrum.waist)


class Decomposition(NamedTuple):
    """Expansion of a high-helicity beam over standard modes.

    coefficients[p] multiplies the standard mode (p, n_fold*ell); all
    coefficients are real because both radial factors are real.
    captured_power is the cumulative sum of squares, approaching 1 as
    p_max grows.
    """

    coefficients: np.ndarray
    captured_power: float


def decompose_nfold(mode: ModeIndex, waist: float, p_max: int) -> Decomposition:
    """Overlap coefficients of R_0^ell * exp(i*n_fold*ell*phi) with the
    standard modes (p, n_fold*ell), p = 0..p_max.

    The azimuthal integral forces the standard-mode azimuthal index to
    equal the helicity n_fold*ell; what remains is the radial overlap

        c_p = 2*pi * integral R_0^ell(rho) * R_p^{n_fold*ell}(rho) rho drho,

    evaluated by Gauss-Legendre quadrature on [0, 8*waist*sqrt(n_fold*|ell|)]
    (or 8*waist when ell = 0), with the order doubled until the
    coefficients stop changing.
    """
    if mode.p != 0:
        raise ValueError("decomposition is defined for p = 0 sources")
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    if not (waist > 0 and math.isfinite(waist)):
        raise ValueError(f"waist must be positive and finite, got {waist}")

    hel = abs(mode.helicity)
    upper = 8.0 * waist * math.sqrt(max(hel, 1))
    order = max(128, 16 * (p_max + 1), int(40.0 * math.sqrt(max(hel, 1))))

    def coeffs(n: int) -> np.ndarray:
        nodes, weights = roots_legendre(n)
        rho = 0.5 * upper * (nodes + 1.0)
        w = 0.5 * upper * weights
        src = radial_profile(ModeIndex(0, mode.ell), waist, rho)
        out = np.empty(p_max + 1)
        for p in range(p_max + 1):
            dst = radial_profile(ModeIndex(p, mode.helicity), waist, rho)
            out[p] = 2.0 * math.pi * float(np.sum(w * src * dst * rho))
        return out

    prev = coeffs(order)
    for _ in range(5):
        order *= 2
        cur = coeffs(order)
        if np.max(np.abs(cur - prev)) < 1e-11:
            return Decomposition(cur, float(np.sum(cur * cur)))
        prev = cur
    raise QuadratureError(
        f"decomposition quadrature did not converge by order {order}"
    )


def backward_detection_spectrum(spectrum: SpiralSpectrum) -> SpiralSpectrum:
    """Spectrum seen by a detector looking back through the interferometer.

    The reflected path reverses the handedness of every component, so each
    term (ell, amplitude) splits into the pair (+ell, -ell) with amplitude
    reduced by 1/sqrt(2) at the splitter; coincident (p, ell, n_fold)
    targets merge coherently.  The result is renormalized to unit power.

    A component with ell = 0 has no mirror partner and is rejected.
    """
    if not spectrum.components:
        raise ValueError("cannot mirror an empty spectrum")
    inv_sqrt2 = 1.0 / _SQRT2
    acc: dict[tuple[int, int, int], complex] = {}
    for comp in spectrum.components:
        if comp.mode.ell == 0:
            raise ValueError("ell = 0 has no distinct mirror image")
        for sign in (1, -1):
            key = (comp.mode.p, sign * comp.mode.ell, comp.mode.n_fold)
            acc[key] = acc.get(key, 0.0) + comp.amplitude * inv_sqrt2
    ordered = sorted(acc, key=lambda k: (k[2], k[1], k[0]))
    comps = tuple(
        SpiralComponent(ModeIndex(p, ell, n), acc[(p, ell, n)])
        for (p, ell, n) in ordered
    )
    return normalize(SpiralSpectrum(comps, spectrum.waist))


def spectrum_from_weights(
    pairs: Sequence[tuple[int, complex]],
    waist: float,
    n_fold: int = 1,
) -> SpiralSpectrum:
    """Convenience constructor: p = 0 components from (ell, amplitude) pairs."""
    comps = tuple(
        SpiralComponent(ModeIndex(0, ell, n_fold), amp) for ell, amp in pairs
    )
    return SpiralSpectrum(comps, waist)
