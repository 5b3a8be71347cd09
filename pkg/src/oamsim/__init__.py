"""Simulation and identification of high orbital-angular-momentum beams.

Forward path: describe a superposition (`SpiralSpectrum`), sample it on a
grid (`synthesize_field`), encode it for a phase-only modulator
(`synthesize_hologram`), interfere it with its mirror image
(`interfere_exact` / `interferogram_analytic`), and photograph it with a
photon-counting camera (`photon_sample`).  Inverse path: `recover_spectrum`
reads the mode content back off the ring-and-spoke image.
"""

from .detector import CountImage, DetectorSpec, photon_sample, resample
from .errors import (
    ConfigurationError,
    GeometryError,
    GridClipError,
    NyquistError,
    OamsimError,
    QuadratureError,
    RecipeError,
)
from .hologram import (
    GratingSpec,
    HologramImage,
    SlmGeometry,
    blaze_depth_from_intensity,
    first_order_efficiency,
    fit_waist,
    gray_to_phase,
    grating_phase,
    pixels_per_period,
    quantize_phase,
    render_target,
    synthesize_hologram,
)
from .identify import (
    IdentificationResult,
    RingReport,
    annulus_power,
    count_spokes_on_ring,
    detect_rings,
    find_center,
    format_report,
    has_axial_blob,
    radial_profile_of,
    recover_spectrum,
    spokes_from_arc,
)
from .interferometer import (
    Interferogram,
    dove_flip,
    interfere_exact,
    interferogram_analytic,
    spoke_count,
)
from .modes import (
    Decomposition,
    FieldGrid,
    ModeIndex,
    SpiralComponent,
    SpiralSpectrum,
    backward_detection_spectrum,
    decompose_nfold,
    grid_overlap,
    laguerre,
    normalize,
    peak_radius,
    radial_profile,
    spectrum_from_weights,
    synthesize_field,
)
from .propagation import (
    IrisSpec,
    default_iris,
    far_field,
    frequency_coordinates,
    gaussian_illumination,
    inverse_far_field,
    normalized_overlap,
    plane_wave,
    reconstruct_first_order,
)
from .recipe import (
    GridSpec,
    Recipe,
    bundled_recipe_names,
    dump_recipe,
    load_bundled,
    load_recipe,
    parse_recipe,
    resolve_recipe,
    save_recipe,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "CountImage",
    "Decomposition",
    "DetectorSpec",
    "FieldGrid",
    "GeometryError",
    "GratingSpec",
    "GridClipError",
    "GridSpec",
    "HologramImage",
    "IdentificationResult",
    "Interferogram",
    "IrisSpec",
    "ModeIndex",
    "NyquistError",
    "OamsimError",
    "QuadratureError",
    "Recipe",
    "RecipeError",
    "RingReport",
    "SlmGeometry",
    "SpiralComponent",
    "SpiralSpectrum",
    "backward_detection_spectrum",
    "blaze_depth_from_intensity",
    "bundled_recipe_names",
    "annulus_power",
    "count_spokes_on_ring",
    "decompose_nfold",
    "default_iris",
    "detect_rings",
    "dove_flip",
    "dump_recipe",
    "far_field",
    "find_center",
    "first_order_efficiency",
    "fit_waist",
    "format_report",
    "frequency_coordinates",
    "gaussian_illumination",
    "grating_phase",
    "gray_to_phase",
    "grid_overlap",
    "has_axial_blob",
    "interfere_exact",
    "interferogram_analytic",
    "inverse_far_field",
    "laguerre",
    "load_bundled",
    "load_recipe",
    "normalize",
    "normalized_overlap",
    "plane_wave",
    "parse_recipe",
    "resolve_recipe",
    "peak_radius",
    "photon_sample",
    "pixels_per_period",
    "quantize_phase",
    "radial_profile",
    "radial_profile_of",
    "recover_spectrum",
    "reconstruct_first_order",
    "render_target",
    "resample",
    "save_recipe",
    "spectrum_from_weights",
    "spoke_count",
    "spokes_from_arc",
    "synthesize_field",
    "synthesize_hologram",
]
