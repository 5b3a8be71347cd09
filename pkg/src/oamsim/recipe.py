"""Recipe files: JSON descriptions of a superposition and its simulation.

A recipe pins everything needed to reproduce a run: the waist (meters,
hence the _m suffixes), the sampling grid, the complex amplitude of every
component, and optionally detector and grating parameters.  Parsing is
strict, error messages name the offending field, and write(parse(x))
reproduces every numeric field exactly (floats travel as shortest
round-trip decimals).

Bundled recipes under oamsim/recipes/ are the demonstration states used
throughout the tests: a plain Gaussian, a single ell = 50 ring, the
three-component triplet at n_fold 1, 2, and 3, and the four-component
ququart.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .detector import DetectorSpec
from .errors import RecipeError
from .hologram import GratingSpec
from .modes import ModeIndex, SpiralComponent, SpiralSpectrum

_DETECTOR_KEYS = {"width", "height", "mean_flux", "read_noise_sigma", "seed"}
_GRATING_KEYS = {"period", "orientation"}


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid of the synthesis plane."""

    width: int
    height: int
    pitch_m: float

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise RecipeError("grid dimensions must be positive")
        if not (self.pitch_m > 0 and math.isfinite(self.pitch_m)):
            raise RecipeError(f"grid.pitch_m must be positive, got {self.pitch_m}")


@dataclass
class Recipe:
    """Parsed recipe: the spectrum plus simulation parameters.

    detector and grating are kept as the raw (validated) field dicts so
    that serialization is lossless; use detector_spec()/grating_spec() for
    typed views with defaults filled in.
    """

    spectrum: SpiralSpectrum
    grid: GridSpec
    detector: dict | None = None
    grating: dict | None = None

    def detector_spec(self, **overrides) -> DetectorSpec:
        fields = dict(self.detector or {})
        fields.update(overrides)
        return DetectorSpec(**fields)

    def grating_spec(self) -> GratingSpec:
        fields = dict(self.grating or {})
        if "orientation" in fields:
            fields["orientation"] = tuple(fields["orientation"])
        return GratingSpec(**fields)


def _require(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise RecipeError(f"missing field {where}.{key}")
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise RecipeError(f"field {where}.{key} must be a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise RecipeError(f"field {where}.{key} must be an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise RecipeError(
            f"field {where}.{key} must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _check_optional_block(block, allowed: set, where: str) -> dict | None:
    if block is None:
        return None
    if not isinstance(block, dict):
        raise RecipeError(f"field {where} must be an object")
    unknown = set(block) - allowed
    if unknown:
        raise RecipeError(f"unknown field(s) in {where}: {', '.join(sorted(unknown))}")
    return dict(block)


def parse_recipe(text: str) -> Recipe:
    """Parse a recipe from JSON text; RecipeError on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecipeError(
            f"recipe is not valid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(doc, dict):
        raise RecipeError("recipe root must be a JSON object")

    waist = _require(doc, "waist_m", float, "recipe")
    grid_doc = _require(doc, "grid", dict, "recipe")
    grid = GridSpec(
        _require(grid_doc, "width", int, "grid"),
        _require(grid_doc, "height", int, "grid"),
        _require(grid_doc, "pitch_m", float, "grid"),
    )
    comp_doc = _require(doc, "components", list, "recipe")
    if not comp_doc:
        raise RecipeError("components must contain at least one entry")
    components = []
    for i, entry in enumerate(comp_doc):
        where = f"components[{i}]"
        if not isinstance(entry, dict):
            raise RecipeError(f"{where} must be an object")
        p = _require(entry, "p", int, where)
        ell = _require(entry, "ell", int, where)
        n_fold = _require(entry, "n_fold", int, where)
        amp_re = _require(entry, "amp_re", float, where)
        amp_im = _require(entry, "amp_im", float, where)
        try:
            components.append(
                SpiralComponent(ModeIndex(p, ell, n_fold), complex(amp_re, amp_im))
            )
        except ValueError as exc:
            raise RecipeError(f"{where}: {exc}") from exc

    detector = _check_optional_block(doc.get("detector"), _DETECTOR_KEYS, "detector")
    grating = _check_optional_block(doc.get("grating"), _GRATING_KEYS, "grating")

    unknown = set(doc) - {"waist_m", "grid", "components", "detector", "grating"}
    if unknown:
        raise RecipeError(f"unknown top-level field(s): {', '.join(sorted(unknown))}")

    try:
        spectrum = SpiralSpectrum(tuple(components), waist)
    except ValueError as exc:
        raise RecipeError(str(exc)) from exc

    recipe = Recipe(spectrum, grid, detector, grating)
    # Validate optional blocks eagerly so bad recipes fail at parse time.
    try:
        recipe.detector_spec()
        recipe.grating_spec()
    except (TypeError, ValueError) as exc:
        raise RecipeError(f"invalid detector/grating block: {exc}") from exc
    return recipe


def dump_recipe(recipe: Recipe) -> str:
    """Serialize a recipe to JSON text (2-space indent, trailing newline)."""
    doc: dict = {
        "waist_m": recipe.spectrum.waist,
        "grid": {
            "width": recipe.grid.width,
            "height": recipe.grid.height,
            "pitch_m": recipe.grid.pitch_m,
        },
        "components": [
            {
                "p": c.mode.p,
                "ell": c.mode.ell,
                "n_fold": c.mode.n_fold,
                "amp_re": c.amplitude.real,
                "amp_im": c.amplitude.imag,
            }
            for c in recipe.spectrum.components
        ],
    }
    if recipe.detector is not None:
        doc["detector"] = recipe.detector
    if recipe.grating is not None:
        doc["grating"] = recipe.grating
    return json.dumps(doc, indent=2) + "\n"


def load_recipe(path) -> Recipe:
    """Parse a recipe file; the error message carries the path."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RecipeError(f"cannot read recipe {path}: {exc}") from exc
    try:
        return parse_recipe(text)
    except RecipeError as exc:
        raise RecipeError(f"{path}: {exc}") from exc


def save_recipe(recipe: Recipe, path) -> None:
    Path(path).write_text(dump_recipe(recipe), encoding="utf-8")


def bundled_recipe_names() -> list[str]:
    """Names of the recipes shipped inside the package."""
    root = resources.files("oamsim") / "recipes"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Recipe:
    """Load a bundled recipe by bare name (no path, no extension)."""
    root = resources.files("oamsim") / "recipes"
    entry = root / f"{name}.json"
    if not entry.is_file():
        raise RecipeError(
            f"no bundled recipe named {name!r}; available: "
            + ", ".join(bundled_recipe_names())
        )
    return parse_recipe(entry.read_text(encoding="utf-8"))


def resolve_recipe(spec: str) -> tuple[str, Recipe]:
    """Resolve a CLI recipe argument: a file path if one exists, else a
    bundled name.  Returns (stem, recipe); the stem names output files."""
    path = Path(spec)
    if path.is_file():
        return path.stem, load_recipe(path)
    return spec, load_bundled(spec)
