"""Command-line surface: recipe in, images and reports out.

Subcommands cover the full pipeline: `synth` renders a superposition,
`holo` encodes it as a modulator frame, `interfere` produces the
spoke-pattern image (optionally through the photon-counting camera) plus
a ring-analysis CSV, and `identify` runs the inverse problem on any PGM
image.  `recipes` lists or prints the bundled fixtures.

Exit codes: 0 success; 2 bad usage or malformed recipe; 3 a physics or
geometry precondition failed (ring clips the grid, iris overlaps the zero
order, undersampled circle); 4 identification found no usable rings.
All outputs are deterministic given the recipe and seed, so repeated runs
are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import pgm
from .detector import photon_sample, resample
from .errors import OamsimError, RecipeError
from .hologram import quantize_phase, render_target, synthesize_hologram
from .identify import format_report, recover_spectrum
from .interferometer import Interferogram, interfere_exact, interferogram_analytic
from .modes import synthesize_field
from .recipe import (
    GridSpec,
    Recipe,
    bundled_recipe_names,
    dump_recipe,
    load_bundled,
    resolve_recipe,
    save_recipe,
)

#: Environment variable naming the default output directory.
OUT_ENV = "OAMSIM_OUT"

EXIT_OK = 0
EXIT_RECIPE = 2
EXIT_PRECONDITION = 3
EXIT_NO_RINGS = 4


def _out_dir(args) -> Path:
    out = Path(args.out_dir or os.environ.get(OUT_ENV, "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _recipe_n_fold(recipe: Recipe) -> int:
    folds = {c.mode.n_fold for c in recipe.spectrum.components}
    if len(folds) == 1:
        return folds.pop()
    print(
        "warning: recipe mixes n_fold values; assuming n_fold = 1 for ring analysis",
        file=sys.stderr,
    )
    return 1


def _write_ring_csv(path: Path, image, n_fold: int) -> None:
    """Ring analysis CSV; one row per detected ring."""
    result = recover_spectrum(image, assumed_n_fold=n_fold)
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "ring_index",
                "radius_px",
                "radius_m",
                "spoke_count",
                "power_fraction",
                "brightness",
                "inferred_abs_ell",
                "weight",
            ]
        )
        for i, ring in enumerate(result.rings):
            writer.writerow(
                [
                    i,
                    repr(ring.radius_px),
                    repr(ring.radius_m),
                    ring.spoke_count,
                    repr(ring.harmonic_power_fraction),
                    repr(ring.brightness),
                    repr(ring.inferred_abs_ell),
                    repr(ring.weight),
                ]
            )


def _cmd_synth(args) -> int:
    stem, recipe = resolve_recipe(args.recipe)
    grid = recipe.grid
    field = synthesize_field(recipe.spectrum, grid.width, grid.height, grid.pitch_m)
    out = _out_dir(args)
    intensity = np.abs(field.samples) ** 2
    pgm.write_pgm16_scaled(pgm.pgm_path(out, stem, "intensity"), intensity)
    pgm.write_pgm8(pgm.pgm_path(out, stem, "phase"), quantize_phase(np.angle(field.samples)))
    print(f"wrote {pgm.pgm_path(out, stem, 'intensity')}")
    print(f"wrote {pgm.pgm_path(out, stem, 'phase')}")
    return EXIT_OK


def _cmd_holo(args) -> int:
    stem, recipe = resolve_recipe(args.recipe)
    target = render_target(recipe.spectrum)
    holo = synthesize_hologram(
        target,
        grating=recipe.grating_spec(),
        intensity_shaping=not args.no_intensity_shaping,
    )
    out = _out_dir(args)
    path = pgm.pgm_path(out, stem, "hologram")
    pgm.write_pgm8(path, holo.gray)
    print(f"wrote {path}")
    return EXIT_OK


def _parse_detector_kv(pairs) -> dict:
    mapping: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise RecipeError(f"--detector expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        key = key.strip().replace("-", "_")
        key = {"flux": "mean_flux", "read_noise": "read_noise_sigma"}.get(key, key)
        if key in ("width", "height", "seed"):
            kind = int
        elif key in ("mean_flux", "read_noise_sigma"):
            kind = float
        else:
            raise RecipeError(f"unknown detector parameter {key!r}")
        try:
            mapping[key] = kind(value)
        except ValueError as exc:
            raise RecipeError(f"bad value for detector parameter {key}: {value!r}") from exc
    return mapping


def _cmd_interfere(args) -> int:
    stem, recipe = resolve_recipe(args.recipe)
    grid = recipe.grid
    if args.analytic:
        gram = interferogram_analytic(
            recipe.spectrum, grid.width, grid.height, grid.pitch_m
        )
    else:
        field = synthesize_field(recipe.spectrum, grid.width, grid.height, grid.pitch_m)
        gram = interfere_exact(field)
    out = _out_dir(args)
    n_fold = _recipe_n_fold(recipe)

    if args.detector is None:
        path = pgm.pgm_path(out, stem, "interferogram")
        pgm.write_pgm16_scaled(path, gram.intensity)
        _write_ring_csv(out / f"{stem}_rings.csv", gram, n_fold)
    else:
        merged = dict(recipe.detector or {})
        merged.update(_parse_detector_kv(args.detector))
        # Only an explicit width/height asks for sensor-grid rebinning;
        # otherwise counts are drawn at the synthesis resolution.
        wants_resample = "width" in merged or "height" in merged
        spec = recipe.detector_spec(**merged)
        if wants_resample:
            gram = resample(gram, spec)
        else:
            spec = recipe.detector_spec(
                **{**merged, "width": gram.width, "height": gram.height}
            )
        counts = photon_sample(gram, spec)
        path = pgm.pgm_path(out, stem, "counts")
        pgm.write_pgm16(path, np.minimum(counts.counts, 65535))
        _write_ring_csv(out / f"{stem}_rings.csv", counts, n_fold)
    print(f"wrote {path}")
    print(f"wrote {out / f'{stem}_rings.csv'}")
    return EXIT_OK


def _cmd_identify(args) -> int:
    image_path = Path(args.image)
    try:
        values = pgm.read_pgm(image_path)
    except (OSError, ValueError) as exc:
        raise RecipeError(f"cannot read image {image_path}: {exc}") from exc
    h, w = values.shape
    gram = Interferogram(w, h, args.pitch_m, values.astype(float))
    result = recover_spectrum(
        gram, assumed_n_fold=args.n_fold, waist_hint=args.waist_hint_m
    )
    report = format_report(result)
    print(report, end="")
    if result.recovered is None:
        print(f"error: no rings detected ({result.status})", file=sys.stderr)
        return EXIT_NO_RINGS
    out = _out_dir(args)
    recovered = Recipe(result.recovered, GridSpec(w, h, args.pitch_m))
    recipe_path = out / f"{image_path.stem}_recovered.json"
    save_recipe(recovered, recipe_path)
    print(f"wrote {recipe_path}")
    if args.report:
        report_path = out / f"{image_path.stem}_report.txt"
        report_path.write_text(report, encoding="utf-8")
        print(f"wrote {report_path}")
    return EXIT_OK


def _cmd_recipes(args) -> int:
    if args.name is None:
        for name in bundled_recipe_names():
            print(name)
        return EXIT_OK
    print(dump_recipe(load_bundled(args.name)), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamsim",
        description="Simulate and identify superpositions of high orbital-angular-momentum beams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument(
            "-o",
            "--out-dir",
            default=None,
            help=f"output directory (default: ${OUT_ENV} or current directory)",
        )

    p_synth = sub.add_parser("synth", help="render a recipe's field to intensity/phase images")
    p_synth.add_argument("recipe", help="recipe file path or bundled recipe name")
    add_out(p_synth)
    p_synth.set_defaults(func=_cmd_synth)

    p_holo = sub.add_parser("holo", help="encode a recipe as a modulator hologram")
    p_holo.add_argument("recipe", help="recipe file path or bundled recipe name")
    p_holo.add_argument(
        "--no-intensity-shaping",
        action="store_true",
        help="encode phase only, holding the blaze depth at 1",
    )
    add_out(p_holo)
    p_holo.set_defaults(func=_cmd_holo)

    p_int = sub.add_parser(
        "interfere", help="mirror-interfere a recipe and analyze the rings"
    )
    p_int.add_argument("recipe", help="recipe file path or bundled recipe name")
    mode = p_int.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact",
        action="store_true",
        help="synthesize the field and interfere it (default)",
    )
    mode.add_argument(
        "--analytic",
        action="store_true",
        help="use the closed-form p = 0 interferogram",
    )
    p_int.add_argument(
        "--detector",
        nargs="*",
        metavar="KEY=VALUE",
        default=None,
        help="sample photon counts; keys: flux, read-noise, seed, width, height "
        "(explicit width/height rebin onto that sensor)",
    )
    add_out(p_int)
    p_int.set_defaults(func=_cmd_interfere)

    p_id = sub.add_parser("identify", help="recover the spectrum from a PGM image")
    p_id.add_argument("image", help="PGM image (interferogram or photon counts)")
    p_id.add_argument("--n-fold", type=int, default=1, help="assumed helicity multiplier N")
    p_id.add_argument(
        "--pitch-m", type=float, default=1.0, help="pixel pitch of the image in meters"
    )
    p_id.add_argument(
        "--waist-hint-m",
        type=float,
        default=None,
        help="skip the waist fit and use this waist (meters)",
    )
    p_id.add_argument(
        "--report", action="store_true", help="also write the text report next to the recipe"
    )
    add_out(p_id)
    p_id.set_defaults(func=_cmd_identify)

    p_rec = sub.add_parser("recipes", help="list bundled recipes or print one")
    p_rec.add_argument("name", nargs="?", default=None, help="recipe name to print")
    p_rec.set_defaults(func=_cmd_recipes)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RECIPE
    except OamsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
