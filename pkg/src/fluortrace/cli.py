"""
Command-line interface.

Commands:
    render    Render a scene file to PNG, scene-spectrum CSV and FLSPD dump
    validate  Run the spectroscopic validation protocols for a dye
    spectra   Show a dye's spectral data and optionally export it as CSV

Exit codes: 0 on success, 1 for scene, data, configuration or validation
failures, 2 for file input/output errors.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .config import ToolConfig, set_config
from .errors import FilmIOError, FluorTraceError
from .film import write_outputs
from .fluorophore import FluorophoreDatabase
from .render import render
from .scene import load_scene
from .spectral import WavelengthGrid, resample
from .validation import Tolerances, ValidationReport, profile_test, scaling_test, validation_scene, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all commands."""
    parser = argparse.ArgumentParser(
        prog="fluortrace", description="Spectral volumetric fluorescence path tracer"
    )
    parser.add_argument("--db", default=None, help="Fluorophore database directory (overrides FLUOR_DB)")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level for messages on standard error (default: INFO)",
    )
    parser.add_argument("--quiet", action="store_true", help="Suppress per-tile progress lines")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads (default: 1)")
    commands = parser.add_subparsers(dest="command", required=True)

    p_render = commands.add_parser("render", help="Render a scene file")
    p_render.add_argument("scene", help="Scene file (YAML or JSON)")
    p_render.add_argument("--spp", type=int, default=None, help="Samples per pixel per wavelength")
    p_render.add_argument("--seed", type=int, default=None, help="Random seed")
    p_render.add_argument("--out", default=None, help="Output basename (default: scene file stem)")
    p_render.add_argument("--width", type=int, default=None, help="Film width override")
    p_render.add_argument("--height", type=int, default=None, help="Film height override")
    p_render.add_argument("--exposure", type=float, default=None, help="Linear PNG exposure (default: automatic)")
    p_render.add_argument(
        "--elastic", action="store_true", default=None, help="Add elastic transport (visible lights)"
    )
    _add_threads(p_render)

    p_validate = commands.add_parser("validate", help="Run validation protocols for a dye")
    p_validate.add_argument("dye", help="Dye name, e.g. 488 or 'Alexa Fluor 488'")
    p_validate.add_argument("--test", choices=["profile", "scaling", "all"], default="all")
    p_validate.add_argument("--spp", type=int, default=None, help="Samples per pixel per wavelength")
    p_validate.add_argument("--seed", type=int, default=None, help="Random seed")
    p_validate.add_argument("--width", type=int, default=None, help="Film width override")
    p_validate.add_argument("--height", type=int, default=None, help="Film height override")
    p_validate.add_argument(
        "--lambdas", type=float, nargs="+", default=None,
        help="Scaling-test excitation wavelengths (default: peak-45, peak-20, peak nm)",
    )
    p_validate.add_argument("--out", default=None, help="Report basename (default: validation_<dye>)")
    p_validate.add_argument("--rmse-tolerance", type=float, default=Tolerances.rmse)
    p_validate.add_argument("--peak-tolerance", type=float, default=Tolerances.peak_nm)
    p_validate.add_argument("--scaling-tolerance", type=float, default=Tolerances.scaling)
    _add_threads(p_validate)

    p_spectra = commands.add_parser("spectra", help="Show a dye's spectral data")
    p_spectra.add_argument("dye", help="Dye name")
    p_spectra.add_argument("--csv", default=None, help="Export excitation and emission to this CSV file")
    p_spectra.add_argument(
        "--grid", type=float, nargs=3, metavar=("MIN", "MAX", "STEP"), default=None,
        help="Export grid in nm (default: 300 800 1)",
    )
    return parser


def _add_threads(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads", dest="command_threads", type=int, default=None,
        help="Worker threads (overrides the global option)",
    )


def _resolution(args: argparse.Namespace, scene) -> Optional[tuple]:
    if args.width is None and args.height is None:
        return None
    return (args.width or scene.camera.width, args.height or scene.camera.height)


def cmd_render(args: argparse.Namespace, tool: ToolConfig) -> int:
    scene = load_scene(args.scene)
    config = scene.render.with_overrides(
        spp=args.spp,
        seed=args.seed,
        elastic_component=args.elastic,
        resolution=_resolution(args, scene),
        exposure=args.exposure,
    )
    start = time.perf_counter()
    film = render(scene, config, threads=tool.threads)
    elapsed = time.perf_counter() - start

    basename = args.out or Path(args.scene).with_suffix("").name
    paths = write_outputs(film, basename, exposure=config.exposure)
    traced = film.width * film.height * config.grid.count * config.spp
    print(f"Rendered {traced} paths in {elapsed:.2f}s ({traced / max(elapsed, 1e-9):,.0f} paths/s)")
    print(f"FLSPD checksum {film.checksum()}")
    for path in paths:
        print(f"Wrote {path}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, tool: ToolConfig) -> int:
    db = FluorophoreDatabase(tool.database.path)
    dye = db.get(args.dye)
    scene = validation_scene(args.dye, db)
    config = scene.render.with_overrides(spp=args.spp, seed=args.seed, resolution=_resolution(args, scene))
    tolerances = Tolerances(args.rmse_tolerance, args.peak_tolerance, args.scaling_tolerance)

    report = ValidationReport(dye=dye.name, tolerances=tolerances)
    if args.test in ("profile", "all"):
        report = report.merge(profile_test(scene, dye, config, threads=tool.threads, tolerances=tolerances))
    if args.test in ("scaling", "all"):
        peak = dye.excitation_peak
        lambdas = args.lambdas or [peak - 45.0, peak - 20.0, peak]
        report = report.merge(scaling_test(scene, dye, lambdas, config, threads=tool.threads, tolerances=tolerances))

    basename = args.out or f"validation_{db.resolve(args.dye)}"
    write_report(report, basename)
    print(report.summary())
    return EXIT_OK if report.pass_ else EXIT_FAILURE


def cmd_spectra(args: argparse.Namespace, tool: ToolConfig) -> int:
    db = FluorophoreDatabase(tool.database.path)
    dye = db.get(args.dye)
    print(f"{dye.label}")
    print(f"  excitation peak: {dye.excitation_peak:g} nm")
    print(f"  emission peak:   {dye.emission_peak:g} nm")
    print(f"  epsilon_max:     {dye.epsilon_max:g} L/(mol*cm)")
    print(f"  quantum yield:   {dye.quantum_yield:g}")

    if args.csv:
        grid = WavelengthGrid(*args.grid) if args.grid else WavelengthGrid()
        frame = pd.DataFrame(
            {
                "wavelength": grid.wavelengths,
                "excitation": resample(dye.excitation, grid).values,
                "emission": resample(dye.emission, grid).values,
            }
        )
        frame.to_csv(args.csv, index=False, lineterminator="\n", float_format="%.9g")
        print(f"Wrote {args.csv}")
    return EXIT_OK


COMMANDS = {"render": cmd_render, "validate": cmd_validate, "spectra": cmd_spectra}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name; ``sys.argv[1:]`` if None

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    tool = ToolConfig(args)
    set_config(tool)
    logging.basicConfig(level=tool.logging.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        return COMMANDS[args.command](args, tool)
    except (FilmIOError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except FluorTraceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
