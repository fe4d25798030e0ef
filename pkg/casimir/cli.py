"""Command-line interface: ``casimir force|analyze|budget|roughness``."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
import sys

from .config import RUN_MODEL_KINDS, RunConfig, default_config, load_config
from .const import EXIT_OK, VERSION, Command
from .coordinator import CasimirCoordinator
from .exceptions import CasimirError, DomainError
from .report import (
    RenderedOutput,
    render_analysis,
    render_budget,
    render_force,
    render_roughness,
    write_outputs,
)

_LOGGER = logging.getLogger(__name__)


def separation_list(text: str) -> list[float]:
    """Parse a comma-separated list of separations in nm."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"invalid separation list: {text!r}") from err
    if any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("separations must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run configuration file")
    common.add_argument("--beta", type=float, help="confidence level")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument(
        "--model",
        choices=[kind.value for kind in RUN_MODEL_KINDS],
        help="permittivity model",
    )
    common.add_argument(
        "--temperature", type=float, metavar="KELVIN", help="temperature in K"
    )
    common.add_argument(
        "-v", "--verbose", action="store_true", help="log debug messages"
    )

    parser = argparse.ArgumentParser(
        prog="casimir",
        description="Sphere-plate Casimir force and experiment-theory comparison.",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    force = commands.add_parser(
        Command.FORCE, parents=[common], help="force table at given separations"
    )
    force.add_argument(
        "--z", type=separation_list, default=[], metavar="LIST", help="nm"
    )
    commands.add_parser(
        Command.ANALYZE, parents=[common], help="error analysis and theory fit"
    )
    budget = commands.add_parser(
        Command.BUDGET, parents=[common], help="theoretical error budget"
    )
    budget.add_argument(
        "--z", type=separation_list, required=True, metavar="NM", help="nm"
    )
    commands.add_parser(
        Command.ROUGHNESS, parents=[common], help="roughness statistics"
    )
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Load the configuration named on the command line and apply overrides."""
    config = load_config(args.config) if args.config else default_config()
    return config.with_overrides(
        beta=args.beta, out=args.out, model=args.model, temperature=args.temperature
    )


def cmd_force(config: RunConfig, z_list: Sequence[float]) -> RenderedOutput:
    """Return the force table at the given separations (nm)."""
    return render_force(config, CasimirCoordinator(config).run_force(z_list))


def cmd_analyze(config: RunConfig) -> RenderedOutput:
    """Return the experiment-versus-theory analysis."""
    return render_analysis(config, CasimirCoordinator(config).run_analyze())


def cmd_budget(config: RunConfig, z: float) -> RenderedOutput:
    """Return the theoretical error budget at one separation (nm)."""
    return render_budget(config, CasimirCoordinator(config).run_budget(z))


def cmd_roughness(config: RunConfig) -> RenderedOutput:
    """Return the roughness statistics."""
    return render_roughness(config, CasimirCoordinator(config).run_roughness())


def run_command(args: argparse.Namespace, config: RunConfig) -> RenderedOutput:
    """Run one subcommand and return its rendered output."""
    _LOGGER.info("Running %s", args.command)
    match Command(args.command):
        case Command.FORCE:
            return cmd_force(config, args.z)
        case Command.ANALYZE:
            return cmd_analyze(config)
        case Command.BUDGET:
            if len(args.z) != 1:
                raise DomainError("budget takes exactly one separation")
            return cmd_budget(config, args.z[0])
        case Command.ROUGHNESS:
            return cmd_roughness(config)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_run_config(args)
        output = run_command(args, config)
        write_outputs(output, config.output_dir)
    except CasimirError as err:
        print(f"casimir: error: {err}", file=sys.stderr)
        return err.exit_status
    sys.stdout.write(output.report)
    return EXIT_OK
