"""
Command-line front end

Every subcommand resolves a RunConfig (flags over config file over
defaults), runs one computation and writes its tables as CSV or JSON to
stdout or to --out. Exit status: 0 success, 1 usage error, 2 computation
error, 3 verification failure.
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from gsws import __version__
from gsws.core.config import settings
from gsws.core.exceptions import GswsException, ValidationError, VerificationError
from gsws.core.logging import StructuredLogger, get_logger, setup_logging
from gsws.core.validation import validate_sample_count, validate_sample_range
from gsws.instrumentation.metrics import write_metrics
from gsws.schemas.potential import MwsParams
from gsws.schemas.run_config import Command, RunConfig, load_config_file, resolve_run_config
from gsws.services.potential import (
    MatchingScheme,
    Parity,
    SolverConfig,
    potential_gsws,
    potential_mws,
    potential_ws,
)
from gsws.services.resonance import find_quasibound
from gsws.services.scattering import (
    SweepAxis,
    find_resonances,
    reflection_transmission,
    resonance_residual,
    sweep,
)
from gsws.services.spectrum import bound_wavefunction, find_bound_states
from gsws.services.table_export import write_tables
from gsws.services.verification import run_verification

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)

Tables = Dict[str, pd.DataFrame]


class CommandLineParser(argparse.ArgumentParser):
    """Argument parser whose usage errors map to exit status 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _parse_pair(text) -> List[int]:
    """'P,Q' (or a two-element list from a config file) -> [P, Q]"""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected P,Q, got {text!r}")
    try:
        return [int(parts[0]), int(parts[1])]
    except ValueError:
        raise argparse.ArgumentTypeError(f"P and Q must be integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = CommandLineParser(add_help=False)
    group = common.add_argument_group("potential and output")
    group.add_argument("--v0", type=float, help="Well depth V0 (MeV)")
    group.add_argument("--w0", type=float, help="Surface term W0 (MeV)")
    group.add_argument("--a", type=float, help="Diffuseness a (1/fm)")
    group.add_argument("--L", type=float, help="Half width L (fm)")
    group.add_argument("--mass", type=float, help="Rest energy mc^2 (MeV)")
    group.add_argument("--hbarc", type=float, help="hbar c (MeV fm)")
    group.add_argument("--scheme", choices=[s.value for s in MatchingScheme], help="Matching at x = 0")
    group.add_argument("--format", choices=["csv", "json"], help="Output format (default csv)")
    group.add_argument("--out", type=Path, help="Output path (default stdout)")
    group.add_argument("--config", type=Path, help="JSON config file")
    group.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Log level (default from settings)",
    )
    group.add_argument("--metrics-file", type=Path, help="Write Prometheus metrics here after the run")

    parser = CommandLineParser(prog="gsws", description="GSWS potential analytic solver")
    parser.add_argument("--version", action="version", version=f"gsws {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    potential = sub.add_parser("potential", parents=[common], help="Potential profiles")
    potential.add_argument("--x-min", dest="x_min", type=float)
    potential.add_argument("--x-max", dest="x_max", type=float)
    potential.add_argument("--samples", type=int)
    potential.add_argument("--mws", action="append", type=_parse_pair, help="Add an MWS column for P,Q")

    scatter = sub.add_parser("scatter", parents=[common], help="R and T along one axis")
    scatter.add_argument("--axis", choices=[a.value for a in SweepAxis])
    scatter.add_argument("--min", dest="min", type=float)
    scatter.add_argument("--max", dest="max", type=float)
    scatter.add_argument("--steps", type=int)
    scatter.add_argument("--energy", type=float, help="Fixed energy for non-energy axes (MeV)")
    scatter.add_argument("--workers", type=int, help="Thread pool size")

    for name, help_text in (("bound", "Bound spectrum"), ("quasibound", "Quasi-bound states")):
        states = sub.add_parser(name, parents=[common], help=help_text)
        states.add_argument("--parity", choices=["even", "odd", "both"])
        states.add_argument("--dump-wavefunctions", dest="dump_wavefunctions", action="store_true", default=None)
        states.add_argument("--x-samples", dest="x_samples", type=int)
        if name == "bound":
            states.add_argument("--normalize", action="store_true", default=None)
        else:
            states.add_argument("--window-min", dest="window_min", type=float)
            states.add_argument("--window-max", dest="window_max", type=float)

    resonances = sub.add_parser("resonances", parents=[common], help="Transmission resonances")
    resonances.add_argument("--min", dest="min", type=float)
    resonances.add_argument("--max", dest="max", type=float)

    verify = sub.add_parser("verify", parents=[common], help="Oracle-versus-analytic suite")
    verify.add_argument(
        "--corrupt-theta-branch",
        dest="corrupt_theta_branch",
        action="store_true",
        default=None,
        help="Negative control: break the theta-branch symmetry",
    )
    verify.add_argument("--quick", action="store_true", default=None, help="Skip the slowest checks")
    return parser


def _parities(choice: str) -> Tuple[Parity, ...]:
    if choice == "both":
        return (Parity.EVEN, Parity.ODD)
    if choice not in ("even", "odd"):
        raise ValidationError(f"Unknown parity {choice!r}")
    return (Parity(choice),)


def _solver(config: RunConfig) -> SolverConfig:
    return SolverConfig(scheme=MatchingScheme(config.scheme))


def cmd_potential(config: RunConfig) -> Tables:
    options = config.options
    validate_sample_range(options["x_min"], options["x_max"], options["samples"])
    params = config.params
    x = np.linspace(options["x_min"], options["x_max"], options["samples"])
    columns = {
        "x_fm": x,
        "V_gsws_MeV": potential_gsws(params, x),
        "V_ws_MeV": potential_ws(params, x),
    }
    for pair in options["mws"]:
        try:
            p, q = _parse_pair(pair)
        except argparse.ArgumentTypeError as e:
            raise ValidationError(str(e))
        mws = MwsParams(v0=params.v0, a=params.a, L=params.L, p=p, q=q)
        columns[f"V_mws_p{p}_q{q}_MeV"] = potential_mws(mws, x)
    return {"potential": pd.DataFrame(columns)}


def cmd_scatter(config: RunConfig) -> Tables:
    options = config.options
    table = sweep(
        config.params,
        SweepAxis(options["axis"]),
        options["min"],
        options["max"],
        options["steps"],
        fixed_energy=options["energy"],
        solver=_solver(config),
        max_workers=options["workers"],
    )
    return {"scatter": table}


def cmd_bound(config: RunConfig) -> Tables:
    options = config.options
    validate_sample_count(options["x_samples"])
    states = find_bound_states(
        config.params,
        _solver(config),
        parities=_parities(options["parity"]),
        x_samples=options["x_samples"],
    )
    table = pd.DataFrame(
        {
            "label": [s.index for s in states],
            "parity": [s.parity.value for s in states],
            "E_MeV": [s.energy for s in states],
            "E_wavefunction_MeV": [s.sampled_energy for s in states],
            "nodes": [s.nodes for s in states],
        }
    )
    tables = {"states": table}
    if options["dump_wavefunctions"]:
        columns: Dict[str, np.ndarray] = {}
        if states:
            columns["x_fm"] = states[0].x
        for state in states:
            values = state.wavefunction
            if options["normalize"]:
                values = bound_wavefunction(config.params, state, state.x, normalize=True)
            columns[f"psi_n{state.index}_{state.parity.value}"] = np.real(values)
        tables["wavefunctions"] = pd.DataFrame(columns)
    return tables


def cmd_quasibound(config: RunConfig) -> Tables:
    options = config.options
    validate_sample_count(options["x_samples"])
    window = (options["window_min"], options["window_max"])
    states = []
    for parity in _parities(options["parity"]):
        states += find_quasibound(config.params, parity, window, _solver(config), options["x_samples"])
    states.sort(key=lambda s: (s.e_r, s.parity.value))

    table = pd.DataFrame(
        {
            "label": [s.index for s in states],
            "parity": [s.parity.value for s in states],
            "E_r_MeV": [s.e_r for s in states],
            "E_i_MeV": [s.e_i for s in states],
            "E_wavefunction_r_MeV": [s.sampled_energy.real for s in states],
            "E_wavefunction_i_MeV": [-s.sampled_energy.imag for s in states],
            "linked_resonance_MeV": [
                np.nan if s.linked_resonance is None else s.linked_resonance for s in states
            ],
            "over_barrier": [s.over_barrier for s in states],
            "residual": [s.residual for s in states],
            "iterations": [s.iterations for s in states],
        }
    )
    tables = {"states": table}
    if options["dump_wavefunctions"]:
        columns: Dict[str, np.ndarray] = {}
        if states:
            columns["x_fm"] = states[0].x
        for state in states:
            columns[f"psi_n{state.index}_{state.parity.value}"] = np.asarray(state.wavefunction, dtype=complex)
        tables["wavefunctions"] = pd.DataFrame(columns)
    return tables


def cmd_resonances(config: RunConfig) -> Tables:
    options = config.options
    solver = _solver(config)
    energies = find_resonances(config.params, options["min"], options["max"], solver)
    rows = []
    for energy in energies:
        result = reflection_transmission(config.params, energy, solver)
        rows.append(
            {
                "E_MeV": energy,
                "R": result.r,
                "T": result.t,
                "residual": resonance_residual(config.params, energy, SolverConfig()),
            }
        )
    return {"resonances": pd.DataFrame(rows, columns=["E_MeV", "R", "T", "residual"])}


def cmd_verify(config: RunConfig) -> Tables:
    options = config.options
    previous = settings.DEBUG_CORRUPT_THETA_BRANCH
    settings.DEBUG_CORRUPT_THETA_BRANCH = bool(options["corrupt_theta_branch"])
    try:
        report = run_verification(config.params, quick=bool(options["quick"]))
    finally:
        settings.DEBUG_CORRUPT_THETA_BRANCH = previous
    return {"verification": report}


def ensure_verified(report: pd.DataFrame) -> None:
    """
    Raises:
        VerificationError: If any check in the report failed
    """
    failed = report.loc[~report["passed"], "check"].tolist()
    if failed:
        raise VerificationError(
            f"{len(failed)} verification check(s) failed: " + ", ".join(failed),
            details={"failed": failed},
        )


COMMANDS: Dict[Command, Callable[[RunConfig], Tables]] = {
    Command.POTENTIAL: cmd_potential,
    Command.SCATTER: cmd_scatter,
    Command.BOUND: cmd_bound,
    Command.QUASIBOUND: cmd_quasibound,
    Command.RESONANCES: cmd_resonances,
    Command.VERIFY: cmd_verify,
}

_NON_CONFIG_ARGS = {"command", "config", "log_level", "metrics_file"}


def _resolve(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command)
    cli = {key: value for key, value in vars(args).items() if key not in _NON_CONFIG_ARGS}
    file_values = load_config_file(args.config) if args.config is not None else {}
    return resolve_run_config(command, cli, file_values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version
        return 0 if e.code in (0, None) else 1
    except ValidationError as e:
        print(f"gsws: error: {e.message}", file=sys.stderr)
        return e.exit_code

    setup_logging(level=args.log_level)
    try:
        try:
            config = _resolve(args)
        except (PydanticValidationError, ValueError) as e:
            raise ValidationError(f"Invalid configuration: {e}")

        tables = COMMANDS[config.command](config)
        write_tables(
            tables,
            config.echo(),
            config.output_format.value,
            config.output_path,
            stream=sys.stdout,
        )
        # the report is written before a failed run is signalled
        if "verification" in tables:
            ensure_verified(tables["verification"])
        return 0
    except GswsException as e:
        structured_logger.log_error("command_failed", e, command=args.command, details=e.details)
        print(f"gsws: error: {e.message}", file=sys.stderr)
        return e.exit_code
    except (ArithmeticError, ValueError) as e:
        structured_logger.log_error("command_failed", e, command=args.command)
        print(f"gsws: error: {e}", file=sys.stderr)
        return 2
    finally:
        if args.metrics_file is not None:
            write_metrics(args.metrics_file)


if __name__ == "__main__":
    raise SystemExit(main())
