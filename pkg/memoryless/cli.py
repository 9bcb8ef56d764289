"""
Command-line front end:

  memoryless validate MAP_FILE
  memoryless model --model twoqubit --param omega=1 --t 1 [--kind B]
  memoryless intermediate --model twoqubit --param omega=1 --t1 1 --t2 2
  memoryless sweep --model werner --param profile=cospow2m --grid M=1,3,5 --t1 1 --mu 1.01:6:0.01
  memoryless concurrence --profile cospow2m --param M=1 --t 0:3.14:0.01
  memoryless oracle --which all

Exit codes: 0 CP (or success), 1 constraint violation (or failed oracle or no Choi spectrum), 2 NCP, 3 singular,
64 usage or input error, 73 output not writable.
"""
import io
import json
import sys
from argparse import ArgumentParser, Namespace
from collections import OrderedDict
from pathlib import Path

from typing import Optional, List, Any, Dict, Callable

from memoryless.configuration import RunConfig, presets, parse_parameters, GridFormatException, LoggedRun
from memoryless.dilation import oracles
from memoryless.dynamical_map import load_map, StochasticMap, validate_a, validate_b, a_to_b, cp_classify, Verdict, \
    MapFormatException, MapKind, map_to_json
from memoryless.models import model_from_parameters, WernerModel
from memoryless.sweep import run_sweep, evaluate_point, save_records_csv, records_to_json, concurrence_trajectory, \
    save_trajectory_csv, trajectory_to_json
from memoryless.tensor import NotHermitianException, NonConvergenceException
from memoryless.tools import log, write_text

exit_cp = 0
exit_constraint_violation = 1
exit_ncp = 2
exit_singular = 3
exit_usage = 64
exit_cannot_create = 73

_exit_codes_by_verdict = {Verdict.cp: exit_cp, Verdict.ncp: exit_ncp, Verdict.singular: exit_singular}


class UsageException(Exception):
    pass


class _ArgumentParser(ArgumentParser):
    def error(self, message: str):
        raise UsageException(message)


def _global_options() -> ArgumentParser:
    options = _ArgumentParser(add_help=False)
    options.add_argument("--config", type=Path, help="Flat JSON file with the same keys as the flags.")
    options.add_argument("--tolerance", type=float, help="CP tolerance, default 1e-9 d.")
    options.add_argument("--format", choices=["csv", "json"])
    options.add_argument("--output", help="Output file, standard output if omitted.")
    options.add_argument("--log-file", type=Path)
    return options


def _preset_names(subcommand: str) -> List[str]:
    return [name for name, preset in presets.items() if preset().subcommand == subcommand]


def _parser() -> ArgumentParser:
    parser = _ArgumentParser(prog="memoryless",
                             description="Intermediate maps of non-Markovian qubit dynamics and their complete positivity.")
    subparsers = parser.add_subparsers(dest="subcommand")
    subparsers.required = True
    options = _global_options()

    validate = subparsers.add_parser("validate", parents=[options], help="Check a map file and classify its Choi matrix.")
    validate.add_argument("file", type=Path)

    model = subparsers.add_parser("model", parents=[options], help="Write A(t, 0) of a model as a map file.")
    model.add_argument("--model")
    model.add_argument("--param", action="append", metavar="KEY=VALUE")
    model.add_argument("--t", type=float)
    model.add_argument("--kind", choices=[kind.value for kind in MapKind])

    intermediate = subparsers.add_parser("intermediate", parents=[options],
                                         help="Classify the intermediate map B(t2, t1) of a model.")
    intermediate.add_argument("--model")
    intermediate.add_argument("--param", action="append", metavar="KEY=VALUE")
    intermediate.add_argument("--t1", type=float)
    intermediate.add_argument("--t2", type=float)

    sweep = subparsers.add_parser("sweep", parents=[options], help="Intermediate-map spectra over a mu grid.")
    sweep.add_argument("--preset", choices=_preset_names("sweep"))
    sweep.add_argument("--model")
    sweep.add_argument("--param", action="append", metavar="KEY=VALUE")
    sweep.add_argument("--grid", action="append", metavar="KEY=SPEC",
                       help="Parameter grid, start:stop:step or a comma list; repeatable.")
    sweep.add_argument("--t1", type=float)
    sweep.add_argument("--mu", metavar="SPEC")
    sweep.add_argument("--processes", type=int)
    sweep.add_argument("--plot", type=Path, metavar="DIRECTORY")

    concurrence = subparsers.add_parser("concurrence", parents=[options],
                                        help="Concurrence of the Jamiolkowski state of the Werner map along p(t).")
    concurrence.add_argument("--preset", choices=_preset_names("concurrence"))
    concurrence.add_argument("--profile")
    concurrence.add_argument("--param", action="append", metavar="KEY=VALUE")
    concurrence.add_argument("--t", metavar="SPEC")
    concurrence.add_argument("--plot", type=Path, metavar="DIRECTORY")

    oracle = subparsers.add_parser("oracle", parents=[options], help="Cross-check closed forms against dilations.")
    oracle.add_argument("--which", choices=list(oracles) + ["all"])

    return parser


def _run_config(arguments: Namespace) -> RunConfig:
    preset = getattr(arguments, "preset", None)
    config = presets[preset]() if preset else RunConfig(subcommand=arguments.subcommand)
    if arguments.config is not None:
        config = config.merged_with(RunConfig.load(arguments.config).as_dict())

    def flag(name: str) -> Any:
        return getattr(arguments, name, None)

    return config.merged_with(OrderedDict([
        ("subcommand", arguments.subcommand),
        ("model", flag("model")),
        ("parameters", parse_parameters(flag("param")) if flag("param") else None),
        ("grid", parse_parameters(flag("grid")) if flag("grid") else None),
        ("mu", flag("mu")),
        ("t", flag("t")),
        ("t1", flag("t1")),
        ("t2", flag("t2")),
        ("output", flag("output")),
        ("format", flag("format")),
        ("tolerance", flag("tolerance")),
        ("processes", flag("processes")),
        ("profile", flag("profile")),
        ("kind", flag("kind")),
        ("which", flag("which"))]))


def _required(value: Any, name: str) -> Any:
    if value is None:
        raise UsageException("{} is required.".format(name))

    return value


def _number(value: Any, name: str) -> float:
    try:
        return float(_required(value, name))
    except (TypeError, ValueError):
        raise UsageException("{} must be a number, got {}.".format(name, value))


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return

    write_text(Path(output), text)
    log("Wrote {}.".format(output))


def _csv_text(save: Callable[[Any], None]) -> str:
    buffer = io.StringIO(newline='')
    save(buffer)
    return buffer.getvalue()


def _json_text(value: Any) -> str:
    return json.dumps(value, indent=1) + "\n"


def cmd_validate(config: RunConfig, arguments: Namespace) -> int:
    map = load_map(arguments.file)
    if isinstance(map, StochasticMap):
        report = validate_a(map)
        choi = a_to_b(map)
    else:
        report = validate_b(map)
        choi = map

    try:
        cp_report = cp_classify(choi, config.tolerance)
    except (NotHermitianException, NonConvergenceException) as e:
        cp_report = None
        log("No Choi spectrum: {}".format(e))

    if config.format == "json":
        _emit(_json_text(OrderedDict([
            ("valid", report.is_valid),
            ("violations", OrderedDict((violation.constraint, violation.magnitude)
                                       for violation in report.violations)),
            ("eigenvalues", None if cp_report is None else [float(value) for value in cp_report.eigenvalues]),
            ("lambda_min", None if cp_report is None else float(cp_report.min_eigenvalue)),
            ("verdict", None if cp_report is None else cp_report.verdict.value)])), config.output)
    else:
        _emit("{}\n{}\n".format(report, "Choi spectrum not available." if cp_report is None else cp_report),
              config.output)

    if not report.is_valid or cp_report is None:
        return exit_constraint_violation

    return _exit_codes_by_verdict[cp_report.verdict]


def cmd_model(config: RunConfig, arguments: Namespace) -> int:
    model = model_from_parameters(_required(config.model, "--model"), config.parameters)
    t = _number(config.t, "--t")
    try:
        kind = MapKind(config.kind)
    except ValueError:
        raise UsageException("kind must be A or B, got {}.".format(config.kind))

    a_map = model.a_map(t)
    log("Built A({}, 0) of {}.".format(t, model))
    _emit(map_to_json(a_map if kind == MapKind.a else a_to_b(a_map)) + "\n", config.output)
    return exit_cp


def cmd_intermediate(config: RunConfig, arguments: Namespace) -> int:
    model_name = _required(config.model, "--model")
    t1 = _number(config.t1, "--t1")
    t2 = _number(config.t2, "--t2")
    if not 0 < t1 < t2:
        raise UsageException("Need t2 > t1 > 0, got t1={}, t2={}.".format(t1, t2))

    record = evaluate_point(model_name, config.parameters, t1, t2 / t1, config.tolerance)
    log(record)
    _emit(_json_text(record.to_json_object()), config.output)
    return _exit_codes_by_verdict[record.verdict]


def cmd_sweep(config: RunConfig, arguments: Namespace) -> int:
    if config.processes < 1:
        raise UsageException("processes must be positive, got {}.".format(config.processes))

    records = run_sweep(_required(config.model, "--model"), config.parameters, _number(config.t1, "--t1"),
                        config.mu_grid(), config.parameter_grid(), config.tolerance, config.processes)

    _emit(records_to_json(records) + "\n" if config.format == "json"
          else _csv_text(lambda file: save_records_csv(records, file)), config.output)

    if getattr(arguments, "plot", None) is not None:
        from memoryless.sweep_plotter import SweepPlotter
        log("Saved {}.".format(SweepPlotter(records).save_regime_plot(arguments.plot)))

    return exit_cp


def cmd_concurrence(config: RunConfig, arguments: Namespace) -> int:
    parameters = OrderedDict(config.parameters)
    if config.profile is not None:
        parameters["profile"] = config.profile

    model = model_from_parameters(WernerModel.name, parameters)
    points = concurrence_trajectory(model.profile, config.t_grid())

    _emit(trajectory_to_json(points) + "\n" if config.format == "json"
          else _csv_text(lambda file: save_trajectory_csv(points, file)), config.output)

    if getattr(arguments, "plot", None) is not None:
        from memoryless.sweep_plotter import ConcurrencePlotter
        log("Saved {}.".format(ConcurrencePlotter({str(model): points}).save_concurrence_plot(
            arguments.plot, name="concurrence_{}".format(model.profile.name))))

    return exit_cp


def cmd_oracle(config: RunConfig, arguments: Namespace) -> int:
    names = list(oracles) if config.which == "all" else [config.which]
    unknown = [name for name in names if name not in oracles]
    if unknown:
        raise UsageException("Unknown oracle {}, expected one of {}.".format(
            ", ".join(unknown), ", ".join(list(oracles) + ["all"])))

    reports = [report for name in names for report in oracles[name]()]
    if config.format == "json":
        _emit(_json_text([OrderedDict([("name", report.name), ("max_deviation", report.max_deviation),
                                       ("tolerance", report.tolerance), ("checks", report.check_count),
                                       ("passed", report.passed)]) for report in reports]), config.output)
    else:
        _emit("".join("{}\n".format(report) for report in reports), config.output)

    return exit_cp if all(report.passed for report in reports) else exit_constraint_violation


_commands = {"validate": cmd_validate,
             "model": cmd_model,
             "intermediate": cmd_intermediate,
             "sweep": cmd_sweep,
             "concurrence": cmd_concurrence,
             "oracle": cmd_oracle}  # type: Dict[str, Callable[[RunConfig, Namespace], int]]


def main(argv: Optional[List[str]] = None) -> int:
    try:
        arguments = _parser().parse_args(argv)
        config = _run_config(arguments)

        def run() -> int:
            return _commands[arguments.subcommand](config, arguments)

        if arguments.log_file is not None:
            return LoggedRun(run, name=arguments.log_file.name, results_directory=arguments.log_file.parent)()

        return run()
    except OSError as e:
        log("Cannot write output: {}".format(e))
        return exit_cannot_create
    except (UsageException, GridFormatException, MapFormatException, ValueError) as e:
        log("Error: {}".format(e))
        return exit_usage
    except NonConvergenceException as e:
        log("No Choi spectrum: {}".format(e))
        return exit_constraint_violation


if __name__ == '__main__':
    raise SystemExit(main())
