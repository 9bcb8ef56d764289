import json
import logging
import math
from collections import OrderedDict
from pathlib import Path

from typing import List, Callable, Optional, Dict, Any, Union

from memoryless.tools import home_directory, mkdir, write_text, logger, read_text


class GridFormatException(ValueError):
    pass


class DataDirectories:
    def __init__(self, data_directory: Path = home_directory() / "memoryless-data"):
        self.data_directory = data_directory
        self.logs_directory = data_directory / "logs"


default_data_directories = DataDirectories()


def _numbers(parts: List[Any], specification: Any) -> List[float]:
    try:
        return [float(part) for part in parts]
    except (TypeError, ValueError) as e:
        raise GridFormatException("Cannot parse grid '{}': {}".format(specification, e))


def parse_grid(specification: Union[str, List[float]]) -> List[float]:
    """
    Parses "start:stop:step" (stop included when hit within round-off), a comma list "1,1.5,2"
    or, from config files, a JSON list of numbers.
    :return: Non-empty, strictly ascending values.
    """
    if isinstance(specification, (list, tuple)):
        values = _numbers(specification, specification)
    elif ":" in str(specification):
        parts = _numbers(str(specification).split(":"), specification)
        if len(parts) != 3:
            raise GridFormatException("Range grid must be start:stop:step, got '{}'.".format(specification))

        start, stop, step = parts
        if step <= 0 or stop < start:
            raise GridFormatException("Range grid needs step > 0 and stop >= start, got '{}'.".format(specification))

        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + index * step for index in range(count)]
    else:
        values = _numbers([part for part in str(specification).split(",") if part.strip() != ""], specification)

    if len(values) == 0:
        raise GridFormatException("Grid '{}' is empty.".format(specification))
    if any(b <= a for a, b in zip(values, values[1:])):
        raise GridFormatException("Grid '{}' is not strictly ascending.".format(specification))

    return values


def parse_parameters(assignments: List[str]) -> Dict[str, str]:
    """
    "key=value" assignments; values stay strings until the model factory converts them.
    """
    parameters = OrderedDict()
    for assignment in assignments:
        if "=" not in assignment:
            raise GridFormatException("Parameter must be key=value, got '{}'.".format(assignment))

        key, value = assignment.split("=", 1)
        parameters[key.strip()] = value.strip()

    return parameters


def _assignments(value: Union[Dict[str, Any], List[str]]) -> Dict[str, Any]:
    """
    A JSON object as is, or a list of "key=value" strings as given to --param and --grid.
    """
    if isinstance(value, dict):
        return value
    if isinstance(value, list) and all(isinstance(item, str) for item in value):
        return parse_parameters(value)

    raise GridFormatException("Expected an object or a list of key=value strings, got {}.".format(value))


class RunConfig:
    """
    Everything a CLI run needs. Built from an optional flat JSON file, then overridden by command-line flags.
    """
    keys = ["model", "parameters", "t1", "t2", "t", "mu", "grid", "output", "format", "tolerance", "processes",
            "profile", "kind", "which"]

    def __init__(self,
                 subcommand: Optional[str] = None,
                 model: Optional[str] = None,
                 parameters: Optional[Dict[str, Any]] = None,
                 # grid specifications, still unparsed: "mu" for sweeps, "t" for trajectories, "grid" per parameter
                 mu: Optional[str] = None,
                 t: Optional[str] = None,
                 grid: Optional[Dict[str, str]] = None,
                 t1: Optional[float] = None,
                 t2: Optional[float] = None,
                 output: Optional[str] = None,
                 format: str = "csv",
                 tolerance: Optional[float] = None,
                 processes: int = 1,
                 profile: Optional[str] = None,
                 kind: str = "A",
                 which: str = "all"):
        self.subcommand = subcommand
        self.model = model
        self.parameters = OrderedDict(parameters or [])
        self.mu = mu
        self.t = t
        self.grid = OrderedDict(grid or [])
        self.t1 = t1
        self.t2 = t2
        self.output = output
        self.format = format
        self.tolerance = tolerance
        self.processes = processes
        self.profile = profile
        self.kind = kind
        self.which = which

        if self.tolerance is not None and self.tolerance <= 0:
            raise GridFormatException("Tolerance must be positive, got {}.".format(self.tolerance))
        if self.format not in ("csv", "json"):
            raise GridFormatException("Format must be csv or json, got '{}'.".format(self.format))

    def mu_grid(self) -> List[float]:
        if self.mu is None:
            raise GridFormatException("A mu grid is required.")
        return parse_grid(self.mu)

    def t_grid(self) -> List[float]:
        if self.t is None:
            raise GridFormatException("A t grid is required.")
        return parse_grid(self.t)

    def parameter_grid(self) -> Dict[str, List[float]]:
        return OrderedDict((key, parse_grid(specification)) for key, specification in self.grid.items())

    def merged_with(self, overrides: Dict[str, Any]) -> 'RunConfig':
        """
        Overrides that are None (flags not given) keep the current value; parameter and grid maps are merged key-wise.
        """
        values = self.as_dict()
        for key, value in overrides.items():
            if value is None:
                continue
            if key in ("parameters", "grid"):
                merged = OrderedDict(values[key])
                merged.update(value)
                values[key] = merged
            else:
                values[key] = value

        return RunConfig(**values)

    def as_dict(self) -> Dict[str, Any]:
        return OrderedDict([("subcommand", self.subcommand), ("model", self.model),
                            ("parameters", self.parameters), ("mu", self.mu), ("t", self.t), ("grid", self.grid),
                            ("t1", self.t1), ("t2", self.t2), ("output", self.output), ("format", self.format),
                            ("tolerance", self.tolerance), ("processes", self.processes),
                            ("profile", self.profile), ("kind", self.kind), ("which", self.which)])

    @staticmethod
    def load(config_file: Path) -> 'RunConfig':
        try:
            values = json.loads(read_text(config_file), object_pairs_hook=OrderedDict)
        except (OSError, ValueError) as e:
            raise GridFormatException("Cannot read config file {}: {}".format(config_file, e))

        if not isinstance(values, dict):
            raise GridFormatException("Config file must hold a flat JSON object.")

        unknown = [key for key in values if key not in RunConfig.keys + ["param"]]
        if unknown:
            raise GridFormatException("Unknown config keys: {}.".format(", ".join(unknown)))

        # "param" is the --param flag spelling; it adds to "parameters"
        parameters = OrderedDict(_assignments(values.pop("parameters", [])))
        parameters.update(_assignments(values.pop("param", [])))
        if "grid" in values:
            values["grid"] = _assignments(values["grid"])

        return RunConfig(parameters=parameters, **values)

    @staticmethod
    def werner_regimes(M: Optional[int] = None) -> 'RunConfig':
        """λ_min versus μ for p(t) = cos^(2M)(at), a t1 = 1."""
        return RunConfig(subcommand="sweep", model="werner",
                         parameters=OrderedDict([("profile", "cospow2m"), ("a", 1.0)]),
                         grid=OrderedDict([("M", "1,3,5")]) if M is None else OrderedDict([("M", str(M))]),
                         t1=1.0, mu="1.01:6:0.01")

    @staticmethod
    def optical_regimes() -> 'RunConfig':
        """λ_min versus A1 for μ = 2, 3, 4."""
        return RunConfig(subcommand="sweep", model="optical",
                         parameters=OrderedDict([("sigma", 0.0), ("delta_omega", 1.0)]),
                         grid=OrderedDict([("A1", "0:1:0.01")]), t1=math.pi / 4, mu="2,3,4")

    @staticmethod
    def spin_bath_regimes() -> 'RunConfig':
        """λ_min versus μ for bath sizes N = 2, 4, 8."""
        return RunConfig(subcommand="sweep", model="spinbath", parameters=OrderedDict([("A", 1.0)]),
                         grid=OrderedDict([("N", "2,4,8")]), t1=0.3, mu="1.01:10:0.01")

    @staticmethod
    def two_qubit_regimes() -> 'RunConfig':
        """Periodic CP/NCP transitions of λ_min versus μ."""
        return RunConfig(subcommand="sweep", model="twoqubit", parameters=OrderedDict([("omega", 1.0)]),
                         t1=1.0, mu="1.01:10:0.01")

    @staticmethod
    def entanglement_revival(M: int = 1) -> 'RunConfig':
        """Concurrence versus a t for p(t) = cos^(2M)(at): death and re-birth of entanglement."""
        return RunConfig(subcommand="concurrence", profile="cospow2m",
                         parameters=OrderedDict([("M", M), ("a", 1.0)]), t="0:3.14:0.01")

    @staticmethod
    def markov_concurrence() -> 'RunConfig':
        """Monotone concurrence decay for p(t) = exp(-t)."""
        return RunConfig(subcommand="concurrence", profile="exp", parameters=OrderedDict([("alpha", 1.0)]),
                         t="0:3.14:0.01")


presets = OrderedDict([
    ("werner", RunConfig.werner_regimes),
    ("optical", RunConfig.optical_regimes),
    ("spinbath", RunConfig.spin_bath_regimes),
    ("twoqubit", RunConfig.two_qubit_regimes),
    ("revival", RunConfig.entanglement_revival),
    ("markov", RunConfig.markov_concurrence)])


class LoggedRun:
    def __init__(self, action: Callable[[], Any], name: str,
                 results_directory: Optional[Path] = None):
        self.action = action
        self.name = name
        self.results_directory = default_data_directories.logs_directory if results_directory is None \
            else results_directory
        self.result_file = self.results_directory / self.name

    def __call__(self):
        mkdir(self.results_directory)
        write_text(self.result_file, "")
        handler = logging.FileHandler(str(self.result_file), encoding='utf8')
        handler.setLevel(logging.INFO)
        logger.addHandler(handler)
        try:
            return self.action()
        finally:
            logger.removeHandler(handler)
            handler.close()
