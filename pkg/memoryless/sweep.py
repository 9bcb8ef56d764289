"""
Scans of intermediate-map spectra over (t1, mu = t2 / t1, model parameter) grids.
"""
import csv
import json
import multiprocessing
from collections import OrderedDict
from enum import Enum
from itertools import product
from multiprocessing.pool import Pool
from pathlib import Path

import numpy
from typing import List, Dict, Any, Optional, Tuple, Iterable

from memoryless.dynamical_map import Verdict, intermediate, a_to_b, cp_classify, jamiolkowski_state, concurrence
from memoryless.models import model_from_parameters, NoiseProfile, werner_a
from memoryless.tensor import SingularMatrixException
from memoryless.tools import log, format_number

transition_relative_width = 1e-8


class SweepRecord:
    def __init__(self, model: str, parameters: Dict[str, Any], t1: float, t2: float, mu: float,
                 eigenvalues: List[float], verdict: Verdict, concurrence: Optional[float] = None):
        self.model = model
        self.parameters = parameters
        self.t1 = t1
        self.t2 = t2
        self.mu = mu
        self.eigenvalues = list(eigenvalues)
        self.verdict = verdict
        self.concurrence = concurrence

    @property
    def lambda_min(self) -> Optional[float]:
        return self.eigenvalues[0] if self.eigenvalues else None

    def csv_row(self, parameter_keys: List[str]) -> List[str]:
        eigenvalue_cells = [format_number(value) for value in self.eigenvalues] if self.eigenvalues else [""] * 4
        return [self.model, format_number(self.t1), format_number(self.t2), format_number(self.mu)] + \
               [_format_parameter(self.parameters.get(key)) for key in parameter_keys] + \
               eigenvalue_cells + [self.verdict.value]

    @staticmethod
    def from_csv_row(row: List[str], parameter_keys: List[str]) -> 'SweepRecord':
        model, t1, t2, mu = row[:4]
        parameter_cells = row[4:4 + len(parameter_keys)]
        eigenvalue_cells = row[4 + len(parameter_keys):-1]
        return SweepRecord(model=model,
                           parameters=OrderedDict((key, _parse_parameter(cell))
                                                  for key, cell in zip(parameter_keys, parameter_cells) if cell != ""),
                           t1=float(t1), t2=float(t2), mu=float(mu),
                           eigenvalues=[float(cell) for cell in eigenvalue_cells if cell != ""],
                           verdict=Verdict(row[-1]))

    def to_json_object(self) -> Dict[str, Any]:
        return OrderedDict([("model", self.model), ("parameters", self.parameters),
                            ("t1", self.t1), ("t2", self.t2), ("mu", self.mu),
                            ("eigenvalues", self.eigenvalues), ("lambda_min", self.lambda_min),
                            ("verdict", self.verdict.value)])

    def __str__(self):
        return "{} {} mu={:.6g}: {} (lambda_min {})".format(
            self.model, dict(self.parameters), self.mu, self.verdict.value,
            "n/a" if self.lambda_min is None else "{:.6g}".format(self.lambda_min))


def _format_parameter(value: Optional[Any]) -> str:
    if value is None:
        return ""
    return value if isinstance(value, str) else format_number(value)


def _parse_parameter(cell: str) -> Any:
    try:
        return float(cell)
    except ValueError:
        return cell


class TransitionDirection(Enum):
    to_ncp = "toNCP"
    to_cp = "toCP"


class TransitionPoint:
    def __init__(self, mu_star: float, direction: TransitionDirection, bracket_width: float):
        self.mu_star = mu_star
        self.direction = direction
        self.bracket_width = bracket_width

    def __str__(self):
        return "{} at mu={:.10g} (±{:.1e})".format(self.direction.value, self.mu_star, self.bracket_width)


def evaluate_point(model_name: str, parameters: Dict[str, Any], t1: float, mu: float,
                   tolerance: Optional[float] = None) -> SweepRecord:
    """
    Full pipeline: A(t, 0) at both times, inversion, composition, realignment and Choi spectrum.
    """
    model = model_from_parameters(model_name, parameters)
    t2 = mu * t1
    try:
        report = cp_classify(a_to_b(intermediate(model.a_map(t2), model.a_map(t1))), tolerance)
    except SingularMatrixException:
        return SweepRecord(model_name, model.parameters(), t1, t2, mu, [], Verdict.singular)

    return SweepRecord(model_name, model.parameters(), t1, t2, mu, [float(value) for value in report.eigenvalues],
                       report.verdict)


def _evaluate_point_arguments(arguments: Tuple) -> SweepRecord:
    return evaluate_point(*arguments)


def _check_grid(name: str, grid: List[float]):
    if len(grid) == 0:
        raise ValueError("Grid {} must not be empty.".format(name))
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("Grid {} must be strictly ascending.".format(name))


def parameter_combinations(parameters: Dict[str, Any], parameter_grid: Optional[Dict[str, List[Any]]] = None) -> \
        List[Dict[str, Any]]:
    """
    Cartesian product of the grid (in key order) on top of fixed parameters.
    """
    parameter_grid = parameter_grid or OrderedDict()
    for key, values in parameter_grid.items():
        if len(values) == 0:
            raise ValueError("Grid {} must not be empty.".format(key))

    keys = list(parameter_grid.keys())
    return [OrderedDict(list(parameters.items()) + list(zip(keys, values)))
            for values in product(*(parameter_grid[key] for key in keys))]


def run_sweep(model_name: str, parameters: Dict[str, Any], t1: float, mu_grid: List[float],
              parameter_grid: Optional[Dict[str, List[Any]]] = None,
              tolerance: Optional[float] = None, processes: int = 1) -> List[SweepRecord]:
    """
    One record per (parameter combination, mu) in grid order; points where A(t1, 0) is not invertible
    are kept as Singular records.
    """
    if t1 <= 0:
        raise ValueError("t1 must be positive, got {}.".format(t1))
    _check_grid("mu", mu_grid)
    if mu_grid[0] <= 1:
        raise ValueError("mu must exceed 1, got {}.".format(mu_grid[0]))

    combinations = parameter_combinations(parameters, parameter_grid)
    # fail fast on unknown models or parameters
    for combination in combinations:
        model_from_parameters(model_name, combination)

    points = [(model_name, combination, t1, mu, tolerance) for combination in combinations for mu in mu_grid]
    log("Sweeping {} on {} points.".format(model_name, len(points)))

    if processes > 1:
        with Pool(processes=min(processes, multiprocessing.cpu_count())) as pool:
            records = pool.map(_evaluate_point_arguments, points)
    else:
        records = [evaluate_point(*point) for point in points]

    log("Sweep done: {}.".format(verdict_summary(records)))
    return records


def verdict_summary(records: Iterable[SweepRecord]) -> str:
    records = list(records)
    return ", ".join("{} {}".format(sum(1 for r in records if r.verdict == verdict), verdict.value)
                     for verdict in Verdict)


def find_transitions(model_name: str, parameters: Dict[str, Any], t1: float, mu_range: Tuple[float, float],
                     initial_step: float = 1e-2, tolerance: Optional[float] = None) -> List[TransitionPoint]:
    """
    Brackets every change of the CP/NCP verdict along mu and refines it by bisection.

    The verdict changes where lambda_min crosses -tolerance, so this also works for spectra whose
    smallest eigenvalue sits at a round-off zero throughout the CP regime.
    """
    mu_low, mu_high = mu_range
    if not 1 <= mu_low < mu_high:
        raise ValueError("Need 1 <= mu_low < mu_high, got {}.".format(mu_range))

    count = int(numpy.ceil((mu_high - mu_low) / initial_step)) + 1
    grid = numpy.linspace(mu_low, mu_high, count)

    def verdict(mu: float) -> Verdict:
        return evaluate_point(model_name, parameters, t1, float(mu), tolerance).verdict

    verdicts = [verdict(mu) for mu in grid]
    transitions = []
    for index in range(count - 1):
        left, right = verdicts[index], verdicts[index + 1]
        if Verdict.singular in (left, right) or left == right:
            continue

        low, high = float(grid[index]), float(grid[index + 1])
        while high - low > 2 * transition_relative_width * low:
            middle = (low + high) / 2
            if verdict(middle) == left:
                low = middle
            else:
                high = middle

        transitions.append(TransitionPoint(mu_star=(low + high) / 2,
                                           direction=TransitionDirection.to_ncp if right == Verdict.ncp
                                           else TransitionDirection.to_cp,
                                           bracket_width=(high - low) / 2))

    log("Found {} transitions for {} in mu range {}.".format(len(transitions), model_name, mu_range))
    return transitions


class ConcurrencePoint:
    def __init__(self, t: float, p: float, concurrence: float):
        self.t = t
        self.p = p
        self.concurrence = concurrence


def concurrence_trajectory(profile: NoiseProfile, t_grid: List[float]) -> List[ConcurrencePoint]:
    """
    Concurrence of the Jamiolkowski state of the Werner map along p(t).
    """
    _check_grid("t", t_grid)
    if t_grid[0] < 0:
        raise ValueError("Times must be non-negative, got {}.".format(t_grid[0]))

    def point(t: float) -> ConcurrencePoint:
        p = profile(t)
        return ConcurrencePoint(t, p, concurrence(jamiolkowski_state(werner_a(p))))

    return [point(float(t)) for t in t_grid]


sweep_fixed_columns = ["model", "t1", "t2", "mu"]
eigenvalue_columns = ["lambda_min", "lambda2", "lambda3", "lambda4"]


def parameter_keys_of(records: List[SweepRecord]) -> List[str]:
    keys = []
    for record in records:
        keys.extend(key for key in record.parameters if key not in keys)

    return keys


def save_records_csv(records: List[SweepRecord], file) -> None:
    """
    :param file: Opened text file (newline='') or anything csv.writer accepts.
    """
    parameter_keys = parameter_keys_of(records)
    writer = csv.writer(file, delimiter=',', quotechar='"', quoting=csv.QUOTE_MINIMAL, lineterminator='\n')
    writer.writerow(sweep_fixed_columns + parameter_keys + eigenvalue_columns + ["verdict"])
    for record in records:
        writer.writerow(record.csv_row(parameter_keys))


def load_records_csv(csv_file: Path) -> List[SweepRecord]:
    with csv_file.open(encoding='utf8', newline='') as opened_csv:
        reader = csv.reader(opened_csv, delimiter=',', quotechar='"', quoting=csv.QUOTE_MINIMAL)
        header = next(reader)
        parameter_keys = header[len(sweep_fixed_columns):-len(eigenvalue_columns) - 1]
        return [SweepRecord.from_csv_row(row, parameter_keys) for row in reader]


def records_to_json(records: List[SweepRecord]) -> str:
    return json.dumps([record.to_json_object() for record in records], indent=1)


def save_trajectory_csv(points: List[ConcurrencePoint], file) -> None:
    writer = csv.writer(file, delimiter=',', quotechar='"', quoting=csv.QUOTE_MINIMAL, lineterminator='\n')
    writer.writerow(["t", "p", "concurrence"])
    for point in points:
        writer.writerow([format_number(point.t), format_number(point.p), format_number(point.concurrence)])


def trajectory_to_json(points: List[ConcurrencePoint]) -> str:
    return json.dumps([OrderedDict([("t", point.t), ("p", point.p), ("concurrence", point.concurrence)])
                       for point in points], indent=1)
