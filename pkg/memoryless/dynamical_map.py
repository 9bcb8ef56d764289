"""
Stochastic (A) and dynamical (B, Choi) maps of a d-level system.

An A-map acts on vectorized states, vectorize(rho') = A @ vectorize(rho), with A[b1 * d + b2, a1 * d + a2].
Its B form is the realignment B[b1 * d + a1, b2 * d + a2] = A[b1 * d + b2, a1 * d + a2];
the map is completely positive exactly if B is positive semidefinite.
"""
import json
from enum import Enum
from pathlib import Path

import numpy
from lazy import lazy
from numpy import ndarray, trace, sqrt
from typing import List, Optional, Union

from memoryless.tensor import complex_matrix, dimension, square_root_dimension, realign, invert, hermitian_eig, \
    partial_trace, Subsystem, Spectrum, DimensionMismatchException, vectorize, unvectorize, identity, kron, SIGMA_Y, \
    hermiticity_deviation, matrix_square_root
from memoryless.tools import read_text, write_text

constraint_tolerance = 1e-10


class InvalidStateException(ValueError):
    pass


class NotCompletelyPositiveException(ValueError):
    pass


class MapFormatException(Exception):
    pass


class Verdict(Enum):
    cp = "CP"
    ncp = "NCP"
    singular = "Singular"


class DensityMatrix:
    def __init__(self, matrix: ndarray, validate: bool = True):
        """
        :param validate: If set, requires a Hermitian, unit-trace, positive semidefinite matrix (to 1e-10).
        Map outputs and Jamiolkowski pseudo-states are built unvalidated, see is_positive.
        """
        self.matrix = complex_matrix(matrix)
        self.d = dimension(self.matrix)

        if validate:
            deviation = hermiticity_deviation(self.matrix)
            if deviation > constraint_tolerance:
                raise InvalidStateException("State deviates from hermiticity by {}.".format(deviation))

            if abs(self.trace - 1) > constraint_tolerance:
                raise InvalidStateException("State has trace {}, expected 1.".format(self.trace))

            if not self.is_positive:
                raise InvalidStateException("State has negative eigenvalue {}.".format(self.spectrum.min_eigenvalue))

    @lazy
    def trace(self) -> complex:
        return complex(trace(self.matrix))

    @lazy
    def spectrum(self) -> Spectrum:
        return hermitian_eig(self.matrix)

    @lazy
    def is_positive(self) -> bool:
        return self.spectrum.min_eigenvalue >= -constraint_tolerance


class StochasticMap:
    def __init__(self, matrix: ndarray):
        self.matrix = complex_matrix(matrix)
        self.d = square_root_dimension(self.matrix)


class DynamicalMap:
    """
    Choi (B) matrix. Not necessarily positive: intermediate-time maps may be NCP.
    """

    def __init__(self, matrix: ndarray):
        self.matrix = complex_matrix(matrix)
        self.d = square_root_dimension(self.matrix)

    @lazy
    def spectrum(self) -> Spectrum:
        return hermitian_eig(self.matrix)


class ConstraintViolation:
    def __init__(self, constraint: str, magnitude: float):
        self.constraint = constraint
        self.magnitude = magnitude

    def __str__(self):
        return "{} violated by {:.3g}".format(self.constraint, self.magnitude)


class ValidationReport:
    def __init__(self, deviations_by_constraint: List[tuple], tolerance: float = constraint_tolerance):
        self.deviations_by_constraint = deviations_by_constraint
        self.tolerance = tolerance
        self.violations = [ConstraintViolation(constraint, magnitude)
                           for constraint, magnitude in deviations_by_constraint if magnitude > tolerance]

    @property
    def is_valid(self) -> bool:
        return len(self.violations) == 0

    def magnitude(self, constraint: str) -> float:
        return dict(self.deviations_by_constraint)[constraint]

    def __str__(self):
        if self.is_valid:
            return "All constraints satisfied (tolerance {:.0e}).".format(self.tolerance)

        return "\n".join(str(violation) for violation in self.violations)


class CpReport:
    def __init__(self, spectrum: Spectrum, tolerance: float):
        self.spectrum = spectrum
        self.eigenvalues = spectrum.eigenvalues
        self.min_eigenvalue = spectrum.min_eigenvalue
        self.tolerance = tolerance
        self.verdict = Verdict.ncp if self.min_eigenvalue < -tolerance else Verdict.cp

    def __str__(self):
        return "{}: eigenvalues {}, smallest {:.6g} (tolerance {:.1e})".format(
            self.verdict.value, ", ".join("{:.6g}".format(value) for value in self.eigenvalues),
            self.min_eigenvalue, self.tolerance)


class KrausSet:
    def __init__(self, operators: List[ndarray]):
        self.operators = operators

    def completeness(self) -> ndarray:
        return sum(k.conj().T @ k for k in self.operators)

    def __len__(self):
        return len(self.operators)


trace_preservation = "trace preservation"
hermiticity_preservation = "hermiticity preservation"
hermiticity = "hermiticity"
unit_trace = "trace equals d"
output_partial_trace = "output partial trace equals identity"


def _as_tensor(m: ndarray, d: int) -> ndarray:
    return m.reshape(d, d, d, d)


def validate_a(map: StochasticMap) -> ValidationReport:
    d = map.d
    a = _as_tensor(map.matrix, d)
    traced = _trace_over_output(a)
    return ValidationReport([
        (trace_preservation, float(numpy.max(numpy.abs(traced - identity(d))))),
        # A[b1 b2; a1 a2] = conj(A[b2 b1; a2 a1])
        (hermiticity_preservation, float(numpy.max(numpy.abs(a - a.transpose(1, 0, 3, 2).conj()))))])


def _trace_over_output(a: ndarray) -> ndarray:
    return numpy.einsum('bbij->ij', a)


def validate_b(map: DynamicalMap) -> ValidationReport:
    d = map.d
    return ValidationReport([
        (hermiticity, hermiticity_deviation(map.matrix)),
        (unit_trace, abs(complex(trace(map.matrix)) - d)),
        (output_partial_trace, float(numpy.max(numpy.abs(
            partial_trace(map.matrix, d, d, Subsystem.first) - identity(d)))))])


def _check_same_dimension(first: Union[StochasticMap, DynamicalMap, DensityMatrix],
                          second: Union[StochasticMap, DynamicalMap, DensityMatrix]):
    if first.d != second.d:
        raise DimensionMismatchException("Dimensions {} and {} differ.".format(first.d, second.d))


def apply(map: StochasticMap, rho: DensityMatrix) -> DensityMatrix:
    """
    The output is not checked for positivity; it fails to be a state when the map is NCP.
    """
    _check_same_dimension(map, rho)
    return DensityMatrix(unvectorize(map.matrix @ vectorize(rho.matrix), map.d), validate=False)


def a_to_b(map: StochasticMap) -> DynamicalMap:
    return DynamicalMap(realign(map.matrix))


def b_to_a(map: DynamicalMap) -> StochasticMap:
    return StochasticMap(realign(map.matrix))


def identity_map(d: int) -> StochasticMap:
    return StochasticMap(identity(d * d))


def compose(a2: StochasticMap, a1: StochasticMap) -> StochasticMap:
    """
    First a1, then a2.
    """
    _check_same_dimension(a2, a1)
    return StochasticMap(a2.matrix @ a1.matrix)


def intermediate(a_t2_0: StochasticMap, a_t1_0: StochasticMap) -> StochasticMap:
    """
    A(t2, t1) = A(t2, 0) A(t1, 0)^-1.

    Raises SingularMatrixException where A(t1, 0) is not invertible and the intermediate map is undefined.
    """
    _check_same_dimension(a_t2_0, a_t1_0)
    return StochasticMap(a_t2_0.matrix @ invert(a_t1_0.matrix))


def default_cp_tolerance(d: int) -> float:
    return 1e-9 * d


def cp_classify(map: DynamicalMap, tolerance: Optional[float] = None) -> CpReport:
    return CpReport(map.spectrum, tolerance=default_cp_tolerance(map.d) if tolerance is None else tolerance)


def kraus_from_choi(map: DynamicalMap, tolerance: Optional[float] = None) -> KrausSet:
    """
    K_i = sqrt(lambda_i) unvectorize(v_i) from the Choi spectrum; round-off negative eigenvalues are dropped.
    """
    report = cp_classify(map, tolerance)
    if report.verdict == Verdict.ncp:
        raise NotCompletelyPositiveException(
            "Choi matrix has eigenvalue {:.6g} below -{:.1e}.".format(report.min_eigenvalue, report.tolerance))

    negligible = 1e-14 * map.d
    return KrausSet([sqrt(value) * unvectorize(report.spectrum.eigenvectors[:, index], map.d)
                     for index, value in enumerate(report.eigenvalues) if value > negligible])


def apply_kraus(kraus: KrausSet, rho: ndarray) -> ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus.operators)


def jamiolkowski_state(map: StochasticMap) -> DensityMatrix:
    """
    rho_ab = B / d, the map acting on half of a maximally entangled pair (output factor first).
    For NCP maps this is a pseudo-state with is_positive False.
    """
    return DensityMatrix(a_to_b(map).matrix / map.d, validate=False)


_spin_flip = kron(SIGMA_Y, SIGMA_Y)


def concurrence(rho: Union[DensityMatrix, ndarray]) -> float:
    """
    Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4) of a two-qubit state.

    The mu_i (square roots of the eigenvalues of rho (Y⊗Y) rho* (Y⊗Y)) are taken as
    the singular values of sqrt(rho) sqrt(rho~), which avoids square roots of round-off noise.
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else complex_matrix(rho)
    if dimension(matrix) != 4:
        raise DimensionMismatchException("Concurrence needs a two-qubit state, got dimension {}.".format(
            dimension(matrix)))

    root = matrix_square_root(matrix)
    flipped_root = _spin_flip @ root.conj() @ _spin_flip
    mu = numpy.linalg.svd(root @ flipped_root, compute_uv=False)
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


class MapKind(Enum):
    a = "A"
    b = "B"


def save_map(file: Path, map: Union[StochasticMap, DynamicalMap]) -> None:
    write_text(file, map_to_json(map))


def map_to_json(map: Union[StochasticMap, DynamicalMap]) -> str:
    kind = MapKind.a if isinstance(map, StochasticMap) else MapKind.b
    return json.dumps({"d": map.d, "kind": kind.value,
                       "re": map.matrix.real.tolist(),
                       "im": map.matrix.imag.tolist()}, indent=1)


def load_map(file: Path) -> Union[StochasticMap, DynamicalMap]:
    try:
        return map_from_json(read_text(file))
    except OSError as e:
        raise MapFormatException("Cannot read map file {}: {}".format(file, e))


def map_from_json(text: str) -> Union[StochasticMap, DynamicalMap]:
    try:
        parsed = json.loads(text)
    except ValueError as e:
        raise MapFormatException("Invalid JSON: {}".format(e))

    if not isinstance(parsed, dict) or any(key not in parsed for key in ("d", "kind", "re", "im")):
        raise MapFormatException("Map must be an object with keys d, kind, re, im.")

    d = parsed["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise MapFormatException("d must be a positive integer, got {}.".format(d))

    try:
        kind = MapKind(parsed["kind"])
    except ValueError:
        raise MapFormatException("kind must be A or B, got {}.".format(parsed["kind"]))

    try:
        real = numpy.array(parsed["re"], dtype=float)
        imaginary = numpy.array(parsed["im"], dtype=float)
    except (TypeError, ValueError) as e:
        raise MapFormatException("Matrix entries must be numbers: {}".format(e))

    expected_shape = (d * d, d * d)
    if real.shape != expected_shape or imaginary.shape != expected_shape:
        raise MapFormatException("Expected re and im of shape {}, got {} and {}.".format(
            expected_shape, real.shape, imaginary.shape))

    try:
        matrix = complex_matrix(real + 1j * imaginary)
    except ValueError as e:
        raise MapFormatException(str(e))

    return StochasticMap(matrix) if kind == MapKind.a else DynamicalMap(matrix)


def random_density_matrix(d: int, random_state: numpy.random.RandomState) -> DensityMatrix:
    """
    Ginibre-distributed full-rank state.
    """
    g = random_state.normal(size=(d, d)) + 1j * random_state.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / trace(m).real)
