"""
System-environment evolutions whose reduced dynamics reproduce the closed-form model maps.
"""
import math

import numpy
from numpy import ndarray, exp, linspace
from scipy import integrate, stats
from typing import Callable, Optional, List

from memoryless.dynamical_map import StochasticMap, validate_a, random_density_matrix
from memoryless.models import SpinBathParams, TwoQubitParams, OpticalParams, spin_bath_x, spin_bath_a, two_qubit_a, \
    kappa_magnitude
from memoryless.tensor import complex_matrix, kron, identity, partial_trace, Subsystem, unitary_from_hamiltonian, \
    SIGMA_X, SIGMA_Z, IDENTITY_2, vectorize, unvectorize, dimension, max_abs
from memoryless.tools import log

max_binomial_bath_size = 64
max_dense_bath_size = 10
nonlinearity_threshold = 1e-8

Evolver = Callable[[ndarray, float], ndarray]


class NonlinearEvolutionException(ArithmeticError):
    pass


class TomographyResult:
    def __init__(self, a_map: StochasticMap, residual: float):
        self.a_map = a_map
        self.residual = residual


def _check_qubit(rho: ndarray) -> ndarray:
    rho = complex_matrix(rho)
    if dimension(rho) != 2:
        raise ValueError("Expected a qubit operator, got dimension {}.".format(dimension(rho)))

    return rho


def spin_bath_coherence_factor(params: SpinBathParams, t: float) -> complex:
    """
    Σ_k 2^-N C(N, k) exp(-2 i A t (N - 2k) / sqrt(N)): the bath's magnetization sectors
    (Σσ_kz = N - 2k) weighted for the maximally mixed bath state.
    """
    if params.N > max_binomial_bath_size:
        raise ValueError("Binomial weights underflow beyond N = {}, got {}.".format(
            max_binomial_bath_size, params.N))

    k = numpy.arange(params.N + 1)
    weights = stats.binom.pmf(k, params.N, 0.5)
    return complex(numpy.sum(weights * exp(-2j * params.A * t * (params.N - 2 * k) / math.sqrt(params.N))))


def spin_bath_evolve(params: SpinBathParams, t: float, rho: ndarray) -> ndarray:
    """
    Reduced qubit evolution under H = A / sqrt(N) σz Σ_k σ_kz with bath state I / 2^N.
    Populations are unchanged; the coherence picks up the sector-averaged phase.
    Linear in rho, so any 2x2 operator is accepted.
    """
    rho = _check_qubit(rho)
    factor = spin_bath_coherence_factor(params, t)
    result = rho.copy()
    result[0, 1] *= factor
    result[1, 0] *= factor.conjugate()
    return result


def _collective_bath_z(bath_size: int) -> ndarray:
    total = numpy.zeros((2 ** bath_size, 2 ** bath_size), dtype=complex)
    for spin in range(bath_size):
        operator = numpy.ones((1, 1), dtype=complex)
        for position in range(bath_size):
            operator = kron(operator, SIGMA_Z if position == spin else IDENTITY_2)
        total += operator

    return total


def spin_bath_hamiltonian(params: SpinBathParams) -> ndarray:
    return params.A / math.sqrt(params.N) * kron(SIGMA_Z, _collective_bath_z(params.N))


def spin_bath_evolve_dense(params: SpinBathParams, t: float, rho: ndarray) -> ndarray:
    """
    Tr_E[U (rho ⊗ I/2^N) U†] with the full 2^(N+1)-dimensional Hamiltonian.
    """
    if params.N > max_dense_bath_size:
        raise ValueError("Dense spin-bath evolution is limited to N <= {}, got {}.".format(
            max_dense_bath_size, params.N))

    rho = _check_qubit(rho)
    bath_dimension = 2 ** params.N
    u = unitary_from_hamiltonian(spin_bath_hamiltonian(params), t)
    joint = kron(rho, identity(bath_dimension) / bath_dimension)
    return partial_trace(u @ joint @ u.conj().T, 2, bath_dimension, Subsystem.second)


def two_qubit_hamiltonian(params: TwoQubitParams) -> ndarray:
    """
    (ω/2) σz⊗σx, so that exp(-i H t) = cos(ωt/2) I - i sin(ωt/2) σz⊗σx.
    """
    return params.omega / 2 * kron(SIGMA_Z, SIGMA_X)


default_environment_state = (IDENTITY_2 + SIGMA_Z) / 2


def two_qubit_evolve(params: TwoQubitParams, t: float, rho_s: ndarray,
                     rho_e: Optional[ndarray] = None) -> ndarray:
    rho_s = _check_qubit(rho_s)
    rho_e = default_environment_state if rho_e is None else _check_qubit(rho_e)
    u = unitary_from_hamiltonian(two_qubit_hamiltonian(params), t)
    return partial_trace(u @ kron(rho_s, rho_e) @ u.conj().T, 2, 2, Subsystem.second)


quadrature_tolerance = 1e-10
quadrature_window_in_sigma = 8


def optical_kappa_integral(A1: float, omega1: float, omega2: float, sigma: float, t: float) -> complex:
    """
    κ(t) = ∫ G(ω) exp(-i ω t) dω for the two-peak spectrum G = A1 N(ω1, σ) + (1 - A1) N(ω2, σ).
    Each peak is integrated over ω_k ± 8σ; σ = 0 reduces to the two-phasor sum.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative, got {}.".format(sigma))

    if sigma == 0:
        return complex(A1 * exp(-1j * omega1 * t) + (1 - A1) * exp(-1j * omega2 * t))

    def peak_integral(weight: float, center: float) -> complex:
        if weight == 0:
            return 0j

        window = (center - quadrature_window_in_sigma * sigma, center + quadrature_window_in_sigma * sigma)

        def density(omega: float) -> float:
            return weight * stats.norm.pdf(omega, loc=center, scale=sigma)

        real, _ = integrate.quad(lambda omega: density(omega) * math.cos(omega * t), *window,
                                 epsabs=quadrature_tolerance, epsrel=quadrature_tolerance, limit=200)
        imaginary, _ = integrate.quad(lambda omega: -density(omega) * math.sin(omega * t), *window,
                                      epsabs=quadrature_tolerance, epsrel=quadrature_tolerance, limit=200)
        return complex(real, imaginary)

    return peak_integral(A1, omega1) + peak_integral(1 - A1, omega2)


tomography_probe_count = 10


def extract_a_map(evolver: Evolver, d: int, t: float,
                  random_state: Optional[numpy.random.RandomState] = None) -> TomographyResult:
    """
    Linear-response tomography: column a1 * d + a2 of A is vectorize(evolver(E_a1a2, t)) for the matrix unit E_a1a2.
    The residual is the largest deviation of the reconstructed map from the evolver on random states.
    """
    random_state = numpy.random.RandomState(42) if random_state is None else random_state

    columns = []
    for index in range(d * d):
        unit = numpy.zeros(d * d, dtype=complex)
        unit[index] = 1
        columns.append(vectorize(evolver(unvectorize(unit, d), t)))

    a_map = StochasticMap(numpy.column_stack(columns))

    residual = 0.0
    for _ in range(tomography_probe_count):
        rho = random_density_matrix(d, random_state).matrix
        reconstructed = unvectorize(a_map.matrix @ vectorize(rho), d)
        residual = max(residual, max_abs(reconstructed - evolver(rho, t)))

    if residual > nonlinearity_threshold:
        raise NonlinearEvolutionException("Evolution is not linear: residual {:.3g} exceeds {:.0e}.".format(
            residual, nonlinearity_threshold))

    return TomographyResult(a_map, residual)


class OracleReport:
    def __init__(self, name: str, max_deviation: float, tolerance: float, check_count: int):
        self.name = name
        self.max_deviation = max_deviation
        self.tolerance = tolerance
        self.check_count = check_count

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def __str__(self):
        return "{}: max deviation {:.3g} over {} checks (tolerance {:.0e}): {}".format(
            self.name, self.max_deviation, self.check_count, self.tolerance, "pass" if self.passed else "FAIL")


oracle_time_count = 50
spin_bath_oracle_sizes = [1, 2, 4, 8]
dense_oracle_sizes = [1, 2, 4, 8, 10]


def spin_bath_oracle(times: Optional[ndarray] = None, bath_sizes: List[int] = spin_bath_oracle_sizes,
                     dense_bath_sizes: List[int] = dense_oracle_sizes) -> List[OracleReport]:
    times = linspace(0, 3, oracle_time_count) if times is None else times
    log("Spin-bath oracle on {} times, bath sizes {}.".format(len(times), bath_sizes))

    map_deviations = [0.0]
    validation_deviations = [0.0]
    for N in bath_sizes:
        params = SpinBathParams(N=N, A=1.0)
        for t in times:
            extracted = extract_a_map(lambda rho, time: spin_bath_evolve(params, time, rho), 2, t).a_map
            map_deviations.append(max_abs(extracted.matrix - spin_bath_a(spin_bath_x(params, t)).matrix))
            validation_deviations.extend(magnitude for _, magnitude in
                                         validate_a(extracted).deviations_by_constraint)

    dense_deviations = [0.0]
    random_state = numpy.random.RandomState(42)
    for N in dense_bath_sizes:
        params = SpinBathParams(N=N, A=1.0)
        for t in times[::10]:
            rho = random_density_matrix(2, random_state).matrix
            dense_deviations.append(max_abs(spin_bath_evolve_dense(params, t, rho) - spin_bath_evolve(params, t, rho)))

    return [OracleReport("spin bath tomography vs closed form", max(map_deviations), 1e-10,
                         len(map_deviations) - 1),
            OracleReport("spin bath tomography constraints", max(validation_deviations), 1e-9,
                         len(validation_deviations) - 1),
            OracleReport("spin bath dense vs binomial", max(dense_deviations), 1e-12, len(dense_deviations) - 1)]


def two_qubit_oracle(times: Optional[ndarray] = None, params: TwoQubitParams = TwoQubitParams(omega=1.0)) -> List[
    OracleReport]:
    times = linspace(0, 2 * math.pi, oracle_time_count) if times is None else times
    log("Two-qubit oracle on {} times.".format(len(times)))

    deviations = [max_abs(extract_a_map(lambda rho, time: two_qubit_evolve(params, time, rho), 2, t).a_map.matrix -
                          two_qubit_a(params, t).matrix) for t in times]
    return [OracleReport("two-qubit tomography vs closed form", max(deviations), 1e-10, len(deviations))]


def optical_oracle(omega1: float = 1.0, omega2: float = -1.0) -> List[OracleReport]:
    """
    |quadrature κ| against the closed form with Δω = (ω1 - ω2) / 2, for σ = 0 and σ > 0.
    """
    delta_omega = (omega1 - omega2) / 2
    grid = [(A1, t) for A1 in linspace(0, 1, 5) for t in linspace(0, 3, 10)]
    log("Optical oracle on {} (A1, t) points.".format(len(grid)))

    reports = []
    for sigma in [0.0, 0.2]:
        deviations = [abs(abs(optical_kappa_integral(A1, omega1, omega2, sigma, t)) -
                          kappa_magnitude(OpticalParams(A1=A1, sigma=sigma, delta_omega=delta_omega), t))
                      for A1, t in grid]
        reports.append(OracleReport("optical quadrature vs closed form (sigma={})".format(sigma),
                                    max(deviations), 1e-6, len(deviations)))

    return reports


oracles = {"spinbath": spin_bath_oracle, "twoqubit": two_qubit_oracle, "optical": optical_oracle}
