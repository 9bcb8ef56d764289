"""
Closed-form maps of the four decoherence models and their noise profiles.

All models act on a qubit (d = 2); matrices are in the basis ordering 00, 01, 10, 11 of vectorize
(for the optical model: HH, HV, VH, VV).
"""
import math
from abc import ABCMeta, abstractmethod
from collections import OrderedDict

import numpy
from numpy import ndarray, cos, exp, sqrt, sin
from typing import Dict, Any, List

from memoryless.dynamical_map import StochasticMap, DynamicalMap, b_to_a, a_to_b
from memoryless.tensor import identity, vectorize, SIGMA_Z, SingularMatrixException

# |Φ> = (|00> - |11>) / sqrt(2) and |Φ+> = (|00> + |11>) / sqrt(2)
_phi = vectorize(SIGMA_Z) / sqrt(2)
_phi_projector = numpy.outer(_phi, _phi.conj())
_phi_plus = vectorize(identity(2)) / sqrt(2)
_phi_plus_projector = numpy.outer(_phi_plus, _phi_plus.conj())


class UnknownModelException(ValueError):
    pass


def _sorted_eigenvalues(values: List[float]) -> ndarray:
    return numpy.sort(numpy.array(values, dtype=float))


def _check_time(t: float):
    if t < 0:
        raise ValueError("Time must be non-negative, got {}.".format(t))


class NoiseProfile(metaclass=ABCMeta):
    """
    Time-dependent noise parameter p(t) in [0, 1] with p(0) = 1.
    """
    name = None

    def __call__(self, t: float) -> float:
        _check_time(t)
        if t == 0:
            return 1.0

        return self.value(t)

    @abstractmethod
    def value(self, t: float) -> float: raise NotImplementedError

    @abstractmethod
    def parameters(self) -> Dict[str, Any]: raise NotImplementedError


class CosPow2MProfile(NoiseProfile):
    """
    p(t) = cos^(2M)(a t); intermediate maps turn NCP periodically.
    """
    name = "cospow2m"

    def __init__(self, M: int = 1, a: float = 1.0):
        if M < 1 or int(M) != M:
            raise ValueError("M must be a positive integer, got {}.".format(M))

        self.M = int(M)
        self.a = float(a)

    def value(self, t: float) -> float:
        return float(cos(self.a * t) ** (2 * self.M))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("M", self.M), ("a", self.a)])


class ExponentialProfile(NoiseProfile):
    """
    p(t) = exp(-alpha t); generates a Markov semigroup.
    """
    name = "exp"

    def __init__(self, alpha: float = 1.0):
        if alpha < 0:
            raise ValueError("alpha must be non-negative, got {}.".format(alpha))

        self.alpha = float(alpha)

    def value(self, t: float) -> float:
        return float(exp(-self.alpha * t))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("alpha", self.alpha)])


class StretchedExponentialProfile(NoiseProfile):
    """
    p(t) = exp(-alpha t^beta); CP intermediate maps, but no semigroup for beta != 1.
    """
    name = "stretchedexp"

    def __init__(self, alpha: float = 1.0, beta: float = 2.0):
        if alpha < 0:
            raise ValueError("alpha must be non-negative, got {}.".format(alpha))
        if beta <= 0:
            raise ValueError("beta must be positive, got {}.".format(beta))

        self.alpha = float(alpha)
        self.beta = float(beta)

    def value(self, t: float) -> float:
        return float(exp(-self.alpha * t ** self.beta))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("alpha", self.alpha), ("beta", self.beta)])


class SampledProfile(NoiseProfile):
    """
    Tabulated p(t), linearly interpolated and held constant after the last sample.
    """
    name = "sampled"

    def __init__(self, times: List[float], values: List[float]):
        self.times = numpy.array(times, dtype=float)
        self.values = numpy.array(values, dtype=float)

        if len(self.times) == 0 or self.times.shape != self.values.shape:
            raise ValueError("Need matching, non-empty times and values.")
        if self.times[0] != 0 or self.values[0] != 1:
            raise ValueError("First sample must be p(0) = 1.")
        if numpy.any(numpy.diff(self.times) <= 0):
            raise ValueError("Sample times must be strictly ascending.")
        if numpy.any(self.values < 0) or numpy.any(self.values > 1):
            raise ValueError("Sampled values must lie in [0, 1].")

    def value(self, t: float) -> float:
        return float(numpy.interp(t, self.times, self.values))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("samples", len(self.times))])


def profile_eval(profile: NoiseProfile, t: float) -> float:
    return profile(t)


_profile_classes = OrderedDict((profile.name, profile) for profile in
                               [CosPow2MProfile, ExponentialProfile, StretchedExponentialProfile])


def profile_from_parameters(name: str, parameters: Dict[str, Any]) -> NoiseProfile:
    if name not in _profile_classes:
        raise UnknownModelException("Unknown profile '{}', expected one of {}.".format(
            name, ", ".join(_profile_classes)))

    profile_class = _profile_classes[name]
    try:
        return profile_class(**parameters)
    except TypeError:
        raise UnknownModelException("Unexpected parameters {} for profile '{}'.".format(
            ", ".join(parameters), name))


def werner_b(p: float) -> DynamicalMap:
    """
    B = (1 - p)/2 I4 + 2 p |Φ><Φ|: trace 2, eigenvalues (1 - p)/2 (three times) and (1 + 3p)/2.
    """
    if not 0 <= p <= 1:
        raise ValueError("Werner weight must lie in [0, 1], got {}.".format(p))

    return _werner_b(p)


def _werner_b(q: float, projector: ndarray = _phi_projector) -> DynamicalMap:
    return DynamicalMap((1 - q) / 2 * identity(4) + 2 * q * projector)


def werner_a(p: float) -> StochasticMap:
    """
    rho -> p σz rho σz + (1 - p) I / 2. A(1) is the σz channel, so A(p2) A(p1) = A(1) A(p1 p2).
    """
    return b_to_a(werner_b(p))


def werner_intermediate(p1: float, p2: float) -> DynamicalMap:
    """
    B(t2, t1) = (1 - q)/2 I4 + 2 q |Φ+><Φ+| with q = p2 / p1, which may exceed 1.
    The σz factors of A(t2, 0) and A(t1, 0)^-1 cancel: the projector is on (|00> + |11>) / sqrt(2), the spectrum is
    that of the Werner form.
    """
    if p1 == 0:
        raise SingularMatrixException("Werner intermediate map is undefined for p(t1) = 0.")

    return _werner_b(p2 / p1, _phi_plus_projector)


def werner_intermediate_eigs(p1: float, p2: float) -> ndarray:
    if p1 == 0:
        raise SingularMatrixException("Werner intermediate map is undefined for p(t1) = 0.")

    q = p2 / p1
    return _sorted_eigenvalues([(1 - q) / 2] * 3 + [(1 + 3 * q) / 2])


class OpticalParams:
    def __init__(self, A1: float = 0.5, sigma: float = 0.0, delta_omega: float = 1.0):
        if not 0 <= A1 <= 1:
            raise ValueError("A1 must lie in [0, 1], got {}.".format(A1))
        if sigma < 0:
            raise ValueError("sigma must be non-negative, got {}.".format(sigma))

        self.A1 = float(A1)
        self.sigma = float(sigma)
        self.delta_omega = float(delta_omega)


def kappa_magnitude(params: OpticalParams, t: float) -> float:
    """
    |κ(t)| = exp(-σ² t² / 2) sqrt(1 - 4 A1 (1 - A1) sin²(t Δω)), with τ taken as t.
    """
    _check_time(t)
    visibility = 1 - 4 * params.A1 * (1 - params.A1) * sin(t * params.delta_omega) ** 2
    return float(exp(-params.sigma ** 2 * t ** 2 / 2) * sqrt(max(0.0, visibility)))


def _check_kappa(kappa: complex):
    if abs(kappa) > 1 + 1e-12:
        raise ValueError("|κ| must not exceed 1, got {}.".format(abs(kappa)))


def optical_a(kappa: complex) -> StochasticMap:
    _check_kappa(kappa)
    kappa = complex(kappa)
    return StochasticMap(numpy.diag([1, kappa.conjugate(), kappa, 1]))


def optical_b(kappa: complex) -> DynamicalMap:
    _check_kappa(kappa)
    kappa = complex(kappa)
    b = numpy.zeros((4, 4), dtype=complex)
    b[0, 0] = b[3, 3] = 1
    b[0, 3] = kappa.conjugate()
    b[3, 0] = kappa
    return DynamicalMap(b)


def _ratio_eigenvalues(ratio: float) -> ndarray:
    return _sorted_eigenvalues([0, 0, 1 - ratio, 1 + ratio])


def optical_intermediate_eigs(k1: complex, k2: complex) -> ndarray:
    if k1 == 0:
        raise SingularMatrixException("Optical intermediate map is undefined for κ(t1) = 0.")

    return _ratio_eigenvalues(abs(k2 / k1))


class SpinBathParams:
    def __init__(self, N: int = 4, A: float = 1.0):
        if N < 1 or int(N) != N:
            raise ValueError("Bath size N must be a positive integer, got {}.".format(N))

        self.N = int(N)
        self.A = float(A)


def spin_bath_x(params: SpinBathParams, t: float) -> float:
    """
    x(t) = cos^N(2 A t / sqrt(N)), the coherence factor for a maximally mixed bath.
    """
    _check_time(t)
    return float(cos(2 * params.A * t / math.sqrt(params.N)) ** params.N)


def _dephasing_a(x: float) -> StochasticMap:
    # diag(1, x, x, 1) = ½(1 + x) I4 + ½(1 - x) σz⊗σz, built entry-wise to keep small x exact
    return StochasticMap(numpy.diag([1, x, x, 1]))


def spin_bath_a(x: float) -> StochasticMap:
    return _dephasing_a(x)


def spin_bath_intermediate_eigs(x1: float, x2: float) -> ndarray:
    if x1 == 0:
        raise SingularMatrixException("Spin-bath intermediate map is undefined for x(t1) = 0.")

    return _ratio_eigenvalues(x2 / x1)


class TwoQubitParams:
    def __init__(self, omega: float = 1.0):
        if omega <= 0:
            raise ValueError("omega must be positive, got {}.".format(omega))

        self.omega = float(omega)


def two_qubit_a(params: TwoQubitParams, t: float) -> StochasticMap:
    """
    A(t, 0) = ½(1 + cos ωt) I4 + ½(1 - cos ωt) σz⊗σz for U(t) = cos(ωt/2) I - i sin(ωt/2) σz⊗σx.
    """
    return _dephasing_a(float(cos(params.omega * t)))


def two_qubit_intermediate_eigs(t1: float, t2: float, omega: float) -> ndarray:
    c1 = cos(omega * t1)
    if c1 == 0:
        raise SingularMatrixException("Two-qubit intermediate map is undefined for cos(ω t1) = 0.")

    return _ratio_eigenvalues(abs(cos(omega * t2) / c1))


class Model(metaclass=ABCMeta):
    name = None

    @abstractmethod
    def a_map(self, t: float) -> StochasticMap: raise NotImplementedError

    @abstractmethod
    def intermediate_eigenvalues(self, t1: float, t2: float) -> ndarray:
        """Closed-form spectrum of B(t2, t1), ascending."""
        raise NotImplementedError

    @abstractmethod
    def parameters(self) -> Dict[str, Any]: raise NotImplementedError

    def b_map(self, t: float) -> DynamicalMap:
        return a_to_b(self.a_map(t))

    def __str__(self):
        return "{} ({})".format(self.name, ", ".join("{}={}".format(key, value)
                                                     for key, value in self.parameters().items()))


class WernerModel(Model):
    name = "werner"

    def __init__(self, profile: NoiseProfile):
        self.profile = profile

    def a_map(self, t: float) -> StochasticMap:
        return werner_a(self.profile(t))

    def intermediate_eigenvalues(self, t1: float, t2: float) -> ndarray:
        return werner_intermediate_eigs(self.profile(t1), self.profile(t2))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("profile", self.profile.name)] + list(self.profile.parameters().items()))


class OpticalModel(Model):
    """κ is taken real and non-negative: intermediate spectra depend on |κ2 / κ1| only."""
    name = "optical"

    def __init__(self, params: OpticalParams):
        self.params = params

    def kappa(self, t: float) -> float:
        return kappa_magnitude(self.params, t)

    def a_map(self, t: float) -> StochasticMap:
        return optical_a(self.kappa(t))

    def intermediate_eigenvalues(self, t1: float, t2: float) -> ndarray:
        return optical_intermediate_eigs(self.kappa(t1), self.kappa(t2))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("A1", self.params.A1), ("sigma", self.params.sigma),
                            ("delta_omega", self.params.delta_omega)])


class SpinBathModel(Model):
    name = "spinbath"

    def __init__(self, params: SpinBathParams):
        self.params = params

    def a_map(self, t: float) -> StochasticMap:
        return spin_bath_a(spin_bath_x(self.params, t))

    def intermediate_eigenvalues(self, t1: float, t2: float) -> ndarray:
        return spin_bath_intermediate_eigs(spin_bath_x(self.params, t1), spin_bath_x(self.params, t2))

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("N", self.params.N), ("A", self.params.A)])


class TwoQubitModel(Model):
    name = "twoqubit"

    def __init__(self, params: TwoQubitParams):
        self.params = params

    def a_map(self, t: float) -> StochasticMap:
        return two_qubit_a(self.params, t)

    def intermediate_eigenvalues(self, t1: float, t2: float) -> ndarray:
        return two_qubit_intermediate_eigs(t1, t2, self.params.omega)

    def parameters(self) -> Dict[str, Any]:
        return OrderedDict([("omega", self.params.omega)])


model_names = [WernerModel.name, OpticalModel.name, SpinBathModel.name, TwoQubitModel.name]


def _integer(value: Any, key: str) -> int:
    number = float(value)
    if number != int(number):
        raise ValueError("{} must be an integer, got {}.".format(key, value))

    return int(number)


def _keys_checked(parameters: Dict[str, Any], allowed: List[str], model_name: str) -> Dict[str, Any]:
    unexpected = [key for key in parameters if key not in allowed]
    if unexpected:
        raise UnknownModelException("Unexpected parameters {} for model '{}', allowed: {}.".format(
            ", ".join(unexpected), model_name, ", ".join(allowed)))

    return parameters


def model_from_parameters(name: str, parameters: Dict[str, Any]) -> Model:
    """
    Builds a model from the CLI/config parameter keys:
    werner {profile, M, a, alpha, beta}, optical {A1, sigma, delta_omega}, spinbath {N, A}, twoqubit {omega}.
    """
    if name == WernerModel.name:
        _keys_checked(parameters, ["profile", "M", "a", "alpha", "beta"], name)
        profile_name = parameters.get("profile", CosPow2MProfile.name)
        profile_parameters = OrderedDict((key, _integer(value, key) if key == "M" else float(value))
                                         for key, value in parameters.items() if key != "profile")
        return WernerModel(profile_from_parameters(profile_name, profile_parameters))

    if name == OpticalModel.name:
        _keys_checked(parameters, ["A1", "sigma", "delta_omega"], name)
        return OpticalModel(OpticalParams(**dict((key, float(value)) for key, value in parameters.items())))

    if name == SpinBathModel.name:
        _keys_checked(parameters, ["N", "A"], name)
        return SpinBathModel(SpinBathParams(**dict((key, _integer(value, key) if key == "N" else float(value))
                                                   for key, value in parameters.items())))

    if name == TwoQubitModel.name:
        _keys_checked(parameters, ["omega"], name)
        return TwoQubitModel(TwoQubitParams(**dict((key, float(value)) for key, value in parameters.items())))

    raise UnknownModelException("Unknown model '{}', expected one of {}.".format(name, ", ".join(model_names)))
