"""
Dense complex linear algebra used by all map computations.

A ComplexMatrix is a square, finite numpy array of dtype complex128.
Vectorization is row-major throughout: the entry (a1, a2) of a d x d matrix sits at index a1 * d + a2,
so vectorize(rho) is rho.reshape(d * d). Realignment, map application and Choi construction all rely on it.
"""
import math
from enum import Enum

import numpy
from lazy import lazy
from numpy import ndarray, eye, kron as numpy_kron, einsum, sqrt, exp, diag, argsort
from typing import Any

hermiticity_tolerance = 1e-10
singularity_threshold = 1e-12
jacobi_convergence_threshold = 1e-13
jacobi_max_sweep_count = 100


class DimensionMismatchException(ValueError):
    pass


class NotHermitianException(ValueError):
    pass


class NonConvergenceException(ArithmeticError):
    pass


class SingularMatrixException(ArithmeticError):
    pass


class Subsystem(Enum):
    first = "first"
    second = "second"


def complex_matrix(entries: Any) -> ndarray:
    m = numpy.array(entries, dtype=complex)

    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchException("Expected a non-empty square matrix, got shape {}.".format(m.shape))

    if not numpy.all(numpy.isfinite(m)):
        raise ValueError("Matrix entries must be finite.")

    return m


def identity(d: int) -> ndarray:
    return eye(d, dtype=complex)


IDENTITY_2 = identity(2)
SIGMA_X = complex_matrix([[0, 1], [1, 0]])
SIGMA_Y = complex_matrix([[0, -1j], [1j, 0]])
SIGMA_Z = complex_matrix([[1, 0], [0, -1]])


def dimension(m: ndarray) -> int:
    return m.shape[0]


def square_root_dimension(m: ndarray) -> int:
    d = math.isqrt(dimension(m))
    if d * d != dimension(m):
        raise DimensionMismatchException("Dimension {} is not a perfect square.".format(dimension(m)))

    return d


def vectorize(m: ndarray) -> ndarray:
    return numpy.asarray(m, dtype=complex).reshape(-1)


def unvectorize(vector: ndarray, d: int) -> ndarray:
    if vector.size != d * d:
        raise DimensionMismatchException("Vector of size {} does not hold a {}x{} matrix.".format(vector.size, d, d))

    return numpy.asarray(vector, dtype=complex).reshape(d, d)


def kron(a: ndarray, b: ndarray) -> ndarray:
    """
    (a ⊗ b)[i * dim_b + k, j * dim_b + l] = a[i, j] * b[k, l]
    """
    return numpy_kron(complex_matrix(a), complex_matrix(b))


def partial_trace(m: ndarray, dim_first: int, dim_second: int, which: Subsystem) -> ndarray:
    """
    Traces out the subsystem `which` of an operator on a (dim_first * dim_second)-dimensional product space.
    """
    if dim_first * dim_second != dimension(m):
        raise DimensionMismatchException("Subsystem dimensions {} x {} do not match matrix dimension {}.".format(
            dim_first, dim_second, dimension(m)))

    tensor = m.reshape(dim_first, dim_second, dim_first, dim_second)
    if which == Subsystem.first:
        return einsum('ijik->jk', tensor)
    if which == Subsystem.second:
        return einsum('ijkj->ik', tensor)

    raise ValueError(which)


def realign(m: ndarray) -> ndarray:
    """
    out[b1 * d + a1, b2 * d + a2] = m[b1 * d + b2, a1 * d + a2]; an involution.
    """
    d = square_root_dimension(m)
    return m.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def hermiticity_deviation(m: ndarray) -> float:
    return float(numpy.max(numpy.abs(m - m.conj().T)))


def max_abs(m: ndarray) -> float:
    return float(numpy.max(numpy.abs(m)))


class Spectrum:
    def __init__(self, eigenvalues: ndarray, eigenvectors: ndarray):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors

    @lazy
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def reconstructed(self) -> ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    def __str__(self):
        return "Spectrum ({})".format(", ".join("{:.6g}".format(value) for value in self.eigenvalues))


def _off_diagonal_norm(m: ndarray) -> float:
    return float(numpy.linalg.norm(m - diag(diag(m))))


def _jacobi_rotate(a: ndarray, v: ndarray, p: int, q: int) -> None:
    a_pq = a[p, q]
    magnitude = abs(a_pq)
    if magnitude == 0:
        return

    phase = a_pq / magnitude
    tau = (a[q, q].real - a[p, p].real) / (2 * magnitude)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + sqrt(1 + tau * tau))
    c = 1 / sqrt(1 + t * t)
    s = t * c

    rotation = numpy.array([[c, s * phase], [-s * phase.conjugate(), c]])
    indices = [p, q]
    a[:, indices] = a[:, indices] @ rotation
    a[indices, :] = rotation.conj().T @ a[indices, :]
    v[:, indices] = v[:, indices] @ rotation

    a[p, q] = a[q, p] = 0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def hermitian_eig(m: ndarray) -> Spectrum:
    """
    Cyclic complex Jacobi eigensolver for Hermitian matrices.

    Jacobi keeps near-zero eigenvalues accurate, which is what decides complete positivity.
    :return: Eigenvalues ascending with orthonormal eigenvector columns, m @ V = V @ diag(eigenvalues).
    """
    m = complex_matrix(m)
    deviation = hermiticity_deviation(m)
    if deviation >= hermiticity_tolerance:
        raise NotHermitianException("Matrix deviates from hermiticity by {}.".format(deviation))

    a = (m + m.conj().T) / 2
    n = dimension(a)
    v = identity(n)
    threshold = jacobi_convergence_threshold * float(numpy.linalg.norm(a))

    for sweep in range(jacobi_max_sweep_count + 1):
        if _off_diagonal_norm(a) <= threshold:
            eigenvalues = diag(a).real
            order = argsort(eigenvalues, kind='stable')
            return Spectrum(eigenvalues[order], v[:, order])

        if sweep == jacobi_max_sweep_count:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, v, p, q)

    raise NonConvergenceException("Jacobi eigensolver did not converge within {} sweeps.".format(
        jacobi_max_sweep_count))


def invert(m: ndarray) -> ndarray:
    """
    Gauss-Jordan elimination with partial pivoting.

    Raises SingularMatrixException if a pivot falls below 1e-12 times the largest entry of m.
    """
    m = complex_matrix(m)
    n = dimension(m)
    scale = max_abs(m)
    if scale == 0:
        raise SingularMatrixException("Zero matrix is not invertible.")

    augmented = numpy.hstack([m, identity(n)])
    for column in range(n):
        pivot_row = column + int(numpy.argmax(numpy.abs(augmented[column:, column])))
        pivot = augmented[pivot_row, column]
        if abs(pivot) < singularity_threshold * scale:
            raise SingularMatrixException("Pivot {:.3g} in column {} is below {:.3g} relative to the largest entry.".format(
                abs(pivot), column, singularity_threshold))

        if pivot_row != column:
            augmented[[column, pivot_row]] = augmented[[pivot_row, column]]

        augmented[column] /= pivot
        factors = augmented[:, column].copy()
        factors[column] = 0
        augmented -= numpy.outer(factors, augmented[column])

    return augmented[:, n:]


def unitary_from_hamiltonian(h: ndarray, t: float) -> ndarray:
    """
    exp(-i h t) from the spectral decomposition of the Hermitian generator h.
    """
    h = complex_matrix(h)
    if not numpy.any(h - diag(diag(h).real)):
        return diag(exp(-1j * diag(h).real * t))

    spectrum = hermitian_eig(h)
    phases = exp(-1j * spectrum.eigenvalues * t)
    return (spectrum.eigenvectors * phases) @ spectrum.eigenvectors.conj().T


def matrix_square_root(m: ndarray) -> ndarray:
    """
    Square root of a positive semidefinite Hermitian matrix; round-off negative eigenvalues are clipped to 0.
    """
    spectrum = hermitian_eig(m)
    roots = sqrt(numpy.clip(spectrum.eigenvalues, 0, None))
    return (spectrum.eigenvectors * roots) @ spectrum.eigenvectors.conj().T
