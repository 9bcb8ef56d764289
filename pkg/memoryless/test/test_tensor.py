import numpy
from numpy.testing import assert_allclose
from unittest import TestCase

from memoryless.tensor import kron, partial_trace, Subsystem, realign, hermitian_eig, invert, identity, \
    SingularMatrixException, NotHermitianException, DimensionMismatchException, vectorize, unvectorize, \
    complex_matrix, SIGMA_X, SIGMA_Z, unitary_from_hamiltonian, matrix_square_root, square_root_dimension


def random_hermitian(n: int, random_state: numpy.random.RandomState) -> numpy.ndarray:
    g = random_state.normal(size=(n, n)) + 1j * random_state.normal(size=(n, n))
    return (g + g.conj().T) / 2


class KronTest(TestCase):
    def test_index_layout(self):
        a = complex_matrix([[1, 2], [3, 4]])
        b = complex_matrix([[0, 5], [6, 7]])
        k = kron(a, b)

        self.assertEqual((4, 4), k.shape)
        self.assertEqual(3 * 6, k[1 * 2 + 1, 0 * 2 + 0])
        self.assertEqual(2 * 7, k[0 * 2 + 1, 1 * 2 + 1])

    def test_associative_and_trace_multiplicative(self):
        random_state = numpy.random.RandomState(42)
        for _ in range(20):
            a, b, c = (random_state.normal(size=(n, n)) + 1j * random_state.normal(size=(n, n)) for n in [2, 3, 2])
            assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12, rtol=0)
            assert_allclose(numpy.trace(a) * numpy.trace(b), numpy.trace(kron(a, b)), atol=1e-12, rtol=0)

    def test_rejects_non_square(self):
        with self.assertRaises(DimensionMismatchException):
            kron(numpy.ones((2, 3)), identity(2))


class PartialTraceTest(TestCase):
    def test_product_state(self):
        random_state = numpy.random.RandomState(42)
        a = random_hermitian(2, random_state)
        b = random_hermitian(3, random_state)
        product = kron(a, b)

        assert_allclose(numpy.trace(a) * b, partial_trace(product, 2, 3, Subsystem.first), atol=1e-12)
        assert_allclose(numpy.trace(b) * a, partial_trace(product, 2, 3, Subsystem.second), atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchException):
            partial_trace(identity(4), 2, 3, Subsystem.first)


class VectorizeTest(TestCase):
    def test_row_major(self):
        m = complex_matrix([[1, 2], [3, 4]])
        assert_allclose([1, 2, 3, 4], vectorize(m))
        assert_allclose(m, unvectorize(vectorize(m), 2))

    def test_wrong_size(self):
        with self.assertRaises(DimensionMismatchException):
            unvectorize(numpy.zeros(5), 2)


class RealignTest(TestCase):
    def test_involution(self):
        random_state = numpy.random.RandomState(42)
        m = random_state.normal(size=(9, 9)) + 1j * random_state.normal(size=(9, 9))
        assert_allclose(m, realign(realign(m)))

    def test_entry_mapping(self):
        m = numpy.arange(16, dtype=complex).reshape(4, 4)
        r = realign(m)
        d = 2
        for a1 in range(d):
            for a2 in range(d):
                for b1 in range(d):
                    for b2 in range(d):
                        self.assertEqual(m[a1 * d + a2, b1 * d + b2], r[a1 * d + b1, a2 * d + b2])

    def test_identity_becomes_maximally_entangled_projector(self):
        phi = vectorize(identity(2))
        assert_allclose(numpy.outer(phi, phi), realign(identity(4)))

    def test_non_square_dimension(self):
        with self.assertRaises(DimensionMismatchException):
            square_root_dimension(identity(3))


class HermitianEigTest(TestCase):
    def test_random_matrices(self):
        random_state = numpy.random.RandomState(42)
        for n in [1, 2, 4, 8]:
            m = random_hermitian(n, random_state)
            spectrum = hermitian_eig(m)

            assert_allclose(numpy.linalg.eigvalsh(m), spectrum.eigenvalues, atol=1e-10)
            assert_allclose(m @ spectrum.eigenvectors, spectrum.eigenvectors * spectrum.eigenvalues, atol=1e-10)
            assert_allclose(identity(n), spectrum.eigenvectors.conj().T @ spectrum.eigenvectors, atol=1e-10)
            assert_allclose(m, spectrum.reconstructed(), atol=1e-10)

    def test_eigenvalues_sum_to_trace(self):
        random_state = numpy.random.RandomState(7)
        for n in [2, 4, 16]:
            m = random_hermitian(n, random_state)
            self.assertAlmostEqual(numpy.trace(m).real, float(numpy.sum(hermitian_eig(m).eigenvalues)), places=10)

    def test_ascending(self):
        spectrum = hermitian_eig(numpy.diag([3.0, -1.0, 2.0, 0.0]))
        assert_allclose([-1, 0, 2, 3], spectrum.eigenvalues)
        self.assertEqual(-1, spectrum.min_eigenvalue)

    def test_near_zero_eigenvalue_stays_accurate(self):
        # rank-deficient PSD matrix: the zero eigenvalues must not drift negative beyond round-off
        v = numpy.array([1, 0, 0, 1], dtype=complex) / numpy.sqrt(2)
        m = 2 * numpy.outer(v, v.conj())
        spectrum = hermitian_eig(m)
        self.assertLess(abs(spectrum.min_eigenvalue), 1e-14)
        self.assertAlmostEqual(2, spectrum.eigenvalues[-1])

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitianException):
            hermitian_eig(complex_matrix([[1, 1], [0, 1]]))

    def test_tiny_asymmetry_is_symmetrized(self):
        m = complex_matrix([[1, 1e-12], [0, 2]])
        assert_allclose([1, 2], hermitian_eig(m).eigenvalues, atol=1e-11)


class InvertTest(TestCase):
    def test_random(self):
        random_state = numpy.random.RandomState(42)
        m = random_state.normal(size=(4, 4)) + 1j * random_state.normal(size=(4, 4))
        assert_allclose(identity(4), m @ invert(m), atol=1e-10)

    def test_needs_pivoting(self):
        m = complex_matrix([[0, 1], [1, 0]])
        assert_allclose(m, invert(m))

    def test_singular(self):
        with self.assertRaises(SingularMatrixException):
            invert(numpy.diag([1, 0, 0, 1]))

    def test_round_off_singular(self):
        with self.assertRaises(SingularMatrixException):
            invert(numpy.diag([1, numpy.cos(numpy.pi / 2), numpy.cos(numpy.pi / 2), 1]))


class UnitaryTest(TestCase):
    def test_pauli_rotation(self):
        t = 0.7
        expected = numpy.cos(t) * identity(4) - 1j * numpy.sin(t) * kron(SIGMA_Z, SIGMA_X)
        assert_allclose(expected, unitary_from_hamiltonian(kron(SIGMA_Z, SIGMA_X), t), atol=1e-12)

    def test_composes_over_time(self):
        random_state = numpy.random.RandomState(42)
        h = random_hermitian(4, random_state)
        for t1, t2 in zip(random_state.uniform(0, 3, 10), random_state.uniform(0, 3, 10)):
            assert_allclose(unitary_from_hamiltonian(h, t1 + t2),
                            unitary_from_hamiltonian(h, t1) @ unitary_from_hamiltonian(h, t2), atol=1e-10, rtol=0)

    def test_diagonal_generator(self):
        h = numpy.diag([0.5, -0.5, 1.5, 0.0])
        assert_allclose(numpy.diag(numpy.exp(-1j * numpy.diag(h) * 0.9)), unitary_from_hamiltonian(h, 0.9), atol=1e-15)
        with self.assertRaises(NotHermitianException):
            unitary_from_hamiltonian(numpy.diag([1j, 0]), 0.9)

    def test_square_root(self):
        random_state = numpy.random.RandomState(42)
        g = random_state.normal(size=(3, 3)) + 1j * random_state.normal(size=(3, 3))
        m = g @ g.conj().T
        root = matrix_square_root(m)
        assert_allclose(m, root @ root, atol=1e-10)
