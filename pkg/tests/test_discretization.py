from unittest import TestCase

import math

import numpy as np

from reachsched.basic.exceptions import ContractViolationError
from reachsched.math.discretization import discretize_zoh
from reachsched.math.spectral import sigma_max, sigma_min, symmetric_eigenvalues

TAU = 0.95


class TestDiscretization(TestCase):
    def test_scalar(self):
        A, B = discretize_zoh([[-1.0 / TAU]], [[1.0 / TAU]], 0.5)
        self.assertAlmostEqual(0.5908, A[0, 0], places=4)
        self.assertAlmostEqual(0.4092, B[0, 0], places=4)
        self.assertAlmostEqual(math.exp(-0.5 / TAU), A[0, 0], places=12)

    def test_vehicle_axis(self):
        A, B = discretize_zoh([[0.0, 1.0], [0.0, -1.0 / TAU]], [0.0, 1.0 / TAU], 0.5)
        np.testing.assert_allclose([[1.0, 0.388768], [0.0, 0.590770]], A, atol=5e-5)
        np.testing.assert_allclose([[0.111232], [0.409230]], B, atol=5e-5)

    def test_integrator(self):
        A, B = discretize_zoh(np.zeros((2, 2)), np.eye(2), 0.2)
        np.testing.assert_allclose(np.eye(2), A)
        np.testing.assert_allclose(0.2 * np.eye(2), B)

    def test_contract(self):
        with self.assertRaises(ContractViolationError):
            discretize_zoh([[0.0, 1.0]], [[1.0]], 0.5)
        with self.assertRaises(ContractViolationError):
            discretize_zoh([[0.0]], [[1.0]], 0.0)


class TestSpectral(TestCase):
    def test_symmetric_eigenvalues(self):
        eig = symmetric_eigenvalues([[2.1, 0.45], [0.45, 0.43]])
        self.assertAlmostEqual(0.31646, eig[0], places=4)
        self.assertAlmostEqual(2.21354, eig[1], places=4)
        np.testing.assert_allclose([1.0, 2.0, 3.0], symmetric_eigenvalues(np.diag([3.0, 1.0, 2.0])))

    def test_singular_values(self):
        self.assertAlmostEqual(4.0, sigma_max([[3.0, 0.0], [0.0, 4.0]]), places=12)
        self.assertAlmostEqual(3.0, sigma_min([[3.0, 0.0], [0.0, 4.0]]), places=12)
