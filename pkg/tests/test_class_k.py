from unittest import TestCase

import math

import numpy as np

from reachsched.basic.exceptions import ContractViolationError, OutOfRangeError
from reachsched.math.class_k import ComposedK, IdentityMinus, InverseK, LinearK, MinWithIdentityK, PolynomialK, \
    PowerK, class_k_from_dict, monotone_contraction


class TestClassK(TestCase):
    def test_linear(self):
        f = LinearK(2.0)
        self.assertEqual(6.0, f(3.0))
        self.assertEqual(3.0, f.inverse(6.0))
        self.assertEqual(0.0, f(0.0))
        self.assertEqual(math.inf, f(math.inf))
        self.assertEqual(math.inf, f.inverse(math.inf))
        np.testing.assert_allclose([0.0, 2.0, 4.0], f.apply(np.array([0.0, 1.0, 2.0])))

    def test_contract(self):
        with self.assertRaises(ContractViolationError):
            LinearK(2.0)(-1.0)
        with self.assertRaises(ContractViolationError):
            LinearK(2.0).inverse(-1.0)
        with self.assertRaises(ContractViolationError):
            LinearK(0.0)
        with self.assertRaises(ContractViolationError):
            PolynomialK([(1.0, 1.0), (-0.5, 2.0)])

    def test_power(self):
        f = PowerK(2.0, 2.0)
        self.assertEqual(8.0, f(2.0))
        self.assertAlmostEqual(2.0, f.inverse(8.0), places=12)

    def test_polynomial_round_trip(self):
        rho = PolynomialK([(3.5, 1.0), (0.16, 2.0)])
        for y in np.logspace(-4, 4, 25):
            r = rho.inverse(y)
            self.assertLessEqual(abs(rho(r) - y), 1e-8 * max(1.0, y))
        self.assertAlmostEqual(3.5 + 0.16, rho(1.0), places=12)

    def test_out_of_range(self):
        rho = PolynomialK([(3.5, 1.0), (0.16, 2.0)])
        with self.assertRaises(OutOfRangeError):
            rho.inverse(1e20)

    def test_composed_and_inverse(self):
        f = ComposedK(LinearK(2.0), PowerK(1.0, 2.0))
        self.assertEqual(18.0, f(3.0))
        self.assertAlmostEqual(3.0, f.inverse(18.0), places=12)
        g = InverseK(PowerK(1.0, 2.0))
        self.assertAlmostEqual(2.0, g(4.0), places=12)
        self.assertAlmostEqual(4.0, g.inverse(2.0), places=12)

    def test_min_with_identity(self):
        f = MinWithIdentityK(LinearK(2.0))
        self.assertAlmostEqual(1.0 - 1e-6, f(1.0), places=12)
        self.assertAlmostEqual(1.0, f.inverse(1.0 - 1e-6), places=12)
        g = MinWithIdentityK(LinearK(0.5))
        self.assertEqual(0.5, g(1.0))
        self.assertEqual(1.0, g.inverse(0.5))

    def test_identity_minus(self):
        branch = IdentityMinus(LinearK(0.4))
        self.assertAlmostEqual(0.6, branch(1.0), places=12)
        self.assertTrue(branch.is_increasing(10.0))
        self.assertFalse(IdentityMinus(LinearK(1.5)).is_increasing(10.0))
        self.assertEqual(math.inf, branch(math.inf))

    def test_monotone_contraction(self):
        alpha2, branch = monotone_contraction(LinearK(0.4), 10.0)
        self.assertIsInstance(alpha2, LinearK)
        with self.assertLogs("ClassK", level="WARNING"):
            alpha2, branch = monotone_contraction(LinearK(1.5), 10.0)
        self.assertIsInstance(alpha2, MinWithIdentityK)
        self.assertTrue(branch.is_increasing(10.0))

    def test_check_monotone(self):
        self.assertTrue(LinearK(1.0).check_monotone(10.0))
        self.assertTrue(PolynomialK([(3.5, 1.0), (0.16, 2.0)]).check_monotone(10.0))

    def test_from_dict(self):
        self.assertEqual(2.0, class_k_from_dict({"linear": 2.0})(1.0))
        self.assertEqual(12.0, class_k_from_dict({"power": [3.0, 2.0]})(2.0))
        self.assertAlmostEqual(3.66, class_k_from_dict({"lin": 3.5, "quad": 0.16})(1.0), places=12)
        self.assertEqual(5.0, class_k_from_dict({"poly": [[1.0, 1.0], [1.0, 2.0]]})(2.0) - 1.0)
        with self.assertRaises(ContractViolationError):
            class_k_from_dict({"exp": 1.0})
