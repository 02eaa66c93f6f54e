from unittest import TestCase

import numpy as np

from reachsched.basic.exceptions import ContractViolationError
from reachsched.geometry.polytope import HPolytope
from reachsched.model.system_model import LinearDynamics, PendulumDynamics, check_lipschitz, contained_in_region
from tests.fixtures import integrator_system, pendulum_system


class TestDynamics(TestCase):
    def test_linear_shapes(self):
        dyn = LinearDynamics(np.eye(2), [1.0, 0.0])
        self.assertEqual((2, 1, 2), (dyn.n, dyn.m, dyn.n_w))
        with self.assertRaises(ContractViolationError):
            LinearDynamics(np.eye(2), np.ones((3, 1)))

    def test_pendulum_step(self):
        dyn = PendulumDynamics(0.6, 3.0, 0.2)
        np.testing.assert_allclose([0.1, 0.2], dyn.step(np.array([0.0, 0.5]), np.zeros(1), np.zeros(1)), atol=1e-12)
        batch = dyn.step_batch(np.array([[0.0, 0.5], [0.0, 0.5]]), np.array([[0.0], [1.0]]), np.zeros((2, 1)))
        np.testing.assert_allclose([[0.1, 0.2], [0.1, 0.4]], batch, atol=1e-12)

    def test_pendulum_sampling_time(self):
        with self.assertRaises(ContractViolationError):
            PendulumDynamics(0.6, 3.0, 0.0)


class TestSystemModel(TestCase):
    def setUp(self):
        self.sys = integrator_system()

    def test_step(self):
        np.testing.assert_allclose([0.5, 0.01], self.sys.step([0, 0], [1, 0], [0, 0.01]))
        with self.assertRaises(ContractViolationError):
            self.sys.step([0, 0, 0], [1, 0], [0, 0])
        with self.assertRaises(ContractViolationError):
            self.sys.step([0, 0], [1], [0, 0])

    def test_radii(self):
        self.assertEqual(3.0, self.sys.u_max)
        self.assertEqual(0.01, self.sys.w_max)
        self.assertEqual(0.2, self.sys.with_sets(w_max=0.2).w_max)
        np.testing.assert_array_equal([0.0, 0.0], self.sys.zero_disturbance())

    def test_swap_sets(self):
        swapped = self.sys.with_sets(initial_set=self.sys.target_set, target_set=self.sys.initial_set)
        self.assertTrue(swapped.initial_set.contains([9, 0]))
        self.assertTrue(swapped.target_set.contains([0, 0]))

    def test_intersecting_sets(self):
        with self.assertRaises(ContractViolationError):
            self.sys.with_sets(target_set=HPolytope.from_box([0, 0], [1, 1]))

    def test_set_outside_free_space(self):
        with self.assertRaises(ContractViolationError):
            self.sys.with_sets(target_set=HPolytope.from_box([10, -1], [12, 1]))

    def test_lipschitz_constants_positive(self):
        with self.assertRaises(ContractViolationError):
            integrator_system(L_x=0.0)

    def test_contained_in_region(self):
        sys = pendulum_system()
        self.assertTrue(contained_in_region(sys.initial_set, sys.free_space))
        # crosses the excluded diamond around the origin
        self.assertFalse(contained_in_region(HPolytope.from_box([-0.6, -0.05], [-0.4, 0.05]), sys.free_space))

    def test_check_lipschitz(self):
        res = check_lipschitz(self.sys, n_pairs=2000, seed=0)
        self.assertEqual(0, res["violations"])
        self.assertLessEqual(res["max_ratio"], 1.0 + 1e-9)
        self.assertEqual(0, check_lipschitz(pendulum_system(), n_pairs=5000, seed=1)["violations"])

    def test_check_lipschitz_detects_small_constant(self):
        res = check_lipschitz(pendulum_system(L_x=0.5, L_w=0.05), n_pairs=2000, seed=0)
        self.assertGreater(res["violations"], 0)
        self.assertGreater(res["max_ratio"], 1.0)
