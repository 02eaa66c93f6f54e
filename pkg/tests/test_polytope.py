from unittest import TestCase

import math

import numpy as np

from reachsched.basic.exceptions import ContractViolationError, InfeasibilityError
from reachsched.geometry.norm_ball import NormBallSet, sample_uniform_ball
from reachsched.geometry.polytope import HPolytope


class TestHPolytope(TestCase):
    def setUp(self):
        self.unit_square = HPolytope.from_box([0, 0], [1, 1])
        self.triangle = HPolytope([[-1, 0], [0, -1], [1, 1]], [0, 0, 1])

    def test_shape_mismatch(self):
        with self.assertRaises(ContractViolationError):
            HPolytope([[1, 0], [0, 1]], [1, 2, 3])

    def test_contains(self):
        self.assertTrue(self.unit_square.contains([0.5, 0.5]))
        self.assertTrue(self.unit_square.contains([1.0, 0.0]))
        self.assertFalse(self.unit_square.contains([1.1, 0.5]))
        res = self.triangle.contains_points([[0.2, 0.2], [0.6, 0.6]])
        self.assertEqual([True, False], res.tolist())

    def test_face_distance(self):
        self.assertAlmostEqual(0.25, self.unit_square.face_distance([0.25, 0.5]), places=12)
        self.assertAlmostEqual(-0.5, self.unit_square.face_distance([1.5, 0.5]), places=12)

    def test_vertices(self):
        verts = sorted(map(tuple, np.round(self.unit_square.vertices(), 12)))
        self.assertEqual([(0, 0), (0, 1), (1, 0), (1, 1)], verts)
        lo, hi = self.triangle.bounding_box()
        np.testing.assert_allclose([0, 0], lo, atol=1e-12)
        np.testing.assert_allclose([1, 1], hi, atol=1e-12)

    def test_bounded_and_empty(self):
        self.assertTrue(self.unit_square.is_bounded())
        self.assertFalse(HPolytope([[1, 0]], [1]).is_bounded())
        self.assertTrue(HPolytope([[1], [-1]], [0, -1]).is_empty())
        self.assertFalse(self.triangle.is_empty())

    def test_equality_rows(self):
        box = HPolytope.from_box([-9, -9, 0, 0], [-7, -7, 0, 0])
        self.assertEqual(2, len(box.equality_rows()))
        self.assertEqual([], self.unit_square.equality_rows())

    def test_chebyshev_unit_square(self):
        center, radius = self.unit_square.chebyshev_ball()
        np.testing.assert_allclose([0.5, 0.5], center, atol=1e-7)
        self.assertAlmostEqual(0.5, radius, places=7)

    def test_chebyshev_triangle(self):
        center, radius = self.triangle.chebyshev_ball()
        r = 1.0 / (2.0 + math.sqrt(2.0))
        self.assertAlmostEqual(0.2929, radius, places=4)
        np.testing.assert_allclose([r, r], center, atol=1e-7)

    def test_chebyshev_with_pinned_coordinates(self):
        box = HPolytope.from_box([-9, -9, 0, 0], [-7, -7, 0, 0])
        center, radius = box.chebyshev_ball()
        np.testing.assert_allclose([-8, -8, 0, 0], center, atol=1e-7)
        self.assertAlmostEqual(1.0, radius, places=7)

    def test_chebyshev_row_order(self):
        c1 = self.unit_square.chebyshev_center()
        c2 = self.unit_square.chebyshev_ball(row_order=[3, 1, 0, 2])[0]
        np.testing.assert_allclose(c1, c2, atol=1e-7)

    def test_chebyshev_errors(self):
        with self.assertRaises(InfeasibilityError):
            HPolytope([[1], [-1]], [0, -1]).chebyshev_ball()
        with self.assertRaises(ContractViolationError):
            HPolytope([[1, 0]], [1]).chebyshev_ball()

    def test_sample(self):
        pts = self.triangle.sample(np.random.default_rng(3), 200)
        self.assertEqual((200, 2), pts.shape)
        self.assertTrue(np.all(self.triangle.contains_points(pts)))
        pinned = HPolytope.from_box([-8.1, -8.1, 0, 0], [-7.9, -7.9, 0, 0])
        pts = pinned.sample(np.random.default_rng(3), 50)
        self.assertTrue(np.all(pinned.contains_points(pts)))
        np.testing.assert_array_equal(np.zeros((50, 2)), pts[:, 2:])


class TestNormBall(TestCase):
    def test_contains(self):
        ball = NormBallSet(2.0, 2)
        self.assertTrue(ball.contains([1.2, 1.6]))
        self.assertFalse(ball.contains([2.0, 0.1]))

    def test_boundary_points(self):
        pts = NormBallSet(5.0, 2).boundary_points()
        self.assertEqual((4, 2), pts.shape)
        np.testing.assert_allclose(5.0, np.linalg.norm(pts, axis=1))

    def test_grid(self):
        grid = NormBallSet(0.01, 1).grid(3)
        np.testing.assert_allclose([[-0.01], [0.0], [0.01]], grid)
        self.assertTrue(np.all(np.linalg.norm(NormBallSet(1.0, 2).grid(5), axis=1) <= 1.0 + 1e-12))

    def test_negative_radius(self):
        with self.assertRaises(ValueError):
            NormBallSet(-1.0, 2)

    def test_sample_uniform_ball(self):
        pts = sample_uniform_ball(np.random.default_rng(1), 1000, 4, 0.1)
        self.assertEqual((1000, 4), pts.shape)
        self.assertTrue(np.all(np.linalg.norm(pts, axis=1) <= 0.1 + 1e-12))
