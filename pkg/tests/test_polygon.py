from unittest import TestCase

import numpy as np

from reachsched.geometry.polygon import Polygon


class TestPolygon(TestCase):
    def setUp(self):
        self.square = Polygon.from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])

    def test_get_list_view(self):
        poly_in = Polygon([0, 3, 4, 5, 7, 5], [1, 3, 5, 3, 1, 0], 6)
        res = [(0, 1), (3, 3), (4, 5), (5, 3), (7, 1), (5, 0)]

        self.assertEqual(res, poly_in.as_list())

    def test_from_vertices_needs_three_points(self):
        with self.assertRaises(ValueError):
            Polygon.from_vertices([(0, 0), (1, 1)])

    def test_get_bounding_box(self):
        poly = Polygon([-3, -1, -1, -3], [-6, -6, 6, 6], 4)
        bb = poly.get_bounding_box()
        self.assertEqual((-3.0, -6.0, 2.0, 12.0), (bb.x, bb.y, bb.width, bb.height))

    def test_signed_area(self):
        self.assertEqual(1.0, self.square.signed_area())
        clockwise = Polygon.from_vertices([(0, 0), (0, 1), (1, 1), (1, 0)])
        self.assertEqual(-1.0, clockwise.signed_area())

    def test_is_simple(self):
        self.assertTrue(self.square.is_simple())
        bowtie = Polygon.from_vertices([(0, 0), (1, 1), (1, 0), (0, 1)])
        self.assertFalse(bowtie.is_simple())

    def test_contains_points(self):
        res = self.square.contains_points([[0.5, 0.5], [1.5, 0.5], [0.25, 0.9]])
        self.assertEqual([True, False, True], res.tolist())

    def test_boundary_is_not_contained(self):
        self.assertFalse(np.any(self.square.contains_points([[1.0, 0.5], [0.0, 0.0], [0.5, 1.0]])))

    def test_contains_non_convex(self):
        # L-shape
        poly = Polygon.from_vertices([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
        self.assertEqual([True, False], poly.contains_points([[0.5, 1.5], [1.5, 1.5]]).tolist())

    def test_distance_to_boundary(self):
        dist = self.square.distance_to_boundary([[0.5, 0.5], [2.0, 0.5], [0.5, 0.1]])
        np.testing.assert_allclose([0.5, 1.0, 0.1], dist, atol=1e-12)

    def test_diamond(self):
        diamond = Polygon.from_vertices([(0.5, 0), (0, 0.25), (-0.5, 0), (0, -0.25)])
        self.assertTrue(diamond.is_simple())
        self.assertEqual([True, False], diamond.contains_points([[0.0, 0.0], [0.3, 0.2]]).tolist())
        # 2|x1| + 4|x2| = 1 on the boundary
        self.assertAlmostEqual(0.0, float(diamond.distance_to_boundary([[0.25, 0.125]])[0]), places=12)
