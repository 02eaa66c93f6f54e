import numpy as np

from reachsched.geometry.rectangle import Rectangle
from reachsched.geometry.util import check_intersection, points_to_segment_distance

# points closer than this to an edge are treated as lying on the boundary
BOUNDARY_TOL = 1e-12


class Polygon(object):

    def __init__(self, x_points=None, y_points=None, n_points=0):
        """ Constructs a new polygon given by a closed vertex loop (the last vertex connects to the first).

        :param x_points: list of x coordinates of the polygon
        :type x_points: list of float
        :param y_points: list of y coordinates of the polygon
        :type y_points: list of float
        :param n_points: total number of points in the polygon
        :type n_points: int
        """
        x_points = [] if x_points is None else [float(x) for x in x_points]
        y_points = [] if y_points is None else [float(y) for y in y_points]

        if len(x_points) != len(y_points):
            raise ValueError("x_points and y_points differ in length")
        if n_points > len(x_points):
            raise ValueError("Bounds Error: n_points > len(x_points) or n_points > len(y_points)")
        if n_points < 0:
            raise ValueError("Negative Size: n_points < 0")

        self.x_points = x_points
        self.y_points = y_points
        self.n_points = n_points if n_points else len(x_points)
        self.bounds = None  # lazily computed bounding Rectangle

    @classmethod
    def from_vertices(cls, vertices):
        """ Build a polygon from a list of (x, y) pairs.

        :param vertices: list of (x, y) tuples
        :return: Polygon
        """
        if len(vertices) < 3:
            raise ValueError("A polygon needs at least three vertices, got {}".format(len(vertices)))
        x, y = zip(*vertices)
        return cls(list(x), list(y), n_points=len(x))

    def as_list(self):
        return list(zip(self.x_points, self.y_points))

    def as_array(self):
        return np.array([self.x_points, self.y_points], dtype=float).T

    def edges(self):
        """ List of (start, end) vertex pairs, closing the loop. """
        pts = self.as_list()
        return [(pts[i], pts[(i + 1) % self.n_points]) for i in range(self.n_points)]

    def calculate_bounds(self):
        """ Calculates the bounding box of points of the polygon. """
        bounds_min_x = min(self.x_points)
        bounds_min_y = min(self.y_points)

        bounds_max_x = max(self.x_points)
        bounds_max_y = max(self.y_points)

        self.bounds = Rectangle(bounds_min_x, bounds_min_y, width=bounds_max_x - bounds_min_x,
                                height=bounds_max_y - bounds_min_y)

    def get_bounding_box(self):
        """ Get the bounding box of this polygon (= smallest rectangle including this polygon).

        :return: (Rectangle) rectangle defining the bounds of this polygon
        """
        if self.n_points == 0:
            return Rectangle()

        if self.bounds is None:
            self.calculate_bounds()

        return self.bounds

    def signed_area(self):
        """ Shoelace area, positive for counter-clockwise loops. """
        x = np.asarray(self.x_points)
        y = np.asarray(self.y_points)
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def is_simple(self):
        """ Check that no two non-adjacent edges of the loop intersect and no adjacent edges overlap.

        :return: bool
        """
        edges = self.edges()
        n = len(edges)
        if n < 3 or self.signed_area() == 0.0:
            return False
        for i in range(n):
            for j in range(i + 1, n):
                (p1, p2), (q1, q2) = edges[i], edges[j]
                hit = check_intersection([[p1[0], p2[0]], [p1[1], p2[1]]], [[q1[0], q2[0]], [q1[1], q2[1]]])
                if hit is None:
                    continue
                adjacent = j == i + 1 or (i == 0 and j == n - 1)
                # adjacent edges meet in exactly one shared vertex
                if adjacent and hit != ["inf", "inf"]:
                    continue
                return False
        return True

    def distance_to_boundary(self, points):
        """ Euclidean distance of each point to the closest edge of the polygon.

        :param points: array of shape (N, 2)
        :return: array of shape (N,)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        dist = np.full(points.shape[0], np.inf)
        for start, end in self.edges():
            dist = np.minimum(dist, points_to_segment_distance(points, start, end))
        return dist

    def contains_points(self, points):
        """ Vectorized ray casting; points on the boundary are reported as not contained.

        :param points: array of shape (N, 2)
        :return: boolean array of shape (N,)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        px, py = points[:, 0], points[:, 1]
        inside = np.zeros(points.shape[0], dtype=bool)
        for (x1, y1), (x2, y2) in self.edges():
            crosses = (y1 > py) != (y2 > py)
            if not np.any(crosses):
                continue
            with np.errstate(divide='ignore', invalid='ignore'):
                x_at = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            inside ^= crosses & (px < x_at)
        return inside & (self.distance_to_boundary(points) > BOUNDARY_TOL)

    def __repr__(self):
        return "Polygon({})".format(self.as_list())
