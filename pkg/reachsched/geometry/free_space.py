import numpy as np

from reachsched.basic.exceptions import ContractViolationError
from reachsched.geometry.polygon import Polygon, BOUNDARY_TOL


class FreeSpaceRegion(object):

    def __init__(self, dim, outer, obstacles=None, position_indices=(0, 1), box=None, halfspaces=None):
        """ Free space X: a planar polygon with holes over two "position" coordinates, intersected with a box
        on the remaining coordinates and optional extra half-spaces over the full state.

        :param dim: state dimension n
        :type dim: int
        :param outer: outer boundary loop
        :type outer: Polygon
        :param obstacles: obstacle loops, strictly inside ``outer``
        :type obstacles: list of Polygon
        :param position_indices: state coordinates the polygons live in
        :param box: list of (index, lower, upper) for the remaining coordinates
        :param halfspaces: optional pair (A, b) with rows a_i x < b_i over the full state
        """
        self.dim = int(dim)
        self.outer = outer
        self.obstacles = list(obstacles) if obstacles else []
        self.position_indices = list(position_indices)
        self.box = [(int(i), float(lo), float(hi)) for i, lo, hi in (box or [])]
        if halfspaces is not None:
            self.hs_A = np.atleast_2d(np.asarray(halfspaces[0], dtype=float))
            self.hs_b = np.asarray(halfspaces[1], dtype=float).reshape(-1)
        else:
            self.hs_A = np.zeros((0, self.dim))
            self.hs_b = np.zeros(0)

        self._check()

    def _check(self):
        if len(self.position_indices) != 2:
            raise ContractViolationError("exactly two position coordinates are supported")
        covered = set(self.position_indices)
        for i, lo, hi in self.box:
            if not 0 <= i < self.dim or i in covered or lo >= hi:
                raise ContractViolationError("invalid box constraint ({}, {}, {})".format(i, lo, hi))
            covered.add(i)
        if covered != set(range(self.dim)):
            raise ContractViolationError("coordinates {} are unbounded".format(sorted(set(range(self.dim)) - covered)))
        if self.hs_A.shape[1] != self.dim:
            raise ContractViolationError("half-space rows must have {} columns".format(self.dim))
        if not self.outer.is_simple():
            raise ContractViolationError("outer polygon is not simple")
        outer_box = self.outer.get_bounding_box()
        for obstacle in self.obstacles:
            verts = obstacle.as_array()
            if not outer_box.contains_rectangle(obstacle.get_bounding_box()) \
                    or not np.all(self.outer.contains_points(verts)):
                raise ContractViolationError("obstacle {} is not strictly inside the outer polygon".format(obstacle))

    def bounds(self):
        """ Per-coordinate (lower, upper) bounds of the region's bounding box. """
        lo = np.zeros(self.dim)
        hi = np.zeros(self.dim)
        bb = self.outer.get_bounding_box()
        lo[self.position_indices] = [bb.x, bb.y]
        hi[self.position_indices] = [bb.x + bb.width, bb.y + bb.height]
        for i, l, h in self.box:
            lo[i], hi[i] = l, h
        return lo, hi

    def _boundary_distances(self, states):
        pos = states[:, self.position_indices]
        dist = self.outer.distance_to_boundary(pos)
        for obstacle in self.obstacles:
            dist = np.minimum(dist, obstacle.distance_to_boundary(pos))
        for i, lo, hi in self.box:
            dist = np.minimum(dist, np.minimum(np.abs(states[:, i] - lo), np.abs(hi - states[:, i])))
        if self.hs_A.shape[0]:
            norms = np.linalg.norm(self.hs_A, axis=1)
            slack = np.abs(self.hs_b[None, :] - states.dot(self.hs_A.T)) / norms[None, :]
            dist = np.minimum(dist, slack.min(axis=1))
        return dist

    def contains_points(self, states):
        """ Strict membership (boundary points are unsafe).

        :param states: array of shape (N, n)
        :return: boolean array of shape (N,)
        """
        states = np.atleast_2d(np.asarray(states, dtype=float))
        pos = states[:, self.position_indices]
        inside = self.outer.contains_points(pos)
        for obstacle in self.obstacles:
            inside &= ~obstacle.contains_points(pos)
            inside &= obstacle.distance_to_boundary(pos) > BOUNDARY_TOL
        for i, lo, hi in self.box:
            inside &= (states[:, i] > lo) & (states[:, i] < hi)
        if self.hs_A.shape[0]:
            inside &= np.all(states.dot(self.hs_A.T) < self.hs_b[None, :], axis=1)
        return inside

    def contains(self, x):
        return bool(self.contains_points([x])[0])

    def signed_distances(self, states):
        states = np.atleast_2d(np.asarray(states, dtype=float))
        dist = self._boundary_distances(states)
        return np.where(self.contains_points(states), dist, -dist)

    def signed_distance(self, x):
        """ Distance to the closest boundary piece, positive for members and negative otherwise.

        :param x: state vector
        :return: float
        """
        return float(self.signed_distances([x])[0])

    def grid(self, density):
        """ Uniform grid with ``density`` points per axis over the bounding box, restricted to members.

        :return: array of shape (N, n)
        """
        lo, hi = self.bounds()
        axes = [np.linspace(l, h, density) for l, h in zip(lo, hi)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        return mesh[self.contains_points(mesh)]

    def sample(self, rng, size, max_batches=200):
        """ Uniform samples from the region by rejection in its bounding box. """
        lo, hi = self.bounds()
        out = []
        count = 0
        for _ in range(max_batches):
            cand = rng.uniform(lo, hi, size=(max(size, 64), self.dim))
            keep = cand[self.contains_points(cand)]
            out.append(keep)
            count += keep.shape[0]
            if count >= size:
                break
        return np.vstack(out)[:size]

    @classmethod
    def from_dict(cls, dim, data):
        """ Build from the JSON "free_space" block.

        :param data: dict with keys "outer", "obstacles", "position_indices", "box", "halfspaces"
        """
        outer = Polygon.from_vertices(data["outer"])
        obstacles = [Polygon.from_vertices(o) for o in data.get("obstacles", [])]
        box = [(b["index"], b["lower"], b["upper"]) for b in data.get("box", [])]
        halfspaces = None
        if data.get("halfspaces"):
            halfspaces = (data["halfspaces"]["A"], data["halfspaces"]["b"])
        return cls(dim, outer, obstacles, data.get("position_indices", (0, 1)), box, halfspaces)
