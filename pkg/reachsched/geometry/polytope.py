import itertools
import logging

import numpy as np
from scipy.optimize import linprog

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError, InfeasibilityError

logger = logging.getLogger("Polytope")


class HPolytope(object):

    def __init__(self, A, b):
        """ Polytope {x : A x <= b} given by half-spaces.

        :param A: matrix of shape (m, n), one row a_i per half-space
        :param b: vector of shape (m,)
        """
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ContractViolationError("A has {} rows but b has {} entries".format(A.shape[0], b.shape[0]))
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ContractViolationError("half-space data must be finite")
        self.A = A
        self.b = b
        self._vertices = None

    @classmethod
    def from_box(cls, lower, upper):
        """ Axis aligned box lower <= x <= upper; lower == upper pins a coordinate. """
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.shape != upper.shape or np.any(lower > upper):
            raise ContractViolationError("invalid box bounds {} / {}".format(lower, upper))
        n = lower.shape[0]
        eye = np.eye(n)
        return cls(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))

    @property
    def dim(self):
        return self.A.shape[1]

    def contains(self, x, tol=constants.TOL_VERTEX):
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.A.dot(x) <= self.b + tol))

    def contains_points(self, points, tol=constants.TOL_VERTEX):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(points.dot(self.A.T) <= self.b + tol, axis=1)

    def face_distance(self, x):
        """ Minimum over half-spaces of the normalized slack (b_i - a_i x) / ||a_i||.

        Positive inside, zero on the boundary, negative outside (lower bound on the true distance).
        """
        norms = np.linalg.norm(self.A, axis=1)
        return float(np.min((self.b - self.A.dot(np.asarray(x, dtype=float))) / norms))

    def equality_rows(self, tol=constants.TOL_VERTEX):
        """ Indices of row pairs (i, j) with a_i = -a_j and b_i = -b_j, i.e. implicit equalities.

        :return: list of row indices i (one per pair)
        """
        norms = np.linalg.norm(self.A, axis=1)
        A_n = self.A / norms[:, None]
        b_n = self.b / norms
        rows = []
        for i, j in itertools.combinations(range(self.A.shape[0]), 2):
            if np.allclose(A_n[i], -A_n[j], atol=tol) and abs(b_n[i] + b_n[j]) <= tol:
                rows.append(i)
        return rows

    def vertices(self):
        """ Vertex enumeration by solving every n-subset of active half-spaces.

        :return: array of shape (V, n)
        """
        if self._vertices is not None:
            return self._vertices

        m, n = self.A.shape
        found = []
        for rows in itertools.combinations(range(m), n):
            sub_A = self.A[list(rows)]
            if abs(np.linalg.det(sub_A)) < 1e-12:
                continue
            v = np.linalg.solve(sub_A, self.b[list(rows)])
            if not self.contains(v):
                continue
            if any(np.allclose(v, w, atol=1e-9) for w in found):
                continue
            found.append(v)

        if not found:
            raise InfeasibilityError("polytope has no vertices (empty or unbounded)")
        self._vertices = np.array(found)
        logger.debug("enumerated {} vertices".format(len(found)))
        return self._vertices

    def bounding_box(self):
        verts = self.vertices()
        return verts.min(axis=0), verts.max(axis=0)

    def is_bounded(self):
        """ Bounded iff the recession cone {d : A d <= 0} is trivial; checked by 2n linear programs max/min d_i
        over the cone cut by the unit box.
        """
        n = self.dim
        for i in range(n):
            for sign in (1.0, -1.0):
                c = np.zeros(n)
                c[i] = -sign
                res = linprog(c, A_ub=self.A, b_ub=np.zeros(self.A.shape[0]), bounds=[(-1.0, 1.0)] * n,
                              method='highs')
                if res.success and -res.fun > constants.TOL_VERTEX:
                    return False
        return True

    def is_empty(self):
        n = self.dim
        res = linprog(np.zeros(n), A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * n, method='highs')
        return not res.success

    def chebyshev_ball(self, row_order=None):
        """ Center and radius of the largest inscribed ball.

        Implicit equality rows restrict the ball to the affine hull; the remaining rows then use the
        norm of a_i projected onto that hull.

        :param row_order: optional permutation of the half-space rows
        :return: (center, radius)
        """
        A, b = self.A, self.b
        if row_order is not None:
            A, b = A[list(row_order)], b[list(row_order)]
        probe = HPolytope(A, b)
        eq = probe.equality_rows()
        m, n = A.shape

        if eq:
            A_eq = A[eq]
            b_eq = b[eq]
            # orthonormal basis of the nullspace of the equality rows
            _, s, vt = np.linalg.svd(A_eq)
            rank = int(np.sum(s > 1e-12))
            null = vt[rank:].T
            ineq = [i for i in range(m) if not any(
                np.allclose(A[i] / np.linalg.norm(A[i]), s_ * A[e] / np.linalg.norm(A[e]), atol=1e-9)
                for e in eq for s_ in (1.0, -1.0))]
            norms = np.linalg.norm(A[ineq].dot(null), axis=1) if null.size else np.zeros(len(ineq))
            A_ub = np.hstack([A[ineq], norms.reshape(-1, 1)])
            b_ub = b[ineq]
            A_eq_lp = np.hstack([A_eq, np.zeros((len(eq), 1))])
        else:
            norms = np.linalg.norm(A, axis=1)
            A_ub = np.hstack([A, norms.reshape(-1, 1)])
            b_ub = b
            A_eq_lp, b_eq = None, None

        c = np.zeros(n + 1)
        c[-1] = -1.0
        bounds = [(None, None)] * n + [(0, None)]
        res = linprog(c, A_ub=A_ub if A_ub.shape[0] else None, b_ub=b_ub if A_ub.shape[0] else None,
                      A_eq=A_eq_lp, b_eq=b_eq, bounds=bounds, method='highs')

        if not res.success:
            if probe.is_empty():
                raise InfeasibilityError("Chebyshev center requested for an empty polytope")
            if res.status == 3 or not probe.is_bounded():
                raise ContractViolationError("Chebyshev center requested for an unbounded polytope")
            raise InfeasibilityError("Chebyshev LP failed: {}".format(res.message))

        return res.x[:n], float(res.x[-1])

    def chebyshev_center(self):
        return self.chebyshev_ball()[0]

    def sample(self, rng, size, max_batches=50):
        """ Uniform samples by rejection inside the vertex bounding box.

        Falls back to random convex combinations of the vertices (not uniform) for very thin sets.

        :param rng: numpy random generator
        :param size: number of points
        :return: array of shape (size, n)
        """
        lo, hi = self.bounding_box()
        out = []
        count = 0
        for _ in range(max_batches):
            cand = rng.uniform(lo, hi, size=(max(size, 16), self.dim))
            keep = cand[self.contains_points(cand)]
            out.append(keep)
            count += keep.shape[0]
            if count >= size:
                return np.vstack(out)[:size]

        logger.warning("rejection sampling accepted only {} of {} points, using vertex combinations".format(
            count, size))
        verts = self.vertices()
        weights = rng.dirichlet(np.ones(verts.shape[0]), size=size - count)
        out.append(weights.dot(verts))
        return np.vstack(out)[:size]

    def __repr__(self):
        return "HPolytope(A={}, b={})".format(self.A.tolist(), self.b.tolist())
