import itertools
import logging

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError
from reachsched.geometry.norm_ball import NormBallSet, sample_uniform_ball
from reachsched.geometry.polytope import HPolytope

logger = logging.getLogger("SystemModel")


class LinearDynamics(object):
    """ x+ = A x + B u + E w """

    kind = "linear"

    def __init__(self, A, B, E=None):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.B = np.asarray(B, dtype=float)
        if self.B.ndim == 1:
            self.B = self.B.reshape(-1, 1)
        n = self.A.shape[0]
        self.E = np.eye(n) if E is None else np.atleast_2d(np.asarray(E, dtype=float))
        if self.A.shape != (n, n) or self.B.shape[0] != n or self.E.shape[0] != n:
            raise ContractViolationError("inconsistent linear dynamics shapes A{} B{} E{}".format(
                self.A.shape, self.B.shape, self.E.shape))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def n_w(self):
        return self.E.shape[1]

    def step(self, x, u, w):
        return self.A.dot(x) + self.B.dot(u) + self.E.dot(w)

    def step_batch(self, X, U, W):
        return X.dot(self.A.T) + U.dot(self.B.T) + W.dot(self.E.T)


class PendulumDynamics(object):
    """ Euler discretized pendulum

        x1+ = x1 + delta (x2 + w)
        x2+ = x2 + delta (a sin x1 - b x2 + u)
    """

    kind = "pendulum"
    n = 2
    m = 1
    n_w = 1

    def __init__(self, a, b, delta):
        if delta <= 0:
            raise ContractViolationError("sampling time must be positive, got {}".format(delta))
        self.a = float(a)
        self.b = float(b)
        self.delta = float(delta)

    def step(self, x, u, w):
        d = self.delta
        return np.array([x[0] + d * (x[1] + w[0]),
                         x[1] + d * (self.a * np.sin(x[0]) - self.b * x[1] + u[0])])

    def step_batch(self, X, U, W):
        d = self.delta
        out = np.empty_like(X)
        out[:, 0] = X[:, 0] + d * (X[:, 1] + W[:, 0])
        out[:, 1] = X[:, 1] + d * (self.a * np.sin(X[:, 0]) - self.b * X[:, 1] + U[:, 0])
        return out


class SystemModel(object):

    def __init__(self, dynamics, L_x, L_w, input_set, disturbance_set, free_space, initial_set, target_set,
                 validate=True):
        """ Discrete-time plant x+ = f(x, u, w) together with its constraint sets.

        :param dynamics: LinearDynamics or PendulumDynamics
        :param L_x: Lipschitz constant of f in x
        :param L_w: Lipschitz constant of f in w
        :param input_set: control set U
        :type input_set: NormBallSet
        :param disturbance_set: disturbance set W
        :type disturbance_set: NormBallSet
        :param free_space: state constraint set X
        :type free_space: FreeSpaceRegion
        :param initial_set: X_I
        :type initial_set: HPolytope
        :param target_set: X_F
        :type target_set: HPolytope
        """
        self.dynamics = dynamics
        self.n = dynamics.n
        self.m = dynamics.m
        self.n_w = dynamics.n_w
        self.L_x = float(L_x)
        self.L_w = float(L_w)
        self.input_set = input_set
        self.disturbance_set = disturbance_set
        self.free_space = free_space
        self.initial_set = initial_set
        self.target_set = target_set

        if validate:
            self.validate()

    @property
    def u_max(self):
        return self.input_set.radius

    @property
    def w_max(self):
        return self.disturbance_set.radius

    def with_sets(self, initial_set=None, target_set=None, w_max=None):
        """ Copy of this model with other initial/target sets or disturbance radius. """
        dist = self.disturbance_set if w_max is None else NormBallSet(w_max, self.n_w)
        return SystemModel(self.dynamics, self.L_x, self.L_w, self.input_set, dist, self.free_space,
                           self.initial_set if initial_set is None else initial_set,
                           self.target_set if target_set is None else target_set,
                           validate=initial_set is not None or target_set is not None)

    def validate(self):
        if not (self.L_x > 0 and self.L_w > 0):
            raise ContractViolationError("Lipschitz constants must be positive, got {} / {}".format(self.L_x, self.L_w))
        if self.free_space.dim != self.n:
            raise ContractViolationError("free space has dimension {}, state has {}".format(self.free_space.dim, self.n))
        if self.input_set.dim != self.m or self.disturbance_set.dim != self.n_w:
            raise ContractViolationError("input/disturbance set dimensions do not match the dynamics")
        for name, poly in (("initial", self.initial_set), ("target", self.target_set)):
            if poly.dim != self.n:
                raise ContractViolationError("{} set has dimension {}, state has {}".format(name, poly.dim, self.n))
            if not contained_in_region(poly, self.free_space):
                raise ContractViolationError("{} set is not contained in the free space".format(name))
        joint = HPolytope(np.vstack([self.initial_set.A, self.target_set.A]),
                          np.concatenate([self.initial_set.b, self.target_set.b]))
        if not joint.is_empty():
            raise ContractViolationError("initial and target sets intersect")

    def _check_dims(self, x, u, w):
        if np.shape(x) != (self.n,) or np.shape(u) != (self.m,) or np.shape(w) != (self.n_w,):
            raise ContractViolationError("dimension mismatch: x{} u{} w{} for n={}, m={}, n_w={}".format(
                np.shape(x), np.shape(u), np.shape(w), self.n, self.m, self.n_w))

    def step(self, x, u, w):
        """ Evaluate x+ = f(x, u, w).

        :param x: state vector of length n
        :param u: control vector of length m
        :param w: disturbance vector of length n_w
        :return: next state as numpy array
        """
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        self._check_dims(x, u, w)
        return self.dynamics.step(x, u, w)

    def step_batch(self, X, U, W):
        return self.dynamics.step_batch(np.asarray(X, dtype=float), np.asarray(U, dtype=float),
                                        np.asarray(W, dtype=float))

    def zero_disturbance(self):
        return np.zeros(self.n_w)


def contained_in_region(poly, region, resolution=constants.CONTAINMENT_RESOLUTION):
    """ Check poly within region on its vertices and on points spaced ``resolution`` apart along every segment
    between two vertices.

    :type poly: HPolytope
    :type region: FreeSpaceRegion
    :return: bool
    """
    verts = poly.vertices()
    if not np.all(region.contains_points(verts)):
        return False
    for v, w in itertools.combinations(verts, 2):
        n_pts = int(np.ceil(np.linalg.norm(w - v) / resolution))
        if n_pts < 2:
            continue
        t = np.linspace(0.0, 1.0, n_pts + 1)[1:-1]
        if not np.all(region.contains_points(v + t[:, None] * (w - v))):
            return False
    return True


def check_lipschitz(sys, n_pairs=10000, seed=0):
    """ Sampled check of ||f(x1,u,w1) - f(x2,u,w2)|| <= L_x ||x1 - x2|| + L_w ||w1 - w2||.

    :type sys: SystemModel
    :return: dict with the number of violations and the largest observed ratio lhs / rhs
    """
    rng = np.random.default_rng(seed)
    X1 = sys.free_space.sample(rng, n_pairs)
    X2 = sys.free_space.sample(rng, n_pairs)
    n_pairs = min(X1.shape[0], X2.shape[0])
    X1, X2 = X1[:n_pairs], X2[:n_pairs]
    W1 = sample_uniform_ball(rng, n_pairs, sys.n_w, sys.w_max)
    W2 = sample_uniform_ball(rng, n_pairs, sys.n_w, sys.w_max)
    U = sample_uniform_ball(rng, n_pairs, sys.m, sys.u_max)

    lhs = np.linalg.norm(sys.step_batch(X1, U, W1) - sys.step_batch(X2, U, W2), axis=1)
    rhs = sys.L_x * np.linalg.norm(X1 - X2, axis=1) + sys.L_w * np.linalg.norm(W1 - W2, axis=1)
    violations = int(np.sum(lhs > rhs + constants.TOL_VIOLATION))
    ratio = float(np.max(lhs / np.maximum(rhs, 1e-300)))
    if violations:
        logger.warning("{} of {} sampled pairs violate the Lipschitz bound".format(violations, n_pairs))
    return {"pairs": n_pairs, "violations": violations, "max_ratio": ratio}

