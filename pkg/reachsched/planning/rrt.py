import logging

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError, PlanningFailureError
from reachsched.geometry.norm_ball import sample_uniform_ball
from reachsched.planning.reference import ReferenceTrajectory

logger = logging.getLogger("RRT")


class RrtParams(object):

    def __init__(self, n_controls=constants.RRT_N_CONTROLS, goal_bias=constants.RRT_GOAL_BIAS,
                 max_iterations=constants.RRT_MAX_ITERATIONS, velocity_weight=constants.RRT_VELOCITY_WEIGHT,
                 goal_margin=0.0, control_scale=1.0):
        """ Kinodynamic RRT settings.

        :param n_controls: admissible controls tried per extension
        :param goal_bias: probability of sampling from the target set
        :param max_iterations: iteration budget
        :param velocity_weight: scale applied to non-position coordinates in the nearest-neighbour metric
        :param goal_margin: distance the terminal state keeps to the boundary of X_F
        :param control_scale: reference controls are drawn from the ball of radius control_scale * u_max
        """
        if not 0.0 <= goal_bias <= 1.0:
            raise ContractViolationError("goal bias must lie in [0, 1], got {}".format(goal_bias))
        if not 0.0 < control_scale <= 1.0:
            raise ContractViolationError("control scale must lie in (0, 1], got {}".format(control_scale))
        self.n_controls = int(n_controls)
        self.goal_bias = float(goal_bias)
        self.max_iterations = int(max_iterations)
        self.velocity_weight = float(velocity_weight)
        self.goal_margin = float(goal_margin)
        self.control_scale = float(control_scale)

    @classmethod
    def from_dict(cls, data):
        keys = ("n_controls", "goal_bias", "max_iterations", "velocity_weight", "goal_margin", "control_scale")
        return cls(**{k: data[k] for k in keys if k in data})

    def to_dict(self):
        return dict(self.__dict__)


class _Tree(object):

    def __init__(self, root, m, capacity):
        self.states = np.empty((capacity + 1, root.shape[0]))
        self.controls = np.empty((capacity + 1, m))
        self.parents = np.full(capacity + 1, -1, dtype=int)
        self.states[0] = root
        self.size = 1

    def add(self, state, control, parent):
        self.states[self.size] = state
        self.controls[self.size] = control
        self.parents[self.size] = parent
        self.size += 1
        return self.size - 1

    def path_to(self, idx):
        chain = []
        while idx != -1:
            chain.append(idx)
            idx = self.parents[idx]
        chain.reverse()
        return self.states[chain], self.controls[chain[1:]]


def _reaches_goal(sys, x, goal_margin):
    return sys.target_set.contains(x, tol=0.0) and sys.target_set.face_distance(x) >= goal_margin


def plan_rrt(sys, epsilon, params, seed):
    """ Grow a tree of dynamically feasible states (zero disturbance) from the Chebyshev center of X_I until a
    node lands in X_F, keeping every state at least ``epsilon`` away from the boundary of X.

    :type sys: SystemModel
    :param epsilon: safety margin
    :type params: RrtParams
    :param seed: seed of the random generator
    :rtype: ReferenceTrajectory
    """
    if epsilon < 0:
        raise ContractViolationError("margin must be nonnegative, got {}".format(epsilon))
    root = sys.initial_set.chebyshev_center()
    if sys.free_space.signed_distance(root) < epsilon:
        raise ContractViolationError("Chebyshev center of X_I is closer than {} to the boundary of X".format(epsilon))

    rng = np.random.default_rng(seed)
    metric = np.full(sys.n, params.velocity_weight)
    metric[sys.free_space.position_indices] = 1.0
    lo, hi = sys.free_space.bounds()
    u_radius = params.control_scale * sys.u_max
    w0 = np.zeros((params.n_controls, sys.n_w))

    tree = _Tree(root, sys.m, params.max_iterations)
    if _reaches_goal(sys, root, params.goal_margin):
        return ReferenceTrajectory(root[None, :], np.zeros((0, sys.m)), epsilon, seed, {"iterations": 0, "nodes": 1})

    best_goal_dist = np.inf
    for it in range(1, params.max_iterations + 1):
        if rng.uniform() < params.goal_bias:
            target = sys.target_set.sample(rng, 1)[0]
        else:
            target = rng.uniform(lo, hi)

        diffs = (tree.states[:tree.size] - target) * metric
        nearest = int(np.argmin(np.einsum('ij,ij->i', diffs, diffs)))

        controls = sample_uniform_ball(rng, params.n_controls, sys.m, u_radius)
        children = sys.step_batch(np.repeat(tree.states[nearest][None, :], params.n_controls, axis=0), controls, w0)
        safe = sys.free_space.signed_distances(children) >= epsilon
        if not np.any(safe):
            continue
        children, controls = children[safe], controls[safe]
        cd = (children - target) * metric
        pick = int(np.argmin(np.einsum('ij,ij->i', cd, cd)))
        idx = tree.add(children[pick], controls[pick], nearest)

        best_goal_dist = min(best_goal_dist, -sys.target_set.face_distance(children[pick]))
        if _reaches_goal(sys, children[pick], params.goal_margin):
            states, ctrls = tree.path_to(idx)
            stats = {"iterations": it, "nodes": tree.size}
            logger.info("RRT reached the target after {} iterations with {} nodes, L = {}".format(
                it, tree.size, ctrls.shape[0]))
            return ReferenceTrajectory(states, ctrls, epsilon, seed, stats)

    stats = {"iterations": params.max_iterations, "nodes": tree.size, "closest_face_violation": float(best_goal_dist)}
    raise PlanningFailureError("RRT exhausted {} iterations without reaching the target set".format(
        params.max_iterations), stats)
