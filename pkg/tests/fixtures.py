""" Small hand-checkable systems shared by the tests. """
import numpy as np

from reachsched.geometry.free_space import FreeSpaceRegion
from reachsched.geometry.norm_ball import NormBallSet
from reachsched.geometry.polygon import Polygon
from reachsched.geometry.polytope import HPolytope
from reachsched.model.lyapunov import LinearGainClf
from reachsched.model.system_model import LinearDynamics, PendulumDynamics, SystemModel
from reachsched.planning.reference import ReferenceTrajectory

START = HPolytope.from_box([-0.1, -0.1], [0.1, 0.1])
GOAL = HPolytope.from_box([8.0, -1.0], [10.0, 1.0])


def integrator_system(w_max=0.01, u_max=3.0, L_x=1.0):
    """ x+ = x + 0.5 u + w on the strip [-1, 11] x [-3, 3] without obstacles. """
    dynamics = LinearDynamics(np.eye(2), 0.5 * np.eye(2))
    outer = Polygon.from_vertices([(-1, -3), (11, -3), (11, 3), (-1, 3)])
    return SystemModel(dynamics, L_x, 1.0, NormBallSet(u_max, 2), NormBallSet(w_max, 2), FreeSpaceRegion(2, outer),
                       START, GOAL)


def integrator_clf(sys):
    return LinearGainClf(np.eye(2), sys.dynamics)


def straight_reference(L=18, backwards=False):
    """ x_k = (0.5 k, 0) with u_k = (1, 0), ending in (9, 0); or the reversed path from (9, 0) to (0, 0). """
    k = np.arange(L + 1, dtype=float)
    if backwards:
        states = np.column_stack([9.0 - 0.5 * k, np.zeros(L + 1)])
        controls = np.tile([-1.0, 0.0], (L, 1))
    else:
        states = np.column_stack([0.5 * k, np.zeros(L + 1)])
        controls = np.tile([1.0, 0.0], (L, 1))
    return ReferenceTrajectory(states, controls, 0.5, seed=0)


def pendulum_system(L_x=1.05, L_w=0.2, w_max=5e-7):
    """ The bundled pendulum: diamond of half-height 0.1 around the origin, sets of half-width 0.024. """
    outer = Polygon.from_vertices([(-1, -0.5), (1, -0.5), (1, 0.5), (-1, 0.5)])
    diamond = Polygon.from_vertices([(0.5, 0), (0, 0.1), (-0.5, 0), (0, -0.1)])
    return SystemModel(PendulumDynamics(0.6, 3.0, 0.2), L_x, L_w, NormBallSet(2.0, 1), NormBallSet(w_max, 1),
                       FreeSpaceRegion(2, outer, [diamond]), HPolytope.from_box([-0.824, -0.024], [-0.776, 0.024]),
                       HPolytope.from_box([0.776, -0.024], [0.824, 0.024]))


def integrator_config(out_dir):
    """ Scenario document for the integrator strip. """
    return {
        "name": "integrator",
        "system": {
            "dynamics": {"type": "linear", "A": [[1, 0], [0, 1]], "B": [[0.5, 0], [0, 0.5]]},
            "L_x": 1.0,
            "L_w": 1.0,
            "u_max": 3.0,
            "w_max": 0.01,
            "free_space": {"outer": [[-1, -3], [11, -3], [11, 3], [-1, 3]]},
            "initial_set": {"lower": [-0.1, -0.1], "upper": [0.1, 0.1]},
            "target_set": {"lower": [8, -1], "upper": [10, 1]}
        },
        "clf": {"family": "linear-gain", "K": [[1, 0], [0, 1]]},
        "rrt": {"epsilon": 0.5, "seed": 1, "max_iterations": 20000, "goal_margin": 0.3, "control_scale": 0.5},
        "abstraction": {"M": 60, "m_list": [20, 60]},
        "runtime": {"mode": "offline", "disturbance": "uniform-ball", "N": 5, "seed": 2, "x0": [0, 0],
                    "wmax_upper": 0.5},
        "output": out_dir
    }
