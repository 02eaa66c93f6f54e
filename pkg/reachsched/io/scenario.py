import logging
import os

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import ConfigError, ReachSchedError
from reachsched.geometry.free_space import FreeSpaceRegion
from reachsched.geometry.norm_ball import NormBallSet
from reachsched.geometry.polytope import HPolytope
from reachsched.io.file_loader import load_json_file
from reachsched.math.discretization import discretize_zoh
from reachsched.model.lyapunov import clf_from_dict
from reachsched.model.system_model import LinearDynamics, PendulumDynamics, SystemModel
from reachsched.planning.rrt import RrtParams
from reachsched.simulation.disturbance import KINDS

logger = logging.getLogger("Scenario")

MODES = ("offline", "online", "traverse")


def polytope_from_dict(data):
    """ {"lower": [...], "upper": [...]} or {"A": [[...]], "b": [...]} """
    if "lower" in data:
        return HPolytope.from_box(data["lower"], data["upper"])
    return HPolytope(data["A"], data["b"])


def dynamics_from_dict(data):
    """ {"type": "linear", "A", "B", "E"}, {"type": "linear-continuous", "A", "B", "E", "delta"} (zero-order hold)
    or {"type": "pendulum", "a", "b", "delta"}.
    """
    kind = data["type"]
    if kind == "linear":
        return LinearDynamics(data["A"], data["B"], data.get("E"))
    if kind == "linear-continuous":
        A, B = discretize_zoh(data["A"], data["B"], data["delta"])
        return LinearDynamics(A, B, data.get("E"))
    if kind == "pendulum":
        return PendulumDynamics(data["a"], data["b"], data["delta"])
    raise ConfigError("unknown dynamics type {!r}".format(kind))


class ScenarioConfig(object):

    def __init__(self, data, path=None):
        """ Parsed scenario document.

        :param data: dict with the blocks "system", "clf", "rrt", "abstraction", "runtime" and optionally
            "traverse" and "output"
        :param path: file the document was read from
        """
        self.path = path
        try:
            self.name = data.get("name", "scenario")
            self.system = data["system"]
            self.clf = data["clf"]
            self.rrt = data.get("rrt", {})
            self.abstraction = data.get("abstraction", {})
            self.runtime = data.get("runtime", {})
            self.traverse = data.get("traverse")
            self.output = data.get("output", "out")
        except (KeyError, AttributeError) as ex:
            raise ConfigError("scenario misses block {}".format(ex))
        self._check()

    @classmethod
    def from_file(cls, path):
        if not os.path.isfile(path):
            raise ConfigError("scenario file {} does not exist".format(path))
        return cls(load_json_file(path), path)

    def _check(self):
        for key in ("dynamics", "L_x", "L_w", "u_max", "w_max", "free_space", "initial_set", "target_set"):
            if key not in self.system:
                raise ConfigError("system block misses {!r}".format(key))
        if self.M < 2:
            raise ConfigError("M must be at least 2, got {}".format(self.M))
        if self.epsilon < 0:
            raise ConfigError("epsilon must be nonnegative, got {}".format(self.epsilon))
        if self.mode not in MODES:
            raise ConfigError("mode must be one of {}, got {!r}".format(MODES, self.mode))
        if self.disturbance not in KINDS:
            raise ConfigError("disturbance must be one of {}, got {!r}".format(KINDS, self.disturbance))
        if self.runs < 1:
            raise ConfigError("runtime.N must be at least 1, got {}".format(self.runs))
        if self.nu_bar is not None and not self.nu_bar > 0:
            raise ConfigError("nu_bar must be positive, got {}".format(self.nu_bar))

    # abstraction block
    @property
    def M(self):
        return int(self.abstraction.get("M", constants.DEFAULT_M))

    @property
    def nu_bar(self):
        return self.abstraction.get("nu_bar")

    @property
    def m_list(self):
        return [int(m) for m in self.abstraction.get("m_list", [self.M])]

    # planner block
    @property
    def epsilon(self):
        return float(self.rrt.get("epsilon", 0.0))

    @property
    def rrt_seed(self):
        return int(self.rrt.get("seed", 0))

    def rrt_params(self):
        try:
            return RrtParams.from_dict(self.rrt)
        except ReachSchedError as ex:
            raise ConfigError("invalid rrt block: {}".format(ex))

    # runtime block
    @property
    def mode(self):
        return self.runtime.get("mode", "offline")

    @property
    def disturbance(self):
        return self.runtime.get("disturbance", "uniform-ball")

    @property
    def runs(self):
        return int(self.runtime.get("N", 1))

    @property
    def seed(self):
        return int(self.runtime.get("seed", 0))

    @property
    def wmax_upper(self):
        return float(self.runtime.get("wmax_upper", 1.0))

    @property
    def x0(self):
        if self.traverse and "x0" in self.traverse:
            return np.asarray(self.traverse["x0"], dtype=float)
        x0 = self.runtime.get("x0")
        return None if x0 is None else np.asarray(x0, dtype=float)

    @property
    def traverse_steps(self):
        return int((self.traverse or {}).get("steps", constants.TRAVERSE_STEPS))

    @property
    def traverse_mode(self):
        return (self.traverse or {}).get("mode", "offline")

    def build_system(self, initial_set=None, target_set=None):
        """
        :return: SystemModel of the system block, optionally with other initial/target sets
        :raises ConfigError: on malformed or inconsistent data
        """
        block = self.system
        try:
            dynamics = dynamics_from_dict(block["dynamics"])
            free_space = FreeSpaceRegion.from_dict(dynamics.n, block["free_space"])
            initial = initial_set if initial_set is not None else polytope_from_dict(block["initial_set"])
            target = target_set if target_set is not None else polytope_from_dict(block["target_set"])
            return SystemModel(dynamics, block["L_x"], block["L_w"], NormBallSet(block["u_max"], dynamics.m),
                               NormBallSet(block["w_max"], dynamics.n_w), free_space, initial, target)
        except (KeyError, TypeError) as ex:
            raise ConfigError("malformed system block: {!r}".format(ex))
        except (ValueError, ReachSchedError) as ex:
            raise ConfigError("invalid system block: {}".format(ex))

    def build_clf(self, sys):
        try:
            return clf_from_dict(self.clf, sys)
        except (KeyError, TypeError) as ex:
            raise ConfigError("malformed clf block: {!r}".format(ex))
        except (ValueError, ReachSchedError) as ex:
            raise ConfigError("invalid clf block: {}".format(ex))

    def leg_systems(self):
        """ One system per leg: the scenario's own, followed by the reversed one when a traverse block exists. """
        sys = self.build_system()
        if not self.traverse:
            return [sys]
        return [sys, self.build_system(initial_set=sys.target_set, target_set=sys.initial_set)]
