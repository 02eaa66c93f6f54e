import numpy as np

from reachsched import constants


class ValidityReport(object):

    def __init__(self, dynamics_ok, safety_ok, reachability_ok, comm_count, min_slack, first_unsafe=None,
                 dynamics_failures=None):
        self.dynamics_ok = bool(dynamics_ok)
        self.safety_ok = bool(safety_ok)
        self.reachability_ok = bool(reachability_ok)
        self.comm_count = int(comm_count)
        self.min_slack = float(min_slack)
        self.first_unsafe = first_unsafe
        self.dynamics_failures = dynamics_failures if dynamics_failures is not None else []

    @property
    def valid(self):
        return self.dynamics_ok and self.safety_ok and self.reachability_ok

    def to_dict(self):
        return {"valid": self.valid, "dynamics": self.dynamics_ok, "safety": self.safety_ok,
                "reachability": self.reachability_ok, "first_unsafe": self.first_unsafe,
                "dynamics_failures": self.dynamics_failures, "comm_count": self.comm_count,
                "min_slack": self.min_slack}


def check_validity(sys, trace):
    """ Validity of a realized trajectory: dynamics consistent with the logged inputs and disturbances and
    admissible inputs, every state strictly inside X, and the last state in X_F.

    :type sys: SystemModel
    :type trace: ExecutionTrace
    :rtype: ValidityReport
    """
    states = trace.states
    controls = trace.controls
    failures = []
    if trace.steps:
        predicted = sys.step_batch(states[:-1], controls, trace.disturbances)
        err = np.linalg.norm(predicted - states[1:], axis=1)
        too_large = np.linalg.norm(controls, axis=1) > sys.u_max + constants.TOL_VERTEX
        failures = [int(k) for k in np.nonzero((err > constants.TOL_DYNAMICS) | too_large)[0]]

    slack = sys.free_space.signed_distances(states)
    unsafe = np.nonzero(slack <= 0.0)[0]
    first_unsafe = int(unsafe[0]) if unsafe.size else None
    reach = sys.target_set.contains(states[-1])
    return ValidityReport(not failures, first_unsafe is None, reach, trace.comm_count, float(slack.min()),
                          first_unsafe, failures)
