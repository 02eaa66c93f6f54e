import numpy as np

from reachsched import constants


class ReferenceTrajectory(object):

    def __init__(self, states, controls, margin, seed=None, stats=None):
        """ Nominal trajectory x_0..x_L and controls u_0..u_{L-1}.

        :param states: array (L+1, n)
        :param controls: array (L, m)
        :param margin: safety margin epsilon the states keep to the boundary of X
        :param seed: seed of the planner run that produced it
        :param stats: planner statistics (iterations, tree size)
        """
        self.states = np.atleast_2d(np.asarray(states, dtype=float))
        self.controls = np.asarray(controls, dtype=float).reshape(self.states.shape[0] - 1, -1)
        self.margin = float(margin)
        self.seed = seed
        self.stats = stats if stats is not None else {}

    @property
    def L(self):
        return self.controls.shape[0]

    def __len__(self):
        return self.L

    def to_dict(self):
        return {"L": self.L, "margin": self.margin, "seed": self.seed, "stats": self.stats,
                "states": self.states.tolist(), "controls": self.controls.tolist()}

    @classmethod
    def from_dict(cls, data):
        states = np.asarray(data["states"], dtype=float)
        controls = np.asarray(data["controls"], dtype=float).reshape(states.shape[0] - 1, -1)
        return cls(states, controls, data["margin"], data.get("seed"), data.get("stats"))


class ValidationReport(object):

    def __init__(self):
        self.checks = {}
        self.failures = {}

    def add(self, name, failing_indices):
        failing_indices = [int(k) for k in failing_indices]
        self.checks[name] = not failing_indices
        self.failures[name] = failing_indices

    @property
    def ok(self):
        return all(self.checks.values())

    def to_dict(self):
        return {"ok": self.ok, "checks": self.checks, "failures": self.failures}


def validate_reference(sys, ref):
    """ Re-check the planner postconditions on ``ref``: start at the Chebyshev center of X_I, dynamics with zero
    disturbance, margin to the boundary of X, terminal state in X_F and admissible controls.

    :type sys: SystemModel
    :type ref: ReferenceTrajectory
    :rtype: ValidationReport
    """
    report = ValidationReport()
    center = sys.initial_set.chebyshev_center()
    report.add("initial", [] if np.allclose(ref.states[0], center, atol=1e-7) else [0])

    w0 = np.zeros((ref.L, sys.n_w))
    predicted = sys.step_batch(ref.states[:-1], ref.controls, w0) if ref.L else np.zeros((0, sys.n))
    err = np.linalg.norm(predicted - ref.states[1:], axis=1)
    report.add("dynamics", np.nonzero(err > constants.TOL_DYNAMICS)[0])

    dist = sys.free_space.signed_distances(ref.states)
    report.add("margin", np.nonzero(dist < ref.margin)[0])

    report.add("terminal", [] if sys.target_set.contains(ref.states[-1]) else [ref.L])

    norms = np.linalg.norm(ref.controls, axis=1)
    report.add("controls", np.nonzero(norms > sys.u_max + constants.TOL_VERTEX)[0])
    return report
