import logging

from reachsched.scheduling.error_model import ErrorBoundModel, safety_envelope
from reachsched.scheduling.symbolic import build_partition, build_symbolic_system, build_timed_system, \
    min_comm_schedule

logger = logging.getLogger("Leg")


class Leg(object):
    """ Everything needed to execute one reference: system, CLF, reference, envelope, error model, T, T_A and
    the offline minimum communication schedule (None until ``solve`` succeeds).
    """

    def __init__(self, sys, clf, ref, env, model, T, TA):
        self.sys = sys
        self.clf = clf
        self.ref = ref
        self.env = env
        self.model = model
        self.T = T
        self.TA = TA
        self.schedule = None
        self.run = None

    @property
    def L(self):
        return self.ref.L

    def solve(self):
        """ Offline schedule of this leg; raises InfeasibilityError when T_A accepts nothing. """
        if self.schedule is None:
            self.schedule, self.run = min_comm_schedule(self.TA)
        return self.schedule


def prepare_leg(sys, clf, ref, M, nu_bar=None, model=None):
    """ Envelope, error model, partition, T and T_A for one reference.

    :type sys: SystemModel
    :type clf: DeltaIssClf
    :type ref: ReferenceTrajectory
    :param M: number of symbols
    :param nu_bar: largest finite level, max_k v_max[k] when omitted
    :param model: error model to use instead of the one derived from ``clf``
    :rtype: Leg
    """
    env = safety_envelope(clf, sys, ref)
    if model is None:
        # every level of the partition lies below nu_bar and v_init, checked with a factor two of headroom
        horizon = 2.0 * max(env.nu_bar if nu_bar is None else nu_bar, env.v_init)
        model = ErrorBoundModel.from_clf(clf, sys, horizon)
    part = build_partition(env, M, nu_bar)
    T = build_symbolic_system(model, part)
    TA = build_timed_system(T, env, ref, model)
    return Leg(sys, clf, ref, env, model, T, TA)
