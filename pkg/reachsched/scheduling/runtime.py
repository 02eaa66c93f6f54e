import logging
import time
from collections import deque

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import (ContractViolationError, InfeasibilityError, InvariantViolationError,
                                         PreconditionError)
from reachsched.scheduling.symbolic import optcom, sym_of_state

logger = logging.getLogger("Runtime")

OFFLINE = "offline"
ONLINE = "online"

STATE_UP = "state-up"
CONTROL_DOWN = "control-down"


def zeropref(bits):
    """ Number of zeros at the beginning of ``bits``. """
    count = 0
    for c in bits:
        if c:
            break
        count += 1
    return count


class ExecutionTrace(object):

    def __init__(self, mode, n, m, n_w):
        """ Realized closed loop run.

        ``comm_log`` holds one entry per communication instant (time, batch length, symbol, remaining cost,
        compute time); ``messages`` is the plant/controller exchange in order.
        """
        self.mode = mode
        self._states = []
        self._controls = []
        self._disturbances = []
        self.flags = []
        self.errors = []
        self.bounds = []
        self.comm_log = []
        self.messages = []
        self.n, self.m, self.n_w = n, m, n_w

    @property
    def states(self):
        return np.array(self._states).reshape(-1, self.n)

    @property
    def controls(self):
        return np.array(self._controls).reshape(-1, self.m)

    @property
    def disturbances(self):
        return np.array(self._disturbances).reshape(-1, self.n_w)

    @property
    def steps(self):
        return len(self.flags)

    @property
    def comm_count(self):
        return int(sum(self.flags))

    @property
    def mean_compute_time(self):
        if not self.comm_log:
            return 0.0
        return float(np.mean([entry["compute_time"] for entry in self.comm_log]))

    def bounds_dominate(self, tol=constants.TOL_VIOLATION):
        """ True iff every recorded bound is at least the realized error. """
        if not self.bounds:
            return True
        return all(v <= b + tol for v, b in zip(self.errors, self.bounds))

    def rows(self):
        """ One row per time step: k, x, u, c, v, v_bar (u and c are NaN at the last state). """
        states = self.states
        rows = []
        for k in range(states.shape[0]):
            u = self._controls[k] if k < self.steps else np.full(self.m, np.nan)
            c = self.flags[k] if k < self.steps else np.nan
            bound = self.bounds[k] if k < len(self.bounds) else np.nan
            rows.append(np.concatenate([[k], states[k], u, [c, self.errors[k], bound]]))
        return np.array(rows)

    def header(self):
        return (["k"] + ["x{}".format(i) for i in range(self.n)] + ["u{}".format(i) for i in range(self.m)]
                + ["c", "v", "v_bar"])

    def summary(self):
        comm = [{key: value for key, value in entry.items() if key != "compute_time"} for entry in self.comm_log]
        return {"mode": self.mode, "steps": self.steps, "comm_count": self.comm_count, "flags": self.flags,
                "max_error": float(max(self.errors)) if self.errors else 0.0, "communications": comm}

    def _record_state(self, x, v):
        self._states.append(np.array(x, dtype=float))
        self.errors.append(float(v))

    def _record_step(self, u, w, c):
        self._controls.append(np.array(u, dtype=float))
        self._disturbances.append(np.array(w, dtype=float))
        self.flags.append(int(c))


def _disturbance_sequence(dist, L, n_w):
    if hasattr(dist, "sequence"):
        seq = dist.sequence(L)
    else:
        seq = np.asarray(dist, dtype=float).reshape(-1, n_w)
    if seq.shape[0] < L:
        raise ContractViolationError("{} disturbance samples for a horizon of {}".format(seq.shape[0], L))
    return seq


def _check_start(sys, x0):
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (sys.n,):
        raise ContractViolationError("x0 has shape {}, expected ({},)".format(x0.shape, sys.n))
    if not sys.initial_set.contains(x0):
        raise PreconditionError("x0 = {} is not in the initial set".format(x0.tolist()))
    return x0


def run_offline(sys, clf, ref, schedule, x0, dist, model=None, v_init=None, stop_on_target=False):
    """ Play back a precomputed schedule. At c_k = 1 the plant sends x_k, the controller answers with
    kappa(x_k, x_hat_k, u_hat_k) followed by the reference controls for the following silent stretch; at
    c_k = 0 the plant applies the next buffered control.

    :type sys: SystemModel
    :type clf: DeltaIssClf
    :type ref: ReferenceTrajectory
    :param schedule: CommSchedule or bit sequence of length L starting with 1
    :param x0: initial state in X_I
    :param dist: DisturbanceModel or array (L, n_w) of disturbance samples
    :param model: ErrorBoundModel; with ``v_init`` the schedule's bound sequence is recorded
    :param stop_on_target: end the run at the first k >= 1 with x_k in X_F
    :rtype: ExecutionTrace
    """
    bits = [int(c) for c in schedule]
    L = ref.L
    if len(bits) != L:
        raise ContractViolationError("schedule has length {}, reference horizon is {}".format(len(bits), L))
    if L and bits[0] != 1:
        raise ContractViolationError("the schedule must start with a communication")
    x = _check_start(sys, x0)
    W = _disturbance_sequence(dist, L, sys.n_w)

    trace = ExecutionTrace(OFFLINE, sys.n, sys.m, sys.n_w)
    if model is not None and v_init is not None:
        trace.bounds = model.propagate_bounds(v_init, bits)
    trace._record_state(x, clf.value(x, ref.states[0]))

    batch = deque()
    for k in range(L):
        if bits[k]:
            trace.messages.append({"k": k, "type": STATE_UP})
            start = time.perf_counter()
            u = clf.feedback(x, ref.states[k], ref.controls[k])
            ell = zeropref(bits[k + 1:])
            batch = deque(ref.controls[k + 1:k + 1 + ell])
            elapsed = time.perf_counter() - start
            trace.messages.append({"k": k, "type": CONTROL_DOWN, "controls": 1 + ell})
            trace.comm_log.append({"k": k, "batch": ell, "remaining_cost": sum(bits[k:]), "compute_time": elapsed})
        else:
            assert batch, "control batch exhausted at k = {}".format(k)
            u = batch.popleft()
        x = sys.step(x, u, W[k])
        trace._record_step(u, W[k], bits[k])
        trace._record_state(x, clf.value(x, ref.states[k + 1]))
        if stop_on_target and sys.target_set.contains(x):
            break

    if trace.bounds:
        trace.bounds = trace.bounds[:trace.steps + 1]
    logger.debug("offline run: {} steps, {} communications".format(trace.steps, trace.comm_count))
    return trace


def run_online(sys, clf, ref, TA, x0, dist, model=None, stop_on_target=False):
    """ Self-triggered execution: at every communication instant the controller maps (x_k, x_hat_k) to a symbol,
    re-solves optcom from it, applies kappa now and ships the reference controls of the leading silent stretch
    of the new plan; the next communication happens right after that stretch.

    :type sys: SystemModel
    :type clf: DeltaIssClf
    :type ref: ReferenceTrajectory
    :type TA: TimedSymbolicSystem
    :param x0: initial state in X_I
    :param dist: DisturbanceModel or array (L, n_w) of disturbance samples
    :param model: ErrorBoundModel; when given, bounds anchored at the symbol level of every re-plan are recorded
    :param stop_on_target: end the run at the first k >= 1 with x_k in X_F
    :rtype: ExecutionTrace
    """
    L = ref.L
    if TA.L != L:
        raise ContractViolationError("timed system horizon {} differs from reference horizon {}".format(TA.L, L))
    x = _check_start(sys, x0)
    W = _disturbance_sequence(dist, L, sys.n_w)

    trace = ExecutionTrace(ONLINE, sys.n, sys.m, sys.n_w)
    trace._record_state(x, clf.value(x, ref.states[0]))
    bounds = [] if model is None else [None] * (L + 1)

    batch = deque()
    next_comm = 0
    for k in range(L):
        if k == next_comm:
            trace.messages.append({"k": k, "type": STATE_UP})
            start = time.perf_counter()
            s = sym_of_state(TA.T, clf, x, ref.states[k])
            try:
                plan, _ = optcom(TA, s, k)
            except InfeasibilityError as ex:
                if k == 0:
                    raise PreconditionError("no accepting run from the initial state: {}".format(ex))
                raise InvariantViolationError("re-plan at k = {} from symbol {} is infeasible: {}".format(k, s, ex))
            u = clf.feedback(x, ref.states[k], ref.controls[k])
            ell = zeropref(plan[1:])
            batch = deque(ref.controls[k + 1:k + 1 + ell])
            next_comm = k + 1 + ell
            elapsed = time.perf_counter() - start
            trace.messages.append({"k": k, "type": CONTROL_DOWN, "controls": 1 + ell})
            trace.comm_log.append({"k": k, "batch": ell, "symbol": s, "remaining_cost": sum(plan),
                                   "compute_time": elapsed})
            if model is not None:
                bounds[k] = TA.T.level(s)
            c = 1
        else:
            assert batch, "control batch exhausted at k = {}".format(k)
            u = batch.popleft()
            c = 0
        if model is not None:
            bounds[k + 1] = model.g_step(bounds[k], c, model.w_max)
        x = sys.step(x, u, W[k])
        trace._record_step(u, W[k], c)
        trace._record_state(x, clf.value(x, ref.states[k + 1]))
        if stop_on_target and sys.target_set.contains(x):
            break

    if model is not None:
        trace.bounds = bounds[:trace.steps + 1]
    logger.debug("online run: {} steps, {} communications".format(trace.steps, trace.comm_count))
    return trace
