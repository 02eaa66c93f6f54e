import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import (ConstructionError, ContractViolationError, InfeasibilityError,
                                         InvariantViolationError, PreconditionError)
from reachsched.scheduling.leg import prepare_leg
from reachsched.scheduling.runtime import ONLINE, OFFLINE, run_offline, run_online
from reachsched.scheduling.symbolic import build_symbolic_system, build_timed_system, min_comm_schedule, optcom, \
    sym_of_state
from reachsched.simulation.disturbance import DisturbanceModel
from reachsched.simulation.validity import check_validity

logger = logging.getLogger("Campaign")

TRAVERSE = "traverse"


def thread_count():
    """ Worker threads for independent runs, capped by the REACHSCHED_THREADS environment variable. """
    cap = os.environ.get(constants.ENV_THREADS)
    default = os.cpu_count() or 1
    if cap is None:
        return default
    try:
        return max(1, min(int(cap), default))
    except ValueError:
        logger.warning("ignoring non-integer {}={!r}".format(constants.ENV_THREADS, cap))
        return default


def _map(fn, items, threads=None):
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def execute(leg, mode, x0, dist, stop_on_target=False):
    """ Run ``leg`` once in offline or online mode.

    :type leg: Leg
    :rtype: ExecutionTrace
    """
    if mode == OFFLINE:
        return run_offline(leg.sys, leg.clf, leg.ref, leg.solve(), x0, dist, leg.model, leg.env.v_init,
                           stop_on_target)
    if mode == ONLINE:
        return run_online(leg.sys, leg.clf, leg.ref, leg.TA, x0, dist, leg.model, stop_on_target)
    raise ContractViolationError("unknown run mode {!r}".format(mode))


class RunRecord(object):

    def __init__(self, index, trace=None, report=None, failure=None):
        self.index = index
        self.trace = trace
        self.report = report
        self.failure = failure

    @property
    def valid(self):
        return self.failure is None and self.report.valid

    @property
    def comm_count(self):
        return None if self.trace is None else self.trace.comm_count


class CampaignStats(object):

    def __init__(self, mode, records):
        self.mode = mode
        self.records = sorted(records, key=lambda r: r.index)

    @property
    def n(self):
        return len(self.records)

    @property
    def valid_count(self):
        return sum(1 for r in self.records if r.valid)

    @property
    def validity_rate(self):
        return self.valid_count / float(self.n) if self.n else 0.0

    @property
    def comm_counts(self):
        return [r.comm_count for r in self.records]

    @property
    def failures(self):
        return [{"run": r.index, "error": r.failure} for r in self.records if r.failure is not None]

    def mean_compute_time(self):
        times = [r.trace.mean_compute_time for r in self.records if r.trace is not None]
        return float(np.mean(times)) if times else 0.0

    def to_dict(self):
        counts = np.array([c for c in self.comm_counts if c is not None], dtype=float)
        slacks = np.array([r.report.min_slack for r in self.records if r.report is not None])
        bounds_ok = [r.trace.bounds_dominate() for r in self.records if r.trace is not None]
        return {
            "mode": self.mode,
            "runs": self.n,
            "valid": self.valid_count,
            "validity_rate": self.validity_rate,
            "failures": self.failures,
            "bounds_dominate": all(bounds_ok),
            "comm_counts": self.comm_counts,
            "comm_count_mean": float(counts.mean()) if counts.size else None,
            "comm_count_min": int(counts.min()) if counts.size else None,
            "comm_count_max": int(counts.max()) if counts.size else None,
            "min_slack": float(slacks.min()) if slacks.size else None,
            "min_slack_mean": float(slacks.mean()) if slacks.size else None,
        }


def run_seeds(seed, N):
    """ Per-run (initial state seed, disturbance seed) pairs derived from one root seed. """
    return [tuple(child.spawn(2)) for child in np.random.SeedSequence(seed).spawn(N)]


def monte_carlo(leg, N, dist_kind, seed, mode=OFFLINE, threads=None, w_max=None):
    """ N independent runs with x0 uniform over X_I and disturbances of the given kind.

    Run i draws x0 and its disturbance sequence from children of ``seed``, so offline and online campaigns with
    equal seeds see identical realizations.

    :type leg: Leg
    :param N: number of runs, at least one
    :param dist_kind: disturbance kind
    :param seed: root seed
    :param mode: "offline" or "online"
    :param w_max: disturbance radius, the system's when omitted
    :rtype: CampaignStats
    """
    if N < 1:
        raise ContractViolationError("a campaign needs N >= 1 runs, got {}".format(N))
    sys = leg.sys
    w_max = sys.w_max if w_max is None else w_max
    if mode == OFFLINE:
        leg.solve()

    def one(item):
        index, (x_seed, w_seed) = item
        x0 = sys.initial_set.sample(np.random.default_rng(x_seed), 1)[0]
        dist = DisturbanceModel(dist_kind, w_max, sys.n_w, w_seed)
        try:
            trace = execute(leg, mode, x0, dist)
        except (PreconditionError, InvariantViolationError) as ex:
            logger.error("run {} failed: {}".format(index, ex))
            return RunRecord(index, failure=str(ex))
        return RunRecord(index, trace, check_validity(sys, trace))

    records = _map(one, list(enumerate(run_seeds(seed, N))), threads)
    stats = CampaignStats(mode, records)
    logger.info("{} campaign: {}/{} valid runs".format(mode, stats.valid_count, stats.n))
    return stats


def compare_online_offline(leg, N, dist_kind, seed, threads=None):
    """ Paired offline/online campaigns on common random numbers.

    :return: (summary dict, timing dict) with the fraction of runs where the online count does not exceed the
        offline count
    """
    offline = monte_carlo(leg, N, dist_kind, seed, OFFLINE, threads)
    online = monte_carlo(leg, N, dist_kind, seed, ONLINE, threads)
    pairs = [(a, b) for a, b in zip(offline.comm_counts, online.comm_counts) if a is not None and b is not None]
    not_worse = sum(1 for a, b in pairs if b <= a)
    summary = {"offline": offline.to_dict(), "online": online.to_dict(), "paired_runs": len(pairs),
               "online_not_worse": not_worse,
               "online_not_worse_rate": not_worse / float(len(pairs)) if pairs else 0.0,
               "offline_schedule_cost": leg.schedule.cost}
    timing = {"offline_mean_compute_time": offline.mean_compute_time(),
              "online_mean_compute_time": online.mean_compute_time()}
    return summary, timing


def traverse(legs, x0, mode, dist_kind, seed, steps=constants.TRAVERSE_STEPS, w_max=None):
    """ Drive back and forth between the legs' targets for ``steps`` time steps, switching to the next leg as
    soon as the current target is entered.

    :param legs: list of Leg; the target of each leg is the initial set of the next (cyclically)
    :param x0: starting state inside the initial set of the first leg
    :param mode: inner run mode, "offline" or "online"
    :return: dict with the communication count over the step budget and per-leg details
    """
    x = np.asarray(x0, dtype=float)
    used, comm, idx, leg_no = 0, 0, 0, 0
    details = []
    children = np.random.SeedSequence(seed)
    valid = True
    while used < steps:
        leg = legs[idx]
        if leg.L == 0:
            raise ContractViolationError("traverse legs need a positive horizon")
        dist = DisturbanceModel(dist_kind, leg.sys.w_max if w_max is None else w_max, leg.sys.n_w,
                                children.spawn(1)[0])
        trace = execute(leg, mode, x, dist, stop_on_target=True)
        report = check_validity(leg.sys, trace)
        budget = min(trace.steps, steps - used)
        comm += int(sum(trace.flags[:budget]))
        used += budget
        details.append({"leg": idx, "steps": trace.steps, "comm_count": trace.comm_count, "valid": report.valid})
        if not report.valid:
            valid = False
            logger.error("traverse leg {} ({}) produced an invalid trajectory".format(leg_no, idx))
            break
        x = trace.states[-1]
        idx = (idx + 1) % len(legs)
        leg_no += 1
    logger.info("traverse ({}): {} communications over {} steps, {} legs".format(mode, comm, used, leg_no))
    return {"mode": mode, "steps": used, "comm_count": comm, "legs": details, "valid": valid}


def sweep_M(leg_specs, M_list, nu_bar=None, x0=None, mode=OFFLINE, dist_kind="uniform-ball", seed=0,
            steps=constants.TRAVERSE_STEPS, threads=None):
    """ Evaluate the abstraction for every M in ``M_list``. Each entry records feasibility, the summed offline
    schedule cost and, for two or more legs with ``x0`` given, the traverse communication count.

    :param leg_specs: list of (sys, clf, ref)
    :return: list of dicts ordered like ``M_list``
    """
    def one(M):
        entry = {"M": int(M)}
        try:
            legs = [prepare_leg(sys, clf, ref, M, nu_bar) for sys, clf, ref in leg_specs]
            entry["offline_cost"] = sum(leg.solve().cost for leg in legs)
        except (InfeasibilityError, ConstructionError) as ex:
            entry.update({"feasible": False, "reason": str(ex), "layer": getattr(ex, "layer", None)})
            return entry
        entry["feasible"] = True
        if len(legs) > 1 and x0 is not None:
            try:
                result = traverse(legs, x0, mode, dist_kind, seed, steps)
            except (PreconditionError, InvariantViolationError) as ex:
                entry.update({"traverse_error": str(ex), "comm_count": None})
                return entry
            entry.update({"comm_count": result["comm_count"], "steps": result["steps"], "valid": result["valid"]})
        return entry

    results = _map(one, list(M_list), threads)
    for entry in results:
        logger.info("M = {}: {}".format(entry["M"], "feasible" if entry["feasible"] else "infeasible"))
    return results


def _offline_feasible(leg, w_max):
    model = leg.model.with_w_max(w_max)
    T = build_symbolic_system(model, leg.T.partition)
    try:
        min_comm_schedule(build_timed_system(T, leg.env, leg.ref, model))
    except InfeasibilityError:
        return False
    return True


def _online_feasible(leg, w_max, x0):
    model = leg.model.with_w_max(w_max)
    T = build_symbolic_system(model, leg.T.partition)
    TA = build_timed_system(T, leg.env, leg.ref, model)
    s0 = sym_of_state(T, leg.clf, x0, leg.ref.states[0])
    try:
        optcom(TA, s0, 0)
    except InfeasibilityError:
        return False
    return True


def bisect(feasible, lo, hi, tol):
    """ Largest value in [lo, hi] (to ``tol``) for which the monotone predicate holds; None if it fails at lo. """
    if not feasible(lo):
        return None
    if feasible(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def wmax_frontier(leg, x0=None, hi=1.0, tol=constants.WMAX_BISECT_TOL):
    """ Largest disturbance radius admitting an offline schedule from s_init versus an online plan at k = 0
    from the symbol of ``x0`` (the reference start when omitted).

    :type leg: Leg
    :return: dict with both frontiers
    """
    x0 = leg.ref.states[0] if x0 is None else np.asarray(x0, dtype=float)
    offline = bisect(lambda w: _offline_feasible(leg, w), 0.0, hi, tol)
    online = bisect(lambda w: _online_feasible(leg, w, x0), 0.0, hi, tol)
    logger.info("w_max frontier: offline {}, online {}".format(offline, online))
    return {"offline": offline, "online": online, "tolerance": tol, "upper": hi, "x0": x0.tolist()}
