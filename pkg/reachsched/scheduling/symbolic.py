import logging
import math

import numpy as np

from reachsched.basic.exceptions import ConstructionError, ContractViolationError, InfeasibilityError

logger = logging.getLogger("Symbolic")

OFFLINE = "offline"


class Partition(object):

    def __init__(self, M, nu_bar):
        """ Error levels nu_m = nu_bar * m / (M - 1) for m = 1..M-1 and nu_M = inf.

        :param M: number of symbols, at least 2
        :param nu_bar: largest finite level
        """
        if M < 2:
            raise ContractViolationError("a partition needs M >= 2, got {}".format(M))
        if not nu_bar > 0:
            raise ContractViolationError("nu_bar must be positive, got {}".format(nu_bar))
        self.M = int(M)
        self.nu_bar = float(nu_bar)
        levels = [self.nu_bar * m / (self.M - 1) for m in range(1, self.M - 1)] + [self.nu_bar, math.inf]
        self.levels = np.array(levels)

    def symbol_of(self, v):
        """ Lowest symbol index whose level dominates ``v``. """
        return int(np.searchsorted(self.levels, v, side="left"))

    def __len__(self):
        return self.M


def build_partition(env, M, nu_bar=None):
    """ Partition with nu_bar = max_k v_max[k] unless given explicitly.

    :type env: SafetyEnvelope
    :rtype: Partition
    """
    return Partition(M, env.nu_bar if nu_bar is None else nu_bar)


class SymbolicErrorSystem(object):

    def __init__(self, partition, successors):
        """
        :type partition: Partition
        :param successors: integer array (M, 2), successors[i, c] is the symbol reached from i with bit c
        """
        self.partition = partition
        self.successors = np.asarray(successors, dtype=int)
        assert self.successors.shape == (partition.M, 2), "one successor per (symbol, bit) required"

    @property
    def M(self):
        return self.partition.M

    @property
    def levels(self):
        return self.partition.levels

    def level(self, s):
        return float(self.partition.levels[s])

    def successor(self, s, c):
        return int(self.successors[s, c])

    def edges(self):
        return [(i, c, int(self.successors[i, c])) for i in range(self.M) for c in (0, 1)]


def build_symbolic_system(model, part):
    """ For every (s_i, c) the successor is the lowest symbol whose level dominates g(nu_i, c, w_max); the
    inf symbol loops on itself.

    :type model: ErrorBoundModel
    :type part: Partition
    :rtype: SymbolicErrorSystem
    """
    succ = np.empty((part.M, 2), dtype=int)
    for i, level in enumerate(part.levels):
        for c in (0, 1):
            succ[i, c] = part.symbol_of(model.g_step(level, c, model.w_max))
    return SymbolicErrorSystem(part, succ)


class CommSchedule(object):

    def __init__(self, bits, provenance=OFFLINE):
        self.bits = [int(c) for c in bits]
        self.provenance = provenance
        if provenance == OFFLINE and self.bits:
            assert self.bits[0] == 1, "offline schedules start with a communication"

    @property
    def cost(self):
        return sum(self.bits)

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def to_dict(self):
        return {"bits": self.bits, "provenance": self.provenance, "cost": self.cost}

    @classmethod
    def from_dict(cls, data):
        return cls(data["bits"], data.get("provenance", OFFLINE))


class TimedSymbolicSystem(object):

    def __init__(self, T, L, allowed, s_init, final, iterations):
        """ T unrolled over the horizon.

        :type T: SymbolicErrorSystem
        :param L: horizon
        :param allowed: boolean array (L, M, 2); allowed[k, i, c] keeps the edge ((i, k), c, (succ(i, c), k + 1))
        :param s_init: initial symbol at time 0
        :param final: boolean array (M,), terminal symbols at time L
        :param iterations: number of (k, symbol, bit) visits spent building the edge set
        """
        self.T = T
        self.L = int(L)
        self.allowed = allowed
        self.s_init = int(s_init)
        self.final = final
        self.iterations = int(iterations)
        self._cost_to_go = None
        self._choice = None

    @property
    def M(self):
        return self.T.M

    def edges(self):
        """ All edges ((i, k), c, (j, k + 1)) of the timed system. """
        ks, iis, cs = np.nonzero(self.allowed)
        return [((int(i), int(k)), int(c), (self.T.successor(i, c), int(k) + 1)) for k, i, c in zip(ks, iis, cs)]

    def n_edges(self):
        return int(np.count_nonzero(self.allowed))

    def _solve(self):
        """ Backward cost-to-go over the layered graph with 0/1 edge weights. On ties the silent bit wins, which
        yields the lexicographically smallest bit string among the cheapest ones.
        """
        if self._cost_to_go is not None:
            return
        L, M = self.L, self.M
        J = np.full((L + 1, M), np.inf)
        choice = np.full((L, M), -1, dtype=int)
        J[L, self.final] = 0.0
        succ = self.T.successors
        for k in range(L - 1, -1, -1):
            cost0 = np.where(self.allowed[k, :, 0], J[k + 1, succ[:, 0]], np.inf)
            cost1 = np.where(self.allowed[k, :, 1], 1.0 + J[k + 1, succ[:, 1]], np.inf)
            J[k] = np.minimum(cost0, cost1)
            choice[k] = np.where(cost0 <= cost1, 0, 1)
            choice[k][np.isinf(J[k])] = -1
        self._choice = choice
        self._cost_to_go = J

    def cost_to_go(self, s, k):
        self._solve()
        return float(self._cost_to_go[k, s])

    def first_unreachable_layer(self, s, k, first_bit=1):
        """ Forward reachability from (s, k) with the first bit pinned; returns the first empty layer, or L when
        layer L is reached but holds no terminal symbol, or None when a terminal symbol is reachable.
        """
        succ = self.T.successors
        if not self.allowed[k, s, first_bit]:
            return k + 1
        current = np.zeros(self.M, dtype=bool)
        current[succ[s, first_bit]] = True
        for j in range(k + 1, self.L):
            nxt = np.zeros(self.M, dtype=bool)
            for c in (0, 1):
                idx = np.nonzero(current & self.allowed[j, :, c])[0]
                nxt[succ[idx, c]] = True
            if not nxt.any():
                return j + 1
            current = nxt
        return None if np.any(current & self.final) else self.L


def build_timed_system(T, env, ref, model):
    """ Unroll T over the horizon keeping the edge ((i, k), c, (j, k + 1)) iff

        gamma(s_i) <= v_max[k], gamma(s_j) <= v_max[k + 1] and, for c = 1, the input bound at gamma(s_i) holds.

    :type T: SymbolicErrorSystem
    :type env: SafetyEnvelope
    :type ref: ReferenceTrajectory
    :type model: ErrorBoundModel
    :rtype: TimedSymbolicSystem
    """
    L = env.L
    if ref is not None and ref.L != L:
        raise ContractViolationError("envelope horizon {} differs from reference horizon {}".format(L, ref.L))
    M = T.M
    levels = T.levels
    u_norms = np.linalg.norm(ref.controls, axis=1) if ref is not None else np.zeros(L)
    allowed = np.zeros((L, M, 2), dtype=bool)
    gains = np.array([model.input_gain(level) if np.isfinite(level) else math.inf for level in levels])
    ref_terms = [model.rho_u(u) for u in u_norms]

    iterations = 0
    for k in range(L):
        for i in range(M):
            for c in (0, 1):
                iterations += 1
                j = T.successors[i, c]
                if not levels[i] <= env.v_max[k]:
                    continue
                if not levels[j] <= env.v_max[k + 1]:
                    continue
                if c == 1 and not gains[i] + ref_terms[k] <= model.u_max:
                    continue
                allowed[k, i, c] = True

    s_init = T.partition.symbol_of(env.v_init)
    if s_init == M - 1:
        raise ConstructionError("v_init = {:.6g} exceeds nu_bar = {:.6g}; choose nu_bar at least as large as "
                                "v_init".format(env.v_init, T.partition.nu_bar))
    final = levels <= env.v_final

    TA = TimedSymbolicSystem(T, L, allowed, s_init, final, iterations)
    logger.debug("timed system: M = {}, L = {}, {} edges, {} iterations".format(M, L, TA.n_edges(), iterations))
    return TA


def _extract(TA, s, k, first_bit):
    succ = TA.T.successors
    bits = [first_bit]
    run = [s, int(succ[s, first_bit])]
    for j in range(k + 1, TA.L):
        c = int(TA._choice[j, run[-1]])
        assert c >= 0, "cost-to-go is finite but no choice is stored at layer {}".format(j)
        bits.append(c)
        run.append(int(succ[run[-1], c]))
    return bits, run


def optcom(TA, s, k):
    """ Cheapest bit sequence c_k..c_{L-1} with c_k = 1 leading from (s, k) into the terminal set.

    :type TA: TimedSymbolicSystem
    :param s: current symbol
    :param k: current time, 0 <= k <= L - 1
    :return: (bits, run) with run the visited symbols s_k..s_L
    """
    if not 0 <= k <= TA.L - 1:
        raise ContractViolationError("k must lie in [0, {}], got {}".format(TA.L - 1, k))
    TA._solve()
    j = TA.T.successor(s, 1)
    if not TA.allowed[k, s, 1] or np.isinf(TA._cost_to_go[k + 1, j]):
        layer = TA.first_unreachable_layer(s, k)
        raise InfeasibilityError("no accepting run from symbol {} at time {} (first unreachable layer {})".format(
            s, k, layer), layer)
    return _extract(TA, s, k, 1)


def min_comm_schedule(TA):
    """ Minimum communication accepting run from (s_init, 0) with c_0 = 1.

    :type TA: TimedSymbolicSystem
    :return: (CommSchedule, run)
    """
    if TA.L == 0:
        if not TA.final[TA.s_init]:
            raise InfeasibilityError("empty horizon and the initial symbol is not terminal", 0)
        return CommSchedule([]), [TA.s_init]
    bits, run = optcom(TA, TA.s_init, 0)
    schedule = CommSchedule(bits, OFFLINE)
    logger.info("offline schedule with {} communications over L = {}".format(schedule.cost, TA.L))
    return schedule, run


def sym_of_state(T, clf, x, x_hat):
    """ Symbol with the closest level above V(x, x_hat).

    :type T: SymbolicErrorSystem
    :type clf: DeltaIssClf
    """
    return T.partition.symbol_of(clf.value(x, x_hat))
