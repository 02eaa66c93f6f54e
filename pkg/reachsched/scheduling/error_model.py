import logging
import math

import numpy as np

from reachsched.basic.exceptions import ContractViolationError, InvalidReferenceError
from reachsched.math.class_k import IdentityMinus, LinearK, monotone_contraction

logger = logging.getLogger("ErrorModel")


class ErrorBoundModel(object):

    def __init__(self, alpha2, rho, outer, inner, L_x, L_w, input_gain, rho_u, w_max, u_max, horizon=None):
        """ Scalar error propagation

            g(v, 1, w) = (Id - alpha2)(v) + rho(w)
            g(v, 0, w) = outer(L_x * inner^-1(v) + L_w * w)

        :param alpha2: class-K function alpha o alpha_upper^-1
        :param rho: class-K disturbance gain
        :param outer: alpha_upper (or the identity for models measured in V directly)
        :param inner: alpha_lower (or the identity)
        :param L_x: Lipschitz constant in x
        :param L_w: Lipschitz constant in w
        :param input_gain: v -> bound on ||kappa - u|| for errors at most v
        :param rho_u: class-K bound on the reference control contribution
        :param w_max: disturbance radius
        :param u_max: input radius
        :param horizon: range on which Id - alpha2 is checked for monotonicity (skipped if None)
        """
        if horizon is not None:
            alpha2, contraction = monotone_contraction(alpha2, horizon)
        else:
            contraction = IdentityMinus(alpha2)
        self.alpha2 = alpha2
        self.contraction = contraction
        self.rho = rho
        self.outer = outer
        self.inner = inner
        self.L_x = float(L_x)
        self.L_w = float(L_w)
        self.input_gain = input_gain
        self.rho_u = rho_u
        self.w_max = float(w_max)
        self.u_max = float(u_max)
        self.horizon = horizon

    @classmethod
    def from_clf(cls, clf, sys, horizon=None):
        """
        :type clf: DeltaIssClf
        :type sys: SystemModel
        """
        terms = clf.error_terms(sys)
        return cls(terms.alpha2, clf.rho, terms.outer, terms.inner, terms.L_x, terms.L_w, terms.input_gain,
                   clf.rho_u, sys.w_max, sys.u_max, horizon)

    def with_w_max(self, w_max):
        model = ErrorBoundModel(self.alpha2, self.rho, self.outer, self.inner, self.L_x, self.L_w, self.input_gain,
                                self.rho_u, w_max, self.u_max)
        model.contraction = self.contraction
        return model

    def g_step(self, v, c, w):
        """ One step of the error bound recursion.

        :param v: current bound, nonnegative or inf
        :param c: communication bit
        :param w: disturbance norm
        :return: next bound
        """
        if v < 0 or w < 0:
            raise ContractViolationError("g is defined for v >= 0 and w >= 0, got v={}, w={}".format(v, w))
        if v == math.inf:
            return math.inf
        if c:
            return self.contraction(v) + self.rho(w)
        return self.outer(self.L_x * self.inner.inverse(v) + self.L_w * w)

    def input_bound(self, v, u_ref_norm):
        """ Left hand side of the input condition: input_gain(v) + rho_u(||u_ref||). """
        if v == math.inf:
            return math.inf
        return self.input_gain(v) + self.rho_u(u_ref_norm)

    def propagate_bounds(self, v0, schedule):
        """ v_{k+1} = g(v_k, c_k, w_max) along ``schedule``.

        :return: list of L+1 bounds starting with v0
        """
        bounds = [float(v0)]
        for c in schedule:
            bounds.append(self.g_step(bounds[-1], c, self.w_max))
        return bounds

    def check_monotone(self, n_samples=10000, v_hi=10.0, seed=0):
        """ Sampled check of g(v,c,w) <= g(v',c,w) <= g(v',c,w') for v <= v', w <= w'.

        :return: number of violating samples
        """
        rng = np.random.default_rng(seed)
        violations = 0
        w_hi = max(self.w_max, 1e-3) * 2
        for _ in range(n_samples):
            v, v2 = sorted(rng.uniform(0, v_hi, size=2))
            w, w2 = sorted(rng.uniform(0, w_hi, size=2))
            c = int(rng.integers(0, 2))
            a, b, d = self.g_step(v, c, w), self.g_step(v2, c, w), self.g_step(v2, c, w2)
            if not (a <= b + 1e-12 and b <= d + 1e-12):
                violations += 1
        return violations


def example_model(sigma_cl=0.6, sigma_ol=1.2, w_max=0.1, u_max=math.inf):
    """ Error model of a linear plant with V = ||x - y||: g(v,1,w) = sigma_cl v + w, g(v,0,w) = sigma_ol v + w. """
    identity = LinearK(1.0)
    return ErrorBoundModel(LinearK(1.0 - sigma_cl), identity, identity, identity, sigma_ol, 1.0, identity, identity,
                           w_max, u_max)


class SafetyEnvelope(object):

    def __init__(self, v_max, v_init, v_final, reference=None):
        self.v_max = [float(v) for v in v_max]
        self.v_init = float(v_init)
        self.v_final = float(v_final)
        self.reference = reference

    @property
    def L(self):
        return len(self.v_max) - 1

    @property
    def nu_bar(self):
        return max(self.v_max)

    def to_dict(self):
        return {"L": self.L, "v_init": self.v_init, "v_final": self.v_final, "v_max": self.v_max}

    @classmethod
    def from_dict(cls, data, reference=None):
        return cls(data["v_max"], data["v_init"], data["v_final"], reference)


def safety_envelope(clf, sys, ref):
    """ v_max[k] = alpha_lower(signed distance of x_k to the boundary of X), v_init as the largest V between a
    vertex of X_I and x_0, v_final = alpha_lower(distance of x_L to the boundary of X_F).

    :type clf: DeltaIssClf
    :type sys: SystemModel
    :type ref: ReferenceTrajectory
    :rtype: SafetyEnvelope
    """
    x_last = ref.states[-1]
    if not sys.target_set.contains(x_last):
        raise InvalidReferenceError("the reference does not end in the target set")

    dist = sys.free_space.signed_distances(ref.states)
    v_max = [clf.alpha_lower(max(d, 0.0)) for d in dist]

    verts = sys.initial_set.vertices()
    v_init = float(np.max(clf.values(verts, np.repeat(ref.states[0][None, :], verts.shape[0], axis=0))))
    v_final = clf.alpha_lower(max(sys.target_set.face_distance(x_last), 0.0))

    logger.debug("envelope: min v_max {:.4g}, v_init {:.4g}, v_final {:.4g}".format(min(v_max), v_init, v_final))
    return SafetyEnvelope(v_max, v_init, v_final, ref)


class ConditionReport(object):

    def __init__(self, bounds, c1, c2_failures, c3, c4_failures, k0_warning):
        self.bounds = bounds
        self.c1 = c1
        self.c2_failures = c2_failures
        self.c3 = c3
        self.c4_failures = c4_failures
        self.k0_warning = k0_warning

    @property
    def c2(self):
        return not self.c2_failures

    @property
    def c4(self):
        return not self.c4_failures

    @property
    def ok(self):
        return self.c1 and self.c2 and self.c3 and self.c4

    def to_dict(self):
        return {"ok": self.ok, "C1": self.c1, "C2": self.c2, "C2_failures": self.c2_failures, "C3": self.c3,
                "C4": self.c4, "C4_failures": self.c4_failures, "k0_warning": self.k0_warning}


def check_C1_C4(model, env, ref, schedule, v0=None):
    """ Sufficient conditions for a valid trajectory under ``schedule``:
    (C1) the bound starts at v_init, (C2) it stays below v_max for k = 1..L, (C3) it ends below v_final and
    (C4) communication instants respect the input bound.

    :type model: ErrorBoundModel
    :type env: SafetyEnvelope
    :type ref: ReferenceTrajectory
    :param schedule: bit sequence of length L
    :param v0: initial bound, v_init when omitted
    :rtype: ConditionReport
    """
    schedule = [int(c) for c in schedule]
    if len(schedule) != env.L:
        raise ContractViolationError("schedule has length {}, horizon is {}".format(len(schedule), env.L))
    v0 = env.v_init if v0 is None else v0
    bounds = model.propagate_bounds(v0, schedule)

    c1 = bounds[0] == env.v_init
    c2_failures = [k for k in range(1, env.L + 1) if not bounds[k] <= env.v_max[k]]
    c3 = bounds[-1] <= env.v_final
    u_norms = np.linalg.norm(ref.controls, axis=1) if ref is not None else np.zeros(env.L)
    c4_failures = [k for k, c in enumerate(schedule)
                   if c and not model.input_bound(bounds[k], u_norms[k]) <= model.u_max]
    k0_warning = not bounds[0] <= env.v_max[0]
    if k0_warning:
        logger.warning("initial bound {:.4g} exceeds v_max[0] = {:.4g}".format(bounds[0], env.v_max[0]))
    return ConditionReport(bounds, c1, c2_failures, c3, c4_failures, k0_warning)
