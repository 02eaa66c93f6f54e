import logging

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError
from reachsched.math.class_k import ComposedK, InverseK, LinearK, PowerK, class_k_from_dict
from reachsched.math.spectral import sigma_max, sigma_min, symmetric_eigenvalues
from reachsched.model.system_model import LinearDynamics

logger = logging.getLogger("Lyapunov")


class ErrorTerms(object):
    """ The pieces of the scalar error model a CLF family contributes.

    contraction:  v -> v - alpha2(v)
    open loop:    (v, w) -> outer(L_x * inner^-1(v) + L_w * w)
    input bound:  v -> input_gain(v), bounding ||kappa(x, y, u) - u|| whenever V(x, y) <= v
    """

    def __init__(self, alpha2, outer, inner, L_x, L_w, input_gain):
        self.alpha2 = alpha2
        self.outer = outer
        self.inner = inner
        self.L_x = float(L_x)
        self.L_w = float(L_w)
        self.input_gain = input_gain


class DeltaIssClf(object):
    """ A delta-ISS control Lyapunov function V together with its feedback kappa and the class-K bounds

        alpha_lower(|x - y|) <= V(x, y) <= alpha_upper(|x - y|)
        V(x+, y+) - V(x, y) <= -alpha(|x - y|) + rho(|w1 - w2|)
        |kappa(x, y, u)| <= alpha_u(|x - y|) + rho_u(|u|)
    """
    family = None

    def __init__(self, alpha_lower, alpha_upper, alpha, rho, alpha_u, rho_u):
        self.alpha_lower = alpha_lower
        self.alpha_upper = alpha_upper
        self.alpha = alpha
        self.rho = rho
        self.alpha_u = alpha_u
        self.rho_u = rho_u

    def values(self, X, Y):
        raise NotImplementedError

    def feedback_batch(self, X, Y, U):
        raise NotImplementedError

    @property
    def n(self):
        raise NotImplementedError

    def value(self, x, y):
        """ V(x, y) for single state vectors. """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.shape != (self.n,):
            raise ContractViolationError("dimension mismatch: x{} y{} for n={}".format(x.shape, y.shape, self.n))
        return float(self.values(x[None, :], y[None, :])[0])

    def feedback(self, x, y, u):
        """ kappa(x, y, u); equals u when x == y. """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if x.shape != y.shape or x.shape != (self.n,):
            raise ContractViolationError("dimension mismatch: x{} y{} for n={}".format(x.shape, y.shape, self.n))
        return self.feedback_batch(x[None, :], y[None, :], u[None, :])[0]

    def error_terms(self, sys):
        """ Generic composition alpha2 = alpha o alpha_upper^-1 and open loop through the Lipschitz constants.

        :type sys: SystemModel
        :rtype: ErrorTerms
        """
        alpha2 = ComposedK(self.alpha, InverseK(self.alpha_upper))
        input_gain = ComposedK(self.alpha_u, InverseK(self.alpha_lower))
        return ErrorTerms(alpha2, self.alpha_upper, self.alpha_lower, sys.L_x, sys.L_w, input_gain)


class LinearGainClf(DeltaIssClf):
    """ V(x, y) = ||W (x - y)||, kappa(x, y, u) = u - K (x - y) for linear dynamics.

    With W = I this is the plain error norm; a weighting W lets the closed loop contract in the W-metric
    even when sigma_max(A - B K) cannot be pushed below one.
    """
    family = "linear-gain"

    def __init__(self, K, dynamics, W=None):
        """
        :param K: feedback gain (m, n)
        :param dynamics: the plant
        :type dynamics: LinearDynamics
        :param W: invertible metric weight (n, n), identity when omitted
        """
        if not isinstance(dynamics, LinearDynamics):
            raise ContractViolationError("the linear-gain family needs linear dynamics")
        self.K = np.atleast_2d(np.asarray(K, dtype=float))
        n = dynamics.n
        if self.K.shape != (dynamics.m, n):
            raise ContractViolationError("K must have shape {}, got {}".format((dynamics.m, n), self.K.shape))
        self.W = np.eye(n) if W is None else np.atleast_2d(np.asarray(W, dtype=float))
        if self.W.shape != (n, n) or abs(np.linalg.det(self.W)) < 1e-12:
            raise ContractViolationError("W must be an invertible {0}x{0} matrix".format(n))
        self.W_inv = np.linalg.inv(self.W)
        self.dynamics = dynamics
        self.A_cl = dynamics.A - dynamics.B.dot(self.K)

        self.sigma_cl = sigma_max(self.W.dot(self.A_cl).dot(self.W_inv))
        if self.sigma_cl >= 1.0:
            raise ContractViolationError("closed loop does not contract in the W-metric: {:.6f}".format(self.sigma_cl))
        self.sigma_ol = sigma_max(self.W.dot(dynamics.A).dot(self.W_inv))
        self.w_gain = sigma_max(self.W.dot(dynamics.E))
        w_lo, w_hi = sigma_min(self.W), sigma_max(self.W)

        super(LinearGainClf, self).__init__(
            alpha_lower=LinearK(w_lo),
            alpha_upper=LinearK(w_hi),
            alpha=LinearK((1.0 - self.sigma_cl) * w_lo),
            rho=LinearK(self.w_gain),
            alpha_u=LinearK(max(sigma_max(self.K), 1e-12)),
            rho_u=LinearK(1.0))

    @property
    def n(self):
        return self.K.shape[1]

    def values(self, X, Y):
        return np.linalg.norm((X - Y).dot(self.W.T), axis=1)

    def feedback_batch(self, X, Y, U):
        return U - (X - Y).dot(self.K.T)

    def error_terms(self, sys):
        """ Error model terms measured directly in the W-metric:
        contraction sigma_cl * v, open loop ||W A W^-1|| v + ||W E|| w, input gain ||K W^-1|| v.
        """
        identity = LinearK(1.0)
        return ErrorTerms(LinearK(1.0 - self.sigma_cl), identity, identity, self.sigma_ol, self.w_gain,
                          LinearK(max(sigma_max(self.K.dot(self.W_inv)), 1e-12)))


class QuadraticClf(DeltaIssClf):
    """ V(x, y) = (x - y)^T P (x - y), kappa(x, y, u) = u - k_u (x - y). """
    family = "quadratic"

    def __init__(self, P, Q, k_u, rho):
        """
        :param P: positive definite weight
        :param Q: positive definite decrease weight
        :param k_u: feedback gain, one row per input
        :param rho: class-K function of |w1 - w2|
        """
        self.P = np.atleast_2d(np.asarray(P, dtype=float))
        self.Q = np.atleast_2d(np.asarray(Q, dtype=float))
        self.k_u = np.atleast_2d(np.asarray(k_u, dtype=float))
        n = self.P.shape[0]
        if self.P.shape != (n, n) or self.Q.shape != (n, n) or self.k_u.shape[1] != n:
            raise ContractViolationError("inconsistent quadratic CLF shapes P{} Q{} k_u{}".format(
                self.P.shape, self.Q.shape, self.k_u.shape))
        p_eig = symmetric_eigenvalues(self.P)
        q_eig = symmetric_eigenvalues(self.Q)
        if p_eig[0] <= 0 or q_eig[0] <= 0:
            raise ContractViolationError("P and Q must be positive definite")
        self.lambda_min_P, self.lambda_max_P = float(p_eig[0]), float(p_eig[-1])
        self.lambda_min_Q = float(q_eig[0])

        super(QuadraticClf, self).__init__(
            alpha_lower=PowerK(self.lambda_min_P, 2),
            alpha_upper=PowerK(self.lambda_max_P, 2),
            alpha=PowerK(self.lambda_min_Q, 2),
            rho=rho,
            alpha_u=LinearK(max(sigma_max(self.k_u), 1e-12)),
            rho_u=LinearK(1.0))

    @property
    def n(self):
        return self.P.shape[0]

    def values(self, X, Y):
        E = X - Y
        return np.einsum('ij,jk,ik->i', E, self.P, E)

    def feedback_batch(self, X, Y, U):
        return U - (X - Y).dot(self.k_u.T)


def clf_from_dict(data, sys):
    """ Build a CLF from its JSON block.

    {"family": "linear-gain", "K": [[...]], "W": [[...]]} or
    {"family": "quadratic", "P": [[...]], "Q": [[...]], "k_u": [...], "rho": {"lin": 3.5, "quad": 0.16}}
    """
    family = data.get("family")
    if family == "linear-gain":
        return LinearGainClf(data["K"], sys.dynamics, data.get("W"))
    if family == "quadratic":
        return QuadraticClf(data["P"], data["Q"], data["k_u"], class_k_from_dict(data["rho"]))
    raise ContractViolationError("unknown CLF family {!r}".format(family))


class VerificationReport(object):

    def __init__(self, n_points, n_pairs, worst_slack, counts, violations, subsampled):
        self.n_points = n_points
        self.n_pairs = n_pairs
        self.worst_slack = worst_slack
        self.counts = counts
        self.violations = violations
        self.subsampled = subsampled

    @property
    def ok(self):
        return sum(self.counts.values()) == 0

    def to_dict(self):
        return {"n_points": self.n_points, "n_pairs": self.n_pairs, "subsampled": self.subsampled,
                "worst_slack": self.worst_slack, "violation_counts": self.counts, "violations": self.violations,
                "ok": self.ok}


def verify_clf_on_grid(clf, sys, grid_density=constants.DEFAULT_GRID_DENSITY, w_density=3,
                       max_pairs=constants.MAX_GRID_PAIRS, seed=constants.VERIFICATION_SEED):
    """ Evaluate the sandwich, decrease and input-bound inequalities on a grid.

    States come from a uniform grid over X (``grid_density`` points per axis), paired exhaustively or, above
    ``max_pairs``, by a seeded subsample; inputs range over the axis points of the boundary of U and zero;
    disturbances over a ``w_density`` grid of W, paired exhaustively.

    :type clf: DeltaIssClf
    :type sys: SystemModel
    :rtype: VerificationReport
    """
    if grid_density < 2:
        raise ContractViolationError("grid density must be at least 2, got {}".format(grid_density))

    points = sys.free_space.grid(grid_density)
    n_points = points.shape[0]
    subsampled = n_points * n_points > max_pairs
    if subsampled:
        rng = np.random.default_rng(seed)
        i_idx = rng.integers(0, n_points, size=max_pairs)
        j_idx = rng.integers(0, n_points, size=max_pairs)
        logger.warning("{} grid pairs exceed {}, using a seeded subsample".format(n_points * n_points, max_pairs))
    else:
        i_idx, j_idx = [a.ravel() for a in np.meshgrid(np.arange(n_points), np.arange(n_points), indexing="ij")]
    X = points[i_idx]
    Y = points[j_idx]

    e_norm = np.linalg.norm(X - Y, axis=1)
    V = clf.values(X, Y)

    controls = np.vstack([sys.input_set.boundary_points(), np.zeros((1, sys.m))])
    disturbances = sys.disturbance_set.grid(w_density)

    worst = {"lower": np.inf, "upper": np.inf, "decrease": np.inf, "input": np.inf}
    counts = {"lower": 0, "upper": 0, "decrease": 0, "input": 0}
    violations = []

    def record(name, slack, extra):
        bad = np.nonzero(slack < -constants.TOL_VIOLATION)[0]
        worst[name] = min(worst[name], float(slack.min()))
        counts[name] += int(bad.size)
        for k in bad[:max(0, constants.MAX_REPORTED_VIOLATIONS - len(violations))]:
            item = {"inequality": name, "x": X[k].tolist(), "y": Y[k].tolist(), "slack": float(slack[k])}
            item.update(extra)
            violations.append(item)

    record("lower", V - clf.alpha_lower.apply(e_norm), {})
    record("upper", clf.alpha_upper.apply(e_norm) - V, {})

    alpha_e = clf.alpha.apply(e_norm)
    for u in controls:
        U = np.broadcast_to(u, (X.shape[0], sys.m))
        kappa = clf.feedback_batch(X, Y, U)
        bound = clf.alpha_u.apply(e_norm) + clf.rho_u.apply(np.linalg.norm(u))
        record("input", bound - np.linalg.norm(kappa, axis=1), {"u": u.tolist()})
        for w1 in disturbances:
            W1 = np.broadcast_to(w1, (X.shape[0], sys.n_w))
            x_next = sys.step_batch(X, kappa, W1)
            for w2 in disturbances:
                W2 = np.broadcast_to(w2, (X.shape[0], sys.n_w))
                y_next = sys.step_batch(Y, U, W2)
                lhs = clf.values(x_next, y_next) - V
                rhs = -alpha_e + clf.rho.apply(np.linalg.norm(w1 - w2))
                record("decrease", rhs - lhs, {"u": u.tolist(), "w1": w1.tolist(), "w2": w2.tolist()})

    report = VerificationReport(n_points, X.shape[0], worst, counts, violations, subsampled)
    logger.info("CLF grid check on {} points / {} pairs: violations {}".format(n_points, X.shape[0], counts))
    return report
