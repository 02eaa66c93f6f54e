"""
Class-K function algebra with evaluation and inverses.

Every function maps [0, inf) to [0, inf), vanishes at 0 and is strictly increasing. Inverses use a closed
form where one exists and otherwise a bracketed root search on [0, horizon].
"""
import logging
import math

import numpy as np
from scipy.optimize import brentq

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError, OutOfRangeError

logger = logging.getLogger("ClassK")


class ClassKFunction(object):
    horizon = constants.CLASS_K_HORIZON

    def evaluate(self, r):
        raise NotImplementedError

    def __call__(self, r):
        if r == math.inf:
            return math.inf
        if r < 0:
            raise ContractViolationError("class-K functions are defined on [0, inf), got {}".format(r))
        if r == 0:
            return 0.0
        return float(self.evaluate(r))

    def inverse(self, y):
        """ Return r with f(r) = y.

        :param y: nonnegative value in the image of [0, horizon]
        :return: float
        """
        if y == math.inf:
            return math.inf
        if y < 0:
            raise ContractViolationError("cannot invert a negative value {}".format(y))
        if y == 0:
            return 0.0
        return float(self._inverse(y))

    def _inverse(self, y):
        return bisect_inverse(self, y)

    def apply(self, r):
        """ Elementwise evaluation over an array of nonnegative arguments. """
        return np.array([self(float(v)) for v in np.ravel(r)]).reshape(np.shape(r))

    def check_monotone(self, horizon=None, n_points=constants.CLASS_K_GRID_POINTS):
        """ Grid check of zero at zero and strict increase on [0, horizon].

        :return: bool
        """
        horizon = self.horizon if horizon is None else horizon
        grid = np.linspace(0.0, horizon, n_points)
        values = np.array([self(r) for r in grid])
        return values[0] == 0.0 and bool(np.all(np.diff(values) > 0))


def bisect_inverse(f, y):
    """ Root of f(r) - y with bracket doubling from [0, 1] up to the function's horizon. """
    hi = 1.0
    while f(hi) < y:
        if hi >= f.horizon:
            raise OutOfRangeError("value {} exceeds the image of the registered horizon {}".format(y, f.horizon))
        hi = min(2.0 * hi, f.horizon)
    lo = 0.0 if hi == 1.0 else hi / 2.0
    if f(hi) == y:
        return hi
    tol = constants.TOL_INVERSE * max(1.0, y)
    r = brentq(lambda s: f(s) - y, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    assert abs(f(r) - y) <= tol, "root search missed {}: f({}) = {}".format(y, r, f(r))
    return r


class LinearK(ClassKFunction):

    def __init__(self, a):
        if a <= 0:
            raise ContractViolationError("linear class-K slope must be positive, got {}".format(a))
        self.a = float(a)

    def evaluate(self, r):
        return self.a * r

    def apply(self, r):
        return self.a * np.asarray(r, dtype=float)

    def _inverse(self, y):
        return y / self.a

    def __repr__(self):
        return "LinearK({})".format(self.a)


class PowerK(ClassKFunction):

    def __init__(self, a, p):
        if a <= 0 or p <= 0:
            raise ContractViolationError("power class-K needs a > 0 and p > 0, got a={}, p={}".format(a, p))
        self.a = float(a)
        self.p = float(p)

    def evaluate(self, r):
        return self.a * r ** self.p

    def apply(self, r):
        return self.a * np.asarray(r, dtype=float) ** self.p

    def _inverse(self, y):
        return (y / self.a) ** (1.0 / self.p)

    def __repr__(self):
        return "PowerK({}, {})".format(self.a, self.p)


class PolynomialK(ClassKFunction):

    def __init__(self, terms):
        """ Sum of a_i r^{p_i} with a_i > 0 and p_i > 0.

        :param terms: list of (a_i, p_i)
        """
        if not terms:
            raise ContractViolationError("polynomial class-K needs at least one term")
        for a, p in terms:
            if a <= 0 or p <= 0:
                raise ContractViolationError("polynomial term ({}, {}) is not positive".format(a, p))
        self.terms = [(float(a), float(p)) for a, p in terms]

    def evaluate(self, r):
        return sum(a * r ** p for a, p in self.terms)

    def apply(self, r):
        r = np.asarray(r, dtype=float)
        return sum(a * r ** p for a, p in self.terms)

    def __repr__(self):
        return "PolynomialK({})".format(self.terms)


class ComposedK(ClassKFunction):
    """ outer(inner(r)) """

    def __init__(self, outer, inner):
        self.outer = outer
        self.inner = inner
        self.horizon = inner.horizon

    def evaluate(self, r):
        return self.outer(self.inner(r))

    def apply(self, r):
        return self.outer.apply(self.inner.apply(r))

    def _inverse(self, y):
        return self.inner.inverse(self.outer.inverse(y))

    def __repr__(self):
        return "ComposedK({}, {})".format(self.outer, self.inner)


class InverseK(ClassKFunction):

    def __init__(self, base):
        self.base = base

    def evaluate(self, r):
        return self.base.inverse(r)

    def _inverse(self, y):
        return self.base(y)

    def __repr__(self):
        return "InverseK({})".format(self.base)


class MinWithIdentityK(ClassKFunction):
    """ r -> min(f(r), (1 - eps) r) """

    def __init__(self, base, eps=constants.MONOTONE_EPS):
        self.base = base
        self.eps = float(eps)
        self.horizon = base.horizon

    def evaluate(self, r):
        return min(self.base(r), (1.0 - self.eps) * r)

    def _inverse(self, y):
        # the inverse of a pointwise min of increasing maps is the pointwise max of the inverses
        return max(self.base.inverse(y), y / (1.0 - self.eps))

    def __repr__(self):
        return "MinWithIdentityK({}, {})".format(self.base, self.eps)


class IdentityMinus(object):
    """ The contraction branch r -> r - f(r). Not class-K in general, so it is not a ClassKFunction. """

    def __init__(self, f):
        self.f = f

    def __call__(self, r):
        if r == math.inf:
            return math.inf
        return r - self.f(r)

    def is_increasing(self, horizon, n_points=constants.CLASS_K_GRID_POINTS):
        grid = np.linspace(0.0, horizon, n_points)
        values = np.array([self(r) for r in grid])
        return bool(np.all(np.diff(values) > 0))

    def __repr__(self):
        return "IdentityMinus({})".format(self.f)


def monotone_contraction(alpha2, horizon):
    """ Return (alpha2', Id - alpha2') with Id - alpha2' strictly increasing on [0, horizon] where the grid allows.

    If the slope check fails, alpha2 is replaced by r -> min(alpha2(r), (1 - 1e-6) r).

    :param alpha2: class-K function alpha o alpha_upper^-1
    :param horizon: upper end of the checked range
    :return: (ClassKFunction, IdentityMinus)
    """
    branch = IdentityMinus(alpha2)
    if branch.is_increasing(horizon):
        return alpha2, branch
    logger.warning("Id - alpha2 is not increasing on [0, {}], using min(alpha2, (1 - eps) Id)".format(horizon))
    alpha2 = MinWithIdentityK(alpha2)
    return alpha2, IdentityMinus(alpha2)


def class_k_from_dict(data):
    """ Parse a class-K function from its JSON form.

    {"linear": a} | {"power": [a, p]} | {"poly": [[a, p], ...]} | {"lin": a, "quad": b}
    """
    if "linear" in data:
        return LinearK(data["linear"])
    if "power" in data:
        a, p = data["power"]
        return PowerK(a, p)
    if "poly" in data:
        return PolynomialK([tuple(t) for t in data["poly"]])
    if "lin" in data or "quad" in data:
        terms = []
        if data.get("lin", 0) > 0:
            terms.append((data["lin"], 1))
        if data.get("quad", 0) > 0:
            terms.append((data["quad"], 2))
        return PolynomialK(terms)
    raise ContractViolationError("unknown class-K form {}".format(data))
