import numpy as np

from reachsched.basic.exceptions import ContractViolationError
from reachsched.geometry.norm_ball import sample_uniform_ball

ZERO = "zero"
WORST_CASE = "worst-case"
UNIFORM_BALL = "uniform-ball"
KINDS = (ZERO, WORST_CASE, UNIFORM_BALL)


class DisturbanceModel(object):

    def __init__(self, kind, w_max, dim, seed=0):
        """ Disturbance source with ||w|| <= w_max.

        :param kind: "zero", "worst-case" (||w|| = w_max, random direction) or "uniform-ball"
        :param w_max: radius of W
        :param dim: dimension of w
        :param seed: seed or numpy SeedSequence; ``sequence`` always restarts from it
        """
        if kind not in KINDS:
            raise ContractViolationError("unknown disturbance kind {!r}, expected one of {}".format(kind, KINDS))
        if w_max < 0:
            raise ContractViolationError("w_max must be nonnegative, got {}".format(w_max))
        self.kind = kind
        self.w_max = float(w_max)
        self.dim = int(dim)
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def _draw(self, rng, size):
        if self.kind == ZERO or self.w_max == 0.0:
            return np.zeros((size, self.dim))
        if self.kind == WORST_CASE:
            direction = rng.standard_normal((size, self.dim))
            return self.w_max * direction / np.linalg.norm(direction, axis=1, keepdims=True)
        return sample_uniform_ball(rng, size, self.dim, self.w_max)

    def sample(self):
        """ Next sample of the model's own stream. """
        return self._draw(self._rng, 1)[0]

    def sequence(self, L):
        """ L samples drawn from a fresh generator seeded with ``seed``; equal seeds give equal sequences.

        :return: array (L, dim)
        """
        return self._draw(np.random.default_rng(self.seed), L)

    def with_w_max(self, w_max):
        return DisturbanceModel(self.kind, w_max, self.dim, self.seed)


def sample_disturbance(dm):
    """
    :type dm: DisturbanceModel
    :return: one disturbance vector
    """
    return dm.sample()
