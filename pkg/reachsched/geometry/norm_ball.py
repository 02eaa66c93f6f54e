import numpy as np


class NormBallSet(object):
    """ Euclidean ball {v : ||v|| <= radius} around the origin, used for input and disturbance sets. """

    def __init__(self, radius, dim):
        if radius < 0:
            raise ValueError("radius has to be nonnegative, got {}".format(radius))
        self.radius = float(radius)
        self.dim = int(dim)

    def contains(self, v, tol=0.0):
        return float(np.linalg.norm(v)) <= self.radius + tol

    def boundary_points(self):
        """ Points on the sphere of radius ``radius`` along the positive and negative axis directions.

        :return: array of shape (2 * dim, dim)
        """
        eye = np.eye(self.dim)
        return self.radius * np.vstack([eye, -eye])

    def grid(self, density):
        """ Uniform grid over the bounding cube, filtered to the ball.

        :param density: points per axis
        :return: array of shape (N, dim)
        """
        axis = np.linspace(-self.radius, self.radius, density)
        mesh = np.stack(np.meshgrid(*([axis] * self.dim), indexing="ij"), axis=-1).reshape(-1, self.dim)
        return mesh[np.linalg.norm(mesh, axis=1) <= self.radius * (1 + 1e-12)]

    def __repr__(self):
        return "NormBallSet(radius={}, dim={})".format(self.radius, self.dim)


def sample_uniform_ball(rng, size, dim, radius):
    """ Uniform samples from the Euclidean ball: normalized Gaussian direction scaled by U^(1/dim) * radius.

    :param rng: numpy random generator
    :return: array of shape (size, dim)
    """
    direction = rng.standard_normal((size, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return direction * (rng.uniform(size=(size, 1)) ** (1.0 / dim)) * radius
