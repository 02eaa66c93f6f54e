import math

import numpy as np


def symmetric_eigenvalues(P):
    """ Eigenvalues of a symmetric matrix in ascending order; closed form for the 2x2 case.

    :param P: symmetric matrix
    :return: array of eigenvalues
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if P.shape == (2, 2):
        a, b, d = P[0, 0], 0.5 * (P[0, 1] + P[1, 0]), P[1, 1]
        mean = 0.5 * (a + d)
        radius = math.sqrt(0.25 * (a - d) ** 2 + b ** 2)
        return np.array([mean - radius, mean + radius])
    return np.linalg.eigvalsh(0.5 * (P + P.T))


def sigma_max(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return float(np.linalg.norm(M, 2))


def sigma_min(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return float(np.linalg.svd(M, compute_uv=False)[-1])
