import numpy as np
from scipy.linalg import expm

from reachsched.basic.exceptions import ContractViolationError


def discretize_zoh(A_c, B_c, delta):
    """ Exact zero-order-hold discretization of x' = A_c x + B_c u with sampling time ``delta``.

    Uses the exponential of the augmented generator [[A_c, B_c], [0, 0]] * delta, whose upper blocks are
    exp(A_c delta) and (int_0^delta exp(A_c s) ds) B_c.

    :param A_c: continuous state matrix (n, n)
    :param B_c: continuous input matrix (n, m)
    :param delta: sampling time, positive
    :return: (A, B)
    """
    A_c = np.atleast_2d(np.asarray(A_c, dtype=float))
    B_c = np.asarray(B_c, dtype=float)
    if B_c.ndim == 1:
        B_c = B_c.reshape(-1, 1)
    n = A_c.shape[0]
    if A_c.shape != (n, n):
        raise ContractViolationError("A_c must be square, got shape {}".format(A_c.shape))
    if B_c.shape[0] != n:
        raise ContractViolationError("B_c must have {} rows, got {}".format(n, B_c.shape[0]))
    if not delta > 0:
        raise ContractViolationError("sampling time must be positive, got {}".format(delta))

    m = B_c.shape[1]
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = A_c
    aug[:n, n:] = B_c
    phi = expm(aug * delta)
    return phi[:n, :n], phi[:n, n:]
