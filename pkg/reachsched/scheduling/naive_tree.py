import logging

import numpy as np

from reachsched import constants
from reachsched.basic.exceptions import ContractViolationError
from reachsched.scheduling.symbolic import CommSchedule

logger = logging.getLogger("NaiveTree")

NAIVE = "naive-tree"


def naive_tree_schedule(model, env, ref, L_cap=constants.NAIVE_TREE_L_CAP):
    """ Exhaustive depth-L binary tree over the exact bound recursion starting at v_init. A node is pruned as
    soon as its bound leaves v_max, a communication at it violates the input bound, or (at depth L) it ends
    above v_final.

    :type model: ErrorBoundModel
    :type env: SafetyEnvelope
    :type ref: ReferenceTrajectory
    :param L_cap: largest horizon accepted
    :return: (CommSchedule or None when no leaf survives, number of expanded nodes)
    """
    L = env.L
    if L > L_cap:
        raise ContractViolationError("naive search refuses L = {} > {} (2^L nodes)".format(L, L_cap))

    u_norms = np.linalg.norm(ref.controls, axis=1) if ref is not None else np.zeros(L)
    best = {"cost": None, "bits": None}
    nodes = 1
    # depth-first with the silent branch first; keeps the first cheapest leaf in lexicographic order
    stack = [(0, env.v_init, [])]
    while stack:
        k, v, bits = stack.pop()
        if k == L:
            if v <= env.v_final:
                cost = sum(bits)
                if best["cost"] is None or cost < best["cost"]:
                    best["cost"], best["bits"] = cost, bits
            continue
        children = []
        for c in (0, 1):
            nodes += 1
            if c == 1 and not model.input_bound(v, u_norms[k]) <= model.u_max:
                continue
            v_next = model.g_step(v, c, model.w_max)
            if not v_next <= env.v_max[k + 1]:
                continue
            children.append((k + 1, v_next, bits + [c]))
        stack.extend(reversed(children))

    logger.debug("naive tree expanded {} nodes for L = {}".format(nodes, L))
    if best["bits"] is None:
        return None, nodes
    return CommSchedule(best["bits"], NAIVE), nodes
