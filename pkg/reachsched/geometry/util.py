import numpy as np


def check_intersection(line_1, line_2):
    """ Checks if two line segments `line1` and `line2` intersect. If they do so, the function returns the intersection
    point as [x,y] coordinate (special case for overlapping ["inf", "inf"]), otherwise `None`.

    :param line_1: list containing the x- and y-coordinates as [[x1,x2],[y1,y2]]
    :param line_2: list containing the x- and y-coordinates as [[x1,x2],[y1,y2]]
    :return: intersection point [x,y] if the line segments intersect, None otherwise
    """
    x_points1, y_points1 = line_1
    x_points2, y_points2 = line_2

    # consider vector form (us + s*vs = u + t*v)
    us = np.array([x_points1[0], y_points1[0]], dtype=float)
    vs = np.array([x_points1[1] - x_points1[0], y_points1[1] - y_points1[0]], dtype=float)

    u = np.array([x_points2[0], y_points2[0]], dtype=float)
    v = np.array([x_points2[1] - x_points2[0], y_points2[1] - y_points2[0]], dtype=float)

    denom = vs[0] * v[1] - vs[1] * v[0]
    diff = u - us
    scale = max(np.linalg.norm(vs) * np.linalg.norm(v), 1e-300)

    if abs(denom) <= 1e-12 * scale:
        # parallel, check whether both segments lie on a common line
        if abs(diff[0] * vs[1] - diff[1] * vs[0]) > 1e-12 * max(np.linalg.norm(vs), 1e-300):
            return None
        vs_sq = float(vs.dot(vs))
        if vs_sq == 0.0:
            return None
        s0 = float(diff.dot(vs)) / vs_sq
        s1 = float((diff + v).dot(vs)) / vs_sq
        lo, hi = max(min(s0, s1), 0.0), min(max(s0, s1), 1.0)
        if lo > hi:
            return None
        if lo == hi:
            return list(us + lo * vs)
        return ["inf", "inf"]

    s = (diff[0] * v[1] - diff[1] * v[0]) / denom
    t = (diff[0] * vs[1] - diff[1] * vs[0]) / denom

    if not (0 <= s <= 1 and 0 <= t <= 1):
        return None

    return list(us + s * vs)


def points_to_segment_distance(points, start, end):
    """ Euclidean distance of every point in ``points`` to the segment from ``start`` to ``end``.

    :param points: array of shape (N, 2)
    :param start: segment start (x, y)
    :param end: segment end (x, y)
    :return: array of shape (N,)
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    a = np.asarray(start, dtype=float)
    d = np.asarray(end, dtype=float) - a
    d_sq = float(d.dot(d))
    if d_sq == 0.0:
        return np.linalg.norm(points - a, axis=1)
    t = np.clip((points - a).dot(d) / d_sq, 0.0, 1.0)
    return np.linalg.norm(points - (a + t[:, None] * d), axis=1)
