"""Discrete closed Jordan curves on the unit sphere.

A curve is a cyclic list of unit vertices joined by minor geodesic arcs. The
orientation is meaningful: the *left* side of the curve is the region toward
``p x t`` at a vertex ``p`` with forward tangent ``t``, and turning left is a
positive turning angle. Enclosed areas come from the discrete Gauss-Bonnet
identity ``A_left = 2 pi - sum(turning angles)``, which is exact for geodesic
polygons.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .exceptions import (
    DegenerateIntersection,
    InvalidCurve,
    NonSimpleCurve,
    OffsetMakesNonSimple,
    RootNotBracketed,
)
from .sphgeo import UNIT_TOL, exp_map, geodesic_distance, normalize, slerp

__all__ = [
    "ClosedSphericalCurve",
    "AreaPair",
    "as_points",
    "edge_lengths",
    "total_length",
    "turning_angles",
    "enclosed_areas",
    "is_simple",
    "resample",
    "discrete_curvature",
    "left_normals",
    "is_bisector",
    "offset_curve",
    "make_bisector",
    "sample_points",
    "distance_point_to_curve",
    "curve_in_dilation",
    "contains_left",
    "min_mutual_distance",
]

SIMPLE_EPS = 1e-12
MAX_EDGE = np.pi / 2


class AreaPair(NamedTuple):
    left: float
    right: float


@dataclass(frozen=True, eq=False)
class ClosedSphericalCurve:
    """Immutable closed geodesic polygon on the unit sphere.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Unit vectors (within 1e-9), ``n >= 3``. Consecutive vertices must be
        distinct and no edge may exceed a quarter circle.
    """

    vertices: np.ndarray

    def __post_init__(self):
        P = np.array(self.vertices, dtype=float)
        if P.ndim != 2 or P.shape[1] != 3:
            raise InvalidCurve(f"vertices must have shape (n, 3), got {P.shape}")
        if P.shape[0] < 3:
            raise InvalidCurve("a closed curve needs at least 3 vertices")
        if not np.all(np.isfinite(P)):
            raise InvalidCurve("vertices must be finite")
        norms = np.linalg.norm(P, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise InvalidCurve("vertices must be unit vectors within 1e-9")
        # rows already unit to roundoff are kept bit-for-bit, so that
        # re-validating a curve never changes it
        fix = np.abs(norms - 1.0) > 1e-15
        P[fix] /= norms[fix, None]
        ell = _kernels.edge_lengths(P)
        if np.any(ell <= 1e-15):
            raise InvalidCurve("consecutive vertices must be distinct")
        if np.any(ell > MAX_EDGE + UNIT_TOL):
            raise InvalidCurve("edges longer than a quarter circle are not allowed")
        P.setflags(write=False)
        object.__setattr__(self, "vertices", P)

    @property
    def n(self):
        return self.vertices.shape[0]

    def __len__(self):
        return self.n

    def reversed(self):
        """Same point set, opposite orientation, same first vertex."""
        P = self.vertices
        return ClosedSphericalCurve(np.concatenate([P[:1], P[:0:-1]]))

    def rotated(self, R):
        return ClosedSphericalCurve(self.vertices @ np.asarray(R).T)

    def __repr__(self):
        return f"ClosedSphericalCurve(n={self.n})"


def as_points(c):
    """Vertex array of a curve or anything array-like of shape ``(n, 3)``."""
    if isinstance(c, ClosedSphericalCurve):
        return c.vertices
    P = np.ascontiguousarray(c, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise InvalidCurve(f"expected an (n, 3) array, got shape {P.shape}")
    return P


def edge_lengths(c):
    """Length of edge ``i`` (vertex ``i`` to ``i + 1``), closing edge last."""
    return _kernels.edge_lengths(np.ascontiguousarray(as_points(c)))


def total_length(c):
    return float(edge_lengths(c).sum())


def turning_angles(c):
    """Signed turning angle at each vertex, left turns positive."""
    tau, _, _ = _kernels.turning(np.ascontiguousarray(as_points(c)))
    return tau


def _left_area(P):
    tau, _, _ = _kernels.turning(P)
    return 2 * np.pi - tau.sum()


def enclosed_areas(c, check=True):
    """Areas to the left and right of a simple curve.

    Raises
    ------
    NonSimpleCurve
        If ``check`` is true and the curve self-intersects.
    """
    P = np.ascontiguousarray(as_points(c))
    if check and not _kernels.is_simple(P, SIMPLE_EPS):
        raise NonSimpleCurve("enclosed areas need a simple curve")
    left = float(_left_area(P))
    return AreaPair(left, 4 * np.pi - left)


def is_simple(c, eps=SIMPLE_EPS):
    """True iff no two non-adjacent edges meet and no edge folds back.

    Near-degenerate configurations (triple products within ``eps``) are
    reported as non-simple.
    """
    return bool(_kernels.is_simple(np.ascontiguousarray(as_points(c)), eps))


def resample(c, n):
    """``n`` vertices equally spaced in arclength, starting at the first vertex."""
    if n < 3:
        raise ValueError("resample needs n >= 3")
    Q = _kernels.resample(np.ascontiguousarray(as_points(c)), int(n))
    return ClosedSphericalCurve(Q)


def discrete_curvature(c):
    """Geodesic curvature vector at every vertex, shape ``(n, 3)``.

    The magnitude is the turning angle divided by the mean of the two
    adjacent edge lengths; the direction is the left normal for a left turn.
    The vector does not depend on the orientation of the curve.
    """
    K, _, _ = _kernels.curvature_vectors(np.ascontiguousarray(as_points(c)))
    return K


def left_normals(c):
    _, _, N = _kernels.turning(np.ascontiguousarray(as_points(c)))
    return N


def is_bisector(c, tol):
    return abs(enclosed_areas(c).left - 2 * np.pi) <= tol


def offset_curve(c, s):
    """Move every vertex a geodesic distance ``s`` along its left normal.

    Negative ``s`` moves to the right. No validity check beyond the curve
    constructor is made.
    """
    P = as_points(c)
    N = left_normals(P)
    return ClosedSphericalCurve(exp_map(P, s * N))


def make_bisector(c, tol=1e-10, max_offset=np.pi / 4, max_iter=60):
    """Offset ``c`` uniformly along its normals until it bisects the sphere.

    The offset is found by bisection on the left area. The bracket grows
    geometrically from 0.01 rad up to ``max_offset``.

    Raises
    ------
    RootNotBracketed
        If area 2 pi is not reached within ``|s| <= max_offset``.
    OffsetMakesNonSimple
        If the bracketing offset or the final curve is not simple.
    """
    c = c if isinstance(c, ClosedSphericalCurve) else ClosedSphericalCurve(c)
    P = c.vertices
    area0 = enclosed_areas(c).left
    if abs(area0 - 2 * np.pi) <= tol:
        return c
    N = left_normals(P)

    def residual(s):
        Q = np.ascontiguousarray(exp_map(P, s * N))
        return _left_area(Q) - 2 * np.pi, Q

    # moving left shrinks the left side
    direction = 1.0 if area0 > 2 * np.pi else -1.0
    lo, hi = 0.0, None
    step = 0.01
    while True:
        s = direction * min(step, max_offset)
        f, Q = residual(s)
        if not _kernels.is_simple(Q, SIMPLE_EPS):
            raise OffsetMakesNonSimple(
                f"offset {s:.4g} makes the curve non-simple before reaching area 2 pi"
            )
        if f * (area0 - 2 * np.pi) <= 0:
            hi = s
            break
        lo = s
        if abs(s) >= max_offset:
            raise RootNotBracketed(f"area 2 pi not reached for |s| <= {max_offset}")
        step *= 2
    flo = residual(lo)[0]
    Q = None
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f, Q = residual(mid)
        if abs(f) <= tol:
            break
        if (f > 0) == (flo > 0):
            lo, flo = mid, f
        else:
            hi = mid
    out = ClosedSphericalCurve(Q)
    if not is_simple(out):
        raise OffsetMakesNonSimple("bisecting offset is not simple")
    return out


def sample_points(c, resolution):
    """Vertices plus interior edge points spaced at most ``resolution`` apart."""
    P = as_points(c)
    Q = np.roll(P, -1, axis=0)
    ell = geodesic_distance(P, Q)
    counts = np.maximum(1, np.ceil(ell / resolution).astype(int))
    idx = np.repeat(np.arange(len(P)), counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    f = offsets / counts[idx]
    return slerp(P[idx], Q[idx], f)


def _point_arc_distances(X, A, B):
    """Distance matrix from points ``X`` (k, 3) to minor arcs ``(A, B)`` (m, 3)."""
    m = np.cross(A, B)
    m /= np.linalg.norm(m, axis=1, keepdims=True)
    h = X @ m.T  # (k, m) signed sine of distance to each arc's circle
    proj = X[:, None, :] - h[:, :, None] * m[None, :, :]
    inside = (np.einsum("mj,kmj->km", np.cross(A, m), proj) <= 0) & (
        np.einsum("kmj,mj->km", proj, np.cross(B, m)) >= 0
    )
    # (A x proj) . m = -(A x m) . proj ; (proj x B) . m = proj . (B x m)
    d_plane = np.abs(np.arcsin(np.clip(h, -1.0, 1.0)))
    dA = geodesic_distance(X[:, None, :], A[None, :, :])
    dB = geodesic_distance(X[:, None, :], B[None, :, :])
    near_hemisphere = np.einsum("kmj,mj->km", proj, A + B) > 0
    return np.where(inside & near_hemisphere, d_plane, np.minimum(dA, dB))


def restart_at(c, p):
    """Same polyline with a new first vertex at the point nearest to ``p``.

    The foot point on the nearest edge is inserted as vertex 0 and the
    remaining vertices follow in the original cyclic order. If the foot
    point coincides with a vertex within 1e-12, the vertex order is only
    rotated.
    """
    P = as_points(c)
    Q = np.roll(P, -1, axis=0)
    p = np.asarray(p, dtype=float)
    d = _point_arc_distances(p[None, :], P, Q)[0]
    k = int(np.argmin(d))
    m = normalize(np.cross(P[k], Q[k]))
    foot = normalize(p - np.dot(p, m) * m)
    L = geodesic_distance(P[k], Q[k])
    s = geodesic_distance(P[k], foot)
    if geodesic_distance(foot, Q[k]) > L or s > L:
        # the foot point on the great circle lies outside the arc
        foot = P[k] if geodesic_distance(p, P[k]) <= geodesic_distance(p, Q[k]) else Q[k]
    rest = np.roll(P, -(k + 1), axis=0)
    if geodesic_distance(foot, rest[-1]) < 1e-12:
        return ClosedSphericalCurve(np.roll(rest, 1, axis=0))
    if geodesic_distance(foot, rest[0]) < 1e-12:
        return ClosedSphericalCurve(rest)
    return ClosedSphericalCurve(np.vstack([foot, rest]))


def distance_point_to_curve(p, c):
    """Exact distance from point(s) ``p`` to the polyline ``c``.

    Each edge contributes the distance to its great circle when the foot
    point falls inside the arc, else the distance to the nearer endpoint.
    ``p`` may be a single point (returns a float) or an array of points.
    """
    X = np.asarray(p, dtype=float)
    single = X.ndim == 1
    X = np.ascontiguousarray(np.atleast_2d(X))
    out = _kernels.polyline_distances(X, np.ascontiguousarray(as_points(c)))
    return float(out[0]) if single else out


def curve_in_dilation(a, b, delta):
    """True iff every point of ``a`` lies within ``delta`` of ``b``."""
    if delta <= 0:
        return bool(np.all(distance_point_to_curve(as_points(a), b) <= 0))
    X = sample_points(a, delta / 4)
    return bool(np.all(distance_point_to_curve(X, b) <= delta))


def contains_left(c, q):
    """Whether point(s) ``q`` lie in the region left of ``c``.

    Sums signed solid angles of the fan of triangles ``(-q, p_i, p_{i+1})``.
    A fan from ``-q`` covers every point except ``q`` itself, so the sum
    equals the left area when ``q`` is on the right and the left area minus
    4 pi when ``q`` is on the left. Points on the curve give an arbitrary
    answer.
    """
    X = np.asarray(q, dtype=float)
    single = X.ndim == 1
    X = -np.atleast_2d(X)
    P = as_points(c)
    Q = np.roll(P, -1, axis=0)
    num = X @ np.cross(P, Q).T
    den = 1.0 + X @ P.T + X @ Q.T + np.sum(P * Q, axis=1)[None, :]
    S = 2.0 * np.arctan2(num, den).sum(axis=1)
    area = _left_area(np.ascontiguousarray(P))
    out = np.abs(S - area) > 2 * np.pi
    return bool(out[0]) if single else out


def min_mutual_distance(a, b, resolution=None):
    """Minimum distance between two curves.

    With no crossing, the minimum over two polylines of geodesic arcs is
    attained with at least one endpoint a vertex, so vertex-to-polyline
    distances in both directions suffice.
    """
    from .flow import intersection_points

    try:
        if len(intersection_points(a, b)):
            return 0.0
    except DegenerateIntersection:
        return 0.0
    da = distance_point_to_curve(as_points(a), b)
    db = distance_point_to_curve(as_points(b), a)
    return float(min(da.min(), db.min()))
