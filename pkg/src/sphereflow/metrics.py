"""Frechet and Hausdorff distances between closed spherical curves."""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _kernels
from .curve import (
    ClosedSphericalCurve,
    as_points,
    distance_point_to_curve,
    resample,
    restart_at,
    sample_points,
)
from .sphgeo import geodesic_distance

__all__ = [
    "CouplingResult",
    "aligned_frechet_distance",
    "distance_matrix",
    "frechet_distance",
    "hausdorff_distance",
]


@dataclass(frozen=True)
class CouplingResult:
    """Optimal discrete coupling.

    ``alignment`` lists ``(i, j)`` vertex index pairs into the original
    ``a`` and ``b``, in coupling order; it starts and ends on the same pair.
    """

    distance: float
    alignment: List[Tuple[int, int]]
    orientation_flipped: bool

    def __float__(self):
        return self.distance


def distance_matrix(P, Q):
    return geodesic_distance(P[:, None, :], Q[None, :, :])


def _reverse_index(nb):
    # position r of the reversed sequence -> index in the original
    return np.array([0] + list(range(nb - 1, 0, -1)))


def _backtrack(T):
    i, k = T.shape[0] - 1, T.shape[1] - 1
    path = [(i, k)]
    while i > 0 or k > 0:
        if i == 0:
            k -= 1
        elif k == 0:
            i -= 1
        else:
            moves = ((T[i - 1, k - 1], i - 1, k - 1), (T[i - 1, k], i - 1, k), (T[i, k - 1], i, k - 1))
            _, i, k = min(moves, key=lambda m: m[0])
        path.append((i, k))
    return path[::-1]


def frechet_distance(a, b, orientations=True, max_vertices=None):
    """Discrete Frechet distance between closed curves.

    Minimizes the standard monotone-coupling dynamic program over every
    cyclic shift of ``b``'s starting vertex and, if ``orientations`` is
    true, over both traversal directions of ``b``. The cost is
    ``O(n_a * n_b**2)`` per orientation.

    Parameters
    ----------
    a, b : ClosedSphericalCurve or array_like of shape (n, 3)
    orientations : bool
        Also try ``b`` reversed.
    max_vertices : int, optional
        Subsample each curve by a fixed stride to at most this many vertices
        before coupling (trades accuracy for speed on large curves).

    Returns
    -------
    CouplingResult
    """
    P = np.ascontiguousarray(as_points(a))
    Q = np.ascontiguousarray(as_points(b))
    idx_a = np.arange(len(P))
    idx_b = np.arange(len(Q))
    if max_vertices is not None:
        idx_a = idx_a[:: max(1, -(-len(P) // max_vertices))]
        idx_b = idx_b[:: max(1, -(-len(Q) // max_vertices))]
        P, Q = P[idx_a], Q[idx_b]
    nb = len(Q)
    best = None
    candidates = [False, True] if orientations else [False]
    for flipped in candidates:
        order = _reverse_index(nb) if flipped else np.arange(nb)
        D = np.ascontiguousarray(distance_matrix(P, Q[order]))
        val, shift = _kernels.dfd_closed(D)
        if best is None or val < best[0]:
            best = (val, shift, flipped, D, order)
    val, shift, flipped, D, order = best
    T = _kernels.dfd_table(D, shift)
    na = len(P)
    alignment = [
        (int(idx_a[i % na]), int(idx_b[order[(shift + k) % nb]])) for i, k in _backtrack(T)
    ]
    return CouplingResult(float(val), alignment, bool(flipped))


def aligned_frechet_distance(a, b, n=None):
    """Discrete Frechet distance with ``b`` re-sampled in phase with ``a``.

    The vertices of two uniformly resampled curves are generally offset
    along the curve by up to half an edge, and the discrete distance then
    carries an error of that size. Here ``b`` is restarted at the foot point
    of ``a``'s first vertex and resampled to ``n`` vertices (default: as many
    as ``a``) equally spaced in arclength before coupling. ``b`` keeps its
    point set up to the cut corners of the resampling, which are of order
    ``h**2 * curvature``.
    """
    a = a if isinstance(a, ClosedSphericalCurve) else ClosedSphericalCurve(a)
    b = b if isinstance(b, ClosedSphericalCurve) else ClosedSphericalCurve(b)
    b = resample(restart_at(b, a.vertices[0]), n or a.n)
    return frechet_distance(a, b)


def hausdorff_distance(a, b, resolution=1e-3):
    """Hausdorff distance between the point sets of two polylines.

    Points of each curve are sampled along every edge at spacing at most
    ``resolution``; their distances to the other curve are exact
    point-to-arc distances.
    """
    P = as_points(a)
    Q = as_points(b)
    if P.shape == Q.shape and np.array_equal(P, Q):
        return 0.0
    dab = distance_point_to_curve(sample_points(P, resolution), Q).max()
    dba = distance_point_to_curve(sample_points(Q, resolution), P).max()
    return float(max(dab, dba))
