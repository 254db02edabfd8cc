"""Measurements on curves and flows: great-circle fit, Gage residual,
r-multiplicity, intersection counts and the Gauss-Bonnet defect."""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .curve import as_points, contains_left, discrete_curvature, edge_lengths, left_normals, turning_angles
from .exceptions import BandDegenerate, DegenerateFit
from .flow import intersection_points
from .sphgeo import GreatCircle, distance_to_great_circle, normalize

__all__ = [
    "MultiplicityReport",
    "fit_great_circle",
    "gage_residual",
    "fitted_colatitude",
    "r_multiplicity",
    "intersection_count",
    "gauss_bonnet_defect",
]


@dataclass(frozen=True)
class MultiplicityReport:
    """Counted components, each as (first edge index, last edge index)."""

    value: int
    components: List[Tuple[int, int]] = field(default_factory=list)


def _lexicographic_sign(v):
    for x in v:
        if abs(x) > 1e-12:
            return 1.0 if x > 0 else -1.0
    return 1.0


def fit_great_circle(c):
    """Least-squares great circle through the curve.

    The normal is the eigenvector for the smallest eigenvalue of the
    edge-length weighted scatter matrix ``sum w_i (p_i - m)(p_i - m)^T``
    about the weighted mean ``m``, so small circles recover their own plane.
    For curves near a great circle ``m`` is close to 0. Its sign
    is chosen so that the normal lies on the left of the curve; when both or
    neither pole does, the first nonzero component is made positive.

    Raises
    ------
    DegenerateFit
        If the two smallest eigenvalues differ by less than 1e-12.
    """
    P = as_points(c)
    ell = edge_lengths(P)
    w = 0.5 * (ell + np.roll(ell, 1))
    X = P - (w @ P) / w.sum()
    M = (X * w[:, None]).T @ X
    vals, vecs = np.linalg.eigh(M)
    if vals[1] - vals[0] < 1e-12:
        raise DegenerateFit("curve has no preferred great-circle plane")
    n = vecs[:, 0]
    left_pos, left_neg = contains_left(P, np.stack([n, -n]))
    if left_pos != left_neg:
        sign = 1.0 if left_pos else -1.0
    else:
        sign = _lexicographic_sign(n)
    return GreatCircle(sign * n)


def gage_residual(c):
    """Largest vertex distance to the fitted great circle."""
    g = fit_great_circle(c)
    return float(distance_to_great_circle(as_points(c), g).max())


def fitted_colatitude(c):
    """Angle from the fitted pole to the curve's length-weighted mean height.

    For a latitude circle this is its colatitude measured from the pole on
    its left.
    """
    P = as_points(c)
    g = fit_great_circle(P)
    ell = edge_lengths(P)
    w = 0.5 * (ell + np.roll(ell, 1))
    h = np.sum(w * (P @ g.normal)) / w.sum()
    return float(np.arccos(np.clip(h, -1.0, 1.0)))


def _edge_pieces(u, v, normal, levels):
    """Split the arc u->v at parameters where the height ``p . normal`` hits
    one of ``+-levels`` or an extremum. Returns the sorted arc parameters
    and the coefficients of ``height(s) = a cos s + b sin s``.
    """
    L = np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v))
    w = normalize(v - np.dot(u, v) * u)
    a = float(np.dot(u, normal))
    b = float(np.dot(w, normal))
    R = np.hypot(a, b)
    phi = np.arctan2(b, a)
    cuts = [phi, phi + np.pi]
    for lev in levels:
        for c in (lev, -lev):
            if R > 0 and abs(c) <= R:
                d = np.arccos(c / R)
                cuts += [phi + d, phi - d]
    s = np.mod(np.array(cuts), 2 * np.pi)
    s = np.unique(s[(s > 1e-15) & (s < L - 1e-15)])
    return np.concatenate([[0.0], s, [L]]), a, b


def r_multiplicity(c, g, r, degeneracy=1e-12):
    """Number of components of the curve inside the open ``2r`` band around
    ``g`` that reach the closed ``r`` band.

    Band crossings are located exactly along each geodesic edge.

    Raises
    ------
    ValueError
        Unless ``0 < r < pi/4``.
    BandDegenerate
        If a vertex lies on the ``2r`` band boundary within ``degeneracy``.
    """
    if not 0 < r < np.pi / 4:
        raise ValueError("r must lie in (0, pi/4)")
    P = as_points(c)
    normal = g.normal if isinstance(g, GreatCircle) else normalize(g)
    outer, inner = np.sin(2 * r), np.sin(r)
    heights = P @ normal
    if np.any(np.abs(np.abs(heights) - outer) < degeneracy):
        raise BandDegenerate("a vertex lies on the band boundary; perturb r")
    n = len(P)
    in_band = []
    reaches = []
    edge_of = []
    for i in range(n):
        s, a, b = _edge_pieces(P[i], P[(i + 1) % n], normal, (outer, inner, 0.0))
        mids = s[:-1] + 0.5 * np.diff(s)
        hm = a * np.cos(mids) + b * np.sin(mids)
        absh = np.abs(a * np.cos(s) + b * np.sin(s))
        for k in range(len(mids)):
            in_band.append(abs(hm[k]) < outer)
            reaches.append(min(absh[k], absh[k + 1]) <= inner)
            edge_of.append(i)
    in_band = np.array(in_band)
    reaches = np.array(reaches)
    if not in_band.any():
        return MultiplicityReport(0, [])
    if in_band.all():
        comps = [(0, n - 1)] if reaches.any() else []
        return MultiplicityReport(len(comps), comps)
    # rotate so that the piece sequence starts just after an out-of-band piece
    start = int(np.nonzero(~in_band)[0][0]) + 1
    order = np.roll(np.arange(len(in_band)), -start)
    comps = []
    run = []
    for k in list(order) + [None]:
        if k is not None and in_band[k]:
            run.append(k)
            continue
        if run and reaches[run].any():
            comps.append((edge_of[run[0]], edge_of[run[-1]]))
        run = []
    return MultiplicityReport(len(comps), comps)


def intersection_count(a, b, return_degenerate=False):
    """Number of crossing points of two curves.

    With ``return_degenerate`` the pair ``(count, flagged)`` is returned,
    where ``flagged`` marks near-tangential or vertex-on-curve contacts.
    """
    pts, degenerate = intersection_points(a, b, return_degenerate=True)
    return (len(pts), degenerate) if return_degenerate else len(pts)


def gauss_bonnet_defect(c, area=None):
    """Mismatch between integrated curvature and ``2 pi - area``.

    The integrated curvature is rebuilt from the curvature vectors as
    ``sum |k_i| sign_i lbar_i``. ``area`` defaults to the curve's own left
    area, in which case the defect only measures roundoff; pass the area of
    the smooth curve being approximated to measure discretization error.
    """
    P = as_points(c)
    K = discrete_curvature(P)
    N = left_normals(P)
    ell = edge_lengths(P)
    lbar = 0.5 * (ell + np.roll(ell, 1))
    sign = np.sign(np.sum(K * N, axis=1))
    total = float(np.sum(np.linalg.norm(K, axis=1) * sign * lbar))
    if area is None:
        area = 2 * np.pi - float(turning_angles(P).sum())
    return abs(total - (2 * np.pi - area))
