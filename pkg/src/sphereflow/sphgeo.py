"""Primitives of spherical geometry on the unit 2-sphere.

Points are unit vectors in R^3 stored as numpy arrays with a trailing axis of
length 3. Every function broadcasts over leading axes. Angles and distances
are in radians.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import AntipodalPair

__all__ = [
    "GreatCircle",
    "normalize",
    "geodesic_distance",
    "exp_map",
    "log_map",
    "slerp",
    "distance_to_great_circle",
    "random_points",
    "rotation_matrix",
]

UNIT_TOL = 1e-9


def normalize(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def geodesic_distance(p, q):
    """Great-circle distance between points ``p`` and ``q``.

    Evaluated as ``atan2(|p x q|, p . q)``, which equals the arccos of the
    clamped dot product but keeps full precision near 0 and pi.

    Examples
    --------
    >>> float(geodesic_distance([1, 0, 0], [0, 1, 0])) == np.pi / 2
    True
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    cross = np.linalg.norm(np.cross(p, q), axis=-1)
    dot = np.clip(np.sum(p * q, axis=-1), -1.0, 1.0)
    return np.arctan2(cross, dot)


def exp_map(p, v):
    """Move from ``p`` along the tangent vector ``v`` by geodesic distance ``|v|``."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(theta > 0, v / np.where(theta > 0, theta, 1.0), 0.0)
    out = np.cos(theta) * p + np.sin(theta) * direction
    return normalize(out)


def log_map(p, q, tol=UNIT_TOL):
    """Tangent vector at ``p`` pointing to ``q`` with length ``d(p, q)``.

    Raises
    ------
    AntipodalPair
        If ``p`` and ``q`` are antipodal within ``tol``.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(np.linalg.norm(p + q, axis=-1) < tol):
        raise AntipodalPair("log_map is undefined for antipodal points")
    dot = np.sum(p * q, axis=-1, keepdims=True)
    w = q - dot * p
    wn = np.linalg.norm(w, axis=-1, keepdims=True)
    theta = geodesic_distance(p, q)[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(wn > 0, w * (theta / np.where(wn > 0, wn, 1.0)), 0.0)
    return out


def slerp(p, q, f):
    """Point at fraction ``f`` of the minor arc from ``p`` to ``q``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    f = np.asarray(f, dtype=float)[..., None]
    theta = geodesic_distance(p, q)[..., None]
    s = np.sin(theta)
    with np.errstate(invalid="ignore", divide="ignore"):
        a = np.where(s > 1e-300, np.sin((1 - f) * theta) / np.where(s > 0, s, 1.0), 1 - f)
        b = np.where(s > 1e-300, np.sin(f * theta) / np.where(s > 0, s, 1.0), f)
    return normalize(a * p + b * q)


@dataclass(frozen=True)
class GreatCircle:
    """Great circle ``{p : p . normal = 0}``; ``-normal`` is the reversed circle."""

    normal: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(3)
        norm = np.linalg.norm(n)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("great-circle normal must be a nonzero vector")
        n = n / norm
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)

    def points(self, n, phase=0.0):
        """``n`` equally spaced points, counterclockwise about ``normal``."""
        u, w = _tangent_frame(self.normal)
        s = phase + 2 * np.pi * np.arange(n) / n
        return np.cos(s)[:, None] * u + np.sin(s)[:, None] * w


def _tangent_frame(n):
    # orthonormal (u, w) with u x w = n
    a = np.eye(3)[np.argmin(np.abs(n))]
    u = normalize(np.cross(a, n))
    w = np.cross(n, u)
    return u, w


def distance_to_great_circle(p, g):
    """Distance from ``p`` to the great circle ``g``, in ``[0, pi/2]``."""
    normal = g.normal if isinstance(g, GreatCircle) else normalize(g)
    h = np.clip(np.asarray(p, dtype=float) @ normal, -1.0, 1.0)
    return np.abs(np.arcsin(h))


def random_points(rng, size):
    """Uniform random points on the sphere."""
    v = rng.standard_normal((size, 3))
    return normalize(v)


def rotation_matrix(axis, angle):
    """Rodrigues rotation about ``axis`` by ``angle``."""
    k = normalize(axis)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)
