"""Independent reference implementations used by the tests.

Nothing here imports the package's own algorithms; only plain numpy.
"""

import functools
import itertools

import numpy as np


def angle(p, q):
    # arccos form on purpose: independent of the package's atan2 formula
    return np.arccos(np.clip(np.sum(p * q, axis=-1), -1.0, 1.0))


@functools.lru_cache(maxsize=None)
def monotone_paths(na, nb):
    """Every monotone lattice path from (0, 0) to (na, nb), as two index arrays.

    Steps are (1, 0), (0, 1) and (1, 1). Paths are padded to a common length
    by repeating their last pair, which does not change a max along the path.
    """
    paths = []

    def walk(i, k, acc):
        if (i, k) == (na, nb):
            paths.append(acc)
            return
        if i < na:
            walk(i + 1, k, acc + [(i + 1, k)])
        if k < nb:
            walk(i, k + 1, acc + [(i, k + 1)])
        if i < na and k < nb:
            walk(i + 1, k + 1, acc + [(i + 1, k + 1)])

    walk(0, 0, [(0, 0)])
    width = max(len(p) for p in paths)
    I = np.array([[a for a, _ in p] + [na] * (width - len(p)) for p in paths])
    K = np.array([[b for _, b in p] + [nb] * (width - len(p)) for p in paths])
    return I, K


def brute_force_closed_frechet(A, B, dist=None):
    """Minimum over both orientations of ``B``, every starting vertex of
    ``B`` and every monotone coupling of the closed vertex sequences
    ``A[0..na-1], A[0]`` and ``B[j..], B[j]`` of the largest coupled distance.

    ``dist(X, Y)`` is the ground distance (default: arccos of the dot product).
    """
    dist = dist or angle
    na, nb = len(A), len(B)
    I, K = monotone_paths(na, nb)
    best = np.inf
    for Bo in (B, B[::-1]):
        for j in range(nb):
            Bs = np.roll(Bo, -j, axis=0)
            D = dist(A[:, None, :], Bs[None, :, :])
            vals = D[I % na, K % nb].max(axis=1)
            best = min(best, vals.min())
    return float(best)


def random_small_polygon(rng, n, center=None):
    """Star-shaped polygon with ``n`` vertices around a random center.

    The angular radius stays within [0.2, 0.7], so every edge is shorter
    than a quarter circle.
    """
    c = rng.normal(size=3) if center is None else np.asarray(center, dtype=float)
    c = c / np.linalg.norm(c)
    u = np.cross(c, [1.0, 0.0, 0.0] if abs(c[0]) < 0.9 else [0.0, 1.0, 0.0])
    u /= np.linalg.norm(u)
    w = np.cross(c, u)
    phi = 2 * np.pi * (np.arange(n) + rng.uniform(-0.3, 0.3, n)) / n
    rad = rng.uniform(0.2, 0.7, n)
    d = np.cos(phi)[:, None] * u + np.sin(phi)[:, None] * w
    return np.cos(rad)[:, None] * c + np.sin(rad)[:, None] * d


def rotation(axis, angle_):
    """Rodrigues rotation matrix, written out independently."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    Kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle_) * Kx + (1 - np.cos(angle_)) * Kx @ Kx


def sign_changes(values):
    """Number of cyclic sign changes of a sampled periodic function."""
    s = np.sign(values)
    return int(np.sum(s != np.roll(s, 1)))


def all_pairs(n):
    return itertools.combinations(range(n), 2)


def arcs_cross(a, b, c, d):
    """Whether minor arcs ab and cd share a point, by parametric search.

    The arc ab is sampled finely and the signed distance of the samples to
    the plane of cd checked for a sign change inside cd.
    """
    t = np.linspace(0.0, 1.0, 4001)[:, None]
    X = (1 - t) * a + t * b
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    n = np.cross(c, d)
    h = X @ n
    idx = np.nonzero(np.sign(h[:-1]) != np.sign(h[1:]))[0]
    for k in idx:
        x = X[k] / np.linalg.norm(X[k])
        # inside the cone spanned by c and d
        if np.dot(np.cross(c, x), n) >= 0 and np.dot(np.cross(x, d), n) >= 0:
            return True
    return False


def random_smooth_curve(rng, n):
    """Latitude circle at a random colatitude with random modal wiggles,
    rotated to a random position. Returns vertices (n, 3)."""
    theta = rng.uniform(0.6, np.pi / 2)
    s = 2 * np.pi * np.arange(n) / n
    col = theta + sum(rng.uniform(-0.08, 0.08) * np.cos(m * s + rng.uniform(0, 2 * np.pi)) for m in (2, 3, 4))
    P = np.stack([np.sin(col) * np.cos(s), np.sin(col) * np.sin(s), np.cos(col)], axis=1)
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return P @ rotation(q[:3], 2 * np.arccos(abs(q[3]))).T
