"""Compiled inner loops: turning angles, resampling, the flow step, the
simplicity test and the closed-curve Frechet dynamic program.

All kernels take C-contiguous ``(n, 3)`` float64 arrays of unit vectors with
an implicit closing edge from the last vertex to the first. Inner loops are
written with scalar arithmetic to avoid temporary arrays.
"""

import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi


@njit(cache=True, inline="always")
def _dist3(px, py, pz, qx, qy, qz):
    cx = py * qz - pz * qy
    cy = pz * qx - px * qz
    cz = px * qy - py * qx
    d = px * qx + py * qy + pz * qz
    if d > 1.0:
        d = 1.0
    elif d < -1.0:
        d = -1.0
    return np.arctan2(np.sqrt(cx * cx + cy * cy + cz * cz), d)


@njit(cache=True)
def edge_lengths(P):
    n = P.shape[0]
    ell = np.empty(n)
    for i in range(n):
        j = (i + 1) % n
        ell[i] = _dist3(P[i, 0], P[i, 1], P[i, 2], P[j, 0], P[j, 1], P[j, 2])
    return ell


@njit(cache=True)
def turning(P):
    """Signed turning angles, edge lengths and unit left normals.

    ``ell[i]`` is the length of the edge from vertex ``i`` to ``i + 1``.
    The left normal at a vertex is ``p x T`` with ``T`` the bisector of the
    incoming and outgoing unit tangents.
    """
    n = P.shape[0]
    tau = np.empty(n)
    ell = edge_lengths(P)
    N = np.empty((n, 3))
    for i in range(n):
        px, py, pz = P[i, 0], P[i, 1], P[i, 2]
        a = (i - 1) % n
        b = (i + 1) % n
        ax, ay, az = P[a, 0], P[a, 1], P[a, 2]
        bx, by, bz = P[b, 0], P[b, 1], P[b, 2]
        db = px * bx + py * by + pz * bz
        ox, oy, oz = bx - db * px, by - db * py, bz - db * pz
        on = np.sqrt(ox * ox + oy * oy + oz * oz)
        ox, oy, oz = ox / on, oy / on, oz / on
        da = px * ax + py * ay + pz * az
        ix, iy, iz = da * px - ax, da * py - ay, da * pz - az
        inn = np.sqrt(ix * ix + iy * iy + iz * iz)
        ix, iy, iz = ix / inn, iy / inn, iz / inn
        # (t_in x t_out) . p
        cx = iy * oz - iz * oy
        cy = iz * ox - ix * oz
        cz = ix * oy - iy * ox
        tau[i] = np.arctan2(px * cx + py * cy + pz * cz, ix * ox + iy * oy + iz * oz)
        tx, ty, tz = ix + ox, iy + oy, iz + oz
        tn = np.sqrt(tx * tx + ty * ty + tz * tz)
        if tn < 1e-14:
            tx, ty, tz = ix, iy, iz
        nx = py * tz - pz * ty
        ny = pz * tx - px * tz
        nz = px * ty - py * tx
        nn = np.sqrt(nx * nx + ny * ny + nz * nz)
        N[i, 0] = nx / nn
        N[i, 1] = ny / nn
        N[i, 2] = nz / nn
    return tau, ell, N


@njit(cache=True)
def curvature_vectors(P):
    n = P.shape[0]
    tau, ell, N = turning(P)
    K = np.empty((n, 3))
    for i in range(n):
        lbar = 0.5 * (ell[(i - 1) % n] + ell[i])
        k = tau[i] / lbar
        K[i, 0] = k * N[i, 0]
        K[i, 1] = k * N[i, 1]
        K[i, 2] = k * N[i, 2]
    return K, tau, ell


@njit(cache=True)
def _place(P, cum, ell, pos, Q):
    # points at the sorted arclength positions ``pos`` along the polyline
    n = P.shape[0]
    k = 0
    for j in range(pos.shape[0]):
        s = pos[j]
        while k < n - 1 and cum[k + 1] <= s:
            k += 1
        theta = ell[k]
        f = (s - cum[k]) / theta if theta > 0 else 0.0
        if f > 1.0:
            f = 1.0
        elif f < 0.0:
            f = 0.0
        k2 = (k + 1) % n
        st = np.sin(theta)
        if st < 1e-300:
            wa, wb = 1.0 - f, f
        else:
            wa, wb = np.sin((1.0 - f) * theta) / st, np.sin(f * theta) / st
        x = wa * P[k, 0] + wb * P[k2, 0]
        y = wa * P[k, 1] + wb * P[k2, 1]
        z = wa * P[k, 2] + wb * P[k2, 2]
        r = np.sqrt(x * x + y * y + z * z)
        Q[j, 0] = x / r
        Q[j, 1] = y / r
        Q[j, 2] = z / r


@njit(cache=True)
def resample(P, m, tol=1e-14, max_iter=20):
    """``m`` points on the polyline ``P`` forming an equilateral polygon.

    The first point sits on ``P[0]``. Points start equally spaced in
    arclength along ``P``; since the new edges cut the corners of ``P``,
    their positions are then corrected until all new edge lengths agree
    within ``tol``. This makes resampling idempotent.
    """
    n = P.shape[0]
    ell = edge_lengths(P)
    cum = np.empty(n + 1)
    cum[0] = 0.0
    for i in range(n):
        cum[i + 1] = cum[i] + ell[i]
    L = cum[n]
    pos = np.empty(m)
    for j in range(m):
        pos[j] = j * L / m
    Q = np.empty((m, 3))
    e = np.empty(m)
    for _ in range(max_iter):
        _place(P, cum, ell, pos, Q)
        mean = 0.0
        for j in range(m):
            j2 = (j + 1) % m
            e[j] = _dist3(Q[j, 0], Q[j, 1], Q[j, 2], Q[j2, 0], Q[j2, 1], Q[j2, 2])
            mean += e[j]
        mean /= m
        worst = 0.0
        for j in range(m):
            d = abs(e[j] - mean)
            if d > worst:
                worst = d
        if worst <= tol:
            break
        # shift each point by the accumulated excess of the edges before it
        acc = 0.0
        for j in range(1, m):
            acc += mean - e[j - 1]
            pos[j] += acc
        ok = True
        for j in range(1, m):
            if pos[j] <= pos[j - 1] or pos[j] >= L:
                ok = False
        if not ok:
            # corrections broke the ordering; fall back to plain arclength spacing
            for j in range(m):
                pos[j] = j * L / m
            _place(P, cum, ell, pos, Q)
            break
    return Q


@njit(cache=True)
def move(P, K, dt):
    """Exponential map of ``dt * K[i]`` at every vertex."""
    n = P.shape[0]
    Q = np.empty((n, 3))
    for i in range(n):
        vx, vy, vz = dt * K[i, 0], dt * K[i, 1], dt * K[i, 2]
        th = np.sqrt(vx * vx + vy * vy + vz * vz)
        if th > 0.0:
            c = np.cos(th)
            s = np.sin(th) / th
            x, y, z = c * P[i, 0] + s * vx, c * P[i, 1] + s * vy, c * P[i, 2] + s * vz
        else:
            x, y, z = P[i, 0], P[i, 1], P[i, 2]
        r = np.sqrt(x * x + y * y + z * z)
        Q[i, 0] = x / r
        Q[i, 1] = y / r
        Q[i, 2] = z / r
    return Q


@njit(cache=True)
def advance(S, t, t_end, nsteps, cfl, singular_area, max_curvature):
    """Advance a stack of curves ``S`` of shape ``(k, m, 3)`` on one time grid.

    Runs up to ``nsteps`` explicit Euler steps, stopping early at ``t_end``
    or when a curve turns singular (checked before each step).

    Returns ``(S, t, steps_done, singular_index)``; ``singular_index`` is -1
    when no curve turned singular.
    """
    k, m, _ = S.shape
    S = S.copy()
    Ks = np.empty((k, m, 3))
    done = 0
    while done < nsteps and t < t_end:
        dt = np.inf
        for c in range(k):
            K, tau, ell = curvature_vectors(S[c])
            area = TWO_PI - tau.sum()
            side = min(area, FOUR_PI - area)
            kmax = 0.0
            for i in range(m):
                kk = abs(tau[i]) / (0.5 * (ell[(i - 1) % m] + ell[i]))
                if kk > kmax:
                    kmax = kk
            if side < singular_area or kmax > max_curvature:
                return S, t, done, c
            h = ell.min()
            dt = min(dt, cfl * h * h)
            Ks[c] = K
        if dt >= t_end - t:
            dt = t_end - t
            t_next = t_end
        else:
            t_next = t + dt
        for c in range(k):
            S[c] = resample(move(S[c], Ks[c], dt), m)
        t = t_next
        done += 1
    return S, t, done, -1


@njit(cache=True)
def polyline_distances(X, P):
    """Distance from every point of ``X`` to the closed polyline ``P``."""
    n = P.shape[0]
    k = X.shape[0]
    M = edge_normals(P)
    for i in range(n):
        r = np.sqrt(M[i, 0] ** 2 + M[i, 1] ** 2 + M[i, 2] ** 2)
        M[i, 0] /= r
        M[i, 1] /= r
        M[i, 2] /= r
    out = np.empty(k)
    for q in range(k):
        x, y, z = X[q, 0], X[q, 1], X[q, 2]
        best = np.inf
        for i in range(n):
            i2 = (i + 1) % n
            mx, my, mz = M[i, 0], M[i, 1], M[i, 2]
            h = x * mx + y * my + z * mz
            px, py, pz = x - h * mx, y - h * my, z - h * mz
            ax, ay, az = P[i, 0], P[i, 1], P[i, 2]
            bx, by, bz = P[i2, 0], P[i2, 1], P[i2, 2]
            s1 = (ay * pz - az * py) * mx + (az * px - ax * pz) * my + (ax * py - ay * px) * mz
            s2 = (py * bz - pz * by) * mx + (pz * bx - px * bz) * my + (px * by - py * bx) * mz
            near = px * (ax + bx) + py * (ay + by) + pz * (az + bz)
            if s1 >= 0.0 and s2 >= 0.0 and near > 0.0:
                if h > 1.0:
                    h = 1.0
                elif h < -1.0:
                    h = -1.0
                d = abs(np.arcsin(h))
            else:
                d = min(_dist3(x, y, z, ax, ay, az), _dist3(x, y, z, bx, by, bz))
            if d < best:
                best = d
        out[q] = best
    return out


@njit(cache=True)
def edge_normals(P):
    n = P.shape[0]
    E = np.empty((n, 3))
    for i in range(n):
        j = (i + 1) % n
        E[i, 0] = P[i, 1] * P[j, 2] - P[i, 2] * P[j, 1]
        E[i, 1] = P[i, 2] * P[j, 0] - P[i, 0] * P[j, 2]
        E[i, 2] = P[i, 0] * P[j, 1] - P[i, 1] * P[j, 0]
    return E


@njit(cache=True, inline="always")
def _dot3(P, i, E, j):
    return P[i, 0] * E[j, 0] + P[i, 1] * E[j, 1] + P[i, 2] * E[j, 2]


@njit(cache=True)
def _in_arc(Q, q, P, a, b, E, e, eps):
    # Q[q] assumed on the great circle of edge e = (P[a], P[b]) with normal E[e]
    return _xyz_in_arc(Q[q, 0], Q[q, 1], Q[q, 2], P, a, b, E, e, eps)


@njit(cache=True)
def _xyz_in_arc(qx, qy, qz, P, a, b, E, e, eps):
    # (A x q) . n >= 0 and (q x B) . n >= 0, on the near side of the chord
    ax, ay, az = P[a, 0], P[a, 1], P[a, 2]
    bx, by, bz = P[b, 0], P[b, 1], P[b, 2]
    nx, ny, nz = E[e, 0], E[e, 1], E[e, 2]
    s1 = (ay * qz - az * qy) * nx + (az * qx - ax * qz) * ny + (ax * qy - ay * qx) * nz
    s2 = (qy * bz - qz * by) * nx + (qz * bx - qx * bz) * ny + (qx * by - qy * bx) * nz
    h = qx * (ax + bx) + qy * (ay + by) + qz * (az + bz)
    return s1 >= -eps and s2 >= -eps and h > 0.0


@njit(cache=True)
def arcs_intersect(P, E, i, Q, F, j, eps):
    """Conservative test whether edge ``i`` of ``P`` meets edge ``j`` of ``Q``.

    ``E`` and ``F`` are the unnormalized edge normals. Triple products within
    ``eps`` of zero are treated as touching.
    """
    n = P.shape[0]
    m = Q.shape[0]
    i2 = (i + 1) % n
    j2 = (j + 1) % m
    sc = _dot3(Q, j, E, i)
    sd = _dot3(Q, j2, E, i)
    if (sc > eps and sd > eps) or (sc < -eps and sd < -eps):
        return False
    sa = _dot3(P, i, F, j)
    sb = _dot3(P, i2, F, j)
    if (sa > eps and sb > eps) or (sa < -eps and sb < -eps):
        return False
    xx = E[i, 1] * F[j, 2] - E[i, 2] * F[j, 1]
    xy = E[i, 2] * F[j, 0] - E[i, 0] * F[j, 2]
    xz = E[i, 0] * F[j, 1] - E[i, 1] * F[j, 0]
    if np.sqrt(xx * xx + xy * xy + xz * xz) < eps:
        return (
            _in_arc(Q, j, P, i, i2, E, i, eps)
            or _in_arc(Q, j2, P, i, i2, E, i, eps)
            or _in_arc(P, i, Q, j, j2, F, j, eps)
        )
    h1 = xx * (P[i, 0] + P[i2, 0]) + xy * (P[i, 1] + P[i2, 1]) + xz * (P[i, 2] + P[i2, 2])
    h2 = xx * (Q[j, 0] + Q[j2, 0]) + xy * (Q[j, 1] + Q[j2, 1]) + xz * (Q[j, 2] + Q[j2, 2])
    if h1 < 0.0:
        h2 = -h2
    if h2 <= -eps:
        return False
    strict = (sc > eps or sc < -eps) and (sd > eps or sd < -eps)
    strict = strict and (sa > eps or sa < -eps) and (sb > eps or sb < -eps)
    if strict:
        return True
    # a sign test was inconclusive (nearly coplanar edges): locate the
    # crossing point of the two great circles and test it against both arcs
    r = np.sqrt(xx * xx + xy * xy + xz * xz)
    sgn = 1.0 if h1 >= 0.0 else -1.0
    xx, xy, xz = sgn * xx / r, sgn * xy / r, sgn * xz / r
    return _xyz_in_arc(xx, xy, xz, P, i, i2, E, i, eps) and _xyz_in_arc(
        xx, xy, xz, Q, j, j2, F, j, eps
    )


@njit(cache=True)
def is_simple(P, eps):
    n = P.shape[0]
    tau, _, _ = turning(P)
    for i in range(n):
        if abs(tau[i]) >= np.pi - 1e-9:
            return False
    E = edge_normals(P)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if arcs_intersect(P, E, i, P, E, j, eps):
                return False
    return True


@njit(cache=True)
def _dfd_shift(D, j, bound):
    """Closed discrete Frechet value with ``a[0]`` coupled to ``b[j]``.

    Returns ``bound`` as soon as a whole DP row reaches it.
    """
    na, nb = D.shape
    prev = np.empty(nb + 1)
    cur = np.empty(nb + 1)
    for i in range(na + 1):
        ii = i % na
        rowmin = np.inf
        for kk in range(nb + 1):
            d = D[ii, (j + kk) % nb]
            if i == 0 and kk == 0:
                v = d
            elif i == 0:
                v = max(cur[kk - 1], d)
            elif kk == 0:
                v = max(prev[0], d)
            else:
                v = max(min(prev[kk], prev[kk - 1], cur[kk - 1]), d)
            cur[kk] = v
            if v < rowmin:
                rowmin = v
        if rowmin >= bound:
            return bound
        prev, cur = cur, prev
    return prev[nb]


@njit(cache=True)
def dfd_closed(D):
    """Minimum over cyclic shifts of ``b`` of the closed discrete Frechet value."""
    na, nb = D.shape
    best = np.inf
    best_j = 0
    for j in range(nb):
        if D[0, j] >= best:
            continue
        v = _dfd_shift(D, j, best)
        if v < best:
            best = v
            best_j = j
    return best, best_j


@njit(cache=True)
def dfd_table(D, j):
    na, nb = D.shape
    T = np.empty((na + 1, nb + 1))
    for i in range(na + 1):
        for kk in range(nb + 1):
            d = D[i % na, (j + kk) % nb]
            if i == 0 and kk == 0:
                T[i, kk] = d
            elif i == 0:
                T[i, kk] = max(T[i, kk - 1], d)
            elif kk == 0:
                T[i, kk] = max(T[i - 1, 0], d)
            else:
                T[i, kk] = max(min(T[i - 1, kk], T[i - 1, kk - 1], T[i, kk - 1]), d)
    return T
