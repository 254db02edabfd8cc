"""Curve shortening flow on the sphere.

Explicit Euler steps move every vertex along its discrete geodesic curvature
vector through the exponential map; after every step the polygon is
resampled to a fixed number of vertices equally spaced in arclength. The
step size obeys ``dt <= cfl * h_min**2``.

Several curves can be advanced on one shared time grid, which is what the
pairwise experiments (intersection counting, avoidance) need.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .curve import (
    SIMPLE_EPS,
    ClosedSphericalCurve,
    as_points,
    discrete_curvature,
    enclosed_areas,
    is_simple,
    total_length,
)
from .exceptions import DegenerateIntersection, NonSimpleAfterStep, NonSimpleCurve
from .sphgeo import geodesic_distance

__all__ = [
    "FlowParams",
    "DiagnosticsRecord",
    "TerminalStatus",
    "Trajectory",
    "IntersectionTrack",
    "stable_dt",
    "flow_step",
    "evolve",
    "evolve_pair",
    "evolve_many",
    "intersection_points",
    "track_intersections",
]

REACHED_END = "ReachedEnd"
SINGULAR = "Singular"
NON_SIMPLE = "NonSimple"
# the other curve of a jointly evolved group stopped first
PARTNER_STOPPED = "PartnerStopped"


@dataclass(frozen=True)
class FlowParams:
    """Discretization and stopping parameters of the flow."""

    t_end: float = 1.0
    cfl_factor: float = 0.25
    resample_n: int = 256
    record_every: int = 50
    singular_area: float = 1e-3
    max_curvature: float = 1e3

    def __post_init__(self):
        if not 0 < self.cfl_factor <= 0.5:
            raise ValueError("cfl_factor must lie in (0, 0.5]")
        if self.resample_n < 32:
            raise ValueError("resample_n must be at least 32")
        if not self.singular_area > 0:
            raise ValueError("singular_area must be positive")
        if not self.max_curvature > 0:
            raise ValueError("max_curvature must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")
        if not (self.t_end >= 0 and math.isfinite(self.t_end)):
            raise ValueError("t_end must be finite and non-negative")


@dataclass(frozen=True)
class DiagnosticsRecord:
    length: float
    area_left: float
    max_abs_curvature: float
    gage_residual: float


@dataclass(frozen=True)
class TerminalStatus:
    kind: str
    time: Optional[float] = None

    def __str__(self):
        return self.kind if self.time is None else f"{self.kind}({self.time!r})"


@dataclass
class Trajectory:
    """Recorded evolution of one curve."""

    times: List[float] = field(default_factory=list)
    curves: List[ClosedSphericalCurve] = field(default_factory=list)
    diagnostics: List[DiagnosticsRecord] = field(default_factory=list)
    terminal_status: TerminalStatus = TerminalStatus(REACHED_END)

    @property
    def final(self):
        return self.curves[-1]

    def __len__(self):
        return len(self.times)


@dataclass
class IntersectionTrack:
    times: List[float] = field(default_factory=list)
    points: List[np.ndarray] = field(default_factory=list)
    status: TerminalStatus = TerminalStatus("Alive")


def stable_dt(c, cfl_factor=0.25):
    """Largest explicit step ``cfl_factor * h_min**2`` for the curve."""
    ell = _kernels.edge_lengths(np.ascontiguousarray(as_points(c)))
    return float(cfl_factor * ell.min() ** 2)


def flow_step(c, dt, resample_n=None, cfl_factor=None):
    """One explicit Euler step of the flow followed by uniform resampling.

    Parameters
    ----------
    c : ClosedSphericalCurve
    dt : float
        Time step. If ``cfl_factor`` is given, ``dt`` must not exceed
        ``stable_dt(c, cfl_factor)``.
    resample_n : int, optional
        Vertex count after resampling; defaults to the input count.

    Raises
    ------
    NonSimpleAfterStep
        If the moved polygon self-intersects.
    """
    P = np.ascontiguousarray(as_points(c))
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if cfl_factor is not None and dt > stable_dt(P, cfl_factor) * (1 + 1e-12):
        raise ValueError("dt exceeds the stable step for this curve")
    m = len(P) if resample_n is None else int(resample_n)
    K = discrete_curvature(P)
    Q = _kernels.move(P, K, float(dt))
    if not _kernels.is_simple(Q, SIMPLE_EPS):
        raise NonSimpleAfterStep("polygon self-intersects after the step")
    return ClosedSphericalCurve(_kernels.resample(Q, m))


def _diagnostics(c):
    from .analysis import gage_residual
    from .exceptions import DegenerateFit

    P = as_points(c)
    K = discrete_curvature(P)
    try:
        residual = gage_residual(c)
    except DegenerateFit:
        residual = float("nan")
    return DiagnosticsRecord(
        length=total_length(P),
        area_left=enclosed_areas(P, check=False).left,
        max_abs_curvature=float(np.linalg.norm(K, axis=1).max()),
        gage_residual=float(residual),
    )


def evolve_many(curves, params):
    """Evolve several curves on a shared time grid.

    All curves take the same step, the minimum of their stable steps. The
    run stops for every curve as soon as one of them turns singular or
    non-simple; the others get a ``PartnerStopped`` status.

    Returns
    -------
    list of Trajectory
    """
    curves = [c if isinstance(c, ClosedSphericalCurve) else ClosedSphericalCurve(c) for c in curves]
    for c in curves:
        if not is_simple(c):
            raise NonSimpleCurve("flow needs simple initial curves")
    m = params.resample_n
    trajs = [Trajectory() for _ in curves]
    for tr, c in zip(trajs, curves):
        tr.times.append(0.0)
        tr.curves.append(c)
        tr.diagnostics.append(_diagnostics(c))
    S = np.stack([_kernels.resample(np.ascontiguousarray(c.vertices), m) for c in curves])
    t = 0.0
    statuses = None
    while statuses is None:
        S, t, done, sing = _kernels.advance(
            S,
            t,
            params.t_end,
            params.record_every,
            params.cfl_factor,
            params.singular_area,
            params.max_curvature,
        )
        snapshot = [ClosedSphericalCurve(S[k]) for k in range(len(curves))]
        if sing >= 0:
            statuses = [TerminalStatus(PARTNER_STOPPED, t)] * len(curves)
            statuses[sing] = TerminalStatus(SINGULAR, t)
            if done == 0 or not all(is_simple(c) for c in snapshot):
                break
        else:
            bad = [k for k, c in enumerate(snapshot) if not is_simple(c)]
            if bad:
                statuses = [TerminalStatus(PARTNER_STOPPED, t)] * len(curves)
                for k in bad:
                    statuses[k] = TerminalStatus(NON_SIMPLE, t)
                break
        if t > trajs[0].times[-1]:
            for tr, c in zip(trajs, snapshot):
                tr.times.append(t)
                tr.curves.append(c)
                tr.diagnostics.append(_diagnostics(c))
        if statuses is None and t >= params.t_end:
            statuses = [TerminalStatus(REACHED_END, t)] * len(curves)
    for tr, st in zip(trajs, statuses):
        tr.terminal_status = st
    return trajs


def evolve(c, params):
    """Evolve one curve; see :func:`evolve_many`."""
    return evolve_many([c], params)[0]


def evolve_pair(a, b, params):
    ta, tb = evolve_many([a, b], params)
    return ta, tb


def intersection_points(a, b, eps=SIMPLE_EPS, return_degenerate=False):
    """Points where the polylines ``a`` and ``b`` cross.

    Triple products within ``eps`` of zero are resolved by treating them as
    positive, which counts a vertex lying on the other curve consistently;
    such pairs are reported through the degenerate flag.

    Returns
    -------
    points : ndarray, shape (k, 3)
        Deduplicated within 1e-9.
    degenerate : bool
        Only when ``return_degenerate`` is true.

    Raises
    ------
    DegenerateIntersection
        If an edge of one curve overlaps an edge of the other along a
        common great circle.
    """
    P = np.ascontiguousarray(as_points(a))
    Q = np.ascontiguousarray(as_points(b))
    A, B = P, np.roll(P, -1, axis=0)
    C, D = Q, np.roll(Q, -1, axis=0)
    n1 = np.cross(A, B)
    n2 = np.cross(C, D)
    sc = n1 @ C.T  # (na, nb)
    sd = n1 @ D.T
    sa = (n2 @ A.T).T
    sb = (n2 @ B.T).T
    cand = ((sc > -eps) != (sd > -eps)) & ((sa > -eps) != (sb > -eps))
    near = (np.abs(sc) < eps) | (np.abs(sd) < eps) | (np.abs(sa) < eps) | (np.abs(sb) < eps)
    coplanar = (np.abs(sc) < eps) & (np.abs(sd) < eps)
    if np.any(coplanar):
        E = _kernels.edge_normals(P)
        F = _kernels.edge_normals(Q)
        for i, j in zip(*np.nonzero(coplanar)):
            if _kernels.arcs_intersect(P, E, i, Q, F, j, eps):
                raise DegenerateIntersection(f"edges {i} and {j} overlap on a common great circle")
    I, J = np.nonzero(cand & ~coplanar)
    x = np.cross(n1[I], n2[J])
    xn = np.linalg.norm(x, axis=1)
    keep = xn > 0
    I, J, x, xn = I[keep], J[keep], x[keep], xn[keep]
    x = x / xn[:, None]
    sign = np.where(np.sum(x * (A[I] + B[I]), axis=1) < 0, -1.0, 1.0)
    x = x * sign[:, None]
    ok = np.sum(x * (C[J] + D[J]), axis=1) > 0
    pts = x[ok]
    degenerate = bool(np.any(near[I[ok], J[ok]]))
    out = []
    for p in pts:
        if all(np.linalg.norm(p - q) > 1e-9 for q in out):
            out.append(p)
    out = np.array(out).reshape(-1, 3)
    return (out, degenerate) if return_degenerate else out


def track_intersections(ta, tb, rho=None):
    """Follow intersection points of two trajectories through time.

    Points at consecutive record times are matched by minimum-cost
    assignment on geodesic distance; matches farther apart than
    ``rho`` (default ``10 * sqrt(dt_record)``) are rejected. Tracks whose
    point found no match end as ``MergedAt`` when a surviving track is
    within the rejection radius and ``LostAt`` otherwise. Unmatched new
    points open new tracks.
    """
    times = np.asarray(ta.times)
    if len(times) != len(tb.times) or not np.array_equal(times, np.asarray(tb.times)):
        raise ValueError("trajectories must share the record-time grid")
    tracks = []
    alive = []
    for k, t in enumerate(times):
        try:
            pts = intersection_points(ta.curves[k], tb.curves[k])
        except DegenerateIntersection:
            continue
        if k == 0 or not alive:
            for p in pts:
                tr = IntersectionTrack([float(t)], [p])
                tracks.append(tr)
                alive.append(tr)
            continue
        radius = rho if rho is not None else 10 * math.sqrt(t - times[k - 1])
        old = np.array([tr.points[-1] for tr in alive])
        matched_new = set()
        matched_old = set()
        if len(pts):
            cost = geodesic_distance(old[:, None, :], pts[None, :, :])
            rows, cols = linear_sum_assignment(cost)
            for r, c in zip(rows, cols):
                if cost[r, c] <= radius:
                    alive[r].times.append(float(t))
                    alive[r].points.append(pts[c])
                    matched_old.add(r)
                    matched_new.add(c)
        survivors = [alive[r] for r in sorted(matched_old)]
        for r, tr in enumerate(alive):
            if r in matched_old:
                continue
            last = tr.points[-1]
            merged = any(geodesic_distance(last, s.points[-1]) <= radius for s in survivors)
            tr.status = TerminalStatus("MergedAt" if merged else "LostAt", float(t))
        new = [IntersectionTrack([float(t)], [pts[c]]) for c in range(len(pts)) if c not in matched_new]
        tracks.extend(new)
        alive = survivors + new
    return tracks
