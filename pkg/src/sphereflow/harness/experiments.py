"""Reproducible flow experiments.

Each experiment returns an :class:`ExperimentReport` whose verdict is a pure
function of its rows and tolerances, so a saved report can be re-checked
offline with :meth:`ExperimentReport.recheck`.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..analysis import fit_great_circle, gage_residual, intersection_count
from ..curve import (
    ClosedSphericalCurve,
    contains_left,
    enclosed_areas,
    is_simple,
    min_mutual_distance,
    offset_curve,
)
from ..exceptions import ChordTouchesCurve, GenerationFailed, InvalidCurve, NotStarShaped
from ..flow import (
    REACHED_END,
    FlowParams,
    evolve,
    evolve_many,
    intersection_points,
    stable_dt,
    track_intersections,
)
from ..metrics import aligned_frechet_distance, frechet_distance
from ..sphgeo import _tangent_frame, geodesic_distance, slerp
from .generators import PerturbationSpec, gen_perturbed_bisector, perturb_curve

__all__ = [
    "ExperimentReport",
    "exp_continuity",
    "exp_gage",
    "exp_angenent",
    "exp_avoidance",
    "exp_sandwich",
    "exp_crossing_chord",
    "VERDICTS",
]

MONOTONE_SLACK = 1e-9


@dataclass
class ExperimentReport:
    name: str
    inputs: Dict[str, Any]
    tolerances: Dict[str, float]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = False

    def recheck(self):
        return VERDICTS[self.name](self.rows, self.tolerances)

    def to_obj(self):
        return {
            "name": self.name,
            "inputs": self.inputs,
            "tolerances": self.tolerances,
            "rows": self.rows,
            "pass": self.passed,
        }

    @classmethod
    def from_obj(cls, obj):
        return cls(obj["name"], obj["inputs"], obj["tolerances"], obj["rows"], obj["pass"])


def _non_increasing(values, slack):
    return all(b <= a + slack for a, b in zip(values, values[1:]))


def _describe(x):
    if isinstance(x, PerturbationSpec):
        d = asdict(x)
        d["modes"] = x.modes if isinstance(x.modes, int) else [list(m) for m in x.modes]
        return d
    if isinstance(x, ClosedSphericalCurve):
        return {"curve_vertices": x.n}
    return x


def _as_curve(x):
    if isinstance(x, ClosedSphericalCurve):
        return x
    if isinstance(x, PerturbationSpec):
        return gen_perturbed_bisector(x)
    return ClosedSphericalCurve(x)


def _params_obj(params):
    return asdict(params)


# verdicts -------------------------------------------------------------------


def _verdict_continuity(rows, tol):
    if not rows or any(r["status"] != REACHED_END for r in rows):
        return False
    evolved = [r["frechet_evolved"] for r in rows]
    return _non_increasing(evolved, tol["monotone_slack"]) and min(evolved) <= tol["continuity"]


def _verdict_gage(rows, tol):
    if not rows or rows[-1]["status"] != REACHED_END:
        return False
    res = [r["gage_residual"] for r in rows]
    peak = int(np.argmax(res))
    return res[-1] <= tol["residual"] and _non_increasing(res[peak:], tol["monotone_slack"])


def _verdict_angenent(rows, tol):
    counts = [r["count"] for r in rows]
    return bool(rows) and _non_increasing(counts, 0)


def _verdict_avoidance(rows, tol):
    return bool(rows) and all(r["distance"] > tol["min_distance"] for r in rows)


def _verdict_sandwich(rows, tol):
    return bool(rows) and all(r["contained"] for r in rows)


def _verdict_chord(rows, tol):
    samples = [r["area"] for r in rows if r["kind"] == "sample"]
    sol = [r for r in rows if r["kind"] == "solution"]
    if len(sol) != 1 or not samples:
        return False
    s = sol[0]
    monotone = all(b > a for a, b in zip(samples, samples[1:]))
    return (
        bool(s["simple"])
        and s["n_intersections"] == 2
        and abs(s["area"] - 2 * np.pi) <= tol["area"]
        and monotone
    )


VERDICTS = {
    "continuity": _verdict_continuity,
    "gage": _verdict_gage,
    "angenent": _verdict_angenent,
    "avoidance": _verdict_avoidance,
    "sandwich": _verdict_sandwich,
    "chord": _verdict_chord,
}


def _finish(report):
    report.passed = bool(report.recheck())
    return report


# experiments ----------------------------------------------------------------


def exp_continuity(base, amplitudes, t_end=1.0, params=None, tol_continuity=0.05, perturb_modes=2):
    """Continuous dependence of the flow on the initial bisector.

    The base bisector generated from ``base`` and perturbations of it with
    decreasing amplitudes are flowed to ``t_end``; each row holds the
    Frechet distance to the base before and after the flow; after the flow
    the phase-aligned distance is the verdict column, since the signal there
    is far below half an edge length. Perturbations
    use ``perturb_modes`` random modes seeded with ``base.seed + 1``.
    """
    amplitudes = [float(a) for a in amplitudes]
    if any(b >= a for a, b in zip(amplitudes, amplitudes[1:])):
        raise ValueError("amplitudes must be strictly decreasing")
    params = params or FlowParams(t_end=t_end, resample_n=base.n)
    params = FlowParams(**{**asdict(params), "t_end": t_end})
    gamma = gen_perturbed_bisector(base)
    flowed = evolve(gamma, params)
    report = ExperimentReport(
        "continuity",
        {
            "base": _describe(base),
            "amplitudes": amplitudes,
            "t_end": t_end,
            "perturb_modes": perturb_modes,
            "params": _params_obj(params),
        },
        {"continuity": tol_continuity, "monotone_slack": MONOTONE_SLACK},
    )
    for amp in amplitudes:
        spec = PerturbationSpec(seed=base.seed + 1, amplitude=amp, modes=perturb_modes, n=base.n)
        gj = gamma if amp == 0 else perturb_curve(gamma, spec)
        fj = evolve(gj, params)
        ok = fj.terminal_status.kind == REACHED_END and flowed.terminal_status.kind == REACHED_END
        report.rows.append(
            {
                "amplitude": amp,
                "frechet_initial": frechet_distance(gj, gamma).distance,
                "frechet_evolved": aligned_frechet_distance(flowed.final, fj.final).distance
                if ok
                else float("nan"),
                "frechet_evolved_unaligned": frechet_distance(fj.final, flowed.final).distance
                if ok
                else float("nan"),
                "status": fj.terminal_status.kind
                if flowed.terminal_status.kind == REACHED_END
                else flowed.terminal_status.kind,
            }
        )
    return _finish(report)


def exp_gage(spec, t_end=3.0, params=None, tol_residual=1e-2):
    """Convergence of a flowing bisector to a great circle."""
    c = _as_curve(spec)
    params = params or FlowParams(t_end=t_end, resample_n=c.n)
    params = FlowParams(**{**asdict(params), "t_end": t_end})
    traj = evolve(c, params)
    report = ExperimentReport(
        "gage",
        {"spec": _describe(spec), "t_end": t_end, "params": _params_obj(params)},
        {"residual": tol_residual, "monotone_slack": MONOTONE_SLACK},
    )
    for t, d in zip(traj.times, traj.diagnostics):
        report.rows.append({"t": t, "gage_residual": d.gage_residual, "status": "Running"})
    report.rows[-1]["status"] = traj.terminal_status.kind
    return _finish(report)


def _count_with_retry(a, b, params):
    """Intersection count; a flagged contact is re-counted one step later."""
    count, degenerate = intersection_count(a, b, return_degenerate=True)
    if not degenerate:
        return count, False, False
    from ..flow import flow_step

    dt = min(stable_dt(a, params.cfl_factor), stable_dt(b, params.cfl_factor))
    a2 = flow_step(a, dt, params.resample_n)
    b2 = flow_step(b, dt, params.resample_n)
    count2, degenerate2 = intersection_count(a2, b2, return_degenerate=True)
    return count2, True, degenerate2


def exp_angenent(a_spec, b_spec, t_end=1.0, params=None):
    """Intersection count of two flowing curves never increases."""
    a, b = _as_curve(a_spec), _as_curve(b_spec)
    params = params or FlowParams(t_end=t_end, resample_n=max(a.n, b.n, 32))
    params = FlowParams(**{**asdict(params), "t_end": t_end})
    ta, tb = evolve_many([a, b], params)
    tracks = track_intersections(ta, tb)
    report = ExperimentReport(
        "angenent",
        {"a": _describe(a_spec), "b": _describe(b_spec), "t_end": t_end, "params": _params_obj(params)},
        {},
    )
    for t, ca, cb in zip(ta.times, ta.curves, tb.curves):
        count, resampled, still_degenerate = _count_with_retry(ca, cb, params)
        n_tracks = sum(1 for tr in tracks if t in tr.times)
        report.rows.append(
            {
                "t": t,
                "count": count,
                "tracks": n_tracks,
                "resampled": resampled,
                "degenerate": still_degenerate,
            }
        )
    report.inputs["status"] = [ta.terminal_status.kind, tb.terminal_status.kind]
    return _finish(report)


def exp_avoidance(a_spec, b_spec, t_end=1.0, params=None):
    """Initially disjoint curves stay disjoint."""
    a, b = _as_curve(a_spec), _as_curve(b_spec)
    d0 = min_mutual_distance(a, b)
    if d0 <= 0:
        raise ValueError("avoidance needs initially disjoint curves")
    params = params or FlowParams(t_end=t_end, resample_n=max(a.n, b.n, 32))
    params = FlowParams(**{**asdict(params), "t_end": t_end})
    ta, tb = evolve_many([a, b], params)
    report = ExperimentReport(
        "avoidance",
        {"a": _describe(a_spec), "b": _describe(b_spec), "t_end": t_end, "params": _params_obj(params)},
        {"min_distance": 0.0},
    )
    for t, ca, cb in zip(ta.times, ta.curves, tb.curves):
        report.rows.append({"t": t, "distance": min_mutual_distance(ca, cb)})
    report.inputs["status"] = [ta.terminal_status.kind, tb.terminal_status.kind]
    return _finish(report)


def exp_sandwich(spec, delta, t_end=0.5, params=None):
    """A curve stays between its two flowing parallel offsets.

    The offsets at geodesic distance ``delta`` on either side bound an
    annulus; all three curves flow on one time grid and containment of the
    middle curve is checked at every record time.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    base = _as_curve(spec)
    try:
        left = offset_curve(base, delta)
        right = offset_curve(base, -delta)
    except InvalidCurve as exc:
        raise GenerationFailed(str(exc)) from exc
    for off in (left, right):
        if not is_simple(off) or min_mutual_distance(off, base) <= 0:
            raise GenerationFailed("offset curve self-intersects or meets the base; lower delta")
    params = params or FlowParams(t_end=t_end, resample_n=base.n)
    params = FlowParams(**{**asdict(params), "t_end": t_end})
    tb, tl, tr = evolve_many([base, left, right], params)
    report = ExperimentReport(
        "sandwich",
        {"spec": _describe(spec), "delta": delta, "t_end": t_end, "params": _params_obj(params)},
        {},
    )
    for t, cb, cl, cr in zip(tb.times, tb.curves, tl.curves, tr.curves):
        P = cb.vertices
        outside_left = not np.any(contains_left(cl, P))
        inside_right = bool(np.all(contains_left(cr, P)))
        report.rows.append(
            {
                "t": t,
                "contained": outside_left and inside_right,
                "gap_left": min_mutual_distance(cb, cl),
                "gap_right": min_mutual_distance(cb, cr),
            }
        )
    report.inputs["status"] = [s.terminal_status.kind for s in (tb, tl, tr)]
    return _finish(report)


# crossing chord ---------------------------------------------------------------


def _star_longitudes(P, pole):
    u, w = _tangent_frame(pole)
    h = P @ pole
    if np.any(np.abs(h) > 1 - 1e-9):
        raise NotStarShaped("curve passes through a pole of its fitted circle")
    lon = np.arctan2(P @ w, P @ u)
    inc = np.mod(np.diff(np.concatenate([lon, lon[:1]])) + np.pi, 2 * np.pi) - np.pi
    if np.any(inc <= 0) or abs(inc.sum() - 2 * np.pi) > 1e-9:
        raise NotStarShaped("longitude about the fitted pole is not monotone")
    return lon, u, w


def _chord_curve(pole, u, w, lon_x, lon_y, m):
    """Closed curve: up the meridian at ``lon_x``, through ``pole``, down the
    meridian at ``lon_y``, through the antipode of ``pole``."""
    col = np.pi * np.arange(1, m + 1) / (m + 1)

    def meridian(lon, colat):
        d = np.cos(lon) * u + np.sin(lon) * w
        return np.cos(colat)[:, None] * pole + np.sin(colat)[:, None] * d

    up = meridian(lon_x, col[::-1])
    down = meridian(lon_y, col)
    return ClosedSphericalCurve(np.vstack([up, pole, down, -pole]))


def exp_crossing_chord(spec, x_index=0, samples=32, tol_area=1e-6, chord_vertices=64):
    """Area-bisecting crossing curve through a point of a star-shaped curve.

    For a curve star-shaped about its fitted pole, a closed curve is built
    from the chord through the left region (boundary point ``x`` to the pole
    to ``y``) and the chord through the right region (``y`` to the antipode to
    ``x``). Its left area increases strictly as ``y`` runs backward along the
    curve; bisection finds the ``y`` with area exactly 2 pi.

    Raises
    ------
    NotStarShaped
        If longitude about the fitted pole is not monotone along the curve.
    ChordTouchesCurve
        If the crossing curve meets the curve away from ``x`` and ``y``.
    """
    c = _as_curve(spec)
    P = c.vertices
    n = len(P)
    pole = fit_great_circle(c).normal
    lon, u, w = _star_longitudes(P, pole)
    x = P[x_index % n]
    lon_x = lon[x_index % n]
    # arclength positions measured backward from x
    back = np.concatenate([P[x_index % n :: -1], P[: x_index % n : -1]]) if x_index % n else np.concatenate([P[:1], P[:0:-1]])
    seg = geodesic_distance(back, np.roll(back, -1, axis=0))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]

    def point_at(frac):
        s = frac * total
        k = min(int(np.searchsorted(cum, s, side="right")) - 1, n - 1)
        f = (s - cum[k]) / seg[k]
        return slerp(back[k], back[(k + 1) % n], f)

    def chord(frac):
        y = point_at(frac)
        lon_y = np.arctan2(y @ w, y @ u)
        return _chord_curve(pole, u, w, lon_x, lon_y, chord_vertices), y

    def area(frac):
        return enclosed_areas(chord(frac)[0]).left

    report = ExperimentReport(
        "chord",
        {"spec": _describe(spec), "x_index": int(x_index), "samples": samples},
        {"area": tol_area},
    )
    for k in range(samples):
        frac = (k + 0.5) / samples
        report.rows.append({"kind": "sample", "u": frac, "area": area(frac)})
    lo, hi = 1e-9, 1 - 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        a = area(mid)
        if abs(a - 2 * np.pi) <= 1e-3 * tol_area:
            break
        if a < 2 * np.pi:
            lo = mid
        else:
            hi = mid
    zeta, y = chord(mid)
    pts = intersection_points(zeta, c)
    for p in pts:
        if min(geodesic_distance(p, x), geodesic_distance(p, y)) > 1e-6:
            raise ChordTouchesCurve("crossing curve meets the curve away from its endpoints")
    simple = is_simple(zeta)
    report.rows.append(
        {
            "kind": "solution",
            "u": mid,
            "area": enclosed_areas(zeta, check=False).left,
            "simple": simple,
            "n_intersections": len(pts),
        }
    )
    return _finish(report)
