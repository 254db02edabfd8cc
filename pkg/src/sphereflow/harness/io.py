"""File formats: curve JSON, trajectory JSONL, experiment report JSON/CSV.

Floats are written with 17 significant digits so output is byte-for-byte
reproducible and round-trips exactly.
"""

import csv
import io
import json
import math

import numpy as np

from ..curve import ClosedSphericalCurve
from ..exceptions import InvalidCurve
from ..flow import DiagnosticsRecord, TerminalStatus, Trajectory
from ..sphgeo import UNIT_TOL

__all__ = [
    "dumps",
    "curve_to_obj",
    "curve_from_obj",
    "read_curve",
    "write_curve",
    "trajectory_lines",
    "read_trajectory",
    "report_to_csv",
]


def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj):
    """Compact JSON with floats formatted to 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def curve_to_obj(c):
    return {"points": c.vertices.tolist()}


def curve_from_obj(obj):
    """Validate and normalize a ``{"points": [[x, y, z], ...]}`` object."""
    try:
        P = np.asarray(obj["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidCurve(f"malformed curve object: {exc}") from exc
    if P.ndim != 2 or P.shape[1] != 3:
        raise InvalidCurve("points must be a list of [x, y, z] rows")
    norms = np.linalg.norm(P, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise InvalidCurve("points must be unit vectors within 1e-9")
    return ClosedSphericalCurve(P)


def read_curve(fp):
    """Read a curve from a path or text file object."""
    if hasattr(fp, "read"):
        text = fp.read()
    else:
        with open(fp) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidCurve(f"curve file is not JSON: {exc}") from exc
    return curve_from_obj(obj)


def write_curve(c, fp):
    text = dumps(curve_to_obj(c)) + "\n"
    if hasattr(fp, "write"):
        fp.write(text)
    else:
        with open(fp, "w") as fh:
            fh.write(text)


def trajectory_lines(traj):
    """JSONL lines: one per record time, then a terminal status line."""
    for t, c, d in zip(traj.times, traj.curves, traj.diagnostics):
        yield dumps(
            {
                "t": t,
                "curve": curve_to_obj(c),
                "diag": {
                    "length": d.length,
                    "area_left": d.area_left,
                    "max_curv": d.max_abs_curvature,
                    "gage_residual": d.gage_residual,
                },
            }
        )
    st = traj.terminal_status
    yield dumps({"status": st.kind, "t": st.time})


def read_trajectory(lines):
    traj = Trajectory()
    for line in lines:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if "status" in obj:
            traj.terminal_status = TerminalStatus(obj["status"], obj.get("t"))
            continue
        d = obj["diag"]
        traj.times.append(float(obj["t"]))
        traj.curves.append(curve_from_obj(obj["curve"]))
        traj.diagnostics.append(
            DiagnosticsRecord(
                d["length"],
                d["area_left"],
                d["max_curv"],
                float("nan") if d["gage_residual"] is None else d["gage_residual"],
            )
        )
    return traj


def report_to_csv(report):
    """CSV text with one line per report row; columns are the union of keys."""
    keys = []
    for row in report.rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for row in report.rows:
        out = []
        for k in keys:
            v = row.get(k, "")
            if isinstance(v, (float, np.floating)):
                v = _fmt_float(float(v))
            out.append(v)
        writer.writerow(out)
    return buf.getvalue()
