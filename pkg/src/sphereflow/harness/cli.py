"""Command line interface.

Usage examples::

    sphereflow gen --latitude 1.0471975512 --n 512 > circle.json
    sphereflow evolve --t-end 0.3 < circle.json > traj.jsonl
    sphereflow distance --metric frechet a.json b.json
    sphereflow analyze a.json --other b.json --radius 0.1
    sphereflow experiment gage --amplitude 0.3 --t-end 3 --csv rows.csv
"""

import argparse
import json
import sys

import numpy as np

from ..analysis import fit_great_circle, gage_residual, intersection_count, r_multiplicity
from ..curve import enclosed_areas, total_length
from ..exceptions import SphereFlowError
from ..flow import FlowParams, evolve
from ..metrics import frechet_distance, hausdorff_distance
from ..sphgeo import GreatCircle
from . import experiments
from .generators import PerturbationSpec, gen_latitude_circle, gen_perturbed_bisector
from .io import dumps, read_curve, report_to_csv, trajectory_lines, write_curve

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _InputError(message)


class _InputError(Exception):
    pass


def _modes(text):
    """``3`` means three random modes; ``3:0,5:1.2`` lists (m, phase) pairs."""
    if ":" not in text:
        return int(text)
    pairs = []
    for item in text.split(","):
        m, ph = item.split(":")
        pairs.append((int(m), float(ph)))
    return tuple(pairs)


def _add_spec_args(p, prefix="", amplitude=0.2):
    p.add_argument(f"--{prefix}seed", type=int, default=0)
    p.add_argument(f"--{prefix}amplitude", type=float, default=amplitude)
    p.add_argument(f"--{prefix}modes", type=_modes, default="3:0")
    p.add_argument(f"--{prefix}latitude", type=float, default=None,
                   help="colatitude of a latitude circle instead of a perturbed bisector")


def _add_flow_args(p, t_end=1.0):
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--t-end", type=float, default=t_end)
    p.add_argument("--cfl", type=float, default=0.25)
    p.add_argument("--record-every", type=int, default=50)


def _spec(args, prefix=""):
    g = lambda k: getattr(args, prefix + k)
    return PerturbationSpec(seed=g("seed"), amplitude=g("amplitude"), modes=g("modes"), n=args.n)


def _source(args, prefix=""):
    lat = getattr(args, prefix + "latitude")
    if lat is not None:
        return gen_latitude_circle(lat, args.n)
    return _spec(args, prefix)


def _params(args):
    return FlowParams(t_end=args.t_end, cfl_factor=args.cfl, resample_n=args.n,
                      record_every=args.record_every)


def build_parser():
    parser = _Parser(prog="sphereflow", description="Curve shortening flow on the sphere.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="emit a curve as JSON")
    _add_spec_args(p)
    p.add_argument("--n", type=int, default=256)

    p = sub.add_parser("evolve", help="curve JSON to trajectory JSONL")
    p.add_argument("curve", nargs="?", default="-")
    _add_flow_args(p)
    p.add_argument("--resample-n", type=int, default=None)

    p = sub.add_parser("distance", help="distance between two curves in radians")
    p.add_argument("--metric", choices=("frechet", "hausdorff"), default="frechet")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("analyze", help="fit, residual, multiplicity and intersections")
    p.add_argument("curve", nargs="?", default="-")
    p.add_argument("--other", default=None, help="second curve for intersection counting")
    p.add_argument("--radius", type=float, default=0.1, help="band radius r")
    p.add_argument("--normal", type=float, nargs=3, default=None,
                   help="great circle normal (default: fitted)")

    p = sub.add_parser("experiment", help="run an experiment and print its report")
    esub = p.add_subparsers(dest="name", required=True, parser_class=_Parser)

    def exp_parser(name, t_end=1.0, amplitude=0.2):
        q = esub.add_parser(name)
        _add_spec_args(q, amplitude=amplitude)
        _add_flow_args(q, t_end)
        q.add_argument("--csv", default=None, help="write report rows to this CSV file")
        return q

    q = exp_parser("continuity")
    q.add_argument("--amplitudes", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    q.add_argument("--perturb-modes", type=int, default=2)
    q.add_argument("--tol-continuity", type=float, default=0.05)
    q = exp_parser("gage", t_end=3.0, amplitude=0.3)
    q.add_argument("--tol-residual", type=float, default=1e-2)
    for name in ("angenent", "avoidance"):
        q = exp_parser(name)
        _add_spec_args(q, prefix="b-", amplitude=0.0)
    q = exp_parser("sandwich", t_end=0.5, amplitude=0.15)
    q.add_argument("--delta", type=float, default=0.25)
    q = exp_parser("chord", amplitude=0.1)
    q.add_argument("--x-index", type=int, default=0)
    q.add_argument("--samples", type=int, default=32)
    q.add_argument("--tol-area", type=float, default=1e-6)
    return parser


def _read(path):
    if path == "-":
        return read_curve(sys.stdin)
    return read_curve(path)


def _cmd_gen(args, out):
    c = _source(args)
    if isinstance(c, PerturbationSpec):
        c = gen_perturbed_bisector(c)
    write_curve(c, out)
    return EXIT_OK


def _cmd_evolve(args, out):
    c = _read(args.curve)
    n = args.resample_n or c.n
    params = FlowParams(t_end=args.t_end, cfl_factor=args.cfl, resample_n=n,
                        record_every=args.record_every)
    for line in trajectory_lines(evolve(c, params)):
        out.write(line + "\n")
    return EXIT_OK


def _cmd_distance(args, out):
    a, b = _read(args.a), _read(args.b)
    if args.metric == "frechet":
        d = frechet_distance(a, b).distance
    else:
        d = hausdorff_distance(a, b)
    out.write(dumps(d) + "\n")
    return EXIT_OK


def _cmd_analyze(args, out):
    c = _read(args.curve)
    g = GreatCircle(np.asarray(args.normal)) if args.normal else fit_great_circle(c)
    areas = enclosed_areas(c, check=False)
    res = {
        "n": c.n,
        "length": total_length(c),
        "area_left": areas.left,
        "fitted_normal": g.normal.tolist(),
        "gage_residual": gage_residual(c),
        "r": args.radius,
        "r_multiplicity": r_multiplicity(c, g, args.radius).value,
    }
    if args.other:
        count, degenerate = intersection_count(c, _read(args.other), return_degenerate=True)
        res["intersection_count"] = count
        res["intersection_degenerate"] = degenerate
    out.write(dumps(res) + "\n")
    return EXIT_OK


def _cmd_experiment(args, out):
    params = _params(args)
    name = args.name
    if name == "continuity":
        rep = experiments.exp_continuity(_spec(args), args.amplitudes, args.t_end, params,
                                         args.tol_continuity, args.perturb_modes)
    elif name == "gage":
        rep = experiments.exp_gage(_source(args), args.t_end, params, args.tol_residual)
    elif name == "angenent":
        rep = experiments.exp_angenent(_source(args), _b_source(args), args.t_end, params)
    elif name == "avoidance":
        rep = experiments.exp_avoidance(_source(args), _b_source(args), args.t_end, params)
    elif name == "sandwich":
        rep = experiments.exp_sandwich(_source(args), args.delta, args.t_end, params)
    else:
        rep = experiments.exp_crossing_chord(_source(args), args.x_index, args.samples, args.tol_area)
    out.write(dumps(rep.to_obj()) + "\n")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report_to_csv(rep))
    return EXIT_OK if rep.passed else EXIT_FAILED


def _b_source(args):
    if args.b_latitude is None and args.b_amplitude == 0:
        return gen_latitude_circle(np.pi / 2, args.n)
    return _source(args, "b_")


COMMANDS = {
    "gen": _cmd_gen,
    "evolve": _cmd_evolve,
    "distance": _cmd_distance,
    "analyze": _cmd_analyze,
    "experiment": _cmd_experiment,
}


def main(argv=None, out=None):
    """Run the CLI; returns the exit code."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except _InputError as exc:
        print(f"sphereflow: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SphereFlowError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"sphereflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry():
    sys.exit(main())
