import io
import json

import numpy as np
import pytest

from sphereflow.curve import is_bisector, is_simple
from sphereflow.exceptions import GenerationFailed, InvalidCurve, NotStarShaped
from sphereflow.flow import FlowParams, evolve
from sphereflow.harness import experiments
from sphereflow.harness.experiments import ExperimentReport
from sphereflow.harness.generators import (
    PerturbationSpec,
    gen_latitude_circle,
    gen_perturbed_bisector,
    gen_perturbed_latitude,
    perturb_curve,
)
from sphereflow.harness.io import (
    curve_from_obj,
    dumps,
    read_curve,
    read_trajectory,
    report_to_csv,
    trajectory_lines,
    write_curve,
)

FAST = FlowParams(resample_n=64, record_every=100)


# generators ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [{"amplitude": -0.1}, {"amplitude": 0.5}, {"n": 7}, {"modes": 0}, {"modes": ()}, {"modes": ((1, 0.0),)}],
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        PerturbationSpec(**kwargs)


def test_random_modes_depend_only_on_seed():
    a = PerturbationSpec(seed=7, modes=3).resolved_modes()
    assert a == PerturbationSpec(seed=7, modes=3, n=64).resolved_modes()
    assert a != PerturbationSpec(seed=8, modes=3).resolved_modes()
    assert all(2 <= m <= 6 and 0 <= ph < 2 * np.pi for m, ph in a)


def test_displacement_is_an_average_of_modes():
    spec = PerturbationSpec(amplitude=0.2, modes=((2, 0.0), (3, 0.0)))
    assert spec.displacement(0.0) == pytest.approx(0.2)
    assert spec.displacement(np.pi / 2) == pytest.approx(0.1 * (np.cos(np.pi) + np.cos(1.5 * np.pi)))


def test_latitude_circle():
    c = gen_latitude_circle(1.0, 32)
    np.testing.assert_allclose(c.vertices[:, 2], np.cos(1.0))
    assert np.cross(c.vertices[0], c.vertices[1])[2] > 0
    with pytest.raises(ValueError):
        gen_latitude_circle(0.0, 32)


@pytest.mark.parametrize("seed", range(6))
def test_perturbed_bisectors_are_simple_bisectors(seed):
    c = gen_perturbed_bisector(PerturbationSpec(seed=seed, amplitude=0.3, modes=3, n=128))
    assert c.n == 128 and is_simple(c) and is_bisector(c, 1e-8)


def test_generation_is_deterministic():
    spec = PerturbationSpec(seed=3, amplitude=0.25, modes=2, n=64)
    np.testing.assert_array_equal(gen_perturbed_bisector(spec).vertices, gen_perturbed_bisector(spec).vertices)


def test_perturbation_across_the_pole_fails():
    with pytest.raises(GenerationFailed):
        gen_perturbed_latitude(0.1, PerturbationSpec(amplitude=0.3, n=64))


def test_perturb_curve_returns_nearby_bisector():
    base = gen_perturbed_bisector(PerturbationSpec(amplitude=0.2, n=128))
    out = perturb_curve(base, PerturbationSpec(seed=1, amplitude=0.05, modes=2, n=128))
    assert is_bisector(out, 1e-8)
    assert np.max(np.linalg.norm(out.vertices - base.vertices, axis=1)) < 0.1


# io --------------------------------------------------------------------------------


def test_dumps_formats():
    assert dumps({"a": [1, 0.1, True, None, float("nan")]}) == '{"a": [1, 0.10000000000000001, true, null, null]}'
    assert dumps(np.float64(1.5)) == "1.5"
    with pytest.raises(TypeError):
        dumps(object())


def test_curve_json_round_trip_is_exact(tmp_path):
    c = gen_perturbed_bisector(PerturbationSpec(seed=5, modes=3, n=64))
    path = tmp_path / "c.json"
    write_curve(c, str(path))
    back = read_curve(str(path))
    np.testing.assert_array_equal(back.vertices, c.vertices)
    buf = io.StringIO()
    write_curve(back, buf)
    assert buf.getvalue() == path.read_text()


@pytest.mark.parametrize(
    "obj",
    [{}, {"points": "x"}, {"points": [[1, 0], [0, 1]]}, {"points": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}],
)
def test_malformed_curves_are_rejected(obj):
    with pytest.raises(InvalidCurve):
        curve_from_obj(obj)


def test_non_json_is_rejected():
    with pytest.raises(InvalidCurve):
        read_curve(io.StringIO("not json"))


def test_trajectory_round_trip():
    tr = evolve(gen_latitude_circle(1.0, 64), FlowParams(t_end=0.05, resample_n=64, record_every=20))
    lines = list(trajectory_lines(tr))
    assert json.loads(lines[-1]) == {"status": "ReachedEnd", "t": tr.terminal_status.time}
    back = read_trajectory(lines)
    assert back.times == tr.times
    assert back.terminal_status.kind == tr.terminal_status.kind
    for a, b in zip(back.curves, tr.curves):
        np.testing.assert_array_equal(a.vertices, b.vertices)
    assert back.diagnostics[-1].length == tr.diagnostics[-1].length


def test_report_csv_uses_union_of_keys():
    rep = ExperimentReport("gage", {}, {}, [{"t": 0.0, "x": 1}, {"t": 0.5, "y": "a"}])
    assert report_to_csv(rep) == "t,x,y\n0,1,\n0.5,,a\n"


# experiments ------------------------------------------------------------------------


def test_continuity_experiment():
    rep = experiments.exp_continuity(
        PerturbationSpec(amplitude=0.2, modes=2, n=64), [0.1, 0.05, 0.02], t_end=0.3, params=FAST
    )
    assert rep.passed
    assert [r["amplitude"] for r in rep.rows] == [0.1, 0.05, 0.02]
    assert all(r["frechet_evolved"] <= r["frechet_initial"] + 0.01 for r in rep.rows)
    with pytest.raises(ValueError):
        experiments.exp_continuity(PerturbationSpec(n=64), [0.05, 0.1])


def test_gage_experiment():
    rep = experiments.exp_gage(PerturbationSpec(amplitude=0.2, n=64), t_end=3.0, params=FAST)
    assert rep.passed
    assert rep.rows[0]["t"] == 0.0 and rep.rows[-1]["status"] == "ReachedEnd"
    assert rep.rows[-1]["gage_residual"] < 1e-2


def test_angenent_experiment():
    a = gen_perturbed_latitude(np.pi / 2 - 0.05, PerturbationSpec(amplitude=0.1, modes=((2, 0.0),), n=64))
    rep = experiments.exp_angenent(a, gen_latitude_circle(np.pi / 2, 64), t_end=0.5, params=FAST)
    assert rep.passed
    assert rep.rows[0]["count"] == 4 and rep.rows[-1]["count"] == 0
    assert all(r["count"] == r["tracks"] for r in rep.rows)


def test_avoidance_experiment():
    rep = experiments.exp_avoidance(gen_latitude_circle(0.8, 64), gen_latitude_circle(1.6, 64), t_end=0.3, params=FAST)
    assert rep.passed
    with pytest.raises(ValueError):
        experiments.exp_avoidance(gen_latitude_circle(1.0, 64), gen_latitude_circle(1.0, 64).reversed(), 0.1, FAST)


def test_sandwich_experiment():
    rep = experiments.exp_sandwich(PerturbationSpec(amplitude=0.15, n=64), 0.2, t_end=0.3, params=FAST)
    assert rep.passed
    assert all(r["gap_left"] > 0 and r["gap_right"] > 0 for r in rep.rows)
    with pytest.raises(ValueError):
        experiments.exp_sandwich(PerturbationSpec(n=64), 0.0)


@pytest.mark.parametrize("spec", [PerturbationSpec(amplitude=0.1, n=64), PerturbationSpec(seed=2, amplitude=0.2, modes=2, n=64)])
def test_chord_experiment(spec):
    rep = experiments.exp_crossing_chord(spec, x_index=5, samples=16)
    assert rep.passed
    sol = rep.rows[-1]
    assert sol["kind"] == "solution" and abs(sol["area"] - 2 * np.pi) <= 1e-6


def test_chord_needs_star_shaped_curve():
    # a curve that doubles back in longitude about its pole
    s = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    lon = s + 0.9 * np.sin(2 * s)
    lat = 0.3 * np.cos(3 * s)
    P = np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=1)
    with pytest.raises(NotStarShaped):
        experiments.exp_crossing_chord(P)


def test_reports_recheck_and_round_trip():
    rep = experiments.exp_gage(PerturbationSpec(amplitude=0.2, n=64), t_end=3.0, params=FAST)
    obj = json.loads(dumps(rep.to_obj()))
    back = ExperimentReport.from_obj(obj)
    assert back.recheck() is True and back.passed
    # tampering with a row flips the verdict
    back.rows[-1]["gage_residual"] = 1.0
    assert not back.recheck()


def test_experiments_are_deterministic():
    run = lambda: dumps(experiments.exp_sandwich(PerturbationSpec(amplitude=0.15, n=64), 0.2, 0.1, FAST).to_obj())
    assert run() == run()


def test_verdicts_reject_empty_rows():
    for name, verdict in experiments.VERDICTS.items():
        tol = {"continuity": 1, "monotone_slack": 0, "residual": 1, "min_distance": 0, "area": 1}
        assert not verdict([], tol), name
