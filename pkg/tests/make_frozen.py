"""Regenerate tests/frozen_oracles.json.

Run from the repository root::

    python tests/make_frozen.py

The values are computed by the independent references in ``oracles.py`` and
by high-precision quadrature with mpmath; the tests only read the file.
"""

import json
import pathlib

import mpmath
import numpy as np

from oracles import brute_force_closed_frechet, random_small_polygon

OUT = pathlib.Path(__file__).with_name("frozen_oracles.json")


def frechet_cases(count=50, seed=20240501):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(count):
        na, nb = rng.integers(3, 8, size=2)
        A = random_small_polygon(rng, int(na))
        # every other pair shares a center, so that distances are small
        center = A.mean(axis=0) + 0.1 * rng.normal(size=3) if len(cases) % 2 else None
        B = random_small_polygon(rng, int(nb), center)
        cases.append({"a": A.tolist(), "b": B.tolist(), "frechet": brute_force_closed_frechet(A, B)})
    return cases


def flower_area(theta, amplitude, m, phase):
    """Area north of the smooth curve at colatitude theta - f(s) over longitude s,
    with ``f(s) = amplitude * cos(m s + phase)``: integral of 1 - cos(colatitude)."""
    mpmath.mp.dps = 30
    f = lambda s: 1 - mpmath.cos(theta - amplitude * mpmath.cos(m * s + phase))
    return float(mpmath.quad(f, mpmath.linspace(0, 2 * mpmath.pi, 4 * m + 1)))


def main():
    data = {
        "frechet_small": frechet_cases(),
        "flower_area": [
            {"theta": th, "amplitude": a, "m": m, "phase": ph, "area": flower_area(th, a, m, ph)}
            for th, a, m, ph in [(np.pi / 3, 0.2, 3, 0.0), (1.2, 0.3, 2, 0.5)]
        ],
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
