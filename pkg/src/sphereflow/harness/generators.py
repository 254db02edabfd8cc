"""Test-curve generators: latitude circles and modal perturbations."""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..curve import (
    ClosedSphericalCurve,
    is_bisector,
    is_simple,
    left_normals,
    make_bisector,
)
from ..exceptions import GenerationFailed, InvalidCurve, NonSimpleCurve, RootNotBracketed
from ..sphgeo import exp_map

__all__ = [
    "PerturbationSpec",
    "gen_latitude_circle",
    "gen_perturbed_bisector",
    "gen_perturbed_latitude",
    "perturb_curve",
]


@dataclass(frozen=True)
class PerturbationSpec:
    """Modal displacement ``f(s) = amplitude * mean_m cos(m s + phase_m)``.

    ``modes`` is either an explicit sequence of ``(m, phase)`` pairs or an
    integer ``k``, meaning ``k`` modes drawn from ``seed`` with ``m`` in
    ``2..6`` and uniform phases.
    """

    seed: int = 0
    amplitude: float = 0.2
    modes: Union[int, Sequence[Tuple[int, float]]] = ((3, 0.0),)
    n: int = 256

    def __post_init__(self):
        if not 0 <= self.amplitude < 0.5:
            raise ValueError("amplitude must lie in [0, 0.5)")
        if self.n < 8:
            raise ValueError("n must be at least 8")
        if isinstance(self.modes, (int, np.integer)):
            if self.modes < 1:
                raise ValueError("need at least one random mode")
        else:
            modes = tuple((int(m), float(ph)) for m, ph in self.modes)
            if not modes or any(m < 2 for m, _ in modes):
                raise ValueError("modes must be a non-empty list with m >= 2")
            object.__setattr__(self, "modes", modes)

    def resolved_modes(self):
        if isinstance(self.modes, (int, np.integer)):
            rng = np.random.default_rng(self.seed)
            ms = rng.integers(2, 7, size=int(self.modes))
            phases = rng.uniform(0.0, 2 * np.pi, size=int(self.modes))
            return tuple((int(m), float(p)) for m, p in zip(ms, phases))
        return self.modes

    def displacement(self, s):
        modes = self.resolved_modes()
        s = np.asarray(s, dtype=float)
        total = sum(np.cos(m * s + ph) for m, ph in modes)
        return self.amplitude * total / len(modes)


def gen_latitude_circle(theta, n):
    """``n`` vertices at colatitude ``theta``, counterclockwise about +z.

    The north cap is on the left.
    """
    if not 0 < theta < np.pi:
        raise ValueError("colatitude must lie in (0, pi)")
    if n < 8:
        raise ValueError("n must be at least 8")
    s = 2 * np.pi * np.arange(n) / n
    st = np.sin(theta)
    return ClosedSphericalCurve(
        np.stack([st * np.cos(s), st * np.sin(s), np.full(n, np.cos(theta))], axis=1)
    )


def gen_perturbed_latitude(theta, spec):
    """Latitude circle at colatitude ``theta`` displaced by ``spec`` along meridians."""
    s = 2 * np.pi * np.arange(spec.n) / spec.n
    col = theta - spec.displacement(s)
    if np.any(col <= 0) or np.any(col >= np.pi):
        raise GenerationFailed("perturbation crosses a pole")
    P = np.stack([np.sin(col) * np.cos(s), np.sin(col) * np.sin(s), np.cos(col)], axis=1)
    try:
        c = ClosedSphericalCurve(P)
    except InvalidCurve as exc:
        raise GenerationFailed(str(exc)) from exc
    if not is_simple(c):
        raise GenerationFailed("perturbed curve is not simple")
    return c


def gen_perturbed_bisector(spec):
    """Perturbed equator pushed onto the bisector set.

    Vertices sit at latitude ``f(s)`` over evenly spaced longitudes ``s``;
    :func:`make_bisector` then corrects the area to exactly 2 pi.

    Raises
    ------
    GenerationFailed
        If the curve is not simple or no bisecting offset exists.
    """
    c = gen_perturbed_latitude(np.pi / 2, spec)
    return _bisect(c)


def perturb_curve(c, spec):
    """Displace ``c`` along its left normals by ``spec``'s modal profile,
    with ``s`` the normalized arclength parameter, then re-bisect."""
    P = c.vertices
    ell = np.linalg.norm(np.diff(np.vstack([P, P[:1]]), axis=0), axis=1)
    s = 2 * np.pi * np.concatenate([[0.0], np.cumsum(ell)[:-1]]) / ell.sum()
    f = spec.displacement(s)
    try:
        out = ClosedSphericalCurve(exp_map(P, f[:, None] * left_normals(P)))
    except InvalidCurve as exc:
        raise GenerationFailed(str(exc)) from exc
    if not is_simple(out):
        raise GenerationFailed("perturbed curve is not simple")
    return _bisect(out)


def _bisect(c):
    try:
        out = make_bisector(c)
    except (NonSimpleCurve, RootNotBracketed) as exc:
        raise GenerationFailed(str(exc)) from exc
    if not (is_simple(out) and is_bisector(out, 1e-8)):
        raise GenerationFailed("bisector construction failed")
    return out
