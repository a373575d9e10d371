"""Certify how many points maximize the dimension objective on [0, 1].

The objective is smooth, so the certificate is numerical but tight: a grid
scan brackets every local maximum (endpoints included), golden-section
search shrinks each bracket below 1e-12, refined maxima are clustered by a
separation tolerance, and all clusters within a value tolerance of the best
are reported.  For constructed parameter sets the expected answer is a
symmetric pair of maximizers.

The module also hosts the two independent cross-checks:

  * verify_gap_nonpositive certifies g(x) = Ux - M + H(x)/(1+Vx) <= 0 and
    locates its roots (the tangency points);
  * simplex_bruteforce maximizes the full pressure functional over the whole
    weight simplex at desk scale, confirming that the one-dimensional
    reduction through the marginal x loses nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .entropy import (CarpetSpec, DerivedConstants, gap_g, objective_f,
                      objective_f_prime, pressure_bernoulli,
                      pressure_bernoulli_batch)

__all__ = [
    "MaximizerReport",
    "golden_section_max",
    "global_maxima",
    "verify_gap_nonpositive",
    "simplex_bruteforce",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_SIMPLEX_SYMBOLS = 8


@dataclass(frozen=True)
class MaximizerReport:
    """Certified global maxima of the objective, with the tolerances used.

    Every listed maximum has value within value_tolerance of global_value and
    distinct maxima are separated by more than separation_tolerance.
    """

    maxima: tuple[tuple[float, float], ...]
    global_value: float
    value_tolerance: float
    separation_tolerance: float
    certified_count: int


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12) -> tuple[float, float]:
    """Maximize a unimodal function on [lo, hi] to bracket width below tol.

    Width shrinks by the golden ratio each step, so a unit bracket needs
    fewer than 60 evaluations to reach 1e-12.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _local_max_candidates(fn: Callable[[float], float], values: np.ndarray,
                          xs: np.ndarray, tol: float) -> list[tuple[float, float]]:
    """Refine every grid-local maximum of fn, endpoints included."""
    n = len(xs)
    candidates: list[tuple[float, float]] = []
    interior = np.nonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:]))[0] + 1
    brackets = [(xs[i - 1], xs[i + 1]) for i in interior]
    if values[0] >= values[1]:
        brackets.append((xs[0], xs[1]))
    if values[n - 1] >= values[n - 2]:
        brackets.append((xs[n - 2], xs[n - 1]))
    for lo, hi in brackets:
        candidates.append(golden_section_max(fn, lo, hi, tol))
    return candidates


def _cluster(candidates: list[tuple[float, float]], sep_tol: float) -> list[tuple[float, float]]:
    """Merge refined candidates closer than sep_tol, keeping each group's best."""
    merged: list[tuple[float, float]] = []
    for x, v in sorted(candidates):
        if merged and x - merged[-1][0] <= sep_tol:
            if v > merged[-1][1]:
                merged[-1] = (x, v)
        else:
            merged.append((x, v))
    return merged


def _polish_interior_max(spec: CarpetSpec, x: float, half_width: float = 1e-5
                         ) -> float | None:
    """Sharpen an interior maximum by bisecting the analytic derivative.

    Golden-section alone stalls in the flat noise plateau around a smooth
    maximum (roughly sqrt(eps) wide); the derivative still has a clean sign
    change there, so one bisection pass pins the location to machine
    precision and makes reports independent of the scan grid.
    """
    lo, hi = x - half_width, x + half_width
    if lo <= 0.0 or hi >= 1.0:
        return None
    if not objective_f_prime(lo, spec) > 0.0 > objective_f_prime(hi, spec):
        return None
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if objective_f_prime(mid, spec) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def global_maxima(spec: CarpetSpec, value_tol: float = 1e-9, sep_tol: float = 1e-4,
                  grid_points: int = 4096) -> MaximizerReport:
    """All global maxima of the dimension objective on [0, 1], certified numerically.

    Deterministic for fixed inputs.  Endpoints are always tested, so a
    parameter set maximized at x = 0 or x = 1 reports an endpoint maximum
    rather than failing.
    """
    if value_tol <= 0.0 or sep_tol <= 0.0:
        raise ValueError("tolerances must be positive")
    if grid_points < 256:
        raise ValueError("grid_points must be at least 256")

    xs = np.linspace(0.0, 1.0, grid_points)
    values = objective_f(xs, spec)
    fn = lambda x: float(objective_f(x, spec))
    candidates = _local_max_candidates(fn, values, xs, tol=1e-12)
    polished = []
    for x, v in candidates:
        better = _polish_interior_max(spec, x)
        polished.append((x, v) if better is None else (better, fn(better)))
    merged = _cluster(polished, sep_tol)

    global_value = max(v for _, v in merged)
    maxima = tuple((x, v) for x, v in merged if global_value - v <= value_tol)
    return MaximizerReport(
        maxima=maxima,
        global_value=global_value,
        value_tolerance=value_tol,
        separation_tolerance=sep_tol,
        certified_count=len(maxima),
    )


def verify_gap_nonpositive(consts: DerivedConstants, grid_points: int = 100_000
                           ) -> tuple[float, list[float]]:
    """Grid maximum of the gap function and the refined locations where it vanishes.

    A valid construction yields max_gap <= 1e-10 with the roots at the
    tangency points of the quadratic majorant against the entropy.  A
    positive max_gap beyond tolerance is returned as data (certificate
    failure), never raised.
    """
    xs = np.linspace(0.0, 1.0, grid_points)
    values = gap_g(xs, consts)
    fn = lambda x: float(gap_g(x, consts))
    candidates = _local_max_candidates(fn, values, xs, tol=1e-12)
    merged = _cluster(candidates, sep_tol=1e-6)

    max_gap = max(float(values.max()), max(v for _, v in merged))
    roots = sorted(x for x, v in merged if abs(v) <= 1e-10)
    return max_gap, roots


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of given length summing to total."""
    if parts == 1:
        return np.full((1, 1), total, dtype=np.int64)
    slots = total + parts - 1
    combos = np.array(list(itertools.combinations(range(slots), parts - 1)), dtype=np.int64)
    bounds = np.column_stack([combos, np.full(len(combos), slots, dtype=np.int64)])
    prev = np.column_stack([np.full(len(combos), -1, dtype=np.int64), combos])
    return bounds - prev - 1


def _pairwise_ascent(p: np.ndarray, value: float, fn: Callable[[np.ndarray], float],
                     step0: float) -> tuple[np.ndarray, float]:
    """Coordinate-pair ascent on the simplex with geometrically shrinking steps."""
    d = len(p)
    p = p.copy()
    step = step0
    while step > 1e-10:
        improved = True
        while improved:
            improved = False
            for i in range(d):
                if p[i] < step:
                    continue
                for j in range(d):
                    if i == j:
                        continue
                    trial = p.copy()
                    trial[i] -= step
                    trial[j] += step
                    trial_value = fn(trial)
                    if trial_value > value:
                        p, value = trial, trial_value
                        improved = True
        step *= 0.5
    return p, value


def simplex_bruteforce(spec: CarpetSpec, resolution: int = 40, restarts: int = 8,
                       seed: int = 0) -> tuple[np.ndarray, float]:
    """Maximize the pressure functional over the full weight simplex.

    Exhaustive composition grid at the given resolution, then coordinate-pair
    ascent from the best grid points plus seeded random restarts.
    Deterministic given the seed.  Desk-scale only: the alphabet is capped at
    8 symbols because the grid grows combinatorially; larger alphabets are
    covered exactly by the one-dimensional reduction.
    """
    d = spec.n_maps
    if d > _MAX_SIMPLEX_SYMBOLS:
        raise ValueError(
            f"brute-force simplex search is capped at {_MAX_SIMPLEX_SYMBOLS} symbols, "
            f"got {d}")
    if resolution < 10:
        raise ValueError("resolution must be at least 10")

    grid = _compositions(resolution, d).astype(float) / resolution
    grid_values = pressure_bernoulli_batch(grid, spec)
    order = np.argsort(grid_values)[::-1]

    rng = np.random.default_rng(seed)
    starts = [grid[i] for i in order[:max(restarts, 1)]]
    starts += [rng.dirichlet(np.ones(d)) for _ in range(max(restarts - 1, 0))]

    # Unvalidated single-row evaluator: ascent moves preserve the simplex by
    # construction, and per-call sum checks would reject harmless drift.
    fn = lambda q: float(pressure_bernoulli_batch(q[None, :], spec)[0])
    best_p, best_value = None, -math.inf
    for p0 in starts:
        p0 = np.asarray(p0, dtype=float)
        p, value = _pairwise_ascent(p0, fn(p0), fn, 1.0 / resolution)
        if value > best_value:
            best_p, best_value = p, value
    best_p = best_p / best_p.sum()
    return best_p, pressure_bernoulli(best_p, spec)
