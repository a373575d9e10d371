"""Planar iterated function system built from a carpet parameter set.

Every map contracts the unit square diagonally: x shrinks by exp(-lambda),
y by exp(-psi_a) or exp(-psi_b) depending on the family.  Maps occupy
distinct columns with one empty column between neighbours (column k starts
at 2(k-1) exp(-lambda)); the first family sits on the floor of the square,
the second hangs from the ceiling.  First-level images must be pairwise
disjoint and inside the square, which the feasibility inequalities
guarantee for synthesized parameters.

Also provides the empirical side: depth rendering of the attractor, chaos
game sampling of a Bernoulli measure on it, and a dyadic box-counting
dimension estimator.  For synthesized counterexample carpets the horizontal
contraction is so extreme (exp(-lambda) < 1e-13) that no raster or sample
resolves the column structure; the estimator is therefore validated on
classical sets with known dimension, while the carpet's dimension itself is
certified analytically through the maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import CarpetSpec
from .maximize import global_maxima

__all__ = [
    "GeometryError",
    "AffineMap",
    "IfsSpec",
    "BoxCountReport",
    "build_ifs",
    "hausdorff_dimension",
    "depth_rectangles",
    "rasterize",
    "chaos_game",
    "box_count",
]

_CONTAINMENT_SLACK = 1e-15
DEFAULT_RECT_CAP = 10_000_000


class GeometryError(ValueError):
    """The map collection violates disjointness, containment, or a resource cap."""


@dataclass(frozen=True)
class AffineMap:
    """One diagonal contraction (x, y) -> (cx * x + tx, cy * y + ty) of the unit square."""

    contract_x: float
    contract_y: float
    translate_x: float
    translate_y: float
    family: str
    index: int

    def __post_init__(self) -> None:
        if not (0.0 < self.contract_x < 1.0 and 0.0 < self.contract_y < 1.0):
            raise ValueError("contraction factors must lie in (0, 1)")
        if not (0.0 <= self.translate_x < 1.0 and 0.0 <= self.translate_y < 1.0):
            raise ValueError("translations must lie in [0, 1)")
        if self.family not in ("a", "b"):
            raise ValueError(f"family must be 'a' or 'b', got {self.family!r}")
        if (self.translate_x + self.contract_x > 1.0 + _CONTAINMENT_SLACK
                or self.translate_y + self.contract_y > 1.0 + _CONTAINMENT_SLACK):
            raise ValueError("image of the unit square escapes the unit square")

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return self.contract_x * x + self.translate_x, self.contract_y * y + self.translate_y

    @property
    def fixed_point(self) -> tuple[float, float]:
        return (self.translate_x / (1.0 - self.contract_x),
                self.translate_y / (1.0 - self.contract_y))


@dataclass(frozen=True)
class IfsSpec:
    """The full map collection together with the parameters it came from."""

    maps: tuple[AffineMap, ...]
    source: CarpetSpec

    def __post_init__(self) -> None:
        if len(self.maps) != self.source.n_maps:
            raise ValueError(
                f"expected {self.source.n_maps} maps, got {len(self.maps)}")

    @property
    def n_maps(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class BoxCountReport:
    """Dyadic box counts across scales and the fitted scaling exponent."""

    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    r_squared: float


def _first_level_rects(maps: tuple[AffineMap, ...]) -> np.ndarray:
    """(n, 4) array of (x0, y0, width, height) images of the unit square."""
    return np.array([[m.translate_x, m.translate_y, m.contract_x, m.contract_y]
                     for m in maps])


def _check_disjoint(rects: np.ndarray) -> None:
    """Raise unless all rectangle interiors are pairwise disjoint."""
    x0, y0, w, h = rects[:, 0], rects[:, 1], rects[:, 2], rects[:, 3]
    overlap_x = (np.minimum.outer(x0 + w, x0 + w) - np.maximum.outer(x0, x0))
    overlap_y = (np.minimum.outer(y0 + h, y0 + h) - np.maximum.outer(y0, y0))
    collide = (overlap_x > _CONTAINMENT_SLACK) & (overlap_y > _CONTAINMENT_SLACK)
    np.fill_diagonal(collide, False)
    if collide.any():
        i, j = np.argwhere(collide)[0]
        raise GeometryError(f"first-level rectangles {i} and {j} overlap")


def build_ifs(spec: CarpetSpec) -> IfsSpec:
    """Construct the maps for a parameter set and verify their geometry.

    Column k (1-based, running over both families) is translated to
    2(k-1) exp(-lambda); family-a maps take columns 1..ell_a at the bottom,
    family-b maps the remaining columns at height 1 - exp(-psi_b).
    """
    cx = math.exp(-spec.lam)
    cy_a = math.exp(-spec.psi_a)
    cy_b = math.exp(-spec.psi_b)

    rightmost = (2 * (spec.n_maps - 1) + 1) * cx
    if rightmost > 1.0 + _CONTAINMENT_SLACK:
        raise GeometryError(
            f"columns escape the unit square: last column ends at {rightmost}; "
            "the horizontal feasibility inequality does not hold")

    maps = []
    try:
        for r in range(1, spec.ell_a + 1):
            maps.append(AffineMap(contract_x=cx, contract_y=cy_a,
                                  translate_x=2 * (r - 1) * cx, translate_y=0.0,
                                  family="a", index=r))
        for s in range(1, spec.ell_b + 1):
            k = spec.ell_a + s
            maps.append(AffineMap(contract_x=cx, contract_y=cy_b,
                                  translate_x=2 * (k - 1) * cx,
                                  translate_y=1.0 - cy_b,
                                  family="b", index=s))
    except ValueError as exc:
        raise GeometryError(str(exc)) from exc

    maps = tuple(maps)
    _check_disjoint(_first_level_rects(maps))
    return IfsSpec(maps=maps, source=spec)


def hausdorff_dimension(spec: CarpetSpec) -> float:
    """Dimension of the attractor: the certified maximum of the objective."""
    return global_maxima(spec).global_value


def depth_rectangles(ifs: IfsSpec, depth: int, cap: int = DEFAULT_RECT_CAP) -> np.ndarray:
    """(n_maps^depth, 4) array of depth-fold images (x0, y0, width, height) of the square."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    n_final = ifs.n_maps ** depth
    if n_final > cap:
        raise GeometryError(
            f"{ifs.n_maps}^{depth} = {n_final} rectangles exceed the cap of {cap}")

    scale = np.array([[m.contract_x, m.contract_y, m.contract_x, m.contract_y]
                      for m in ifs.maps])
    shift = np.array([[m.translate_x, m.translate_y, 0.0, 0.0] for m in ifs.maps])
    rects = np.array([[0.0, 0.0, 1.0, 1.0]])
    for _ in range(depth):
        rects = (rects[None, :, :] * scale[:, None, :] + shift[:, None, :]).reshape(-1, 4)
    return rects


def rasterize(ifs: IfsSpec, depth: int, width_px: int, height_px: int,
              cap: int = DEFAULT_RECT_CAP) -> np.ndarray:
    """Boolean occupancy image of the depth-n approximation of the attractor.

    Row 0 is the top of the square (y near 1).  Rectangles thinner than one
    pixel still mark a one-pixel strip, so extremely anisotropic carpets
    remain visible.  Deterministic.
    """
    if width_px < 16 or height_px < 16:
        raise ValueError("pixel dimensions must be at least 16")
    rects = depth_rectangles(ifs, depth, cap)

    ix0 = np.floor(rects[:, 0] * width_px).astype(int)
    iy0 = np.floor(rects[:, 1] * height_px).astype(int)
    ix1 = np.ceil((rects[:, 0] + rects[:, 2]) * width_px).astype(int)
    iy1 = np.ceil((rects[:, 1] + rects[:, 3]) * height_px).astype(int)
    ix0 = np.clip(ix0, 0, width_px - 1)
    iy0 = np.clip(iy0, 0, height_px - 1)
    ix1 = np.clip(np.maximum(ix1, ix0 + 1), 1, width_px)
    iy1 = np.clip(np.maximum(iy1, iy0 + 1), 1, height_px)

    grid = np.zeros((height_px, width_px), dtype=bool)
    for x0, y0, x1, y1 in zip(ix0, iy0, ix1, iy1):
        # y axis points up; image rows count down from the top
        grid[height_px - y1:height_px - y0, x0:x1] = True
    return grid


def chaos_game(ifs, weights, n_points: int, burn_in: int = 100,
               seed: int = 0) -> np.ndarray:
    """Sample the stationary measure by random iteration of the maps.

    Draws map indices from the weight vector with a seeded generator, iterates
    from the square's centre, discards burn_in points, and returns exactly
    n_points points, all inside the unit square.  Accepts an IfsSpec or any
    sequence of AffineMap, so classical reference systems (corner maps for
    Cantor dust, say) can be sampled without a carpet parameter set.
    """
    maps = tuple(ifs.maps) if isinstance(ifs, IfsSpec) else tuple(ifs)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(maps),):
        raise ValueError(f"weights must have length {len(maps)}, got shape {w.shape}")
    if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector")
    if n_points < 1:
        raise ValueError("n_points must be positive")

    rng = np.random.default_rng(seed)
    indices = rng.choice(len(maps), size=n_points + burn_in, p=w).tolist()
    cx = [m.contract_x for m in maps]
    cy = [m.contract_y for m in maps]
    tx = [m.translate_x for m in maps]
    ty = [m.translate_y for m in maps]

    x, y = 0.5, 0.5
    out = []
    for k, i in enumerate(indices):
        x = cx[i] * x + tx[i]
        y = cy[i] * y + ty[i]
        if k >= burn_in:
            out.append((x, y))
    return np.array(out)


def box_count(points, k_min: int = 1, k_max: int = 10) -> BoxCountReport:
    """Count occupied dyadic boxes of side 2^-k and fit the scaling exponent.

    Fits log(count) against k log 2 by least squares; the slope is the
    box-counting dimension estimate and r_squared the fit quality.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    if len(pts) < 1000:
        raise ValueError("need at least 1000 points for a dimension estimate")
    if not (1 <= k_min < k_max <= 16):
        raise ValueError("need 1 <= k_min < k_max <= 16")
    if np.ptp(pts[:, 0]) == 0.0 and np.ptp(pts[:, 1]) == 0.0:
        raise ValueError("degenerate input: all points identical")

    scales, counts = [], []
    for k in range(k_min, k_max + 1):
        n = 1 << k
        ix = np.clip((pts[:, 0] * n).astype(np.int64), 0, n - 1)
        iy = np.clip((pts[:, 1] * n).astype(np.int64), 0, n - 1)
        counts.append(int(len(np.unique(ix * n + iy))))
        scales.append(2.0 ** -k)

    ks = np.arange(k_min, k_max + 1)
    xs = ks * math.log(2.0)
    ys = np.log(counts)
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = slope * xs + intercept
    ss_res = float(((ys - fitted) ** 2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return BoxCountReport(scales=tuple(scales), counts=tuple(counts),
                          slope=float(slope), r_squared=float(r_squared))
