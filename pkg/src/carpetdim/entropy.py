"""Entropy functions and the dimension objective for two-row self-affine carpets.

Everything downstream evaluates combinations of two ingredients:

  * the binary entropy H(x) = -x log x - (1-x) log(1-x), and
  * the weighted variational objective

        f(x) = (1/lambda) * (log(ell_a/ell_b) * x + log(ell_b))
               + H(x) / (psi_a * x + psi_b * (1 - x)),

    where x is the marginal weight a Bernoulli measure puts on the first
    symbol family.  The maximum of f over [0, 1] is the Hausdorff dimension
    of the associated carpet, and the maximizing x values pick out the
    measures of full dimension.

For constants (U, V, M) obtained from the construction pipeline the shifted
"gap" function

        g(x) = U x - M + H(x) / (1 + V x)

differs from f only by a constant when psi_b = 1, so certifying g <= 0 with
several roots certifies several maximizers of f.  The quadratic
F(x) = A - B (x - 1/2)^2 majorizes H exactly when g <= 0 holds, which is how
the constructor arranges the two-maxima situation.

All logarithms are natural.  Functions accept scalars or numpy arrays in x
and return matching shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

__all__ = [
    "CarpetSpec",
    "DerivedConstants",
    "binary_entropy",
    "shannon_entropy",
    "objective_f",
    "objective_f_prime",
    "gap_g",
    "majorant_F",
    "curvature",
    "pressure_bernoulli",
    "uniform_conditional_weights",
]

_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class CarpetSpec:
    """The five construction parameters of a two-row carpet.

    lam is the horizontal log-contraction (every map shrinks x by exp(-lam)),
    psi_a / psi_b the vertical log-contractions of the two map families, and
    ell_a / ell_b the number of maps in each family.  All contractions are in
    nats.  Horizontal contraction must dominate both vertical ones.
    """

    lam: float
    ell_a: int
    ell_b: int
    psi_a: float
    psi_b: float

    def __post_init__(self) -> None:
        if self.ell_a < 1 or self.ell_b < 1:
            raise ValueError("ell_a and ell_b must be positive integers")
        if int(self.ell_a) != self.ell_a or int(self.ell_b) != self.ell_b:
            raise ValueError("ell_a and ell_b must be integers")
        if not (self.psi_a > 0 and self.psi_b > 0):
            raise ValueError("psi_a and psi_b must be positive")
        if not (self.lam > self.psi_a and self.lam > self.psi_b):
            raise ValueError(
                f"horizontal contraction must dominate: need lam > max(psi_a, psi_b), "
                f"got lam={self.lam}, psi_a={self.psi_a}, psi_b={self.psi_b}"
            )

    @property
    def n_maps(self) -> int:
        return self.ell_a + self.ell_b


@dataclass(frozen=True)
class DerivedConstants:
    """Intermediate quantities of the construction.

    b_param is the curvature coefficient (must exceed 2 for two maxima),
    a_param the majorant height, and (U, V, M) solve

        U V = B,    M V - U = B,    M = A - B/4,

    which is equivalent to the polynomial identity
    -(Ux - M)(1 + Vx) = A - B(x - 1/2)^2.  The record itself does not
    enforce the identities (tests deliberately build broken constants);
    call validate() to check them.
    """

    b_param: float
    a_param: float
    u_param: float
    v_param: float
    m_param: float

    def identity_residuals(self) -> dict[str, float]:
        """Residuals of the three defining identities (all ~0 for valid constants)."""
        return {
            "uv_minus_b": self.u_param * self.v_param - self.b_param,
            "mv_minus_u_minus_b": self.m_param * self.v_param - self.u_param - self.b_param,
            "m_minus_a_plus_b4": self.m_param - (self.a_param - self.b_param / 4.0),
        }

    def validate(self, tol: float = _IDENTITY_TOL) -> None:
        residuals = self.identity_residuals()
        bad = {k: v for k, v in residuals.items() if abs(v) > tol}
        if bad:
            raise ValueError(f"derived constants violate defining identities: {bad}")
        if self.v_param <= 0:
            raise ValueError(f"v_param must be positive, got {self.v_param}")
        if self.m_param < 0:
            raise ValueError(f"m_param must be nonnegative, got {self.m_param}")


def binary_entropy(x):
    """H(x) = -x log x - (1-x) log(1-x) in nats, with H(0) = H(1) = 0.

    Accepts scalars or arrays in [0, 1]; raises on values outside.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("binary_entropy requires 0 <= x <= 1")
    val = -xlogy(arr, arr) - xlogy(1.0 - arr, 1.0 - arr)
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def shannon_entropy(p) -> float:
    """Entropy -sum p_i log p_i of a probability vector, with 0 log 0 = 0."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("probability components must be nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"probability vector must sum to 1, got {total!r}")
    return float(-xlogy(arr, arr).sum())


def objective_f(x, spec: CarpetSpec):
    """The dimension objective f(x) for marginal weight x on the first family.

    f(x) = (1/lam) (log(ell_a/ell_b) x + log ell_b) + H(x) / (psi_a x + psi_b (1-x)).
    The denominator is positive on [0, 1] because psi_a, psi_b > 0.
    """
    arr = np.asarray(x, dtype=float)
    h = binary_entropy(arr)
    log_ratio = np.log(spec.ell_a / spec.ell_b)
    linear = (log_ratio * arr + np.log(spec.ell_b)) / spec.lam
    denom = spec.psi_a * arr + spec.psi_b * (1.0 - arr)
    val = linear + h / denom
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def objective_f_prime(x, spec: CarpetSpec):
    """Analytic derivative of objective_f; valid on the open interval (0, 1)."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("derivative requires 0 < x < 1")
    h = binary_entropy(arr)
    h_prime = np.log((1.0 - arr) / arr)
    denom = spec.psi_a * arr + spec.psi_b * (1.0 - arr)
    d_denom = spec.psi_a - spec.psi_b
    val = np.log(spec.ell_a / spec.ell_b) / spec.lam + (h_prime * denom - h * d_denom) / denom**2
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def gap_g(x, consts: DerivedConstants):
    """g(x) = U x - M + H(x) / (1 + V x).

    Nonpositive everywhere on [0, 1] exactly when the quadratic majorant
    dominates H; its roots are the maximizers of the dimension objective.
    """
    arr = np.asarray(x, dtype=float)
    h = binary_entropy(arr)
    denom = 1.0 + consts.v_param * arr
    if np.any(denom <= 0.0):
        raise ValueError("gap function undefined: 1 + V x must stay positive on [0, 1]")
    val = consts.u_param * arr - consts.m_param + h / denom
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def majorant_F(x, a_param: float, b_param: float):
    """Quadratic majorant F(x) = A - B (x - 1/2)^2."""
    arr = np.asarray(x, dtype=float)
    val = a_param - b_param * (arr - 0.5) ** 2
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def curvature(second_deriv: float, first_deriv: float) -> float:
    """Curvature |h''| / (1 + h'^2)^(3/2) from exact derivative values.

    Takes derivative values rather than a function so the result is exact at
    points where closed forms exist (e.g. 4 for the binary entropy at 1/2,
    and 2B for the quadratic majorant there).
    """
    return abs(second_deriv) / (1.0 + first_deriv**2) ** 1.5


def pressure_bernoulli(p, spec: CarpetSpec) -> float:
    """Full two-term functional at the Bernoulli measure with weights p.

    With x = sum of the first ell_a components,

        (h(p) - H(x)) / lam + H(x) / (psi_a x + psi_b (1-x)).

    For fixed x this is maximized by uniform weights within each family, and
    the maximum equals objective_f(x, spec); the gap to that bound is what
    the simplex oracle probes.
    """
    arr = np.asarray(p, dtype=float)
    if arr.shape != (spec.n_maps,):
        raise ValueError(
            f"weight vector must have length ell_a + ell_b = {spec.n_maps}, got shape {arr.shape}"
        )
    h_full = shannon_entropy(arr)
    x = float(arr[: spec.ell_a].sum())
    x = min(max(x, 0.0), 1.0)  # guard roundoff at the simplex boundary
    h_marg = binary_entropy(x)
    denom = spec.psi_a * x + spec.psi_b * (1.0 - x)
    return (h_full - h_marg) / spec.lam + h_marg / denom


def pressure_bernoulli_batch(p_batch: np.ndarray, spec: CarpetSpec) -> np.ndarray:
    """Vectorized pressure_bernoulli over rows of an (n, ell_a + ell_b) array.

    Rows must already be valid probability vectors; used by the grid-search
    oracle where per-row validation would dominate runtime.
    """
    arr = np.asarray(p_batch, dtype=float)
    h_full = -xlogy(arr, arr).sum(axis=1)
    x = np.clip(arr[:, : spec.ell_a].sum(axis=1), 0.0, 1.0)
    h_marg = binary_entropy(x)
    denom = spec.psi_a * x + spec.psi_b * (1.0 - x)
    return (h_full - h_marg) / spec.lam + h_marg / denom


def uniform_conditional_weights(spec: CarpetSpec, marginal_x: float) -> np.ndarray:
    """Weight vector with marginal x on the first family and uniform conditionals.

    This is the shape of every optimal Bernoulli measure: mass x spread evenly
    over the ell_a first-family maps, mass 1-x evenly over the rest.
    """
    if not 0.0 <= marginal_x <= 1.0:
        raise ValueError("marginal weight must lie in [0, 1]")
    return np.concatenate(
        [
            np.full(spec.ell_a, marginal_x / spec.ell_a),
            np.full(spec.ell_b, (1.0 - marginal_x) / spec.ell_b),
        ]
    )
