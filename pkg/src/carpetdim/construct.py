"""Synthesize a full carpet parameter set from a single curvature input B > 2.

The pipeline runs in one direction and every stage is checked:

    B  ->  A = max over [0,1] of rho(x) = B(x - 1/2)^2 + H(x)   (root-find)
       ->  V = (2B + 4 sqrt(AB)) / (4A - B)                     (positive root)
       ->  U = sqrt(AB) - B/2
       ->  M = A - B/4
       ->  psi_b = 1,  psi_a = 1 + V
       ->  integers ell_a, ell_b with log(ell_a/ell_b) > (1+V) B / V
       ->  lambda = log(ell_a/ell_b) V / B        (forces lambda > 1 + V)

B > 2 makes the quadratic majorant A - B(x - 1/2)^2 curve more sharply at
x = 1/2 than the binary entropy, so the two touch at a symmetric pair of
interior points instead of at 1/2 alone; those tangency points become the
two maximizers of the dimension objective.  A is computed by bisection on
rho' so the tangency survives at machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import CarpetSpec, DerivedConstants, binary_entropy

__all__ = [
    "ConstructionError",
    "ConstructionOptions",
    "FeasibilityReport",
    "compute_A",
    "compute_V",
    "compute_U",
    "choose_alphabet",
    "compute_lambda",
    "synthesize",
    "validate_feasibility",
]

CANONICAL_ALPHABET = (150, 1)

_STRATEGIES = ("canonical", "minimal", "explicit")


class ConstructionError(ValueError):
    """A stage of the construction pipeline rejected its input."""


@dataclass(frozen=True)
class ConstructionOptions:
    """Knobs for the pipeline.

    alphabet_strategy: "canonical" uses the fixed alphabet (150, 1);
    "minimal" picks the smallest ell_a with ell_b = 1 satisfying the
    alphabet inequality; "explicit" validates user-supplied (ell_a, ell_b).
    """

    alphabet_strategy: str = "canonical"
    ell_a: int | None = None
    ell_b: int | None = None
    root_tolerance: float = 1e-12
    grid_points: int = 4096

    def __post_init__(self) -> None:
        if self.alphabet_strategy not in _STRATEGIES:
            raise ValueError(f"unknown alphabet strategy {self.alphabet_strategy!r}; "
                             f"expected one of {_STRATEGIES}")
        if not (0.0 < self.root_tolerance <= 1e-6):
            raise ValueError("root_tolerance must lie in (0, 1e-6]")
        if self.grid_points < 64:
            raise ValueError("grid_points must be at least 64")
        if self.alphabet_strategy == "explicit" and (self.ell_a is None or self.ell_b is None):
            raise ValueError("explicit strategy requires ell_a and ell_b")


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the five feasibility checks, with one margin per check.

    Margins measure distance into the feasible region; positive means pass.
    """

    lambda_exceeds_psi: bool
    horizontal_fit: bool
    vertical_fit: bool
    alphabet_inequality: bool
    lambda_exceeds_one_plus_v: bool
    margins: dict[str, float]

    @property
    def all_pass(self) -> bool:
        return (self.lambda_exceeds_psi and self.horizontal_fit and self.vertical_fit
                and self.alphabet_inequality and self.lambda_exceeds_one_plus_v)


def _rho(x: float, b_param: float) -> float:
    return b_param * (x - 0.5) ** 2 + float(binary_entropy(x))


def _rho_prime(x: float, b_param: float) -> float:
    return 2.0 * b_param * (x - 0.5) + math.log((1.0 - x) / x)


def compute_A(b_param: float, opts: ConstructionOptions = ConstructionOptions(),
              check_curvature: bool = True) -> tuple[float, float]:
    """Maximum A of rho(x) = B(x-1/2)^2 + H(x) over [0,1] and its argmax in (0, 1/2].

    For B > 2 the maximum sits at a symmetric pair of interior points; the
    returned argmax is the left one, found by bisection on rho' after a scan
    brackets its sign change.  By symmetry 1 - argmax attains the same value.
    B <= 2 is rejected unless check_curvature is False, in which case the
    maximum is the midpoint (rho is then concave around 1/2).
    """
    if check_curvature and not b_param > 2.0:
        raise ConstructionError(
            f"curvature condition violated: need B > 2, got B = {b_param}")
    if b_param <= 0.0:
        raise ConstructionError(f"curvature coefficient must be positive, got {b_param}")

    # Bracket the sign change of rho' on (0, 1/2).  rho' -> +inf at 0+ and is
    # negative just left of 1/2 precisely when B > 2.
    lo = hi = None
    xs = np.linspace(1e-9, 0.5 - 1e-9, opts.grid_points)
    signs = 2.0 * b_param * (xs - 0.5) + np.log((1.0 - xs) / xs)
    idx = np.nonzero((signs[:-1] > 0.0) & (signs[1:] <= 0.0))[0]
    if idx.size:
        lo, hi = float(xs[idx[0]]), float(xs[idx[0] + 1])
    else:
        # B barely above 2: the negative dip hugs 1/2 tighter than the grid.
        # Probe geometrically shrinking offsets from the midpoint.
        width = 0.25
        while width > 1e-13:
            x = 0.5 - width
            if _rho_prime(x, b_param) < 0.0:
                lo, hi = x / 2.0, x
                while _rho_prime(lo, b_param) <= 0.0 and lo > 1e-12:
                    lo /= 2.0
                break
            width /= 4.0

    if lo is None:
        # No interior sign change: rho increases up to the midpoint.
        argmax = 0.5
        return _rho(argmax, b_param), argmax

    while hi - lo > opts.root_tolerance:
        mid = 0.5 * (lo + hi)
        if _rho_prime(mid, b_param) > 0.0:
            lo = mid
        else:
            hi = mid
    argmax = 0.5 * (lo + hi)
    return _rho(argmax, b_param), argmax


def compute_V(a_param: float, b_param: float) -> float:
    """Positive root V of (A - B/4) V^2 - B V - B = 0, i.e. (2B + 4 sqrt(AB)) / (4A - B)."""
    if a_param <= 0.0 or b_param <= 0.0:
        raise ConstructionError("A and B must be positive")
    denom = 4.0 * a_param - b_param
    if abs(denom) < 1e-14:
        raise ConstructionError(f"degenerate denominator 4A - B = {denom}")
    if denom < 0.0:
        raise ConstructionError(
            f"construction failure: 4A - B = {denom} < 0, no positive root exists")
    v = (2.0 * b_param + 4.0 * math.sqrt(a_param * b_param)) / denom
    residual = (a_param - b_param / 4.0) * v * v - b_param * v - b_param
    if abs(residual) >= 1e-10:
        raise ConstructionError(f"quadratic residual {residual} at V = {v} exceeds 1e-10")
    return v


def compute_U(a_param: float, b_param: float) -> float:
    """U = sqrt(AB) - B/2, cross-checked against U * V = B."""
    if a_param <= 0.0 or b_param <= 0.0:
        raise ConstructionError("A and B must be positive")
    u = math.sqrt(a_param * b_param) - b_param / 2.0
    v = compute_V(a_param, b_param)
    if abs(u * v - b_param) >= 1e-10:
        raise ConstructionError(f"identity U*V = B violated: {u * v} vs {b_param}")
    return u


def choose_alphabet(v_param: float, b_param: float,
                    opts: ConstructionOptions = ConstructionOptions()) -> tuple[int, int]:
    """Integers (ell_a, ell_b) with log(ell_a/ell_b) strictly above (1+V) B / V."""
    if v_param <= 0.0:
        raise ConstructionError(f"V must be positive, got {v_param}")
    bound = (1.0 + v_param) / v_param * b_param

    if opts.alphabet_strategy == "canonical":
        ell_a, ell_b = CANONICAL_ALPHABET
    elif opts.alphabet_strategy == "minimal":
        if bound > 50.0:
            raise ConstructionError(
                f"alphabet bound {bound} requires more than e^50 symbols")
        ell_b = 1
        ell_a = max(int(math.exp(bound)), 1)
        while math.log(ell_a) <= bound:
            ell_a += 1
    else:
        ell_a, ell_b = int(opts.ell_a), int(opts.ell_b)
        if ell_a < 1 or ell_b < 1:
            raise ConstructionError("explicit alphabet sizes must be positive integers")

    if not math.log(ell_a / ell_b) > bound:
        raise ConstructionError(
            f"alphabet inequality violated: log({ell_a}/{ell_b}) = "
            f"{math.log(ell_a / ell_b)} must exceed (1+V)B/V = {bound}")
    return ell_a, ell_b


def compute_lambda(ell_a: int, ell_b: int, v_param: float, b_param: float) -> float:
    """lambda = log(ell_a/ell_b) V / B; the alphabet inequality forces lambda > 1 + V."""
    if min(ell_a, ell_b) < 1 or v_param <= 0.0 or b_param <= 0.0:
        raise ConstructionError("inputs to compute_lambda must be positive")
    lam = math.log(ell_a / ell_b) * v_param / b_param
    if not lam > 1.0 + v_param:
        raise ConstructionError(
            f"construction inconsistency: lambda = {lam} must exceed 1 + V = {1.0 + v_param}; "
            "the alphabet inequality was not actually satisfied")
    return lam


def synthesize(b_param: float, opts: ConstructionOptions = ConstructionOptions(),
               check_curvature: bool = True
               ) -> tuple[CarpetSpec, DerivedConstants, FeasibilityReport]:
    """Run the whole pipeline from B; returns (spec, constants, feasibility report).

    Any stage error propagates; a spec is only returned once every derived
    identity has been checked.  Feasibility findings are reported, not raised.
    """
    a_param, _ = compute_A(b_param, opts, check_curvature=check_curvature)
    v_param = compute_V(a_param, b_param)
    u_param = compute_U(a_param, b_param)
    m_param = a_param - b_param / 4.0
    consts = DerivedConstants(b_param=b_param, a_param=a_param, u_param=u_param,
                              v_param=v_param, m_param=m_param)
    consts.validate()

    psi_b = 1.0
    psi_a = 1.0 + v_param
    ell_a, ell_b = choose_alphabet(v_param, b_param, opts)
    lam = compute_lambda(ell_a, ell_b, v_param, b_param)
    spec = CarpetSpec(lam=lam, ell_a=ell_a, ell_b=ell_b, psi_a=psi_a, psi_b=psi_b)
    report = validate_feasibility(spec, consts)
    return spec, consts, report


def validate_feasibility(spec: CarpetSpec, consts: DerivedConstants) -> FeasibilityReport:
    """Evaluate the five feasibility inequalities; failures are reported, never raised."""
    margins = {
        "lambda_exceeds_psi": spec.lam - max(spec.psi_a, spec.psi_b),
        "horizontal_fit": 1.0 - 3.0 * math.exp(-spec.lam) * spec.ell_a,
        "vertical_fit": 1.0 - (math.exp(-spec.psi_a) + math.exp(-spec.psi_b)),
        "alphabet_inequality": (math.log(spec.ell_a / spec.ell_b)
                                - (1.0 + consts.v_param) / consts.v_param * consts.b_param),
        "lambda_exceeds_one_plus_v": spec.lam - (1.0 + consts.v_param),
    }
    return FeasibilityReport(
        lambda_exceeds_psi=margins["lambda_exceeds_psi"] > 0.0,
        horizontal_fit=margins["horizontal_fit"] > 0.0,
        vertical_fit=margins["vertical_fit"] > 0.0,
        alphabet_inequality=margins["alphabet_inequality"] > 0.0,
        lambda_exceeds_one_plus_v=margins["lambda_exceeds_one_plus_v"] > 0.0,
        margins=margins,
    )
