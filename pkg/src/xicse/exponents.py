"""Singularity exponents, jumping numbers, and monomial valuations.

The central reduction: for a finitely supported functional, the singularity
exponent attached to a weight pair is the largest monomial jumping number
over the support indices whose monomials are integrable against the fixed
weight; no integrable index means the exponent is -infinity, and an
infinite coefficient tail means +infinity.

A monomial jumping number c*(alpha) is the threshold

    c* = inf over x >= 0 with g_phi(x) > 0 of
         (<2 alpha + 2, x> - g_psi(x)) / g_phi(x),

a linear-fractional program.  Three routes compute it: closed forms for the
monomial-max and single-piece weights (exact rationals), one fractional LP
for general tropical weights (exact on demand), and a bisection on the
membership sign kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import lp
from ._util import as_fraction
from .core import Functional, Germ, MultiIndex, WeightPair
from .kernels import kernel_curve


@dataclass(frozen=True)
class ExtendedExponent:
    """A value in {-inf} union [0, +inf], with an optional exact rational.

    -infinity arises only when the functional annihilates the fixed-weight
    ideal (or is zero); +infinity only via the infinite-tail flag.  The
    marker records which convention produced a degenerate value.
    """

    value: float
    exact: Fraction | None = None
    marker: str | None = None

    @classmethod
    def finite(cls, value, exact: Fraction | None = None, marker: str | None = None):
        return cls(float(value), exact, marker)

    @classmethod
    def pos_infinity(cls, marker: str = "infinite-tail"):
        return cls(math.inf, None, marker)

    @classmethod
    def neg_infinity(cls, marker: str):
        return cls(-math.inf, None, marker)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def best(self):
        """Exact rational when known, else the float value."""
        return self.exact if self.exact is not None else self.value

    def to_json(self) -> dict:
        if self.value == math.inf:
            out = {"value": "+inf"}
        elif self.value == -math.inf:
            out = {"value": "-inf"}
        else:
            out = {"value": self.value}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        if self.marker is not None:
            out["marker"] = self.marker
        return out


@dataclass(frozen=True)
class Valuation:
    """Monomial valuation with strictly positive direction vector w."""

    w: tuple

    def __init__(self, w):
        wv = tuple(as_fraction(v) for v in w)
        if not wv or any(v <= 0 for v in wv):
            raise ValueError("valuation direction must be strictly positive")
        object.__setattr__(self, "w", wv)

    @property
    def dimension(self) -> int:
        return len(self.w)


# ---------------------------------------------------------------------------
# integrability against the fixed weight
# ---------------------------------------------------------------------------


def _psi_single_piece(weights: WeightPair):
    if weights.psi is None:
        return (Fraction(0),) * weights.dimension
    if len(weights.psi.pieces) == 1:
        return weights.psi.pieces[0]
    return None


def is_psi_integrable(alpha, weights: WeightPair) -> bool:
    """Whether z^alpha has finite squared norm against e^(-psi) near 0."""
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    mu = _psi_single_piece(weights)
    if mu is not None:
        return all(2 * as_fraction(a) + 2 > m for a, m in zip(alpha, mu))
    return lp.ideal_membership(alpha, 0, weights)


# ---------------------------------------------------------------------------
# monomial jumping numbers
# ---------------------------------------------------------------------------


def _closed_form_jump(alpha, weights: WeightPair):
    """Exact rational threshold on the two closed-form routes, else None."""
    mu = _psi_single_piece(weights)
    if mu is None:
        return None
    w = weights.phi.as_monomial_max()
    if w is not None:
        # 2 <alpha + 1 - rho, w> with rho = mu / 2
        return 2 * sum(
            (as_fraction(a) + 1 - m / 2) * wi for a, m, wi in zip(alpha, mu, w)
        )
    if len(weights.phi.pieces) == 1:
        (lam,) = weights.phi.pieces
        candidates = [
            (2 * as_fraction(a) + 2 - m) / l
            for a, m, l in zip(alpha, mu, lam)
            if l != 0
        ]
        return min(candidates)
    return None


def _fractional_jump(alpha, weights: WeightPair, exact: bool):
    base = [2 * as_fraction(a) + 2 for a in alpha]
    numerators = [
        tuple(b - m for b, m in zip(base, mu)) for mu in weights.psi_pieces()
    ]
    denominators = list(weights.phi.pieces)
    value, _ = lp.min_ratio_on_orthant(
        numerators, denominators, weights.dimension, exact=exact
    )
    return value


def _bisection_jump(alpha, weights: WeightPair, tol: float, max_iter: int):
    hi = 1.0
    grow = 0
    while grow < 80 and lp.ideal_membership(alpha, hi, weights, tol=0.0):
        hi *= 2.0
        grow += 1
    if grow >= 80:
        raise ArithmeticError("jumping number bracket did not close")
    lo = hi / 2.0 if grow else 0.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if lp.ideal_membership(alpha, mid, weights, tol=0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def monomial_jumping_number(
    alpha,
    weights: WeightPair,
    *,
    method: str = "auto",
    exact: bool = False,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> ExtendedExponent:
    """Threshold c* below which z^alpha stays in the multiplier ideal.

    Returns 0 with marker 'not-psi-integrable' when the monomial already
    fails integrability against the fixed weight (the sup runs over an
    empty set); these never contribute to a functional's exponent.
    """
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    if alpha.dimension != weights.dimension:
        raise ValueError("alpha dimension mismatch")
    if not is_psi_integrable(alpha, weights):
        return ExtendedExponent.finite(0.0, Fraction(0), marker="not-psi-integrable")
    if method in ("auto", "closed-form"):
        cf = _closed_form_jump(alpha, weights)
        if cf is not None:
            return ExtendedExponent.finite(float(cf), cf)
        if method == "closed-form":
            raise ValueError("no closed form for this weight pair")
    if method in ("auto", "lp"):
        val = _fractional_jump(alpha, weights, exact)
        if exact:
            return ExtendedExponent.finite(float(val), as_fraction(val))
        return ExtendedExponent.finite(val)
    if method == "bisection":
        return ExtendedExponent.finite(_bisection_jump(alpha, weights, tol, max_iter))
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# exponents of functionals and germs
# ---------------------------------------------------------------------------


def _pick(results, reverse: bool):
    """Extreme of a list of finite exponents, exact-aware, ties by index order."""
    if all(r.exact is not None for r in results):
        key = lambda r: r.exact  # noqa: E731
    else:
        key = lambda r: r.value  # noqa: E731
    return (max if reverse else min)(results, key=key)


def gamma(
    xi: Functional,
    weights: WeightPair,
    *,
    method: str = "auto",
    exact: bool = False,
) -> ExtendedExponent:
    """Singularity exponent of the functional against the weight pair.

    Largest monomial jumping number over the integrable support; -infinity
    when no support monomial is integrable against the fixed weight (the
    functional annihilates that ideal) or the functional is zero; +infinity
    for the infinite-tail class.
    """
    if xi.dimension != weights.dimension:
        raise ValueError("functional dimension mismatch")
    if xi.infinite_tail:
        return ExtendedExponent.pos_infinity()
    if xi.is_zero:
        return ExtendedExponent.neg_infinity("zero-functional")
    results = []
    for alpha in xi.support:
        r = monomial_jumping_number(alpha, weights, method=method, exact=exact)
        if r.marker == "not-psi-integrable":
            continue
        results.append(r)
    if not results:
        return ExtendedExponent.neg_infinity("annihilates-psi-ideal")
    return _pick(results, reverse=True)


def jumping_number(
    germ: Germ,
    weights: WeightPair,
    *,
    method: str = "auto",
    exact: bool = False,
) -> ExtendedExponent:
    """Integrability threshold of |F|^2 e^(-c phi - psi): the smallest
    monomial jumping number over the Taylor support (Reinhardt
    orthogonality), 0 with a marker when some support monomial is not even
    psi-integrable."""
    if germ.dimension != weights.dimension:
        raise ValueError("germ dimension mismatch")
    if germ.is_zero:
        raise ValueError("jumping number of the zero germ is undefined")
    results = [
        monomial_jumping_number(alpha, weights, method=method, exact=exact)
        for alpha in germ.support
    ]
    for r in results:
        if r.marker == "not-psi-integrable":
            return r
    return _pick(results, reverse=False)


def cse(weights: WeightPair, *, method: str = "auto", exact: bool = False) -> ExtendedExponent:
    """Integrability threshold of e^(-c phi - psi) itself (the unit germ)."""
    return jumping_number(Germ.one(weights.dimension), weights, method=method, exact=exact)


def ell_I_membership(xi: Functional, c, weights: WeightPair, *, tol: float = lp.DEFAULT_TOL) -> bool:
    """Whether the nonzero functional annihilates the multiplier ideal of
    c*phi + psi (a monomial ideal here: equivalent to no support monomial
    lying in the ideal).

    Infinite-tail functionals return False: their support reaches monomials
    of arbitrarily high degree, and those lie in the ideal for every weight
    in this class.
    """
    if xi.is_zero:
        return False
    if xi.infinite_tail:
        return False
    return not any(
        lp.ideal_membership(alpha, c, weights, tol=tol) for alpha in xi.support
    )


def computing_functional(germ: Germ, weights: WeightPair, *, exact: bool = False) -> Functional:
    """A delta functional eta with (eta . F) != 0 whose exponent equals the
    germ's jumping number exactly: the delta at the support index of minimal
    monomial jumping number (ties broken lexicographically)."""
    if germ.is_zero:
        raise ValueError("no computing functional for the zero germ")
    scored = []
    for alpha in germ.support:
        r = monomial_jumping_number(alpha, weights, exact=exact)
        if r.marker == "not-psi-integrable" or r.best() <= 0:
            raise ValueError(
                "jumping number is zero or undefined; no computing functional"
            )
        scored.append((r, alpha))
    if all(r.exact is not None for r, _ in scored):
        _, best_alpha = min(scored, key=lambda t: (t[0].exact, t[1]))
    else:
        _, best_alpha = min(scored, key=lambda t: (t[0].value, t[1]))
    return Functional.delta(best_alpha)


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


def kiselman(valuation: Valuation, phi) -> Fraction:
    """Directional Lelong-type number of the weight along w: the gauge of
    phi evaluated at w (largest a with phi <= a * monomial-max weight + O(1))."""
    return phi.gauge(valuation.w)


def valuation_of_germ(valuation: Valuation, f: Germ) -> Fraction:
    """min over the Taylor support of <alpha, w>."""
    if f.is_zero:
        raise ValueError("valuation of the zero germ is undefined")
    if f.dimension != valuation.dimension:
        raise ValueError("dimension mismatch")
    return min(
        sum(wi * a for wi, a in zip(valuation.w, alpha)) for alpha in f.support
    )


def valuation_of_functional(valuation: Valuation, xi: Functional):
    """max over the support of <alpha, w>; +inf for infinite tails."""
    if xi.infinite_tail:
        return math.inf
    if xi.is_zero:
        raise ValueError("valuation of the zero functional is undefined")
    if xi.dimension != valuation.dimension:
        raise ValueError("dimension mismatch")
    return max(
        sum(wi * a for wi, a in zip(valuation.w, alpha)) for alpha in xi.support
    )


def thinness(valuation: Valuation) -> Fraction:
    """Sum of the direction entries."""
    return sum(valuation.w)


def valuative_product(nu_phi, nu_xi, a_nu, gamma_value) -> float:
    """nu(phi) / (nu(xi) + A(nu)) * gamma, with the 0 * inf := 0 convention."""
    denom = float(nu_xi) + float(a_nu) if nu_xi != math.inf else math.inf
    ratio = 0.0 if denom == math.inf else float(nu_phi) / denom
    g = gamma_value.value if isinstance(gamma_value, ExtendedExponent) else float(gamma_value)
    if ratio == 0.0:
        return 0.0
    return ratio * g


# ---------------------------------------------------------------------------
# the limit definition, numerically
# ---------------------------------------------------------------------------


def gamma_numeric(
    xi: Functional,
    weights: WeightPair,
    t_max: float,
    points: int = 9,
    *,
    mode: str = "auto",
    samples: int = 100_000,
    seed: int = 0,
):
    """Estimate the exponent from the kernel curve's last secant slope.

    Log-kernel curves are convex, so on the exact route secant slopes
    increase toward the limit and the estimate is a certified lower
    approximation; on the sampled route the lower end is widened by three
    combined standard errors.  Returns (estimate, (lower, upper)) where the
    upper end is the LP-exact exponent.
    """
    if points < 2:
        raise ValueError("need at least two grid points")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    grid = [t_max * i / (points - 1) for i in range(points)]
    curve = kernel_curve(xi, weights, grid, mode=mode, samples=samples, seed=seed)
    est = curve.secant_slopes[-1]
    dt = curve.grid[-1] - curve.grid[-2]
    spread = math.hypot(curve.stderrs[-1], curve.stderrs[-2]) / dt
    lower = est - 3.0 * spread
    upper = gamma(xi, weights).value
    return est, (lower, upper)


__all__ = [
    "ExtendedExponent",
    "Valuation",
    "is_psi_integrable",
    "monomial_jumping_number",
    "gamma",
    "jumping_number",
    "cse",
    "ell_I_membership",
    "computing_functional",
    "kiselman",
    "valuation_of_germ",
    "valuation_of_functional",
    "thinness",
    "valuative_product",
    "gamma_numeric",
]
