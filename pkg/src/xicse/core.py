"""Domain types: toric weights on the unit polydisc, coefficient functionals,
holomorphic germs, and the algebraic constructions connecting them.

A weight is phi(z) = offset + max_j sum_i lambda_{j,i} log|z_i| with
lambda_j >= 0 componentwise and lambda_j != 0, so phi <= offset on the
polydisc and phi(origin) = -infinity.  In log coordinates x_i = -log|z_i|
the weight is offset - g(x) with gauge g(x) = min_j <lambda_j, x>, a
nonnegative, concave, positively homogeneous piecewise-linear function.
All exponent computations happen on the gauge side.

Values are stored as exact rationals (floats convert exactly), pieces are
canonicalized at construction (duplicates and dominated pieces removed,
lexicographic order), and every type is immutable, so equality of weights
is plain piece-set comparison and everything is safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from . import lp
from ._util import as_fraction


class DimensionMismatchError(ValueError):
    """Operands live over polydiscs of different dimensions."""


class InfiniteTailError(ValueError):
    """Operation undefined for functionals flagged with an infinite tail."""


class RestrictionMinusInfinityError(ValueError):
    """Restricting the weight kills every piece: the restriction is
    identically -infinity and not a valid weight."""


class MultiIndex(tuple):
    """Monomial exponent vector: a fixed-length tuple of nonnegative ints."""

    def __new__(cls, entries: Iterable[int]):
        vals = tuple(int(e) for e in entries)
        if not vals:
            raise ValueError("multi-index needs at least one entry")
        if any(e < 0 for e in vals):
            raise ValueError(f"negative multi-index entry in {vals}")
        return super().__new__(cls, vals)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)


def _normalize_terms(coefficients, dimension):
    terms = []
    for key, val in coefficients.items():
        idx = key if isinstance(key, MultiIndex) else MultiIndex(key)
        if idx.dimension != dimension:
            raise DimensionMismatchError(
                f"index {tuple(idx)} has dimension {idx.dimension}, expected {dimension}"
            )
        val = complex(val)
        if val != 0:
            terms.append((idx, val))
    terms.sort(key=lambda t: t[0])
    return tuple(terms)


@dataclass(frozen=True)
class Functional:
    """Finitely supported coefficient functional xi acting on germs.

    ``infinite_tail`` marks a functional whose stored coefficients are only
    the explicit finite part of a sequence with unbounded support; such
    functionals cannot be paired against germs (no concrete tail model), and
    the exponent routines treat them via the +infinity convention.
    """

    dimension: int
    terms: tuple = ()
    infinite_tail: bool = False

    def __init__(self, dimension, coefficients: Mapping = (), infinite_tail: bool = False):
        object.__setattr__(self, "dimension", int(dimension))
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        coeffs = dict(coefficients) if not isinstance(coefficients, Mapping) else coefficients
        object.__setattr__(self, "terms", _normalize_terms(coeffs, self.dimension))
        object.__setattr__(self, "infinite_tail", bool(infinite_tail))

    @classmethod
    def delta(cls, alpha) -> "Functional":
        idx = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
        return cls(idx.dimension, {idx: 1.0})

    @property
    def support(self) -> tuple:
        return tuple(idx for idx, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.infinite_tail

    def coefficient(self, alpha) -> complex:
        key = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
        return self._lookup.get(key, 0j)

    @cached_property
    def _lookup(self) -> dict:
        return dict(self.terms)


@dataclass(frozen=True)
class Germ:
    """Holomorphic germ at the origin with finite Taylor support."""

    dimension: int
    terms: tuple = ()

    def __init__(self, dimension, coefficients: Mapping = ()):
        object.__setattr__(self, "dimension", int(dimension))
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        coeffs = dict(coefficients) if not isinstance(coefficients, Mapping) else coefficients
        object.__setattr__(self, "terms", _normalize_terms(coeffs, self.dimension))

    @classmethod
    def one(cls, dimension: int) -> "Germ":
        return cls(dimension, {MultiIndex((0,) * dimension): 1.0})

    @property
    def support(self) -> tuple:
        return tuple(idx for idx, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha) -> complex:
        key = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
        return self._lookup.get(key, 0j)

    @cached_property
    def _lookup(self) -> dict:
        return dict(self.terms)


@dataclass(frozen=True)
class TropicalWeight:
    """phi(z) = offset + max_j sum_i lambda_{j,i} log|z_i| on the polydisc.

    Pieces are nonnegative, nonzero vectors; construction prunes duplicates
    and dominated pieces (an LP decision), so two weights are equal exactly
    when their gauges agree everywhere.
    """

    pieces: tuple
    offset: Fraction
    dimension: int

    def __init__(self, pieces, offset=0):
        raw = [tuple(as_fraction(v) for v in p) for p in pieces]
        if not raw:
            raise ValueError("weight needs at least one piece")
        n = len(raw[0])
        if n < 1:
            raise ValueError("dimension must be >= 1")
        for p in raw:
            if len(p) != n:
                raise DimensionMismatchError("pieces of unequal length")
            if any(v < 0 for v in p):
                raise ValueError(f"negative piece entry in {p}")
            if all(v == 0 for v in p):
                raise ValueError("zero piece not allowed (weight must blow up at the origin)")
        object.__setattr__(self, "pieces", lp.prune_pieces(raw, n))
        object.__setattr__(self, "offset", as_fraction(offset))
        object.__setattr__(self, "dimension", n)

    @classmethod
    def monomial_max(cls, w) -> "TropicalWeight":
        """max_i (1/w_i) log|z_i|, the monomial-max weight with parameters w."""
        wv = [as_fraction(v) for v in w]
        if any(v <= 0 for v in wv):
            raise ValueError("monomial-max parameters must be positive")
        n = len(wv)
        pieces = []
        for i, wi in enumerate(wv):
            p = [Fraction(0)] * n
            p[i] = 1 / wi
            pieces.append(p)
        return cls(pieces)

    @cached_property
    def pieces_float(self):
        import numpy as np

        return np.array([[float(v) for v in p] for p in self.pieces], dtype=np.float64)

    def as_monomial_max(self):
        """Parameters w when the canonical pieces are exactly one axis vector
        per coordinate, else None."""
        if len(self.pieces) != self.dimension:
            return None
        w = [None] * self.dimension
        for p in self.pieces:
            nz = [i for i, v in enumerate(p) if v != 0]
            if len(nz) != 1:
                return None
            i = nz[0]
            if w[i] is not None:
                return None
            w[i] = 1 / p[i]
        if any(v is None for v in w):
            return None
        return tuple(w)

    def newton_body(self) -> lp.NewtonBody:
        return lp.NewtonBody(self.pieces, self.dimension)

    def gauge(self, x) -> Fraction:
        """min_j <lambda_j, x> for x >= 0 componentwise."""
        xv = [as_fraction(v) for v in x]
        if len(xv) != self.dimension:
            raise DimensionMismatchError("point dimension mismatch")
        if any(v < 0 for v in xv):
            raise ValueError("gauge requires x >= 0 componentwise")
        return min(sum(l * v for l, v in zip(p, xv)) for p in self.pieces)


def weight_eval_log(phi: TropicalWeight, x) -> float:
    """Gauge value g(x) = min_j <lambda_j, x> at a nonnegative log-point."""
    return float(phi.gauge(x))


ZERO_WEIGHT = None  # the constant-zero fixed weight psi


@dataclass(frozen=True)
class WeightPair:
    """(phi, psi): the singular weight plus the fixed weight.

    psi is either a TropicalWeight or None for the constant-zero weight.
    """

    phi: TropicalWeight
    psi: TropicalWeight | None = None

    def __post_init__(self):
        if self.psi is not None and self.psi.dimension != self.phi.dimension:
            raise DimensionMismatchError("phi and psi dimensions differ")

    @property
    def dimension(self) -> int:
        return self.phi.dimension

    def psi_pieces(self) -> tuple:
        """Gauge pieces of psi; the zero weight contributes the zero form."""
        if self.psi is None:
            return ((Fraction(0),) * self.dimension,)
        return self.psi.pieces

    def psi_offset(self) -> Fraction:
        return Fraction(0) if self.psi is None else self.psi.offset


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def pair(xi: Functional, germ: Germ) -> complex:
    """The pairing (xi . F) = sum over alpha of xi_alpha * F_alpha."""
    if xi.dimension != germ.dimension:
        raise DimensionMismatchError(
            f"functional dimension {xi.dimension} vs germ dimension {germ.dimension}"
        )
    if xi.infinite_tail:
        raise InfiniteTailError("pairing against an infinite-tail functional is undefined")
    small, big = (xi, germ) if len(xi.terms) <= len(germ.terms) else (germ, xi)
    return sum((val * big.coefficient(idx) for idx, val in small.terms), 0j)


def lift_functional(xi: Functional, n: int) -> Functional:
    """Zero-pad the indices of a k-dimensional functional into dimension n."""
    k = xi.dimension
    if k >= n:
        raise ValueError(f"target dimension {n} must exceed source dimension {k}")
    pad = (0,) * (n - k)
    coeffs = {MultiIndex(tuple(idx) + pad): val for idx, val in xi.terms}
    return Functional(n, coeffs, infinite_tail=xi.infinite_tail)


def product_functional(xi1: Functional, xi2: Functional) -> Functional:
    """(xi1 x xi2)_(a,b) = (xi1)_a * (xi2)_b on the joint index set."""
    if xi1.infinite_tail or xi2.infinite_tail:
        raise InfiniteTailError("product of infinite-tail functionals is not modeled")
    n = xi1.dimension + xi2.dimension
    coeffs = {
        MultiIndex(tuple(a) + tuple(b)): va * vb
        for a, va in xi1.terms
        for b, vb in xi2.terms
    }
    return Functional(n, coeffs)


def product_germ(g1: Germ, g2: Germ) -> Germ:
    """(F1 (x) F2)(z, w) = F1(z) F2(w)."""
    n = g1.dimension + g2.dimension
    coeffs = {
        MultiIndex(tuple(a) + tuple(b)): va * vb
        for a, va in g1.terms
        for b, vb in g2.terms
    }
    return Germ(n, coeffs)


def restrict_weight(phi: TropicalWeight, k: int) -> TropicalWeight:
    """Restriction to the coordinate subspace z_{k+1} = ... = z_n = 0.

    Only pieces vanishing on the dropped coordinates survive (the others
    evaluate to -infinity there and fall out of the max); no survivor means
    the restriction is identically -infinity, a distinct error.
    """
    n = phi.dimension
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < {n}, got {k}")
    kept = [p[:k] for p in phi.pieces if all(v == 0 for v in p[k:])]
    if not kept:
        raise RestrictionMinusInfinityError(
            "no piece survives the restriction; the restricted weight is identically -infinity"
        )
    return TropicalWeight(kept, phi.offset)


def combine_product(
    phi1: TropicalWeight,
    psi1: TropicalWeight | None,
    phi2: TropicalWeight,
    psi2: TropicalWeight | None,
) -> WeightPair:
    """Pair on the product polydisc: max{phi1, phi2} over the blocks for the
    singular weight, psi1 + psi2 for the fixed weight.

    The combined gauge of the phi part is min(g1(x), g2(y)), realized by
    zero-padding each original piece onto the other block; the psi gauges
    add, realized by all pairwise concatenations of pieces.
    """
    if phi1.offset != phi2.offset:
        raise ValueError(
            "combining weights with different offsets is unsupported; "
            "the max of shifted weights is not tropical in this representation"
        )
    n1, n2 = phi1.dimension, phi2.dimension
    z1, z2 = (Fraction(0),) * n1, (Fraction(0),) * n2
    phi_pieces = [tuple(p) + z2 for p in phi1.pieces] + [z1 + tuple(p) for p in phi2.pieces]
    phi = TropicalWeight(phi_pieces, phi1.offset)

    if psi1 is None and psi2 is None:
        return WeightPair(phi, None)
    p1 = psi1.pieces if psi1 is not None else (z1,)
    p2 = psi2.pieces if psi2 is not None else (z2,)
    psi_pieces = [tuple(a) + tuple(b) for a in p1 for b in p2]
    off = (psi1.offset if psi1 is not None else 0) + (psi2.offset if psi2 is not None else 0)
    return WeightPair(phi, TropicalWeight(psi_pieces, off))


def restrict_diagonal(weight: TropicalWeight) -> TropicalWeight:
    """Restriction of a weight on a doubled polydisc to the diagonal w = z.

    On the diagonal both coordinate blocks carry the same log-radii, so each
    piece (a, b) acts as the single block a + b; for the product weight
    max{u(z), v(w)} this recovers max{u, v} (the union of the two piece sets).
    """
    n = weight.dimension
    if n % 2 != 0:
        raise ValueError("diagonal restriction needs an even ambient dimension")
    m = n // 2
    pieces = [tuple(a + b for a, b in zip(p[:m], p[m:])) for p in weight.pieces]
    return TropicalWeight(pieces, weight.offset)


def max_weight(u: TropicalWeight, v: TropicalWeight) -> TropicalWeight:
    """Pointwise max of two weights with equal offsets (piece-set union)."""
    if u.dimension != v.dimension:
        raise DimensionMismatchError("max of weights over different dimensions")
    if u.offset != v.offset:
        raise ValueError("max of weights with different offsets is unsupported")
    return TropicalWeight(u.pieces + v.pieces, u.offset)


def scale_weight(phi: TropicalWeight, c) -> TropicalWeight:
    """c * phi for c > 0 (pieces scale, offset scales)."""
    cf = as_fraction(c)
    if cf <= 0:
        raise ValueError("scale factor must be positive")
    return TropicalWeight([[cf * v for v in p] for p in phi.pieces], cf * phi.offset)


def translate_weight(phi: TropicalWeight, a) -> TropicalWeight:
    """phi + a (additive constant only)."""
    return TropicalWeight(phi.pieces, phi.offset + as_fraction(a))


def eval_pieces(pieces, x) -> float:
    """min_j <piece_j, x> for raw (possibly unpruned) piece lists."""
    return min(sum(float(l) * float(v) for l, v in zip(p, x)) for p in pieces)


def _require_same_dimension(a, b, what: str):
    if a.dimension != b.dimension:
        raise DimensionMismatchError(f"{what}: {a.dimension} vs {b.dimension}")


def germ_norm_sq_coefficients(germ: Germ) -> dict:
    """|c_alpha|^2 per support index (the Reinhardt orthogonality weights)."""
    return {idx: (val.real * val.real + val.imag * val.imag) for idx, val in germ.terms}


def scale_pair(weights: WeightPair, c) -> WeightPair:
    """(c*phi, psi)."""
    return WeightPair(scale_weight(weights.phi, c), weights.psi)


def translate_pair(weights: WeightPair, a) -> WeightPair:
    """(phi + a, psi)."""
    return WeightPair(translate_weight(weights.phi, a), weights.psi)


__all__ = [
    "DimensionMismatchError",
    "InfiniteTailError",
    "RestrictionMinusInfinityError",
    "MultiIndex",
    "Functional",
    "Germ",
    "TropicalWeight",
    "WeightPair",
    "ZERO_WEIGHT",
    "pair",
    "weight_eval_log",
    "lift_functional",
    "product_functional",
    "product_germ",
    "restrict_weight",
    "combine_product",
    "restrict_diagonal",
    "max_weight",
    "scale_weight",
    "translate_weight",
    "scale_pair",
    "translate_pair",
    "eval_pieces",
    "germ_norm_sq_coefficients",
]
