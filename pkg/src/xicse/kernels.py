"""Kernels on shrinking sublevel sets, their extremal germs, and curves.

Sublevel sets of toric weights are Reinhardt domains, where monomials are
mutually orthogonal in the weighted L2 inner product.  The kernel attached
to a functional xi at the origin is therefore the exact series

    K(t) = sum over alpha in supp(xi) of |xi_alpha|^2 / d_alpha(t),

monomials with divergent mass excluded (the weighted Bergman space contains
no such monomial; an empty effective support gives K = 0).  The series is
accumulated in log space; Monte Carlo masses propagate a combined standard
error, and a kernel value never mixes exact and sampled terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._util import float_bits, fmt17, logsumexp, mix64
from .core import Functional, Germ, InfiniteTailError, WeightPair
from .integrals import McIndeterminateError, classify_route, d_alpha


@dataclass(frozen=True)
class KernelValue:
    """One kernel evaluation: log K (or -inf for K = 0), provenance, stderr."""

    log_value: float
    method: str
    stderr_log: float = 0.0

    @property
    def value(self) -> float:
        if self.log_value > 709.0:
            return math.inf
        return math.exp(self.log_value)


@dataclass(frozen=True)
class ExtremalGerm:
    """Minimal-norm germ F0 with (xi . F0) = 1 attaining 1/K."""

    germ: Germ
    log_kernel: float

    @property
    def kernel_value(self) -> float:
        return math.exp(self.log_kernel)


@dataclass(frozen=True)
class KernelCurve:
    """Kernel sampled over a t-grid, with provenance and error bars."""

    grid: tuple
    log_k: tuple
    methods: tuple
    stderrs: tuple

    def __post_init__(self):
        if not (len(self.grid) == len(self.log_k) == len(self.methods) == len(self.stderrs)):
            raise ValueError("curve columns must share a length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")

    @property
    def secant_slopes(self) -> tuple:
        out = [math.nan]
        for i in range(1, len(self.grid)):
            out.append((self.log_k[i] - self.log_k[i - 1]) / (self.grid[i] - self.grid[i - 1]))
        return tuple(out)

    @property
    def second_differences(self) -> tuple:
        s = self.secant_slopes
        out = [math.nan] * len(self.grid)
        for i in range(1, len(self.grid) - 1):
            out[i] = s[i + 1] - s[i]
        return tuple(out)

    def to_csv(self) -> str:
        header = "t,log_K,K,secant_slope,second_difference,method,stderr"
        slopes = self.secant_slopes
        second = self.second_differences
        lines = [header]
        for i, t in enumerate(self.grid):
            k = math.inf if self.log_k[i] > 709.0 else math.exp(self.log_k[i])
            lines.append(
                ",".join(
                    [
                        fmt17(t),
                        fmt17(self.log_k[i]),
                        fmt17(k),
                        fmt17(slopes[i]),
                        fmt17(second[i]),
                        self.methods[i],
                        fmt17(self.stderrs[i]),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def _series_terms(xi, weights, t, mode, samples, seed):
    """(log term, stderr) per support index with finite mass."""
    terms = []
    for alpha, coeff in xi.terms:
        mass = d_alpha(
            weights,
            alpha,
            t,
            mode,
            samples=samples,
            seed=mix64(seed, len(alpha), *alpha),
        )
        if mass.status == "indeterminate":
            raise McIndeterminateError(
                f"mass estimate for alpha={tuple(alpha)} at t={t} never hit the region"
            )
        if mass.divergent:
            continue
        terms.append((2.0 * math.log(abs(coeff)) - mass.log_value, mass.stderr_log))
    return terms


def kernel(
    xi: Functional,
    weights: WeightPair,
    t: float,
    *,
    mode: str = "auto",
    samples: int = 100_000,
    seed: int = 0,
) -> KernelValue:
    """Kernel value at the origin for the sublevel set at parameter t."""
    if xi.dimension != weights.dimension:
        raise ValueError("functional dimension mismatch")
    if xi.infinite_tail:
        raise InfiniteTailError("kernel series requires a finitely supported functional")
    route = classify_route(weights) if mode != "mc" else "monte-carlo"
    terms = _series_terms(xi, weights, t, mode, samples, seed)
    log_k = logsumexp([lt for lt, _ in terms])
    if not terms or all(s == 0.0 for _, s in terms):
        return KernelValue(log_k, route)
    # delta-method combination of independent per-term errors
    var = 0.0
    for lt, s in terms:
        p = math.exp(lt - log_k)
        var += (p * s) ** 2
    return KernelValue(log_k, route, math.sqrt(var))


def extremal_function(
    xi: Functional, weights: WeightPair, t: float
) -> ExtremalGerm:
    """The unique germ F0 with (xi . F0) = 1 and squared norm 1/K.

    Exact route only: F0 = (1/K) sum conj(xi_alpha) / d_alpha(t) z^alpha over
    the support indices with finite mass.
    """
    if xi.infinite_tail:
        raise InfiniteTailError("no polynomial extremal germ for infinite-tail functionals")
    route = classify_route(weights)
    if route == "monte-carlo":
        raise ValueError("extremal germ requires an exact mass route")
    masses = {}
    for alpha, _ in xi.terms:
        m = d_alpha(weights, alpha, t, "exact")
        if not m.divergent:
            masses[alpha] = m.log_value
    if not masses:
        raise ValueError("kernel is zero; no extremal germ exists")
    log_k = logsumexp(
        [2.0 * math.log(abs(xi.coefficient(a))) - lv for a, lv in masses.items()]
    )
    coeffs = {
        alpha: xi.coefficient(alpha).conjugate() * math.exp(-(lv + log_k))
        for alpha, lv in masses.items()
    }
    return ExtremalGerm(Germ(xi.dimension, coeffs), log_k)


def kernel_curve(
    xi: Functional,
    weights: WeightPair,
    grid,
    *,
    mode: str = "auto",
    samples: int = 100_000,
    seed: int = 0,
) -> KernelCurve:
    """Kernel evaluated over an increasing t-grid.

    Monte Carlo seeds derive deterministically per (grid point, support
    index) from the root seed, so curves are reproducible point by point.
    """
    grid = tuple(float(t) for t in grid)
    if any(t < 0 for t in grid):
        raise ValueError("grid values must be >= 0")
    values, methods, errs = [], [], []
    for i, t in enumerate(grid):
        kv = kernel(
            xi,
            weights,
            t,
            mode=mode,
            samples=samples,
            seed=mix64(seed, i, float_bits(t)),
        )
        values.append(kv.log_value)
        methods.append(kv.method)
        errs.append(kv.stderr_log)
    return KernelCurve(grid, tuple(values), tuple(methods), tuple(errs))


__all__ = [
    "KernelValue",
    "ExtremalGerm",
    "KernelCurve",
    "kernel",
    "extremal_function",
    "kernel_curve",
]
