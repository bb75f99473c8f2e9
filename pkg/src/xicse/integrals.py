"""Sublevel-set monomial masses: exact closed forms and Monte Carlo.

The mass of a monomial over a sublevel set of the singular weight,

    d_alpha(t) = integral over {phi < -t} inside the polydisc of
                 |z^alpha|^2 e^(-psi),

transforms in log coordinates to

    (2 pi)^n e^(-psi_offset) *
    integral over {g_phi(x) > t + phi_offset, x >= 0} of
    exp(-<2 alpha + 2, x> + g_psi(x)) dx.

Three evaluation routes, dispatched by the shape of the weight pair:
a product of one-dimensional integrals (monomial-max phi, at most one psi
piece), a hypoexponential tail (single-piece phi), and tilted importance
sampling for everything else.  All masses are handled in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lp
from ._backend import MC_BACKEND, accumulate
from ._util import as_fraction, mix64
from .core import MultiIndex, WeightPair

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2.0 * math.pi)

#: smallest sample count accepted by the Monte Carlo estimator
MIN_SAMPLES = 10_000

#: accepted-sample floor below which an estimate is reported indeterminate
MIN_ACCEPTED = 10

_BATCH = 1 << 16


class McIndeterminateError(RuntimeError):
    """Monte Carlo run never hit the region; no finite estimate exists."""


@dataclass(frozen=True)
class MassResult:
    """One evaluated mass, in log space, with provenance.

    status is 'ok', 'divergent' (the integral is infinite; log_value is
    +inf so reciprocals vanish cleanly), or 'indeterminate' (Monte Carlo
    acceptance too low to estimate).  Exact methods carry stderr_log = 0.
    """

    log_value: float
    method: str
    stderr_log: float = 0.0
    samples: int | None = None
    seed: int | None = None
    status: str = "ok"

    @property
    def divergent(self) -> bool:
        return self.status == "divergent"

    @property
    def value(self) -> float:
        if self.log_value > 709.0:  # exp overflows past this
            return math.inf
        return math.exp(self.log_value)


def _divergent(method: str) -> MassResult:
    return MassResult(math.inf, method, status="divergent")


# ---------------------------------------------------------------------------
# product route
# ---------------------------------------------------------------------------


def d_alpha_product(w, rho, alpha, t: float) -> MassResult:
    """Monomial-max phi with a single linear psi piece: the mass factors as

        pi^n * prod_i exp(-2 (alpha_i + 1 - rho_i) w_i t) / (alpha_i + 1 - rho_i)

    valid when every alpha_i + 1 - rho_i is positive (otherwise the integral
    diverges and a divergence marker is returned).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    n = len(w)
    if not (len(rho) == len(alpha) == n):
        raise ValueError("w, rho, alpha must share a dimension")
    log_value = n * LOG_PI
    for wi, ri, ai in zip(w, rho, alpha):
        e = float(ai) + 1.0 - float(ri)
        if e <= 0:
            return _divergent("exact-product")
        log_value += -2.0 * e * float(wi) * t - math.log(e)
    return MassResult(log_value, "exact-product")


# ---------------------------------------------------------------------------
# hypoexponential route
# ---------------------------------------------------------------------------


def _hypoexp_groups(k, a):
    """Partial-fraction data for the tail of T = sum a_i/k_i * Exp_i.

    Rates r_i = k_i / a_i are grouped exactly (rational keys), repeated rates
    handled by the confluent expansion: with H_g(u) = Ltransform * (u+r_g)^c_g,
    the tail is sum_g e^(-r_g s) Q_g(s) where Q_g collects Erlang survival
    terms with residue coefficients H_g^(c_g - m)(-r_g) / (c_g - m)!.
    Derivatives of H follow the log-derivative recursion, all in exact
    rational arithmetic, so ties cost no precision.

    Returns [(r_g as Fraction, polynomial coefficients of Q_g in s)].
    """
    rates = [as_fraction(ki) / as_fraction(ai) for ki, ai in zip(k, a)]
    groups: dict[Fraction, int] = {}
    for r in rates:
        groups[r] = groups.get(r, 0) + 1
    items = sorted(groups.items())
    total_rate_prod = Fraction(1)
    for r, c in items:
        total_rate_prod *= r**c
    out = []
    for r_g, c_g in items:
        h0 = total_rate_prod
        for r_h, c_h in items:
            if r_h != r_g:
                h0 /= (r_h - r_g) ** c_h
        # derivatives of log H at -r_g
        lder = [None]  # index p >= 1
        for p in range(1, c_g):
            s = sum(
                Fraction(c_h) / (r_h - r_g) ** p for r_h, c_h in items if r_h != r_g
            )
            lder.append((-1) ** p * math.factorial(p - 1) * s)
        hder = [h0]
        for p in range(1, c_g):
            acc = Fraction(0)
            for q in range(p):
                acc += math.comb(p - 1, q) * hder[q] * lder[p - q]
            hder.append(acc)
        b = {m: hder[c_g - m] / math.factorial(c_g - m) for m in range(1, c_g + 1)}
        # Q_g(s) = sum_m b_m r_g^-m sum_{l<m} (r_g s)^l / l!
        coeffs = []
        for l in range(c_g):
            tail_sum = sum(b[m] / r_g**m for m in range(l + 1, c_g + 1))
            coeffs.append(r_g**l / math.factorial(l) * tail_sum)
        out.append((r_g, coeffs))
    return out


def _validate_hypoexp_args(k, a, s):
    if len(k) != len(a):
        raise ValueError("k and a must share a dimension")
    if any(float(v) <= 0 for v in k) or any(float(v) <= 0 for v in a):
        raise ValueError("k and a entries must be positive")
    if s < 0:
        raise ValueError("s must be >= 0")


def hypoexp_tail(k, a, s: float) -> float:
    """Exact value of the orthant tail integral

        I = integral over {<a, x> > s, x > 0} of exp(-<k, x>) dx
          = (1 / prod k_i) * P(sum (a_i/k_i) Y_i > s),  Y_i iid standard Exp.
    """
    _validate_hypoexp_args(k, a, s)
    groups = _hypoexp_groups(k, a)
    p = 0.0
    for r_g, coeffs in groups:
        poly = 0.0
        for c in reversed(coeffs):
            poly = poly * s + float(c)
        p += math.exp(-float(r_g) * s) * poly
    scale = 1.0
    for ki in k:
        scale *= float(ki)
    return p / scale


def hypoexp_tail_log(k, a, s: float) -> float:
    """log of hypoexp_tail, stable for large s (shift by the slowest rate)."""
    _validate_hypoexp_args(k, a, s)
    groups = _hypoexp_groups(k, a)
    r_min = min(float(r) for r, _ in groups)
    inner = 0.0
    for r_g, coeffs in groups:
        poly = 0.0
        for c in reversed(coeffs):
            poly = poly * s + float(c)
        inner += math.exp(-(float(r_g) - r_min) * s) * poly
    if inner <= 0:
        raise ArithmeticError("catastrophic cancellation in hypoexponential tail")
    return -r_min * s + math.log(inner) - sum(math.log(float(ki)) for ki in k)


# ---------------------------------------------------------------------------
# Monte Carlo route
# ---------------------------------------------------------------------------


def _proposal_tilt(rates, psi_pieces, n):
    """Mixing weights theta over psi pieces maximizing the worst-case decay
    margin min_i (rates - sum theta_k mu_k)_i; positive margin certifies
    integrability (same LP that decides ideal membership, by duality).

    Returns (margin, tilt vector) with exact re-check near zero.
    """
    q = len(psi_pieces)
    if q == 1:
        mu = psi_pieces[0]
        margin = min(float(r) - float(m) for r, m in zip(rates, mu))
        if margin <= lp.DEFAULT_TOL:
            margin_exact = min(as_fraction(r) - m for r, m in zip(rates, mu))
            if margin_exact <= 0:
                return 0.0, None
            margin = float(margin_exact)
        return margin, np.array([float(m) for m in mu])
    forms = [
        lp.LinearForm(tuple(float(mu[i]) - float(rates[i]) for mu in psi_pieces))
        for i in range(n)
    ]
    res = lp.min_of_max_on_simplex(forms, q, exact=False)
    margin = -res.value
    theta = res.argmin
    if margin <= lp.DEFAULT_TOL:
        exact_forms = [
            lp.LinearForm(tuple(as_fraction(mu[i]) - as_fraction(rates[i]) for mu in psi_pieces))
            for i in range(n)
        ]
        exact = lp.min_of_max_on_simplex(exact_forms, q, exact=True)
        if -exact.exact_value <= 0:
            return 0.0, None
        margin = float(-exact.exact_value)
        theta = tuple(float(v) for v in exact.argmin)
    tilt = np.zeros(n)
    for th, mu in zip(theta, psi_pieces):
        tilt += float(th) * np.array([float(m) for m in mu])
    return margin, tilt


def mc_mass(weights: WeightPair, alpha, t: float, samples: int, seed: int) -> MassResult:
    """Importance-sampled mass estimate.

    Proposal: independent exponentials with rates (2 alpha_i + 2) minus an
    optimal psi tilt (a convex combination of psi pieces found by LP), so
    importance weights are exp(g_psi(x) - <tilt, x>) <= 1 and the estimator
    variance stays bounded.  Deterministic for fixed (seed, samples): samples
    are drawn in fixed-size batches from counter-based streams keyed by
    (seed, batch index), so any parallel split over batches reproduces the
    serial estimate.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}")
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    n = weights.dimension
    if alpha.dimension != n:
        raise ValueError("alpha dimension mismatch")
    t_eff = float(t) + float(weights.phi.offset)
    if t_eff < 0:
        raise ValueError("t + phi offset must be >= 0")

    r = np.array([2.0 * ai + 2.0 for ai in alpha])
    psi_pieces = weights.psi_pieces()
    margin, tilt = _proposal_tilt(r, psi_pieces, n)
    if tilt is None:
        return _divergent("monte-carlo")
    rates = r - tilt
    has_psi = weights.psi is not None
    psi_arr = weights.psi.pieces_float if has_psi else None
    phi_arr = weights.phi.pieces_float

    key0 = mix64(seed, 0xD ^ 0xA)
    sum_w = sum_w2 = 0.0
    count = 0
    done = 0
    batch_idx = 0
    while done < samples:
        m = min(_BATCH, samples - done)
        gen = np.random.Generator(
            np.random.Philox(key=np.array([key0, batch_idx], dtype=np.uint64))
        )
        x = gen.standard_exponential((m, n)) / rates[None, :]
        x = np.ascontiguousarray(x)
        sw, sw2, cnt = accumulate(x, phi_arr, t_eff, psi_arr, tilt)
        sum_w += sw
        sum_w2 += sw2
        count += cnt
        done += m
        batch_idx += 1

    if count < MIN_ACCEPTED:
        return MassResult(
            math.nan, "monte-carlo", math.inf, samples=samples, seed=seed,
            status="indeterminate",
        )
    mean = sum_w / samples
    var = max(sum_w2 / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples)
    log_value = (
        n * LOG_2PI
        - float(weights.psi_offset())
        + math.log(mean)
        - float(np.log(rates).sum())
    )
    return MassResult(
        log_value, "monte-carlo", stderr / mean, samples=samples, seed=seed
    )


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------


def classify_route(weights: WeightPair) -> str:
    """Which evaluation route the pair supports: exact-product,
    exact-hypoexp, or monte-carlo."""
    psi_simple = weights.psi is None or len(weights.psi.pieces) == 1
    if psi_simple:
        if weights.phi.as_monomial_max() is not None:
            return "exact-product"
        if len(weights.phi.pieces) == 1:
            return "exact-hypoexp"
    return "monte-carlo"


def _psi_rho(weights: WeightPair):
    """rho with e^-psi = prod |z_i|^(-2 rho_i), i.e. half the single psi piece."""
    if weights.psi is None:
        return (Fraction(0),) * weights.dimension
    (mu,) = weights.psi.pieces
    return tuple(m / 2 for m in mu)


def d_alpha(
    weights: WeightPair,
    alpha,
    t: float,
    mode: str = "auto",
    *,
    samples: int = 100_000,
    seed: int = 0,
) -> MassResult:
    """Evaluate one monomial mass, routing to the best available method.

    mode 'auto' picks the exact route when one exists; 'exact' insists on it;
    'mc' forces Monte Carlo.  Offsets are normalized here: the phi offset
    shifts t, the psi offset scales the mass.
    """
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    if alpha.dimension != weights.dimension:
        raise ValueError("alpha dimension mismatch")
    route = classify_route(weights)
    if mode == "mc":
        route = "monte-carlo"
    elif mode == "exact":
        if route == "monte-carlo":
            raise ValueError("no exact route for this weight pair")
    elif mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")

    if route == "monte-carlo":
        return mc_mass(weights, alpha, t, samples, seed)

    t_eff = float(t) + float(weights.phi.offset)
    if t_eff < 0:
        raise ValueError("t + phi offset must be >= 0")
    psi_off = float(weights.psi_offset())

    if route == "exact-product":
        w = weights.phi.as_monomial_max()
        rho = _psi_rho(weights)
        res = d_alpha_product([float(v) for v in w], [float(v) for v in rho], alpha, t_eff)
        if res.divergent:
            return res
        return MassResult(res.log_value - psi_off, "exact-product")

    (lam,) = weights.phi.pieces
    mu = (Fraction(0),) * weights.dimension if weights.psi is None else weights.psi.pieces[0]
    k = [2 * as_fraction(a) + 2 - m for a, m in zip(alpha, mu)]
    if any(v <= 0 for v in k):
        return _divergent("exact-hypoexp")
    log_value = (
        weights.dimension * LOG_2PI - psi_off + hypoexp_tail_log(k, lam, t_eff)
    )
    return MassResult(log_value, "exact-hypoexp")


__all__ = [
    "MassResult",
    "McIndeterminateError",
    "MC_BACKEND",
    "MIN_SAMPLES",
    "d_alpha",
    "d_alpha_product",
    "hypoexp_tail",
    "hypoexp_tail_log",
    "mc_mass",
    "classify_route",
]
