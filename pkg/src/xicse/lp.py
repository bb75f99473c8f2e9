"""Small dense linear programs over the probability simplex.

Everything downstream (ideal membership, jumping numbers, Newton body
classification, dominated-piece pruning) reduces to minimizing a maximum of
finitely many linear forms over the standard simplex, or to one fractional
variant of that problem.  Problem sizes are tiny (dimension <= 8, a few
hundred forms at worst), so the solver is a dense two-phase primal simplex
with Bland's rule, written once and run over either floats or exact
``fractions.Fraction`` entries.  The exact mode is what makes boundary
decisions (membership exactly at a jumping number) reliable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._util import as_fraction

#: float comparison cushion inside the simplex iteration
_PIVOT_TOL = 1e-11

#: default decision tolerance for membership / classification calls
DEFAULT_TOL = 1e-9


class LPError(RuntimeError):
    """Solver failure (unbounded / infeasible / iteration cap)."""


@dataclass(frozen=True)
class LinearForm:
    """An affine form  x -> <gradient, x> + constant."""

    gradient: tuple
    constant: object = 0

    def __post_init__(self):
        g = tuple(self.gradient)
        for v in g:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError("non-finite gradient entry")
        object.__setattr__(self, "gradient", g)

    def value_at(self, x: Sequence) -> object:
        return sum(g * xi for g, xi in zip(self.gradient, x)) + self.constant


@dataclass(frozen=True)
class SimplexLPResult:
    """Optimum of min_x max_j f_j(x) over {x >= 0, sum x = 1}.

    ``certificate`` lists the indices of the forms active at the optimum.
    """

    value: float
    argmin: tuple
    certificate: tuple
    exact_value: Fraction | None = None


@dataclass(frozen=True)
class NewtonBody:
    """Unbounded convex body conv(generators) + nonnegative orthant.

    Membership of mu is equivalent to <mu, x> >= min_j <gen_j, x> for every
    x >= 0, which is decided on the simplex.
    """

    generators: tuple
    dimension: int

    def __post_init__(self):
        gens = tuple(tuple(as_fraction(v) for v in g) for g in self.generators)
        if not gens:
            raise ValueError("Newton body needs at least one generator")
        for g in gens:
            if len(g) != self.dimension:
                raise ValueError("generator dimension mismatch")
        object.__setattr__(self, "generators", gens)


# ---------------------------------------------------------------------------
# core simplex
# ---------------------------------------------------------------------------


#: smallest pivot magnitude accepted on the float path; smaller pivots would
#: scale the tableau by > 1e8 and shred precision, so the solve punts to the
#: exact path instead
_PIVOT_FLOOR = 1e-8


def _pivot(rows, cost, basis, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, prow)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, prow)]
    basis[r] = c


def _run_simplex(rows, cost, basis, exact: bool, max_iter=5000):
    """Iterate to optimality.

    Exact mode pivots by Bland's rule (smallest improving column, ratio ties
    by smallest basic index), which cannot cycle.  Float mode prices by the
    most negative reduced cost and refuses pivots below _PIVOT_FLOOR; any
    stall surfaces as LPError and the caller re-solves exactly.
    """
    ncols = len(cost) - 1
    ctol = 0 if exact else 1e-10
    ptol = 0 if exact else _PIVOT_FLOOR
    for _ in range(max_iter):
        col = None
        if exact:
            for j in range(ncols):
                if cost[j] < 0:
                    col = j
                    break
        else:
            most = -ctol
            for j in range(ncols):
                if cost[j] < most:
                    most = cost[j]
                    col = j
        if col is None:
            return
        best, best_ratio = None, None
        for i, row in enumerate(rows):
            a = row[col]
            if a > ptol:
                ratio = row[-1] / a
                if best is None or ratio < best_ratio:
                    best, best_ratio = i, ratio
                elif ratio == best_ratio:
                    if exact:
                        if basis[i] < basis[best]:
                            best = i
                    elif a > rows[best][col]:
                        best = i  # prefer the larger pivot on ties
        if best is None:
            raise LPError("objective unbounded below (or pivots below the floor)")
        _pivot(rows, cost, basis, best, col)
    raise LPError("iteration cap exceeded")


def solve_standard_form(c, a_rows, b, *, exact: bool):
    """Minimize c.x subject to A x = b, x >= 0 (dense two-phase simplex).

    Returns (optimal value, solution list).  All arithmetic stays in the
    caller's field: exact=True keeps Fraction entries, otherwise floats.
    """
    nvar = len(c)
    tol = 0 if exact else _PIVOT_TOL
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    rows = []
    for row, rhs in zip(a_rows, b):
        row = list(row)
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [rhs])
    m = len(rows)

    # phase 1: artificial basis, minimize sum of artificials
    for i in range(m):
        art = [zero] * m
        art[i] = one
        rows[i] = rows[i][:-1] + art + [rows[i][-1]]
    basis = [nvar + i for i in range(m)]
    cost = [zero] * (nvar + m + 1)
    for i in range(m):
        for j in range(nvar):
            cost[j] -= rows[i][j]
        cost[-1] -= rows[i][-1]
    _run_simplex(rows, cost, basis, exact)
    if -cost[-1] > (1e-7 if not exact else 0):
        raise LPError("infeasible program")

    # drive leftover artificials out of the basis (largest pivot), drop
    # redundant rows
    drop = []
    for i in range(m):
        if basis[i] >= nvar:
            col, best = None, tol if not exact else 0
            for j in range(nvar):
                if abs(rows[i][j]) > best:
                    col, best = j, abs(rows[i][j])
            if col is None:
                drop.append(i)
            else:
                _pivot(rows, cost, basis, i, col)
    if drop:
        rows = [r for i, r in enumerate(rows) if i not in drop]
        basis = [bv for i, bv in enumerate(basis) if i not in drop]

    # phase 2: rebuild the reduced cost row for the true objective
    rows = [r[:nvar] + [r[-1]] for r in rows]
    cost = list(c) + [zero]
    for i, bv in enumerate(basis):
        if cost[bv] != 0:
            f = cost[bv]
            cost = [cv - f * rv for cv, rv in zip(cost, rows[i])]
    _run_simplex(rows, cost, basis, exact)

    x = [zero] * nvar
    for i, bv in enumerate(basis):
        if bv < nvar:
            x[bv] = rows[i][-1]
    return -cost[-1], x


# ---------------------------------------------------------------------------
# the two problem shapes used by the rest of the library
# ---------------------------------------------------------------------------


def _coerce(values, exact):
    if exact:
        return [as_fraction(v) for v in values]
    return [float(v) for v in values]


def _solve_min_of_max(forms, n, exact):
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    j = len(forms)
    nvar = n + 2 + j  # x, u+, u-, slacks
    a_rows, b = [], []
    for idx, f in enumerate(forms):
        grad = _coerce(f.gradient, exact)
        row = grad + [-one, one] + [zero] * j
        row[n + 2 + idx] = one
        a_rows.append(row)
        b.append(-(as_fraction(f.constant) if exact else float(f.constant)))
    a_rows.append([one] * n + [zero] * (2 + j))
    b.append(one)
    c = [zero] * nvar
    c[n] = one
    c[n + 1] = -one
    value, x = solve_standard_form(c, a_rows, b, exact=exact)
    return value, tuple(x[:n])


def min_of_max_on_simplex(
    forms: Sequence[LinearForm], n: int, *, exact: bool = False
) -> SimplexLPResult:
    """Exact minimum of max_j f_j over the standard simplex in R^n.

    Epigraph formulation: minimize u with u >= f_j(x), sum x = 1, x >= 0,
    u split into u+ - u-.  The float path self-validates its optimum and
    re-solves in exact rational arithmetic whenever the tableau degrades
    (tiny pivots, stalls), so every call returns a trustworthy value;
    deterministic pivoting fixes the optimal basis whenever there are ties.
    """
    if not forms:
        raise ValueError("need at least one linear form")
    for f in forms:
        if len(f.gradient) != n:
            raise ValueError("form dimension mismatch")
    exact_value = None
    point = None
    if not exact:
        scale = max(
            [1.0]
            + [abs(float(g)) for f in forms for g in f.gradient]
            + [abs(float(f.constant)) for f in forms]
        )
        try:
            value, raw = _solve_min_of_max(forms, n, False)
            # project onto the simplex so the result invariants hold exactly,
            # then re-evaluate there; disagreement with the solver means the
            # tableau degraded and the exact path takes over
            clamped = [v if v > 0.0 else 0.0 for v in raw]
            total = sum(clamped)
            if total > 0 and all(v >= -1e-9 for v in raw):
                point = tuple(v / total for v in clamped)
                recomputed = max(float(f.value_at(point)) for f in forms)
                if abs(recomputed - value) <= 1e-7 * scale:
                    value = recomputed
                else:
                    point = None
        except LPError:
            point = None
    if point is None:
        exact_value, point = _solve_min_of_max(forms, n, True)
        value = float(exact_value)
    if exact_value is not None:
        cert = tuple(
            idx
            for idx, f in enumerate(forms)
            if sum(as_fraction(g) * p for g, p in zip(f.gradient, point))
            + as_fraction(f.constant)
            == exact_value
        )
    else:
        cert_tol = 1e-9 * max(1.0, abs(value))
        cert = tuple(
            idx
            for idx, f in enumerate(forms)
            if abs(f.value_at(point) - value) <= cert_tol
        )
    return SimplexLPResult(value, point, cert, exact_value=exact_value)


def _solve_min_ratio(numerator_grads, denominator_grads, n, exact):
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    kk, jj = len(numerator_grads), len(denominator_grads)
    nvar = n + 2 + kk + jj  # y, u+, u-, slacks, surpluses
    a_rows, b = [], []
    for idx, grad in enumerate(numerator_grads):
        row = _coerce(grad, exact) + [-one, one] + [zero] * (kk + jj)
        row[n + 2 + idx] = one
        a_rows.append(row)
        b.append(zero)
    for idx, grad in enumerate(denominator_grads):
        row = _coerce(grad, exact) + [zero, zero] + [zero] * (kk + jj)
        row[n + 2 + kk + idx] = -one
        a_rows.append(row)
        b.append(one)
    c = [zero] * nvar
    c[n] = one
    c[n + 1] = -one
    value, x = solve_standard_form(c, a_rows, b, exact=exact)
    return value, tuple(x[:n])


def min_ratio_on_orthant(
    numerator_grads: Sequence[Sequence],
    denominator_grads: Sequence[Sequence],
    n: int,
    *,
    exact: bool = False,
):
    """Minimum of max_k<a_k, x> / min_j<d_j, x> over x >= 0 with denominator > 0.

    Valid when max_k<a_k, x> > 0 on the whole orthant minus the origin; the
    ratio is scale invariant, so the program normalizes min_j<d_j, x> >= 1:
    minimize u with u >= <a_k, y>, <d_j, y> >= 1, y >= 0.

    Returns (value, witness y); value is a Fraction in exact mode.  The
    float path self-validates and falls back to the exact solve on trouble.
    """
    if exact:
        return _solve_min_ratio(numerator_grads, denominator_grads, n, True)
    try:
        value, y = _solve_min_ratio(numerator_grads, denominator_grads, n, False)
        num = max(sum(float(g) * v for g, v in zip(grad, y)) for grad in numerator_grads)
        den = min(sum(float(g) * v for g, v in zip(grad, y)) for grad in denominator_grads)
        scale = max(1.0, abs(value))
        if (
            den >= 1.0 - 1e-9
            and all(v >= -1e-9 for v in y)
            and abs(num - value) <= 1e-7 * scale
        ):
            return value, y
    except LPError:
        pass
    exact_value, y = _solve_min_ratio(numerator_grads, denominator_grads, n, True)
    return float(exact_value), y


# ---------------------------------------------------------------------------
# piece pruning
# ---------------------------------------------------------------------------


def piece_is_dominated(piece, others, n: int) -> bool:
    """True when dropping ``piece`` leaves min over pieces unchanged on x >= 0.

    Exact test: min over the simplex of max_k <piece - other_k, x> >= 0.
    """
    if not others:
        return False
    forms = [
        LinearForm(tuple(as_fraction(p) - as_fraction(o) for p, o in zip(piece, other)))
        for other in others
    ]
    res = min_of_max_on_simplex(forms, n, exact=True)
    return res.exact_value >= 0


def prune_pieces(pieces, n: int):
    """Canonical minimal piece set: dedupe, drop dominated, sort."""
    uniq = sorted(set(tuple(as_fraction(v) for v in p) for p in pieces))
    kept = list(uniq)
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1 :]
        if rest and piece_is_dominated(kept[i], rest, n):
            kept.pop(i)
        else:
            i += 1
    return tuple(kept)


# ---------------------------------------------------------------------------
# membership decisions
# ---------------------------------------------------------------------------


def _membership_forms(alpha, c, phi_pieces, psi_pieces, exact):
    """Forms of h_c = <2a+2, .> - c*g_phi - g_psi as a max over piece pairs."""
    if exact:
        cc = as_fraction(c)
        base = [2 * as_fraction(a) + 2 for a in alpha]
        out = []
        for lam in phi_pieces:
            for mu in psi_pieces:
                out.append(
                    tuple(
                        b - cc * as_fraction(l) - as_fraction(m)
                        for b, l, m in zip(base, lam, mu)
                    )
                )
        return out
    cc = float(c)
    base = [2.0 * float(a) + 2.0 for a in alpha]
    return [
        tuple(b - cc * float(l) - float(m) for b, l, m in zip(base, lam, mu))
        for lam in phi_pieces
        for mu in psi_pieces
    ]


def integrability_margin(alpha, c, weights, *, exact: bool = False):
    """min over the simplex of <2a+2, x> - c*g_phi(x) - g_psi(x).

    Positive margin means |z^alpha|^2 e^(-c*phi - psi) is integrable near the
    origin; zero or negative means divergent.
    """
    phi_pieces = weights.phi.pieces
    psi_pieces = weights.psi_pieces()
    grads = _membership_forms(alpha, c, phi_pieces, psi_pieces, exact)
    res = min_of_max_on_simplex([LinearForm(g) for g in grads], weights.dimension, exact=exact)
    return res


def ideal_membership(alpha, c, weights, *, tol: float = DEFAULT_TOL) -> bool:
    """Whether z^alpha lies in the multiplier ideal of c*phi + psi at the origin.

    Float LP first; when the optimum lands within ``tol`` of zero the decision
    is re-run in exact rational arithmetic (inputs are rationals), so the
    boundary case, value exactly zero, is classified as divergent (False).
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    res = integrability_margin(alpha, c, weights, exact=False)
    if abs(res.value) > tol:
        return res.value > 0
    exact_res = integrability_margin(alpha, c, weights, exact=True)
    return exact_res.exact_value > 0


def newton_membership(
    body: NewtonBody, mu, *, tol: float = DEFAULT_TOL
) -> str:
    """Classify mu against the body: 'outside', 'boundary', or 'interior'.

    d = min over the simplex of (<mu, x> - min_j <gen_j, x>) decides outside
    vs boundary; interior additionally requires the shifted point
    mu - (d/2) * ones to clear the same test, and that margin is what makes
    the classification stable under the componentwise-monotonicity invariant.
    """
    mu = tuple(mu)
    if len(mu) != body.dimension:
        raise ValueError("dimension mismatch")

    def margin(point):
        forms = [
            LinearForm(tuple(float(p) - float(g) for p, g in zip(point, gen)))
            for gen in body.generators
        ]
        res = min_of_max_on_simplex(forms, body.dimension, exact=False)
        if abs(res.value) <= tol:
            exact_forms = [
                LinearForm(
                    tuple(as_fraction(p) - as_fraction(g) for p, g in zip(point, gen))
                )
                for gen in body.generators
            ]
            return min_of_max_on_simplex(exact_forms, body.dimension, exact=True).exact_value
        return res.value

    d = margin(mu)
    if d < -tol:
        return "outside"
    if d <= tol:
        return "boundary"
    eps = float(d) / 2.0
    inner = margin(tuple(float(m) - eps for m in mu))
    return "interior" if inner > tol else "boundary"
