"""LP layer: simplex minima, Newton bodies, ideal membership.

The independent oracle for min-of-max values is a dense grid sweep over the
simplex; expected values frozen below were computed with it.
"""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xicse.core import TropicalWeight, WeightPair
from xicse.lp import (
    LinearForm,
    NewtonBody,
    ideal_membership,
    integrability_margin,
    min_of_max_on_simplex,
    newton_membership,
    piece_is_dominated,
    prune_pieces,
)


def grid_min_of_max(forms, n, step=1e-3):
    """Brute-force oracle: evaluate max-of-forms on a simplex grid."""
    m = int(round(1.0 / step))
    best = math.inf
    if n == 1:
        pts = [(1.0,)]
    elif n == 2:
        pts = ((i / m, 1.0 - i / m) for i in range(m + 1))
    elif n == 3:
        pts = (
            (i / m, j / m, 1.0 - (i + j) / m)
            for i in range(m + 1)
            for j in range(m + 1 - i)
        )
    else:
        raise ValueError("oracle supports n <= 3")
    for x in pts:
        val = max(f.value_at(x) for f in forms)
        if val < best:
            best = val
    return best


def test_single_form_minimizes_linear():
    res = min_of_max_on_simplex([LinearForm((1.0, 2.0))], 2)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.argmin == pytest.approx((1.0, 0.0), abs=1e-12)


def test_two_forms_cross_at_half():
    forms = [LinearForm((1.0, 0.0)), LinearForm((0.0, 1.0))]
    res = min_of_max_on_simplex(forms, 2)
    # frozen from grid_min_of_max(forms, 2): 0.5
    assert res.value == pytest.approx(0.5, abs=1e-12)
    assert res.argmin == pytest.approx((0.5, 0.5), abs=1e-12)
    assert set(res.certificate) == {0, 1}
    assert abs(res.value - grid_min_of_max(forms, 2)) <= 1e-6


def test_one_dimensional_single_form():
    res = min_of_max_on_simplex([LinearForm((2.0,))], 1)
    assert res.value == pytest.approx(2.0, abs=1e-12)


def test_matches_grid_oracle_on_three_forms():
    forms = [
        LinearForm((1.0, 0.25, 0.0)),
        LinearForm((0.0, 1.5, 0.5)),
        LinearForm((0.75, 0.0, 2.0)),
    ]
    res = min_of_max_on_simplex(forms, 3)
    oracle = grid_min_of_max(forms, 3)
    # the grid value overestimates the true minimum by at most O(step)
    assert res.value <= oracle + 1e-12
    assert oracle - res.value <= 5e-3


def test_exact_mode_returns_fractions():
    forms = [LinearForm((Fraction(1), Fraction(0))), LinearForm((Fraction(0), Fraction(1)))]
    res = min_of_max_on_simplex(forms, 2, exact=True)
    assert res.exact_value == Fraction(1, 2)


entry = st.one_of(st.just(0.0), st.floats(1e-3, 4), st.floats(-4, -1e-3))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_lp_value_bounds_random_simplex_points(data):
    n = data.draw(st.integers(1, 4))
    nforms = data.draw(st.integers(1, 5))
    forms = [
        LinearForm(tuple(data.draw(entry) for _ in range(n))) for _ in range(nforms)
    ]
    res = min_of_max_on_simplex(forms, n)
    raw = [data.draw(st.floats(0.01, 1.0)) for _ in range(n)]
    total = sum(raw)
    x = tuple(v / total for v in raw)
    assert res.value <= max(f.value_at(x) for f in forms) + 1e-9
    # result invariants: argmin on the simplex, value attained there
    assert abs(sum(res.argmin) - 1.0) <= 1e-12
    assert all(v >= -1e-12 for v in res.argmin)
    assert abs(max(f.value_at(res.argmin) for f in forms) - res.value) <= 1e-12


# -- domination pruning ------------------------------------------------------


def test_dominated_piece_detection():
    assert piece_is_dominated((2, 0), [(1, 0)], 2)
    # min(2x1, 2x2) <= x1 + x2 everywhere, so (1,1) adds nothing next to the axes
    assert piece_is_dominated((1, 1), [(2, 0), (0, 2)], 2)
    # but it does cut below min(3x1, 3x2) at the barycenter
    assert not piece_is_dominated((1, 1), [(3, 0), (0, 3)], 2)
    assert prune_pieces([(1, 0), (0, 1), (1, 1)], 2) == (
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(0)),
    )


def test_prune_idempotent():
    pieces = [(3, 0), (1, 0), (1, 2), (2, 1)]
    once = prune_pieces(pieces, 2)
    assert prune_pieces(once, 2) == once


# -- Newton body -------------------------------------------------------------


@pytest.fixture
def corner_body():
    return NewtonBody([(1, 0), (0, 1)], 2)


def test_newton_examples(corner_body):
    assert newton_membership(corner_body, (1, 1)) == "interior"
    assert newton_membership(corner_body, (0.5, 0.5)) == "boundary"
    assert newton_membership(corner_body, (0.4, 0.4)) == "outside"


def test_newton_monotone_componentwise(corner_body):
    order = {"outside": 0, "boundary": 1, "interior": 2}
    pts = [(0.2, 0.2), (0.5, 0.5), (0.5, 0.6), (0.9, 1.4), (2.0, 2.0)]
    for mu in pts:
        base = order[newton_membership(corner_body, mu)]
        bigger = (mu[0] + 0.25, mu[1] + 0.5)
        assert order[newton_membership(corner_body, bigger)] >= base


def test_newton_dimension_mismatch(corner_body):
    with pytest.raises(ValueError):
        newton_membership(corner_body, (1, 1, 1))


# -- ideal membership --------------------------------------------------------


def wp_log_abs_z():
    return WeightPair(TropicalWeight([[1]]))


def test_membership_examples():
    wp = wp_log_abs_z()
    assert ideal_membership((0,), 1, wp) is True
    assert ideal_membership((0,), 2, wp) is False  # threshold exactly 2: divergent
    wp2 = WeightPair(TropicalWeight.monomial_max([1, 1]))
    assert ideal_membership((0, 0), 3, wp2) is True  # threshold 4


def test_membership_rejects_negative_c():
    with pytest.raises(ValueError):
        ideal_membership((0,), -0.5, wp_log_abs_z())


def test_membership_boundary_decided_exactly():
    # value lands exactly on the threshold; the rational re-solve must say no
    wp = WeightPair(TropicalWeight.monomial_max([Fraction(1, 3), Fraction(2, 3)]))
    c_star = 2 * (Fraction(1, 3) + Fraction(2, 3))
    assert ideal_membership((0, 0), c_star, wp) is False
    assert ideal_membership((0, 0), c_star - Fraction(1, 10**9), wp) is True


def test_membership_monotone_in_c():
    wp = WeightPair(
        TropicalWeight([[2, 0], [1, 1]]), TropicalWeight([[Fraction(1, 2), 0]])
    )
    previous = True
    for c in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0]:
        current = ideal_membership((1, 0), c, wp)
        assert previous or not current  # once false, stays false
        previous = current


def test_membership_agrees_with_closed_form_monomial_max():
    import random

    rng = random.Random(20240)
    for _ in range(200):
        n = rng.randint(1, 4)
        w = [Fraction(rng.randint(4, 80), 16) for _ in range(n)]
        alpha = tuple(rng.randint(0, 3) for _ in range(n))
        threshold = 2 * sum((a + 1) * wi for a, wi in zip(alpha, w))
        c = Fraction(rng.randint(1, 140), 16)
        wp = WeightPair(TropicalWeight.monomial_max(w))
        assert ideal_membership(alpha, c, wp) == (c < threshold)


def test_integrability_margin_sign():
    wp = wp_log_abs_z()
    assert integrability_margin((0,), 1, wp).value == pytest.approx(1.0, abs=1e-12)
    assert integrability_margin((0,), 2, wp).value == pytest.approx(0.0, abs=1e-12)
