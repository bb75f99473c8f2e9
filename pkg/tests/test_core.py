"""Domain types and the algebraic operations on them."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xicse.core import (
    DimensionMismatchError,
    Functional,
    Germ,
    InfiniteTailError,
    MultiIndex,
    RestrictionMinusInfinityError,
    TropicalWeight,
    WeightPair,
    combine_product,
    eval_pieces,
    lift_functional,
    max_weight,
    pair,
    product_functional,
    product_germ,
    restrict_diagonal,
    restrict_weight,
    scale_weight,
    translate_weight,
    weight_eval_log,
)


# -- MultiIndex ---------------------------------------------------------------


def test_multi_index_validation():
    assert MultiIndex((0, 2)).degree == 2
    with pytest.raises(ValueError):
        MultiIndex((-1, 0))
    with pytest.raises(ValueError):
        MultiIndex(())


# -- pairing ------------------------------------------------------------------


def test_pair_examples():
    assert pair(Functional.delta((0,)), Germ.one(1)) == 1
    assert pair(Functional(2, {(1, 0): 2j}), Germ(2, {(1, 0): 3.0})) == 6j
    assert pair(Functional.delta((2,)), Germ(1, {(1,): 1.0})) == 0


def test_pair_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        pair(Functional.delta((0,)), Germ.one(2))


def test_pair_rejects_infinite_tail():
    xi = Functional(1, {(0,): 1.0}, infinite_tail=True)
    with pytest.raises(InfiniteTailError):
        pair(xi, Germ.one(1))


coeff = st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False)


@st.composite
def sparse_functional(draw, n):
    size = draw(st.integers(0, 4))
    coeffs = {}
    for _ in range(size):
        alpha = tuple(draw(st.integers(0, 3)) for _ in range(n))
        coeffs[alpha] = draw(coeff)
    return Functional(n, coeffs)


@st.composite
def sparse_germ(draw, n):
    size = draw(st.integers(0, 4))
    coeffs = {}
    for _ in range(size):
        alpha = tuple(draw(st.integers(0, 3)) for _ in range(n))
        coeffs[alpha] = draw(coeff)
    return Germ(n, coeffs)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_pair_is_bilinear(data):
    n = data.draw(st.integers(1, 3))
    xi1 = data.draw(sparse_functional(n))
    xi2 = data.draw(sparse_functional(n))
    f = data.draw(sparse_germ(n))
    a = data.draw(coeff)
    b = data.draw(coeff)
    combo = Functional(
        n,
        {
            alpha: a * xi1.coefficient(alpha) + b * xi2.coefficient(alpha)
            for alpha in set(xi1.support) | set(xi2.support)
        },
    )
    lhs = pair(combo, f)
    rhs = a * pair(xi1, f) + b * pair(xi2, f)
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_pair_respects_products(data):
    n1 = data.draw(st.integers(1, 2))
    n2 = data.draw(st.integers(1, 2))
    xi1, xi2 = data.draw(sparse_functional(n1)), data.draw(sparse_functional(n2))
    f1, f2 = data.draw(sparse_germ(n1)), data.draw(sparse_germ(n2))
    lhs = pair(product_functional(xi1, xi2), product_germ(f1, f2))
    rhs = pair(xi1, f1) * pair(xi2, f2)
    assert lhs == pytest.approx(rhs, abs=1e-9)


# -- lift / product -----------------------------------------------------------


def test_lift_examples():
    assert lift_functional(Functional.delta((1,)), 2).support == (MultiIndex((1, 0)),)
    assert lift_functional(Functional(1, {}), 3).is_zero
    lifted = lift_functional(Functional(1, {(0,): 1.0, (2,): 3.0}), 3)
    assert lifted.support == (MultiIndex((0, 0, 0)), MultiIndex((2, 0, 0)))
    with pytest.raises(ValueError):
        lift_functional(Functional.delta((1, 1)), 2)


def test_product_functional_examples():
    d0 = Functional.delta((0,))
    assert product_functional(d0, d0).support == (MultiIndex((0, 0)),)
    p = product_functional(
        Functional(1, {(1,): 2.0}), Functional(1, {(0,): 3.0, (2,): 1j})
    )
    assert p.coefficient((1, 0)) == 6.0
    assert p.coefficient((1, 2)) == 2j
    assert product_functional(d0, Functional(1, {})).is_zero


def test_product_support_is_cartesian():
    xi1 = Functional(1, {(0,): 1.0, (2,): 1.0})
    xi2 = Functional(2, {(1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0})
    prod = product_functional(xi1, xi2)
    assert len(prod.support) == len(xi1.support) * len(xi2.support)


# -- weights ------------------------------------------------------------------


def test_weight_validation():
    with pytest.raises(ValueError):
        TropicalWeight([[0, 0]])
    with pytest.raises(ValueError):
        TropicalWeight([[1, -1]])
    with pytest.raises(ValueError):
        TropicalWeight([])
    with pytest.raises(DimensionMismatchError):
        TropicalWeight([[1, 0], [1]])


def test_weight_eval_examples():
    phi = TropicalWeight.monomial_max([1, 2])
    assert weight_eval_log(phi, (1, 2)) == pytest.approx(1.0)
    assert weight_eval_log(phi, (0, 0)) == 0.0
    assert weight_eval_log(TropicalWeight([[1, 1]]), (2, 3)) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        weight_eval_log(phi, (-1, 0))


def test_monomial_max_roundtrip():
    w = (Fraction(1), Fraction(5, 2))
    phi = TropicalWeight.monomial_max(w)
    assert phi.as_monomial_max() == w
    assert TropicalWeight([[1, 1]]).as_monomial_max() is None


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_gauge_positively_homogeneous(data):
    n = data.draw(st.integers(1, 4))
    pieces = [
        [data.draw(st.integers(0, 8)) for _ in range(n)]
        for _ in range(data.draw(st.integers(1, 4)))
    ]
    pieces = [p for p in pieces if any(p)]
    if not pieces:
        pieces = [[1] * n]
    phi = TropicalWeight(pieces)
    x = [data.draw(st.floats(0, 10, allow_nan=False)) for _ in range(n)]
    s = data.draw(st.floats(0, 7, allow_nan=False))
    lhs = weight_eval_log(phi, [s * v for v in x])
    rhs = s * weight_eval_log(phi, x)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_pruning_preserves_gauge_at_random_points():
    import random

    rng = random.Random(5150)
    raw = [[2, 0], [1, 0], [1, 2], [3, 3], [0, 4]]
    phi = TropicalWeight(raw)
    for _ in range(1000):
        x = (rng.uniform(0, 5), rng.uniform(0, 5))
        assert abs(eval_pieces(raw, x) - weight_eval_log(phi, x)) <= 1e-12


def test_weight_equality_after_pruning():
    a = TropicalWeight([[1, 0], [0, 1], [2, 2]])
    b = TropicalWeight([[0, 1], [1, 0]])
    assert a == b


# -- restriction --------------------------------------------------------------


def test_restrict_examples():
    r = restrict_weight(TropicalWeight([[2, 0], [1, 1]]), 1)
    assert r.pieces == ((Fraction(2),),)
    with pytest.raises(RestrictionMinusInfinityError):
        restrict_weight(TropicalWeight([[0, 1]]), 1)
    r2 = restrict_weight(TropicalWeight([[1, 0], [3, 0]]), 1)
    assert r2.pieces == ((Fraction(1),),)
    with pytest.raises(ValueError):
        restrict_weight(TropicalWeight([[1, 0]]), 2)


# -- products of pairs --------------------------------------------------------


def test_combine_examples():
    log_abs = TropicalWeight([[1]])
    combined = combine_product(log_abs, None, log_abs, None)
    assert combined.phi == TropicalWeight.monomial_max([1, 1])
    assert combined.psi is None
    both = combine_product(
        log_abs, TropicalWeight([[1]]), log_abs, TropicalWeight([[2]])
    )
    assert both.psi.pieces == ((Fraction(1), Fraction(2)),)


def test_combine_rejects_offset_mismatch():
    with pytest.raises(ValueError):
        combine_product(
            TropicalWeight([[1]], offset=1), None, TropicalWeight([[1]]), None
        )


def test_combined_gauge_is_min_of_block_gauges():
    import random

    rng = random.Random(99)
    phi1 = TropicalWeight([[2, 1], [0, 3]])
    phi2 = TropicalWeight([[1], [4]])
    combined = combine_product(phi1, None, phi2, None).phi
    for _ in range(200):
        x = [rng.uniform(0, 3) for _ in range(2)]
        y = [rng.uniform(0, 3)]
        lhs = weight_eval_log(combined, x + y)
        rhs = min(weight_eval_log(phi1, x), weight_eval_log(phi2, y))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_diagonal_restriction_gives_pointwise_max():
    u = TropicalWeight([[1, 0], [0, 2]])
    v = TropicalWeight([[1, 1]])
    combined = combine_product(u, None, v, None).phi
    diag = restrict_diagonal(combined)
    assert diag == max_weight(u, v)
    with pytest.raises(ValueError):
        restrict_diagonal(TropicalWeight([[1, 0, 0]]))


def test_scale_translate():
    phi = TropicalWeight([[1, 2]], offset=Fraction(1, 2))
    assert scale_weight(phi, 2).pieces == ((Fraction(2), Fraction(4)),)
    assert translate_weight(phi, 1).offset == Fraction(3, 2)
    with pytest.raises(ValueError):
        scale_weight(phi, 0)


def test_weight_pair_dimension_check():
    with pytest.raises(DimensionMismatchError):
        WeightPair(TropicalWeight([[1]]), TropicalWeight([[1, 0]]))
    wp = WeightPair(TropicalWeight([[1, 0], [0, 1]]))
    assert wp.psi_pieces() == ((Fraction(0), Fraction(0)),)
