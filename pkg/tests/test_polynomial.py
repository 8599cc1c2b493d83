import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weylkit.polynomial import (
    ZERO_DEGREE,
    IntegralityError,
    IntegralPolynomial,
    PolynomialSyntaxError,
    RationalPolynomial,
    binom,
    binomial_transform,
    compose,
    from_monomial,
    is_essentially_distinct,
    parse_family,
    parse_poly,
    parse_rational_poly,
    to_monomial,
)

F = Fraction


def test_parse_square_binomial_coords():
    assert parse_poly("n^2").binom_coeffs == (0, 1, 2)


def test_parse_binom_basis_element():
    assert parse_poly("binom(n,2)").binom_coeffs == (0, 0, 1)


def test_parse_half_n_is_not_integral():
    with pytest.raises(IntegralityError):
        parse_poly("n/2")


def test_parse_accepts_integer_valued_rational_form():
    assert parse_poly("n^2/2 - n/2") == IntegralPolynomial.binomial(2)


@pytest.mark.parametrize("text", ["n^", "2*(n+1", "n+*2", "m^2", "", "n^-1"])
def test_parse_errors_have_position(text):
    with pytest.raises(PolynomialSyntaxError) as exc:
        parse_poly(text)
    assert exc.value.pos >= 0


def test_implicit_product_and_sign():
    assert parse_poly("-2n + 3n^2") == parse_poly("3*n^2 - 2*n")


def test_family_splits_only_top_level_commas():
    fam = parse_family("{n, binom(n,2), 2n}")
    assert fam == [parse_poly("n"), IntegralPolynomial.binomial(2), parse_poly("2*n")]


@pytest.mark.parametrize("p,n,v", [("n^2", 10, 100), ("binom(n,2)", -3, 6), ("n^3", 5, 125)])
def test_eval(p, n, v):
    assert parse_poly(p)(n) == v


def test_cube_binomial_coords():
    assert parse_poly("n^3").binom_coeffs == (0, 1, 6, 6)


def test_binomial_transform_examples():
    n = parse_poly("n")
    assert binomial_transform(n, 2) == IntegralPolynomial.binomial(2)
    assert binomial_transform(parse_poly("2n"), 2) == parse_poly("2n^2 - n")
    assert binomial_transform(parse_poly("n^2"), 1) == parse_poly("n^2")
    assert binomial_transform(n, 0) == IntegralPolynomial.constant(1)


def test_compose_examples():
    assert compose(parse_poly("n^2"), parse_poly("2n")) == parse_poly("4n^2")
    lhs = compose(IntegralPolynomial.binomial(2), parse_poly("n+1"))
    assert lhs == parse_poly("binom(n,2) + n")
    assert all(lhs(k) == math.comb(k + 1, 2) for k in range(6))
    p = parse_poly("3n^3 - n")
    assert compose(p, IntegralPolynomial.identity()) == p


def test_essentially_distinct():
    assert is_essentially_distinct([parse_poly("n"), parse_poly("2n")])
    assert not is_essentially_distinct([parse_poly("n"), parse_poly("n+1")])
    assert is_essentially_distinct([parse_poly("n^2"), parse_poly("n^2+n")])


def test_to_monomial_examples():
    assert to_monomial(IntegralPolynomial.binomial(2)).mono_coeffs == (0, F(-1, 2), F(1, 2))
    assert to_monomial(parse_poly("n")).mono_coeffs == (0, 1)
    assert to_monomial(IntegralPolynomial.binomial(3)).mono_coeffs == (0, F(1, 3), F(-1, 2), F(1, 6))


def test_zero_polynomial():
    z = IntegralPolynomial()
    assert z.degree == ZERO_DEGREE and z.degree < 0
    assert z.binom_coeffs == ()
    assert parse_poly("n - n") == z


def test_binom_negative_top():
    assert binom(-3, 2) == 6
    assert binom(-1, 3) == -1
    assert binom(4, 7) == 0


def test_rational_printing_round_trips():
    p = parse_rational_poly("n^3 - n^4/2 + 1/3")
    assert parse_rational_poly(str(p)) == p


# -- properties ------------------------------------------------------------

coeff = st.integers(-5, 5)
polys = st.lists(coeff, max_size=5).map(lambda cs: IntegralPolynomial(tuple(cs)))


@given(polys)
def test_monomial_round_trip(p):
    assert from_monomial(to_monomial(p)) == p


@given(polys, polys, st.integers(-20, 20))
def test_composition_is_evaluation_homomorphism(p, q, n):
    assert compose(p, q)(n) == p(q(n))


@settings(max_examples=60)
@given(polys, st.integers(0, 4), st.integers(-10, 50))
def test_binomial_transform_values(p, k, n):
    v = p(n)
    assert binomial_transform(p, k)(n) == binom(v, k)


@given(polys.filter(lambda p: p.degree >= 1), st.integers(1, 4))
def test_binomial_transform_degree(p, k):
    assert binomial_transform(p, k).degree == k * p.degree


@settings(max_examples=50)
@given(polys)
def test_monomial_form_agrees_with_sympy(p):
    x = sympy.Symbol("x")
    expr = sum((c * sympy.binomial(x, j) for j, c in enumerate(p.binom_coeffs)), sympy.Integer(0))
    coeffs = sympy.Poly(sympy.expand_func(expr), x).all_coeffs()[::-1] if p.binom_coeffs else []
    ours = p.to_monomial().mono_coeffs
    theirs = [F(int(c.p), int(c.q)) for c in coeffs]
    while theirs and theirs[-1] == 0:
        theirs.pop()
    assert list(ours) == theirs


def test_rational_polynomial_arithmetic():
    a = RationalPolynomial((0, 1))
    assert (a * a - a) / 2 == to_monomial(IntegralPolynomial.binomial(2))
    assert (a + 1) ** 2 == parse_rational_poly("n^2 + 2n + 1")
