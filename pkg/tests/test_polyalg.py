from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from polyforms import linalg
from polyforms.polyalg import Polynomial, format_rational, parse_rational, variables

from strategies import matrices, polynomials, rationals

X = sympy.symbols("x1:4")


def to_sympy(f: Polynomial):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([X[i] ** k for i, k in enumerate(e)]) for e, c in f.terms.items()), sympy.Integer(0))


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), ("6/8", Fraction(3, 4)), (" 5 ", Fraction(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "0.5", "abc", "", 0.5, True, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(rationals)
def test_rational_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_format_omits_unit_denominator():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_basic_arithmetic_examples():
    x, y = variables(2)
    assert (x + y) * (x - y) == x * x - y * y
    assert ((x + 1) ** 2).sorted_terms()[0] == ((2, 0), Fraction(1))
    assert Polynomial.zero(2).degree() == -1
    assert (x * y * y).degree() == 3


def test_zero_coefficients_not_stored():
    x, y = variables(2)
    assert (x - x).terms == {}
    assert not (x - x)


def test_partial_and_integral():
    x, t = variables(2)
    f = x * t * 3
    assert f.partial(1) == x * 3
    assert f.integrate_unit_interval(1) == x * Fraction(3, 2)
    assert (t ** 3).integrate_unit_interval(1) == Polynomial.constant(2, Fraction(1, 4))


def test_substitute_and_evaluate():
    x, y = variables(2)
    f = x * x + y
    assert f.substitute([x + y, x]) == x * x + 2 * x * y + y * y + x
    assert f.evaluate([2, 3]) == 7


def test_drop_variable_requires_absence():
    x, y = variables(2)
    assert (x * 2).drop_variable(1) == Polynomial.variable(1, 0) * 2
    with pytest.raises(ValueError):
        y.drop_variable(1)


def test_bad_exponent_rejected():
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1})


@settings(max_examples=60, deadline=None)
@given(polynomials(3), polynomials(3), polynomials(3))
def test_ring_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == Polynomial.zero(3)


@settings(max_examples=60, deadline=None)
@given(polynomials(3), polynomials(3))
def test_product_matches_sympy(f, g):
    assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0


@settings(max_examples=60, deadline=None)
@given(polynomials(3), st.integers(0, 2))
def test_partial_and_integral_match_sympy(f, i):
    assert sympy.expand(to_sympy(f.partial(i)) - sympy.diff(to_sympy(f), X[i])) == 0
    expected = sympy.integrate(to_sympy(f), (X[i], 0, 1))
    assert sympy.expand(to_sympy(f.integrate_unit_interval(i)) - expected) == 0


@settings(max_examples=40, deadline=None)
@given(polynomials(2), polynomials(3, 2), polynomials(3, 2))
def test_substitution_matches_sympy(f, a, b):
    expected = to_sympy(f).subs({X[0]: to_sympy(a), X[1]: to_sympy(b)}, simultaneous=True)
    assert sympy.expand(to_sympy(f.substitute([a, b])) - expected) == 0


@settings(max_examples=40, deadline=None)
@given(polynomials(2), polynomials(2))
def test_leibniz(f, g):
    for i in range(2):
        assert (f * g).partial(i) == f.partial(i) * g + f * g.partial(i)


# -- exact linear algebra ---------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(lambda n: matrices(m, n, -3, 3))))
def test_rank_matches_rref_and_sympy(A):
    r = linalg.rank(A)
    assert r == len(linalg.rref(A)[1])
    assert r == sympy.Matrix(A).rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n, -3, 3)))
def test_det_matches_sympy(A):
    assert linalg.det(A) == sympy.Matrix(A).det()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n, -3, 3)))
def test_inverse(A):
    if linalg.det(A) == 0:
        with pytest.raises(ValueError):
            linalg.inverse(A)
    else:
        assert linalg.matmul(A, linalg.inverse(A)) == linalg.identity(len(A))


@settings(max_examples=40, deadline=None)
@given(matrices(3, 4, -2, 2))
def test_nullspace_is_kernel(A):
    basis = linalg.nullspace(A)
    assert len(basis) == 4 - linalg.rank(A)
    for v in basis:
        assert all(x == 0 for x in linalg.matvec(A, v))


@settings(max_examples=40, deadline=None)
@given(matrices(3, 2, -3, 3), matrices(2, 1, -3, 3))
def test_solve_consistent_system(A, x):
    b = [row[0] for row in linalg.matmul(A, x)]
    y = linalg.solve(A, b)
    assert y is not None and linalg.matvec(A, y) == b


def test_solve_inconsistent():
    assert linalg.solve([[Fraction(1)], [Fraction(1)]], [Fraction(0), Fraction(1)]) is None


def test_rank_with_fractions():
    A = linalg.to_matrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert linalg.rank(A) == 1
