import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyforms.fixtures import segment, solid_triangle, triangle_boundary, tropical_line, unit_interval
from polyforms.homotopy import contraction_pair
from polyforms.polyalg import Polynomial, variables
from polyforms.polyhedra import Cylinder, FullSupport, star
from polyforms.pullback import MapPair, allows_pullback, compose, naive_pullback, pullback
from polyforms.randgen import random_affine_pair, random_form, random_map_pair, random_polynomial
from polyforms.superforms import Superform, d_double_prime, d_prime, equal_on_domain, vanishes_on, wedge

from strategies import forms

x, y = variables(2)


def test_identity_pair_is_identity():
    alpha = Superform.monomial(2, [0], [1], x * y + 1)
    assert pullback(MapPair.identity(2), alpha) == alpha
    assert naive_pullback(MapPair.identity(2), alpha) == alpha


def test_constant_map_kills_positive_p():
    F = MapPair(2, 2, (Polynomial.constant(2, 3), Polynomial.constant(2, 5)), ((1, 0), (0, 1)))
    assert pullback(F, Superform.dprime_x(2, 0) * x).is_zero()
    assert pullback(F, Superform.ddouble_x(2, 0) * x) == Superform.ddouble_x(2, 0) * 3


def test_product_map_counterexample():
    dt = Superform.ddouble_x(1, 0)
    naive = naive_pullback([x * y], dt)
    assert naive == Superform.ddouble_x(2, 1) * x + Superform.ddouble_x(2, 0) * y
    expected = Superform.monomial(2, [0], [1]) + Superform.monomial(2, [1], [0])
    assert d_prime(naive) == expected
    assert naive_pullback([x * y], d_prime(dt)).is_zero()
    F = MapPair(2, 1, (x * y,), ((0, 0),))
    assert pullback(F, dt).is_zero()
    assert d_prime(pullback(F, dt)) == pullback(F, d_prime(dt))


def test_affine_naive_equals_pair():
    rng = random.Random(11)
    for _ in range(20):
        F = random_affine_pair(rng, rng.randint(1, 3), rng.randint(1, 3))
        alpha = random_form(rng, F.target_dim, (rng.randint(0, F.target_dim), rng.randint(0, F.target_dim)), 2)
        assert naive_pullback(F, alpha) == pullback(F, alpha)
        assert d_prime(naive_pullback(F, alpha)) == naive_pullback(F, d_prime(alpha))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_pullback_commutes_with_d_prime(src, tgt, seed):
    rng = random.Random(seed)
    F = random_map_pair(rng, src, tgt)
    alpha = random_form(rng, tgt, (rng.randint(0, tgt), rng.randint(0, tgt)), 2)
    assert d_prime(pullback(F, alpha)) == pullback(F, d_prime(alpha))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_functoriality(seed):
    rng = random.Random(seed)
    a, b, c = (rng.randint(1, 3) for _ in range(3))
    F = random_map_pair(rng, b, c)
    G = random_map_pair(rng, a, b)
    alpha = random_form(rng, c, (rng.randint(0, c), rng.randint(0, c)), 2)
    assert pullback(compose(F, G), alpha) == pullback(G, pullback(F, alpha))


def test_compose_examples():
    rng = random.Random(2)
    F = random_map_pair(rng, 2, 2)
    assert compose(F, MapPair.identity(2)) == F
    A = MapPair.affine([[1, 2], [0, 1]], [1, 0])
    B = MapPair.affine([[0, 1], [1, 0]], [0, 3])
    AB = compose(A, B)
    assert AB.is_affine() and AB.apply((1, 1)) == A.apply(B.apply((1, 1)))
    with pytest.raises(ValueError):
        compose(MapPair.identity(3), MapPair.identity(2))


def test_shape_validation():
    with pytest.raises(ValueError):
        MapPair(2, 1, (x,), ((1,),))
    with pytest.raises(ValueError):
        pullback(MapPair.identity(3), Superform.dprime_x(2, 0))


# -- allows_pullback ----------------------------------------------------------


@pytest.mark.parametrize("builder", [segment, solid_triangle, triangle_boundary, tropical_line])
def test_contraction_pairs_verified_on_stars(builder):
    C = builder()
    for m in C.minimal_cells:
        dom, _ = star(C, m.id)
        F, G = contraction_pair(dom.center)
        assert allows_pullback(F, C, dom, C, dom).verified
        assert allows_pullback(G, C, Cylinder(dom), C, dom).verified


def test_span_violation_refuted():
    C = segment()
    F = MapPair.affine([[1, 0], [0, 1]])
    F = MapPair(2, 2, F.s, ((0, 1), (1, 0)))
    v = allows_pullback(F, C, FullSupport(), C, FullSupport())
    assert v.status == "refuted"
    assert v.witness["source_cell"] == "AB"
    assert "span" in v.witness["failures"]["AB"]


def test_point_violation_refuted():
    C = segment()
    F = MapPair.affine([[1, 0], [0, 1]], [2, 0])
    v = allows_pullback(F, C, FullSupport(), C, FullSupport())
    assert v.status == "refuted" and "vertex" in v.witness["failures"]["AB"]


def test_nonaffine_map_unverified():
    I = unit_interval()
    u = variables(1)[0]
    F = MapPair(1, 1, (u * u,), ((1,),))
    assert allows_pullback(F, I, FullSupport(), I, FullSupport()).status == "unverified"


def test_embedding_verified():
    F = MapPair.affine([[1], [0]])
    v = allows_pullback(F, unit_interval(), FullSupport(), segment(), FullSupport())
    assert v.verified and v.assignment == {"AB": "AB"}


def _vanishing_on_x_axis(rng):
    """Random form that restricts to zero on the x-axis: a multiple of x2, d'x2 or d''x2."""
    p, q = rng.randint(0, 1), rng.randint(0, 1)
    base = random_form(rng, 2, (p, q), 2)
    choice = rng.randrange(3)
    if choice == 1 and p == 0:
        return wedge(Superform.dprime_x(2, 1), base)
    if choice == 2 and q == 0:
        return wedge(base, Superform.ddouble_x(2, 1))
    return base * y


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_verified_pullback_preserves_vanishing(seed):
    rng = random.Random(seed)
    target, src = segment(), unit_interval()
    alpha = _vanishing_on_x_axis(rng)
    assert vanishes_on(target, alpha, FullSupport())
    # u -> (a u + b, 0) with a + b <= 1 keeps [0, 1] inside the segment
    a, b = Fraction(rng.randint(0, 3), 4), Fraction(rng.randint(0, 1), 4)
    F = MapPair.affine([[a], [0]], [b, 0])
    assert allows_pullback(F, src, FullSupport(), target, FullSupport()).verified
    assert vanishes_on(src, pullback(F, alpha), FullSupport())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_contraction_preserves_vanishing_on_star(seed):
    rng = random.Random(seed)
    C = triangle_boundary()
    dom, _ = star(C, "A")
    _, G = contraction_pair(dom.center)
    assert allows_pullback(G, C, Cylinder(dom), C, dom).verified
    # x*y vanishes on both edges at A
    alpha = random_form(rng, 2, (rng.randint(0, 1), rng.randint(0, 1)), 2) * (x * y)
    assert vanishes_on(C, alpha, dom)
    assert vanishes_on(C, pullback(G, alpha), Cylinder(dom))


@settings(max_examples=30, deadline=None)
@given(forms(2, max_degree=2))
def test_affine_pullback_commutes_with_d_double_prime(alpha):
    F = MapPair.affine([[1, 2], [3, -1]], [1, 0])
    assert d_double_prime(pullback(F, alpha)) == pullback(F, d_double_prime(alpha))
    assert equal_on_domain(solid_triangle(), pullback(MapPair.identity(2), alpha), alpha, FullSupport())
