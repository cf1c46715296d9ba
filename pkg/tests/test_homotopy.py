import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyforms.errors import NotClosedError, PreconditionError
from polyforms.fixtures import FIXTURES, segment, solid_triangle, tropical_line
from polyforms.homotopy import (
    CylinderForm,
    chain_homotopy_check,
    chain_homotopy_sides,
    conjugated_k_prime,
    contraction_pair,
    d_double_prime_primitive,
    d_prime_primitive,
    d_primitive_reduction,
    homotopy_formula_sides,
    homotopy_formula_verify,
    iota_map,
    iota_pullback,
    k_prime,
)
from polyforms.polyalg import Polynomial, variables
from polyforms.polyhedra import FullSupport, star
from polyforms.pullback import pullback
from polyforms.randgen import random_cylinder_form, random_form, random_invertible_matrix
from polyforms.superforms import GradedForm, Superform, d_double_prime, d_prime, d_total, equal_on_domain, vanishes_on

from strategies import forms

F = Fraction


def test_k_prime_examples():
    x, t = variables(2)
    assert k_prime(Superform.dprime_x(2, 1) * t) == Superform.function(Polynomial.constant(1, F(1, 2)), 1)
    beta = Superform.monomial(2, [1], [0], x * t)
    u = Polynomial.variable(1, 0)
    assert k_prime(beta) == Superform.ddouble_x(1, 0) * (u * F(1, 2))
    assert k_prime(Superform.monomial(2, [0], [1], x) + Superform.monomial(2, [0], [0], t)).is_zero()


def test_k_prime_sign_moves_dt_to_front():
    # t d'x1 ^ d't = -t d't ^ d'x1, so K' gives -1/2 d'x1
    x, y, t = variables(3)
    beta = Superform.monomial(3, [0, 2], [], t)
    assert k_prime(beta) == Superform.dprime_x(2, 0) * F(-1, 2)


def test_k_prime_of_low_degree_is_zero():
    out = k_prime(Superform.function(Polynomial.variable(2, 1)))
    assert out.is_zero() and out.ambient_dim == 1


def test_buckets_partition():
    rng = random.Random(4)
    for _ in range(20):
        beta = CylinderForm(random_cylinder_form(rng, 2))
        parts = beta.buckets()
        total = parts["a"] + parts["b"] + parts["e"] + parts["g"]
        assert total == beta.form
        assert sum(len(p.terms) for p in parts.values()) == len(beta.form.terms)


def test_iota_examples():
    x, t = variables(2)
    u = Polynomial.variable(1, 0)
    a = Superform.function(x * t + x * x)
    assert iota_pullback(1, a) == Superform.function(u + u * u)
    assert iota_pullback(0, a) == Superform.function(u * u)
    assert iota_pullback(1, Superform.dprime_x(2, 1) * x).is_zero()
    assert iota_pullback(1, Superform.ddouble_x(2, 0) * t) == Superform.ddouble_x(1, 0)
    with pytest.raises(ValueError):
        iota_pullback(2, a)


@settings(max_examples=40, deadline=None)
@given(forms(3, max_degree=2), st.sampled_from([0, 1]))
def test_iota_matches_affine_pullback(beta, i):
    assert iota_pullback(i, beta) == pullback(iota_map(i, 2), beta)


def test_chain_homotopy_bucket_cases():
    x, t = variables(2)
    a = Superform.function(x * t * t)
    lhs, rhs = chain_homotopy_sides(a)
    assert lhs == rhs == Superform.function(Polynomial.variable(1, 0))
    g = Superform.monomial(2, [1], [1], x * t)
    e = Superform.monomial(2, [], [1], x * t)
    for beta in (e, g):
        lhs, rhs = chain_homotopy_sides(beta)
        assert lhs.is_zero() and rhs.is_zero()


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda R: forms(R, max_degree=3)))
def test_chain_homotopy_identity(beta):
    lhs, rhs = chain_homotopy_sides(beta)
    assert lhs == rhs


def test_chain_homotopy_check_on_domain():
    rng = random.Random(8)
    C = solid_triangle()
    for _ in range(5):
        assert chain_homotopy_check(C, random_cylinder_form(rng, 2), FullSupport())


def test_conjugated_k_prime_equals_k_prime():
    rng = random.Random(9)
    for r in (1, 2, 3):
        for _ in range(4):
            beta = random_cylinder_form(rng, r)
            A = random_invertible_matrix(rng, r)
            assert conjugated_k_prime(beta, A) == k_prime(beta)


def test_contraction_pair_examples():
    F0, G0 = contraction_pair((0, 0))
    x, y, t = variables(3)
    assert G0.s == (t * x, t * y)
    _, G = contraction_pair((1, 2))
    assert [f.substitute([x, y, Polynomial.constant(3, 1)]) for f in G.s] == [x, y]
    assert [f.substitute([x, y, Polynomial.zero(3)]) for f in G.s] == [Polynomial.constant(3, 1), Polynomial.constant(3, 2)]
    assert F0.L == ((1, 0), (0, 1))
    assert G.L == ((1, 0, 0), (0, 1, 0))


def test_homotopy_formula_hand_example():
    # alpha = d'x on the line, z = 0
    alpha = Superform.dprime_x(1, 0)
    F, G = contraction_pair((0,))
    x, t = variables(2)
    assert pullback(G, alpha) == Superform.dprime_x(2, 0) * t + Superform.dprime_x(2, 1) * x
    assert k_prime(pullback(G, alpha)) == Superform.function(Polynomial.variable(1, 0))
    assert pullback(F, alpha).is_zero()
    lhs, rhs = homotopy_formula_sides(alpha, (0,))
    assert lhs == rhs == alpha


def test_homotopy_formula_constant():
    lhs, rhs = homotopy_formula_sides(Superform.function(Polynomial.constant(2, 7)), (F(1, 3), 0))
    assert lhs.is_zero() and rhs.is_zero()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_homotopy_formula_on_stars(name):
    C = FIXTURES[name]()
    rng = random.Random(name)
    for sigma in C.cells:
        dom, _ = star(C, sigma.id)
        alpha = random_form(rng, C.ambient_dim, (rng.randint(0, 2), rng.randint(0, 1)), 2)
        assert homotopy_formula_verify(C, alpha, dom)


def test_homotopy_formula_requires_star():
    with pytest.raises(PreconditionError):
        homotopy_formula_verify(segment(), Superform.dprime_x(2, 0), FullSupport())


# -- primitives -----------------------------------------------------------------


def test_primitive_of_radial_form():
    C = solid_triangle()
    x, y = variables(2)
    alpha = Superform.dprime_x(2, 0) * x + Superform.dprime_x(2, 1) * y
    dom, _ = star(C, "A")
    beta = d_prime_primitive(C, alpha, dom)
    assert beta == Superform.function((x * x + y * y) * F(1, 2))


@pytest.mark.parametrize("cell", ["A", "B", "AB", "ABC"])
def test_primitive_of_coordinate_differential(cell):
    C = solid_triangle()
    dom, _ = star(C, cell)
    x1 = Polynomial.variable(2, 0)
    beta = d_prime_primitive(C, Superform.dprime_x(2, 0), dom)
    assert beta == Superform.function(x1 - dom.center[0])


def test_primitive_of_form_vanishing_on_segment():
    C = segment()
    dom, _ = star(C, "A")
    y = Polynomial.variable(2, 1)
    beta = d_prime_primitive(C, Superform.dprime_x(2, 0) * y, dom)
    assert equal_on_domain(C, beta, Superform.zero(2, (0, 0)), dom)


def test_primitive_rejects_non_closed():
    C = solid_triangle()
    dom, _ = star(C, "A")
    y = Polynomial.variable(2, 1)
    with pytest.raises(NotClosedError) as info:
        d_prime_primitive(C, Superform.dprime_x(2, 0) * y, dom)
    assert info.value.witness == "ABC"
    with pytest.raises(PreconditionError):
        d_prime_primitive(C, Superform.function(y), dom)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 10**6))
def test_primitive_of_exact_forms(name, seed):
    C = FIXTURES[name]()
    rng = random.Random(seed)
    sigma = rng.choice(C.cells)
    dom, _ = star(C, sigma.id)
    r = C.ambient_dim
    gamma = random_form(rng, r, (rng.randint(0, r - 1), rng.randint(0, 1)), 3)
    alpha = d_prime(gamma)
    beta = d_prime_primitive(C, alpha, dom)
    assert equal_on_domain(C, d_prime(beta), alpha, dom)


def test_d_double_prime_primitive_examples():
    C = solid_triangle()
    x, y = variables(2)
    dom, _ = star(C, "A")
    alpha = Superform.ddouble_x(2, 0) * x + Superform.ddouble_x(2, 1) * y
    assert d_double_prime_primitive(C, alpha, dom) == Superform.function((x * x + y * y) * F(1, 2))
    dom, _ = star(C, "ABC")
    assert d_double_prime_primitive(C, Superform.ddouble_x(2, 0), dom) == Superform.function(x - F(1, 3))
    assert d_double_prime_primitive(C, Superform.zero(2, (0, 1)), dom).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_d_double_prime_primitive_of_exact_forms(seed):
    rng = random.Random(seed)
    C = solid_triangle()
    dom, _ = star(C, rng.choice(["A", "B", "C", "AB", "ABC"]))
    gamma = random_form(rng, 2, (rng.randint(0, 1), rng.randint(0, 1)), 3)
    alpha = d_double_prime(gamma)
    beta = d_double_prime_primitive(C, alpha, dom)
    assert equal_on_domain(C, d_double_prime(beta), alpha, dom)


# -- d-reduction ------------------------------------------------------------------


def test_reduction_of_pure_0k_form():
    C = solid_triangle()
    dom, _ = star(C, "A")
    alpha = Superform.ddouble_x(2, 0) * 3
    beta, gamma = d_primitive_reduction(C, alpha, dom)
    assert beta.is_zero() and gamma == alpha


def test_reduction_of_exact_one_form():
    C = solid_triangle()
    dom, _ = star(C, "A")
    x, y = variables(2)
    f = x * x * y + y
    alpha = d_total(Superform.function(f))
    beta, gamma = d_primitive_reduction(C, alpha, dom)
    assert gamma.bidegree == (0, 1)
    assert equal_on_domain(C, alpha - d_total(beta), GradedForm.of(gamma), dom)
    for op in (d_prime, d_double_prime):
        assert vanishes_on(C, op(gamma), dom)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_reduction_top_degree_is_exact(seed):
    rng = random.Random(seed)
    C = solid_triangle()
    dom, _ = star(C, "A")
    mu = GradedForm(2, [random_form(rng, 2, (p, 2 - p), 2) for p in range(3)])
    alpha = d_total(mu)
    beta, gamma = d_primitive_reduction(C, alpha, dom)
    assert vanishes_on(C, gamma, dom)
    assert equal_on_domain(C, alpha, d_total(beta), dom)


def test_reduction_rejects_mixed_and_non_closed():
    C = solid_triangle()
    dom, _ = star(C, "A")
    x = Polynomial.variable(2, 0)
    with pytest.raises(PreconditionError):
        d_primitive_reduction(C, GradedForm.of(Superform.dprime_x(2, 0), Superform.function(x)), dom)
    with pytest.raises(NotClosedError):
        d_primitive_reduction(C, Superform.dprime_x(2, 1) * x, dom)


def test_tropical_line_primitive():
    C = tropical_line()
    dom, _ = star(C, "O")
    x, y = variables(2)
    alpha = Superform.dprime_x(2, 0) * (x * y + 1)
    beta = d_prime_primitive(C, alpha, dom)
    assert equal_on_domain(C, d_prime(beta), alpha, dom)
