"""Seeded generators of polynomials, forms, matrices and map pairs.

Everything takes a ``random.Random`` so runs are reproducible from one seed.
Defaults stay small (degree at most 3, few terms) to keep exact arithmetic fast.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from . import linalg
from .polyalg import Polynomial
from .pullback import MapPair
from .superforms import Superform


def random_rational(rng: random.Random, bound: int = 5, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def random_exponent(rng: random.Random, r: int, max_degree: int) -> tuple[int, ...]:
    d = rng.randint(0, max_degree)
    e = [0] * r
    for _ in range(d):
        if r:
            e[rng.randrange(r)] += 1
    return tuple(e)


def random_polynomial(rng: random.Random, r: int, max_degree: int = 3, max_terms: int = 3) -> Polynomial:
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(rng.randint(0, max_terms)):
        e = random_exponent(rng, r, max_degree)
        terms[e] = terms.get(e, Fraction(0)) + random_rational(rng)
    return Polynomial(r, terms)


def random_form(
    rng: random.Random,
    r: int,
    bidegree: tuple[int, int],
    max_degree: int = 3,
    max_terms: int = 3,
    density: float = 0.6,
) -> Superform:
    p, q = bidegree
    terms = {}
    for I in combinations(range(r), p):
        for J in combinations(range(r), q):
            if rng.random() < density:
                terms[(I, J)] = random_polynomial(rng, r, max_degree, max_terms)
    return Superform(r, (p, q), terms)


def random_bidegree(rng: random.Random, r: int, max_total: int = 3) -> tuple[int, int]:
    choices = [(p, q) for p in range(r + 1) for q in range(r + 1) if p + q <= max_total]
    return rng.choice(choices)


def random_cylinder_form(rng: random.Random, base_dim: int, max_degree: int = 3, max_total: int = 3) -> Superform:
    """A form on ``Q^base_dim x Q``; the last coordinate plays the role of ``t``."""
    R = base_dim + 1
    return random_form(rng, R, random_bidegree(rng, R, max_total), max_degree)


def random_invertible_matrix(rng: random.Random, r: int, bound: int = 3) -> list[list[Fraction]]:
    while True:
        A = [[Fraction(rng.randint(-bound, bound)) for _ in range(r)] for _ in range(r)]
        if linalg.det(A) != 0:
            return A


def random_affine_pair(rng: random.Random, source_dim: int, target_dim: int) -> MapPair:
    A = [[random_rational(rng, 3, 2) for _ in range(source_dim)] for _ in range(target_dim)]
    b = [random_rational(rng, 3, 2) for _ in range(target_dim)]
    return MapPair.affine(A, b)


def random_map_pair(rng: random.Random, source_dim: int, target_dim: int, max_degree: int = 2) -> MapPair:
    """Polynomial ``s`` with an unrelated random ``L``."""
    s = tuple(random_polynomial(rng, source_dim, max_degree) for _ in range(target_dim))
    L = tuple(tuple(random_rational(rng, 3, 2) for _ in range(source_dim)) for _ in range(target_dim))
    return MapPair(source_dim, target_dim, s, L)
