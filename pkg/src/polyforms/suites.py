"""Randomized identity suites behind ``polyforms check``.

Each suite is deterministic given its seed.  A failing case is shrunk by
dropping terms and monomials while it keeps failing, so the dump stays small.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .polyalg import Polynomial, variables
from .polyhedra import FullSupport, PolyhedralComplex, star
from .pullback import MapPair, compose, naive_pullback, pullback
from .randgen import random_bidegree, random_cylinder_form, random_form, random_map_pair
from .superforms import Superform, d_prime, equal_on_domain
from .homotopy import chain_homotopy_sides, homotopy_formula_sides, star_pullback_verdicts


@dataclass
class Failure:
    identity: str
    form: Superform
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: int
    count: int
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def minimize(alpha: Superform, fails: Callable[[Superform], bool]) -> Superform:
    """Greedy shrink: drop whole terms, then single monomials, while ``fails`` holds."""
    changed = True
    while changed:
        changed = False
        terms = dict(alpha.terms)
        for key in sorted(terms):
            trial = {k: v for k, v in terms.items() if k != key}
            cand = Superform(alpha.ambient_dim, alpha.bidegree, trial)
            if fails(cand):
                alpha, changed = cand, True
                break
        if changed:
            continue
        for key, f in sorted(alpha.terms.items()):
            for e in sorted(f.terms):
                if len(f.terms) == 1:
                    continue
                g = Polynomial(f.num_vars, {k: c for k, c in f.terms.items() if k != e})
                trial = dict(alpha.terms)
                trial[key] = g
                cand = Superform(alpha.ambient_dim, alpha.bidegree, trial)
                if fails(cand):
                    alpha, changed = cand, True
                    break
            if changed:
                break
    return alpha


# ---------------------------------------------------------------------------
# homotopy suite


def homotopy_suite(C: PolyhedralComplex, seed: int, count: int) -> SuiteReport:
    """Alternates the chain homotopy identity on ``|C| x [0,1]`` with the
    homotopy formula on stars of minimal cells."""
    rep = SuiteReport("homotopy", seed, count)
    rng = random.Random(seed)
    r = C.ambient_dim
    stars = [star(C, m.id)[0] for m in C.minimal_cells]
    certified = []
    for dom in stars:
        vF, vG = star_pullback_verdicts(C, dom)
        if vF.verified and vG.verified:
            certified.append(dom)
        else:
            rep.notes.append(f"star of {dom.cell_id} skipped: F {vF.status}, G {vG.status}")

    def chain_fails(beta: Superform) -> bool:
        lhs, rhs = chain_homotopy_sides(beta)
        return lhs != rhs or not equal_on_domain(C, lhs, rhs, FullSupport())

    for i in range(count):
        if i % 2 == 0 or not certified:
            beta = random_cylinder_form(rng, r)
            rep.cases += 1
            if chain_fails(beta):
                rep.failures.append(Failure("d'K' + K'd' = i1* - i0*", minimize(beta, chain_fails)))
        else:
            dom = rng.choice(certified)
            alpha = random_form(rng, r, random_bidegree(rng, r))

            def formula_fails(a: Superform, dom=dom) -> bool:
                lhs, rhs = homotopy_formula_sides(a, dom.center)
                return not equal_on_domain(C, lhs, rhs, dom)

            rep.cases += 1
            if formula_fails(alpha):
                rep.failures.append(
                    Failure("a - F*a = d'K'G*a + K'G*d'a", minimize(alpha, formula_fails), f"star of {dom.cell_id}")
                )
    return rep


# ---------------------------------------------------------------------------
# pullback suite


@dataclass(frozen=True)
class Counterexample:
    naive_result: Superform
    expected: Superform
    naive_of_dprime: Superform
    pair_lhs: Superform
    pair_rhs: Superform

    @property
    def reproduced(self) -> bool:
        return self.naive_result == self.expected and self.naive_result != self.naive_of_dprime

    @property
    def pair_commutes(self) -> bool:
        return self.pair_lhs == self.pair_rhs


def product_counterexample(L: tuple[tuple, ...] = ((0, 0),)) -> Counterexample:
    """``s(x, y) = x y`` pulling back ``d''t`` from the line."""
    x, y = variables(2)
    alpha = Superform.ddouble_x(1, 0)
    naive = naive_pullback([x * y], alpha)
    expected = Superform.monomial(2, [0], [1]) + Superform.monomial(2, [1], [0])
    F = MapPair(2, 1, (x * y,), L)
    return Counterexample(
        d_prime(naive),
        expected,
        naive_pullback([x * y], d_prime(alpha)),
        d_prime(pullback(F, alpha)),
        pullback(F, d_prime(alpha)),
    )


def pullback_suite(C: PolyhedralComplex, seed: int, count: int) -> SuiteReport:
    """Commutation with d' and functoriality for random polynomial map pairs.

    The product-map counterexample is always run first: the naive pullback
    must fail to commute there while the pair pullback commutes.
    """
    rep = SuiteReport("pullback", seed, count)
    ce = product_counterexample()
    rep.cases += 1
    if ce.reproduced and ce.pair_commutes:
        rep.notes.append(
            "naive-pullback non-commutation reproduced: d'F*(d''t) = "
            + ce.naive_result.to_str(["x", "y"])
            + " while F*(d'd''t) = 0; the (s, L) pullback commutes"
        )
    else:
        rep.failures.append(Failure("product-map counterexample", Superform.ddouble_x(1, 0), "not reproduced"))
    rng = random.Random(seed)
    r = C.ambient_dim
    for i in range(count):
        src = rng.randint(1, 3)
        F = random_map_pair(rng, src, r)
        alpha = random_form(rng, r, random_bidegree(rng, r, 2), max_degree=2)
        rep.cases += 1
        if i % 2 == 0:

            def fails(a: Superform, F=F) -> bool:
                return d_prime(pullback(F, a)) != pullback(F, d_prime(a))

            name = "d'F* = F*d'"
        else:
            G = random_map_pair(rng, rng.randint(1, 3), src)

            def fails(a: Superform, F=F, G=G) -> bool:
                return pullback(compose(F, G), a) != pullback(G, pullback(F, a))

            name = "(F o G)* = G* F*"
        if fails(alpha):
            rep.failures.append(Failure(name, minimize(alpha, fails)))
    return rep


SUITES = {"homotopy": homotopy_suite, "pullback": pullback_suite}
