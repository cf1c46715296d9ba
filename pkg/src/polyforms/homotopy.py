"""The homotopy operator K' and constructive Poincare primitives on stars.

Forms on a cylinder ``Omega x [0, 1]`` live in ambient dimension ``r + 1``
with the interval coordinate ``t`` as the last variable.  ``K'`` integrates
the part carrying ``d't`` over ``t``; it satisfies

    d'K' + K'd' = iota_1^* - iota_0^*

and, through the contraction ``(x, t) -> z + t (x - z)``, produces d'-primitives
of d'-closed forms on polyhedrally star-shaped domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import NotClosedError, PreconditionError
from .polyalg import Polynomial, variables
from .polyhedra import Cylinder, Domain, PolyhedralComplex, Star
from .pullback import MapPair, Verdict, allows_pullback, pullback
from .superforms import (
    GradedForm,
    Superform,
    d_double_prime,
    d_prime,
    d_total,
    equal_on_domain,
    j_swap,
    vanishing_witness,
)


@dataclass(frozen=True)
class CylinderForm:
    """A superform on ``Q^r x Q`` whose last coordinate is ``t``."""

    form: Superform

    @property
    def base_dim(self) -> int:
        return self.form.ambient_dim - 1

    def buckets(self) -> dict[str, Superform]:
        """Split into ``a`` (no dt), ``b`` (d't only), ``e`` (d''t only), ``g`` (both)."""
        t = self.base_dim
        out: dict[str, dict] = {"a": {}, "b": {}, "e": {}, "g": {}}
        for (I, J), f in self.form.terms.items():
            name = {(False, False): "a", (True, False): "b", (False, True): "e", (True, True): "g"}[(t in I, t in J)]
            out[name][(I, J)] = f
        return {k: Superform(self.form.ambient_dim, self.form.bidegree, v) for k, v in out.items()}


def _as_form(beta: Superform | CylinderForm) -> Superform:
    return beta.form if isinstance(beta, CylinderForm) else beta


def k_prime(beta: Superform | CylinderForm) -> Superform:
    """Integrate the d't-component over ``t`` in [0, 1].

    A stored term ``f d'x_I ^ d't ^ d''x_J`` (``t`` sorts last) equals
    ``(-1)^|I| f d't ^ d'x_I ^ d''x_J`` and contributes
    ``(-1)^|I| (int_0^1 f dt) d'x_I ^ d''x_J``.
    """
    beta = _as_form(beta)
    R = beta.ambient_dim
    r = R - 1
    t = r
    p, q = beta.bidegree
    if p <= 0:
        return Superform.zero(r, (p - 1, q))
    out: dict = {}
    for (I, J), f in beta.terms.items():
        if not I or I[-1] != t or t in J:
            continue
        sign = -1 if (len(I) - 1) % 2 else 1
        c = f.integrate_unit_interval(t).drop_variable(t) * sign
        key = (I[:-1], J)
        out[key] = out[key] + c if key in out else c
    return Superform(r, (p - 1, q), out)


def iota_map(i: int, r: int) -> MapPair:
    """The affine pair ``x -> (x, i)`` with its linear part."""
    A = [[Fraction(int(a == b)) for b in range(r)] for a in range(r)] + [[Fraction(0)] * r]
    return MapPair.affine(A, [0] * r + [i])


def iota_pullback(i: int, beta: Superform | CylinderForm) -> Superform:
    """Set ``t = i`` and drop every term containing d't or d''t."""
    if i not in (0, 1):
        raise ValueError("i must be 0 or 1")
    beta = _as_form(beta)
    r = beta.ambient_dim - 1
    images = variables(r) + [Polynomial.constant(r, i)]
    out = {}
    for (I, J), f in beta.terms.items():
        if r in I or r in J:
            continue
        g = f.substitute(images)
        if g:
            out[(I, J)] = g
    return Superform(r, beta.bidegree, out)


def chain_homotopy_sides(beta: Superform | CylinderForm) -> tuple[Superform, Superform]:
    """``(d'K' beta + K'd' beta, iota_1^* beta - iota_0^* beta)`` as ambient forms."""
    beta = _as_form(beta)
    lhs = d_prime(k_prime(beta)) + k_prime(d_prime(beta))
    rhs = iota_pullback(1, beta) - iota_pullback(0, beta)
    return lhs, rhs


def chain_homotopy_check(C: PolyhedralComplex, beta: Superform | CylinderForm, domain: Domain) -> bool:
    lhs, rhs = chain_homotopy_sides(beta)
    return equal_on_domain(C, lhs, rhs, domain)


def conjugated_k_prime(beta: Superform | CylinderForm, A: Sequence[Sequence]) -> Superform:
    """``K'`` computed in the coordinates ``y = A^{-1} x`` and transported back.

    Equals ``k_prime(beta)`` for every invertible ``A``.
    """
    beta = _as_form(beta)
    r = beta.ambient_dim - 1
    A = linalg.to_matrix(A)
    A_ext = [row + [Fraction(0)] for row in A] + [[Fraction(0)] * r + [Fraction(1)]]
    in_new = pullback(MapPair.affine(A_ext), beta)
    return pullback(MapPair.affine(linalg.inverse(A)), k_prime(in_new))


def contraction_pair(z: Sequence, r: int | None = None) -> tuple[MapPair, MapPair]:
    """``F = (const z, id)`` and ``G = (z + t (x - z), projection)``."""
    z = tuple(Fraction(c) for c in z)
    r = len(z) if r is None else r
    if len(z) != r:
        raise ValueError("center has the wrong dimension")
    F = MapPair(r, r, tuple(Polynomial.constant(r, c) for c in z), tuple(map(tuple, linalg.identity(r))))
    y = variables(r + 1)
    t = y[r]
    s_G = tuple(t * (y[i] - z[i]) + z[i] for i in range(r))
    L_G = tuple(tuple(Fraction(int(i == j)) for j in range(r + 1)) for i in range(r))
    G = MapPair(r + 1, r, s_G, L_G)
    return F, G


def homotopy_formula_sides(alpha: Superform, z: Sequence) -> tuple[Superform, Superform]:
    """``(alpha - F^* alpha, d'K'G^* alpha + K'G^* d' alpha)`` for the contraction to ``z``."""
    F, G = contraction_pair(z, alpha.ambient_dim)
    lhs = alpha - pullback(F, alpha)
    rhs = d_prime(k_prime(pullback(G, alpha))) + k_prime(pullback(G, d_prime(alpha)))
    return lhs, rhs


def _require_star(domain: Domain) -> Star:
    if not isinstance(domain, Star):
        raise PreconditionError(f"expected a star domain, got {domain}")
    return domain


def star_pullback_verdicts(C: PolyhedralComplex, domain: Star) -> tuple[Verdict, Verdict]:
    F, G = contraction_pair(domain.center, C.ambient_dim)
    vF = allows_pullback(F, C, domain, C, domain)
    vG = allows_pullback(G, C, Cylinder(domain), C, domain)
    return vF, vG


def homotopy_formula_verify(C: PolyhedralComplex, alpha: Superform, domain: Domain) -> bool:
    domain = _require_star(domain)
    vF, vG = star_pullback_verdicts(C, domain)
    for name, v in (("F", vF), ("G", vG)):
        if not v.verified:
            raise PreconditionError(f"contraction pair {name} does not certifiably allow a pullback: {v}")
    lhs, rhs = homotopy_formula_sides(alpha, domain.center)
    return equal_on_domain(C, lhs, rhs, domain)


def d_prime_primitive(C: PolyhedralComplex, alpha: Superform, domain: Domain, certify: bool = True) -> Superform:
    """``beta = K'G^* alpha`` with ``d' beta = alpha`` on a star.

    Raises :class:`NotClosedError` if ``d' alpha`` does not vanish on the
    domain.  The postcondition is checked before returning.
    """
    domain = _require_star(domain)
    if alpha.p <= 0:
        raise PreconditionError("d'-primitive needs p > 0")
    witness = vanishing_witness(C, d_prime(alpha), domain)
    if witness is not None:
        raise NotClosedError(f"d' of the input does not vanish on cell {witness!r}", witness)
    if certify:
        _, vG = star_pullback_verdicts(C, domain)
        if not vG.verified:
            raise PreconditionError(f"contraction does not certifiably allow a pullback: {vG}")
    _, G = contraction_pair(domain.center, alpha.ambient_dim)
    beta = k_prime(pullback(G, alpha))
    if not equal_on_domain(C, d_prime(beta), alpha, domain):
        raise AssertionError("d'-primitive postcondition failed")
    return beta


def d_double_prime_primitive(C: PolyhedralComplex, alpha: Superform, domain: Domain, certify: bool = True) -> Superform:
    """``beta`` with ``d'' beta = alpha`` on a star, via the swap ``J``.

    ``J d' J = (-1)^p d''`` on bidegree ``(p, q)``, so with ``d' b = J alpha``
    the form ``(-1)^p J b`` is a d''-primitive of ``alpha``.
    """
    domain = _require_star(domain)
    if alpha.q <= 0:
        raise PreconditionError("d''-primitive needs q > 0")
    witness = vanishing_witness(C, d_double_prime(alpha), domain)
    if witness is not None:
        raise NotClosedError(f"d'' of the input does not vanish on cell {witness!r}", witness)
    b = d_prime_primitive(C, j_swap(alpha), domain, certify=certify)
    beta = j_swap(b) * (-1 if alpha.p % 2 else 1)
    if not equal_on_domain(C, d_double_prime(beta), alpha, domain):
        raise AssertionError("d''-primitive postcondition failed")
    return beta


def d_primitive_reduction(
    C: PolyhedralComplex, alpha: Superform | GradedForm, domain: Domain, certify: bool = True
) -> tuple[GradedForm, Superform]:
    """Write a d-closed degree-``k`` form as ``d beta + gamma`` with ``gamma`` of bidegree ``(0, k)``.

    Solves ``d' beta_i = alpha_i - d'' beta_{i-1}`` for ``i = 0 .. k-1`` where
    ``alpha_i`` is the ``(k-i, i)`` component.  ``gamma`` is d'-, d''- and
    d-closed on the domain, and vanishes there when ``k`` exceeds the
    dimension of the complex.
    """
    domain = _require_star(domain)
    if isinstance(alpha, Superform):
        alpha = GradedForm(alpha.ambient_dim, [alpha])
    r = alpha.ambient_dim
    degrees = {p + q for p, q in alpha.bidegrees()}
    if len(degrees) > 1:
        raise PreconditionError(f"mixed total degrees {sorted(degrees)}")
    k = degrees.pop() if degrees else 0
    witness = vanishing_witness(C, d_total(alpha), domain)
    if witness is not None:
        raise NotClosedError(f"d of the input does not vanish on cell {witness!r}", witness)
    betas: list[Superform] = []
    prev: Superform | None = None
    for i in range(k):
        rhs = alpha.component(k - i, i)
        if prev is not None:
            rhs = rhs - d_double_prime(prev)
        prev = d_prime_primitive(C, rhs, domain, certify=certify)
        betas.append(prev)
    gamma = alpha.component(0, k)
    if prev is not None:
        gamma = gamma - d_double_prime(prev)
    beta = GradedForm(r, betas)
    if not equal_on_domain(C, alpha - d_total(beta), gamma, domain):
        raise AssertionError("reduction postcondition alpha - d beta = gamma failed")
    for op in (d_prime, d_double_prime):
        if vanishing_witness(C, op(gamma), domain) is not None:
            raise AssertionError("reduced form is not closed")
    if k > C.dimension and vanishing_witness(C, gamma, domain) is not None:
        raise AssertionError("reduced form of degree above the dimension does not vanish")
    return beta, gamma
