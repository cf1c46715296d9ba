"""Pullbacks of superforms along map pairs ``(s, L)``.

``s`` is a polynomial map ``Q^r' -> Q^r`` and ``L`` a linear map given by an
``r x r'`` rational matrix.  The d' part of a form is pulled back through the
Jacobian of ``s`` and the d'' part through ``L``, which is what makes the
pullback commute with d'.  :func:`naive_pullback` sends both parts through the
Jacobian and only commutes with d' for affine ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .polyalg import Polynomial, variables
from .polyhedra import Cylinder, Domain, FullSupport, PolyhedralComplex, Polyhedron, Star, family
from .superforms import Superform, change_variables


@dataclass(frozen=True)
class MapPair:
    source_dim: int
    target_dim: int
    s: tuple[Polynomial, ...]
    L: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        object.__setattr__(self, "L", tuple(tuple(Fraction(x) for x in row) for row in self.L))
        if len(self.s) != self.target_dim:
            raise ValueError(f"s has {len(self.s)} components, expected {self.target_dim}")
        if any(f.num_vars != self.source_dim for f in self.s):
            raise ValueError(f"components of s must be polynomials in {self.source_dim} variables")
        if len(self.L) != self.target_dim or any(len(row) != self.source_dim for row in self.L):
            raise ValueError(f"L must have shape ({self.target_dim}, {self.source_dim})")

    @classmethod
    def identity(cls, r: int) -> "MapPair":
        return cls(r, r, tuple(variables(r)), tuple(map(tuple, linalg.identity(r))))

    @classmethod
    def affine(cls, A: Sequence[Sequence], b: Sequence | None = None) -> "MapPair":
        """``x -> A x + b`` paired with its linear part."""
        A = linalg.to_matrix(A)
        r, rs = len(A), len(A[0])
        b = [Fraction(x) for x in (b or [0] * r)]
        s = tuple(Polynomial.affine(row, bi) for row, bi in zip(A, b))
        return cls(rs, r, s, tuple(map(tuple, A)))

    def is_affine(self) -> bool:
        return all(f.degree() <= 1 for f in self.s)

    def jacobian(self) -> list[list[Polynomial]]:
        return [[f.partial(k) for k in range(self.source_dim)] for f in self.s]

    def apply(self, x: Sequence) -> tuple[Fraction, ...]:
        return tuple(f.evaluate(x) for f in self.s)

    def linear_part(self) -> list[list[Fraction]]:
        return [list(row) for row in self.L]


def _check_dims(F: MapPair, alpha: Superform) -> None:
    if alpha.ambient_dim != F.target_dim:
        raise ValueError(f"form lives in dimension {alpha.ambient_dim}, map targets {F.target_dim}")


def pullback(F: MapPair, alpha: Superform) -> Superform:
    _check_dims(F, alpha)
    m = F.source_dim
    L_rows = [[Polynomial.constant(m, x) for x in row] for row in F.L]
    return change_variables(alpha, list(F.s), F.jacobian(), L_rows)


def naive_pullback(s: MapPair | Sequence[Polynomial], alpha: Superform) -> Superform:
    """Tensor product of ordinary pullbacks: d' and d'' both through the Jacobian."""
    comps = list(s.s) if isinstance(s, MapPair) else list(s)
    if len(comps) != alpha.ambient_dim:
        raise ValueError(f"form lives in dimension {alpha.ambient_dim}, map has {len(comps)} components")
    m = comps[0].num_vars
    jac = [[f.partial(k) for k in range(m)] for f in comps]
    return change_variables(alpha, comps, jac, jac)


def compose(F: MapPair, G: MapPair) -> MapPair:
    """``F o G = (s_F o s_G, L_F L_G)``; pullback satisfies ``(F o G)^* = G^* F^*``."""
    if G.target_dim != F.source_dim:
        raise ValueError(f"cannot compose: G targets {G.target_dim}, F starts in {F.source_dim}")
    s = tuple(f.substitute(list(G.s)) for f in F.s)
    L = linalg.matmul(F.linear_part(), G.linear_part()) if F.L and G.L else [[Fraction(0)] * G.source_dim for _ in F.L]
    return MapPair(G.source_dim, F.target_dim, s, tuple(map(tuple, L)))


# ---------------------------------------------------------------------------
# allows-pullback certification


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`allows_pullback`.

    ``status`` is ``"verified"`` (``assignment`` maps each source cell to a
    target cell meeting both cell conditions), ``"refuted"`` (some source
    cell provably has no admissible target cell; ``witness`` says why) or
    ``"unverified"`` (the point condition could not be decided).
    """

    status: str
    assignment: dict[str, str] = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def __str__(self) -> str:
        if self.verified:
            return "verified: " + ", ".join(f"{a}->{b}" for a, b in self.assignment.items())
        return f"{self.status}: {self.witness}"


def _span_condition(F: MapPair, src: Polyhedron, tgt: Polyhedron) -> tuple[int, ...] | None:
    """``None`` if ``L`` maps the source span into the target span, else a failing basis vector."""
    for w in src.span_basis:
        Lw = tuple(linalg.matvec(F.linear_part(), w))
        if not tgt.span_contains(Lw):
            return w
    return None


def contraction_center(F: MapPair) -> tuple[Fraction, ...] | None:
    """``z`` if ``s(x, t) = z + t (x - z)`` with ``t`` the last source variable."""
    r = F.target_dim
    if F.source_dim != r + 1:
        return None
    y = variables(r + 1)
    t = y[r]
    z = []
    for i, f in enumerate(F.s):
        zi = f.constant_term()
        if f != t * (y[i] - zi) + zi:
            return None
        z.append(zi)
    return tuple(z)


def _point_condition(F: MapPair, src: Polyhedron, tgt: Polyhedron) -> str | tuple:
    """``"yes"``, ``"unknown"`` or a witness point of ``src`` mapped outside ``tgt``.

    Source cells are maximal cells of a symbolic domain, whose trace on the
    cell is dense in it, so a closed target contains the image of the trace
    iff it contains the image of the whole cell.
    """
    if F.is_affine():
        for v in src.vertices:
            img = F.apply(v)
            if not tgt.contains(img):
                return ("vertex", v, img)
        lin = [f.linear_coefficients() for f in F.s]
        for d in src.rays:
            img = tuple(linalg.matvec(lin, d))
            if not tgt.contains_direction(img):
                return ("ray", d, img)
        return "yes"
    z = contraction_center(F)
    t_ok = all(0 <= v[-1] <= 1 for v in src.vertices) and all(d[-1] == 0 for d in src.rays)
    if z is not None and t_ok:
        # z + t (x - z) stays in a convex cell containing both x and z
        shadow = Polyhedron(src.id, [v[:-1] for v in src.vertices], [d[:-1] for d in src.rays])
        if not tgt.contains(z):
            return ("center", z, z)
        if tgt.contains_polyhedron(shadow):
            return "yes"
    return "unknown"


def allows_pullback(
    F: MapPair,
    C_src: PolyhedralComplex,
    dom_src: Domain,
    C_tgt: PolyhedralComplex,
    dom_tgt: Domain,
) -> Verdict:
    """Search, per maximal source cell, for a target cell satisfying the point
    condition ``s(x) in sigma`` and the span condition ``L(L_sigma') in L_sigma``.
    """
    src_cells = family(C_src, dom_src)
    tgt_cells = family(C_tgt, dom_tgt)
    if src_cells and src_cells[0].ambient_dim != F.source_dim:
        raise ValueError("source domain dimension does not match the map pair")
    if tgt_cells and tgt_cells[0].ambient_dim != F.target_dim:
        raise ValueError("target domain dimension does not match the map pair")
    assignment: dict[str, str] = {}
    undecided = False
    for sc in src_cells:
        failures = {}
        found = None
        unknown_here = False
        for tc in tgt_cells:
            w = _span_condition(F, sc, tc)
            if w is not None:
                failures[tc.id] = {"span": [str(x) for x in w]}
                continue
            pc = _point_condition(F, sc, tc)
            if pc == "yes":
                found = tc.id
                break
            if pc == "unknown":
                unknown_here = True
                continue
            kind, x, img = pc
            failures[tc.id] = {kind: [str(c) for c in x], "image": [str(c) for c in img]}
        if found is not None:
            assignment[sc.id] = found
        elif unknown_here:
            undecided = True
        else:
            return Verdict("refuted", assignment, {"source_cell": sc.id, "failures": failures})
    if undecided:
        return Verdict("unverified", assignment)
    return Verdict("verified", assignment)
