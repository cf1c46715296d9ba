"""Cech computation of d'-cohomology dimensions over the cover by stars of minimal cells.

The stars of the minimal cells form a good cover, and finite intersections of
stars are again stars.  On a star the closed ``(0, q)`` forms modulo nothing
(there is no ``(-1, q)``) are the tuples of constant q-covectors on the
maximal cells that come from a single ambient covector: all those cells pass
through the centre.  That image is computed exactly as the column space of
the stacked restriction matrices.

Rows with ``q = 0`` agree with singular cohomology of the support; rows with
``q > 0`` are reported as good-cover Cech values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import linalg
from .linalg import Matrix
from .polyhedra import PolyhedralComplex, barycentric_subdivision, family, smallest_common_coface, star, validate

CERTIFIED_LABEL = "certified"
CECH_LABEL = "good-cover Čech"
ASSUMPTION = (
    "local H^{0,q} of a star is taken to be the image of the ambient q-covectors "
    "under simultaneous restriction to the star's maximal cells"
)


def exterior_restriction_matrix(B: Matrix, q: int) -> Matrix:
    """``C(m, q) x C(r, q)`` matrix of q-covector restriction to the column span of ``B``.

    Entry ``(K, I)`` is the determinant of the ``I x K`` minor of ``B``.
    """
    r = len(B)
    m = len(B[0]) if B and B[0] else 0
    if linalg.rank(B) != m:
        raise ValueError("span basis is rank deficient")
    rows = list(combinations(range(m), q))
    cols = list(combinations(range(r), q))
    return [[linalg.det([[B[i][k] for k in K] for i in I]) for I in cols] for K in rows]


@dataclass(frozen=True)
class Nerve:
    """Nerve of the star cover: index tuples over the minimal cells."""

    vertices: tuple[str, ...]
    cells: dict[tuple[int, ...], str]

    def simplices(self, p: int) -> list[tuple[int, ...]]:
        return sorted(S for S in self.cells if len(S) == p + 1)

    @property
    def dimension(self) -> int:
        return max((len(S) - 1 for S in self.cells), default=-1)


def build_nerve(C: PolyhedralComplex) -> Nerve:
    mins = tuple(c.id for c in C.minimal_cells)
    cells: dict[tuple[int, ...], str] = {}
    layer = []
    for i, m in enumerate(mins):
        cells[(i,)] = m
        layer.append((i,))
    while layer:
        nxt = []
        for S in layer:
            for j in range(S[-1] + 1, len(mins)):
                T = S + (j,)
                # downward closed: every face of T must already be a simplex
                if any(T[:k] + T[k + 1:] not in cells for k in range(len(T))):
                    continue
                sigma = smallest_common_coface(C, [mins[i] for i in T])
                if sigma is not None:
                    cells[T] = sigma.id
                    nxt.append(T)
        layer = nxt
    return Nerve(mins, cells)


@dataclass(frozen=True)
class LocalCoefficientSpace:
    simplex: tuple[int, ...]
    q: int
    cell_id: str
    blocks: tuple[tuple[str, int], ...]
    restriction: Matrix
    basis: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis and self.basis[0] else 0

    def block_rows(self, cell_ids: Sequence[str]) -> list[int]:
        """Row indices of the listed cells' blocks inside the stacked layout."""
        rows, off = [], 0
        wanted = set(cell_ids)
        for cid, n in self.blocks:
            if cid in wanted:
                rows.extend(range(off, off + n))
            off += n
        return rows


def local_h0q(C: PolyhedralComplex, sigma: str, q: int, simplex: tuple[int, ...] = ()) -> LocalCoefficientSpace:
    r = C.ambient_dim
    if not 0 <= q <= r:
        raise ValueError(f"q must lie in 0..{r}")
    _, fam = star(C, sigma)
    blocks = []
    stacked: Matrix = []
    for tau in fam:
        M = exterior_restriction_matrix(tau.basis_matrix(), q)
        blocks.append((tau.id, len(M)))
        stacked.extend(M)
    ncols = comb(r, q)
    pivots = linalg.independent_columns(stacked, ncols) if stacked else []
    basis = [[row[c] for c in pivots] for row in stacked]
    return LocalCoefficientSpace(simplex, q, sigma, tuple(blocks), stacked, basis)


def _projection(src: LocalCoefficientSpace, dst: LocalCoefficientSpace) -> Matrix:
    """Matrix of restriction from the bigger star ``src`` to the smaller star ``dst``."""
    sub_rows = src.block_rows([cid for cid, _ in dst.blocks])
    # blocks of dst appear in src in the same relative order
    out = linalg.zeros(dst.dim, src.dim)
    for j in range(src.dim):
        v = [src.basis[i][j] for i in sub_rows]
        y = linalg.solve(dst.basis, v, dst.dim)
        if y is None:
            raise AssertionError(f"restriction leaves the coefficient space of {dst.cell_id}")
        for i, val in enumerate(y):
            out[i][j] = val
    return out


@dataclass
class CechComplex:
    q: int
    nerve: Nerve
    spaces: dict[int, list[LocalCoefficientSpace]]
    coboundaries: dict[int, Matrix] = field(default_factory=dict)

    def dim(self, p: int) -> int:
        return sum(s.dim for s in self.spaces.get(p, []))

    @property
    def top(self) -> int:
        return max(self.spaces, default=-1)

    def rank(self, p: int) -> int:
        M = self.coboundaries.get(p)
        return linalg.rank(M) if M else 0

    def cohomology_dims(self) -> list[int]:
        ranks = {p: self.rank(p) for p in range(-1, self.top + 1)}
        return [self.dim(p) - ranks[p] - ranks[p - 1] for p in range(self.top + 1)]


def build_cech(C: PolyhedralComplex, q: int, validated: bool = False) -> CechComplex:
    if not validated:
        problems = validate(C)
        if problems:
            raise ValueError("complex failed validation: " + "; ".join(map(str, problems)))
    nerve = build_nerve(C)
    spaces: dict[int, list[LocalCoefficientSpace]] = {}
    lookup: dict[tuple[int, ...], LocalCoefficientSpace] = {}
    for p in range(nerve.dimension + 1):
        spaces[p] = []
        for S in nerve.simplices(p):
            lcs = local_h0q(C, nerve.cells[S], q, S)
            spaces[p].append(lcs)
            lookup[S] = lcs
    cech = CechComplex(q, nerve, spaces)
    for p in range(nerve.dimension):
        src, dst = spaces[p], spaces[p + 1]
        col_off, off = {}, 0
        for s in src:
            col_off[s.simplex] = off
            off += s.dim
        ncols = off
        M: Matrix = []
        for t in dst:
            block = linalg.zeros(t.dim, ncols)
            T = t.simplex
            for j in range(len(T)):
                S = T[:j] + T[j + 1:]
                P = _projection(lookup[S], t)
                sgn = -1 if j % 2 else 1
                c0 = col_off[S]
                for a in range(t.dim):
                    for b in range(lookup[S].dim):
                        block[a][c0 + b] += sgn * P[a][b]
            M.extend(block)
        cech.coboundaries[p] = M
    for p in range(nerve.dimension - 1):
        A, B = cech.coboundaries[p], cech.coboundaries[p + 1]
        if A and B and not linalg.is_zero_matrix(linalg.matmul(B, A)):
            raise AssertionError(f"coboundary squares to a nonzero map in degree {p}")
    return cech


def euler_check(cech: CechComplex) -> bool:
    chain = sum((-1) ** p * cech.dim(p) for p in range(cech.top + 1))
    homology = sum((-1) ** p * h for p, h in enumerate(cech.cohomology_dims()))
    return chain == homology


@dataclass(frozen=True)
class BettiRow:
    q: int
    dims: tuple[int, ...]
    certified: bool

    @property
    def label(self) -> str:
        return CERTIFIED_LABEL if self.certified else CECH_LABEL

    def to_dict(self) -> dict:
        return {"q": self.q, "dims": list(self.dims), "certified": self.certified}

    def __str__(self) -> str:
        cells = " ".join(f"H^{p}={d}" for p, d in enumerate(self.dims))
        return f"q={self.q}: {cells} [{self.label}]"


def betti_table(C: PolyhedralComplex, qs: Sequence[int] | None = None) -> list[BettiRow]:
    """Dimensions of ``H^{p,q}_{d'}`` for ``p = 0..n``, one row per ``q``."""
    problems = validate(C)
    if problems:
        raise ValueError("complex failed validation: " + "; ".join(map(str, problems)))
    n = C.dimension
    qs = range(n + 1) if qs is None else qs
    rows = []
    for q in qs:
        cech = build_cech(C, q, validated=True)
        dims = cech.cohomology_dims()
        dims = (dims + [0] * (n + 1))[: n + 1]
        rows.append(BettiRow(q, tuple(dims), q == 0))
    return rows


def simplicial_betti(C: PolyhedralComplex) -> list[int]:
    """Betti numbers of the barycentric subdivision with constant coefficients."""
    S = barycentric_subdivision(C)
    verts = {c.vertices[0]: i for i, c in enumerate(c for c in S.cells if c.dim == 0)}
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for c in S.cells:
        simplex = tuple(sorted(verts[v] for v in c.vertices))
        by_dim.setdefault(len(simplex) - 1, []).append(simplex)
    top = max(by_dim)
    index = {k: {s: i for i, s in enumerate(sorted(v))} for k, v in by_dim.items()}
    ranks = {}
    for k in range(top):
        rows = []
        for s in sorted(by_dim[k + 1]):
            row = [Fraction(0)] * len(index[k])
            for j in range(len(s)):
                row[index[k][s[:j] + s[j + 1:]]] += (-1) ** j
            rows.append(row)
        ranks[k] = linalg.rank(rows)
    return [len(index[k]) - ranks.get(k, 0) - ranks.get(k - 1, 0) for k in range(top + 1)]
