"""Exact polyhedra, polyhedral complexes, stars and symbolic domains.

Cells are given by a V-representation (vertices plus rays) with rational
coordinates.  The face relation of a complex is supplied explicitly and
checked by :func:`validate` rather than discovered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from . import linalg
from .linalg import Matrix, Vector

Point = tuple[Fraction, ...]


def _vec(v: Iterable) -> Point:
    return tuple(Fraction(x) for x in v)


def _sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Point:
    return tuple(a - b for a, b in zip(u, v))


def _primitive(a: Sequence[Fraction], b: Fraction | None = None):
    """Scale ``(a, b)`` to coprime integers (sign kept)."""
    vals = list(a) + ([b] if b is not None else [])
    den = lcm(*(x.denominator for x in vals)) if vals else 1
    ints = [int(x * den) for x in vals]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    ints = [Fraction(x // g) for x in ints]
    if b is None:
        return tuple(ints)
    return tuple(ints[:-1]), ints[-1]


@dataclass(frozen=True)
class HRep:
    """``a . x <= b`` for each inequality, ``a . x == b`` for each equality."""

    inequalities: tuple[tuple[Point, Fraction], ...]
    equalities: tuple[tuple[Point, Fraction], ...]

    def contains(self, x: Sequence[Fraction]) -> bool:
        x = _vec(x)
        return all(linalg.dot(a, x) == b for a, b in self.equalities) and all(
            linalg.dot(a, x) <= b for a, b in self.inequalities
        )

    def contains_direction(self, d: Sequence[Fraction]) -> bool:
        d = _vec(d)
        return all(linalg.dot(a, d) == 0 for a, _ in self.equalities) and all(
            linalg.dot(a, d) <= 0 for a, _ in self.inequalities
        )


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection


def _fm_eliminate(rows: list[tuple[list[Fraction], Fraction]], k: int):
    """Eliminate variable ``k`` from ``row . x <= rhs`` rows."""
    pos, neg, keep = [], [], []
    for a, b in rows:
        (pos if a[k] > 0 else neg if a[k] < 0 else keep).append((a, b))
    for ap, bp in pos:
        for an, bn in neg:
            sp, sn = ap[k], -an[k]
            a = [sn * x + sp * y for x, y in zip(ap, an)]
            a[k] = Fraction(0)
            keep.append((a, sn * bp + sp * bn))
    return _dedupe_rows(keep)


def _dedupe_rows(rows):
    seen = {}
    for a, b in rows:
        if not any(a):
            if b < 0:
                seen[("infeasible",)] = (a, b)
            continue
        key = _primitive(a, b)
        seen.setdefault(key, (list(key[0]), key[1]))
    return list(seen.values())


def _facets_local(vloc: list[Vector], rloc: list[Vector], m: int) -> list[tuple[Point, Fraction]]:
    """Facet inequalities of a full-dimensional polyhedron in ``Q^m``."""
    nv, nr = len(vloc), len(rloc)
    nvar = m + nv + nr
    # equalities: u_k - sum V[k][i] lam_i - sum R[k][j] mu_j = 0 ;  sum lam = 1
    eqs: list[tuple[list[Fraction], Fraction]] = []
    for k in range(m):
        row = [Fraction(0)] * nvar
        row[k] = Fraction(1)
        for i, v in enumerate(vloc):
            row[m + i] = -v[k]
        for j, d in enumerate(rloc):
            row[m + nv + j] = -d[k]
        eqs.append((row, Fraction(0)))
    row = [Fraction(0)] * nvar
    for i in range(nv):
        row[m + i] = Fraction(1)
    eqs.append((row, Fraction(1)))
    ineqs: list[tuple[list[Fraction], Fraction]] = []
    for i in range(nv + nr):
        row = [Fraction(0)] * nvar
        row[m + i] = Fraction(-1)
        ineqs.append((row, Fraction(0)))

    remaining = set(range(m, nvar))
    for idx in range(len(eqs)):
        ea, eb = eqs[idx]
        piv = next((c for c in sorted(remaining) if ea[c]), None)
        if piv is None:
            continue
        remaining.discard(piv)
        pa = ea[piv]

        def sub(a, b, ea=ea, eb=eb, piv=piv, pa=pa):
            f = a[piv] / pa
            if not f:
                return a, b
            return [x - f * y for x, y in zip(a, ea)], b - f * eb

        eqs = [sub(a, b) for a, b in eqs]
        ineqs = [sub(a, b) for a, b in ineqs]
    ineqs = _dedupe_rows(ineqs)
    for k in sorted(remaining):
        ineqs = _fm_eliminate(ineqs, k)

    facets = {}
    for a, b in ineqs:
        a_u = a[:m]
        if not any(a_u):
            continue
        key = _primitive(a_u, b)
        if key in facets:
            continue
        tight_v = [v for v in vloc if linalg.dot(key[0], v) == key[1]]
        if not tight_v:
            continue
        tight_r = [d for d in rloc if linalg.dot(key[0], d) == 0]
        dirs = [list(_sub(v, tight_v[0])) for v in tight_v[1:]] + [list(d) for d in tight_r]
        if linalg.rank(dirs) == m - 1:
            facets[key] = key
    return sorted(facets.values())


def compute_h_representation(vertices: Sequence[Sequence], rays: Sequence[Sequence] = (), r: int | None = None) -> HRep:
    """Exact H-representation of ``conv(vertices) + cone(rays)``.

    Works in coordinates on the affine span, where the polyhedron is full
    dimensional, and maps facets back to ambient inequalities whose normals
    lie in the linear span.  Only facet-defining rows are kept.
    """
    if not vertices:
        raise ValueError("a polyhedron needs at least one vertex")
    verts = [_vec(v) for v in vertices]
    rys = [_vec(d) for d in rays]
    r = len(verts[0]) if r is None else r
    v0 = verts[0]
    dirs = [_sub(v, v0) for v in verts[1:]] + rys
    basis = [dirs[i] for i in linalg.independent_vectors(dirs)]
    m = len(basis)
    eq_normals = linalg.nullspace([list(b) for b in basis], r)
    equalities = []
    for e in eq_normals:
        e = _primitive(e)
        equalities.append((e, linalg.dot(e, v0)))
    if m == 0:
        return HRep((), tuple(equalities))
    B = linalg.transpose([list(b) for b in basis])
    Binv = linalg.left_inverse(B)
    vloc = [linalg.matvec(Binv, _sub(v, v0)) for v in verts]
    rloc = [linalg.matvec(Binv, d) for d in rys]
    inequalities = []
    for a, b in _facets_local(vloc, rloc, m):
        c = [linalg.dot(a, col) for col in linalg.transpose(Binv)]
        d = b + linalg.dot(c, v0)
        inequalities.append(_primitive(c, d))
    return HRep(tuple(sorted(inequalities)), tuple(equalities))


def h_to_v(hrep: HRep, r: int) -> tuple[list[Point], list[Point]] | None:
    """Generators ``(vertices, rays)`` of an H-polyhedron, or ``None`` if empty.

    Lines in the lineality space are returned as pairs of opposite rays.
    Brute-force enumeration of tight subsystems; adequate for small ``r``.
    """
    E = [list(a) for a, _ in hrep.equalities]
    f = [b for _, b in hrep.equalities]
    if E:
        x0 = linalg.solve(E, f, r)
        if x0 is None:
            return None
        N = linalg.nullspace(E, r)
    else:
        x0 = [Fraction(0)] * r
        N = linalg.identity(r)
    # x = x0 + N^T y
    k = len(N)
    A = [[linalg.dot(a, n) for n in N] for a, _ in hrep.inequalities]
    b = [bb - linalg.dot(a, x0) for a, bb in hrep.inequalities]
    lineality = linalg.nullspace(A, k) if A else linalg.identity(k)
    # restrict y to the complement of the lineality space
    if lineality:
        comp = linalg.nullspace([list(v) for v in lineality], k)
    else:
        comp = linalg.identity(k)
    w = len(comp)
    A2 = [[linalg.dot(row, c) for c in comp] for row in A]

    def lift_point(wv):
        y = [sum((wv[j] * comp[j][i] for j in range(w)), Fraction(0)) for i in range(k)]
        return tuple(x0[i] + sum((y[j] * N[j][i] for j in range(k)), Fraction(0)) for i in range(r))

    def lift_dir_y(y):
        return tuple(sum((y[j] * N[j][i] for j in range(k)), Fraction(0)) for i in range(r))

    def lift_dir(wv):
        y = [sum((wv[j] * comp[j][i] for j in range(w)), Fraction(0)) for i in range(k)]
        return lift_dir_y(y)

    vertices: dict[Point, None] = {}
    if w == 0:
        if all(Fraction(0) <= bi for bi in b):
            vertices[lift_point([])] = None
    else:
        for rows in itertools.combinations(range(len(A2)), w):
            M = [A2[i] for i in rows]
            if linalg.rank(M) < w:
                continue
            sol = linalg.solve(M, [b[i] for i in rows], w)
            if sol is None:
                continue
            if all(linalg.dot(A2[i], sol) <= b[i] for i in range(len(A2))):
                vertices[lift_point(sol)] = None
    if not vertices:
        return None
    rays: dict[Point, None] = {}
    if w >= 1:
        for rows in itertools.combinations(range(len(A2)), w - 1):
            M = [A2[i] for i in rows]
            ns = linalg.nullspace(M, w) if M else linalg.identity(w)
            if len(ns) != 1:
                continue
            for sgn in (1, -1):
                d = [sgn * x for x in ns[0]]
                if all(linalg.dot(row, d) <= 0 for row in A2):
                    rays[_primitive(lift_dir(d))] = None
    for v in lineality:
        y = list(v)
        d = _primitive(lift_dir_y(y))
        rays[d] = None
        rays[tuple(-x for x in d)] = None
    return sorted(vertices), sorted(rays)


# ---------------------------------------------------------------------------


class Polyhedron:
    """A convex polyhedron ``conv(vertices) + cone(rays)`` in ``Q^r``."""

    def __init__(self, id: str, vertices: Sequence[Sequence], rays: Sequence[Sequence] = ()):
        if not vertices:
            raise ValueError(f"cell {id!r} has no vertices")
        self.id = str(id)
        self.vertices: tuple[Point, ...] = tuple(_vec(v) for v in vertices)
        self.rays: tuple[Point, ...] = tuple(_vec(d) for d in rays)
        self.ambient_dim = len(self.vertices[0])
        if any(len(v) != self.ambient_dim for v in self.vertices + self.rays):
            raise ValueError(f"cell {id!r} mixes coordinate lengths")
        v0 = self.vertices[0]
        dirs = [_sub(v, v0) for v in self.vertices[1:]] + list(self.rays)
        self.span_basis: tuple[Point, ...] = tuple(dirs[i] for i in linalg.independent_vectors(dirs))
        self.dim = len(self.span_basis)
        self._h_rep: HRep | None = None
        self._cylinder: Polyhedron | None = None

    @property
    def base_point(self) -> Point:
        return self.vertices[0]

    @property
    def h_rep(self) -> HRep:
        if self._h_rep is None:
            self._h_rep = compute_h_representation(self.vertices, self.rays, self.ambient_dim)
        return self._h_rep

    @property
    def bounded(self) -> bool:
        return not self.rays

    def basis_matrix(self) -> Matrix:
        """``r x dim`` matrix whose columns span the linear space of the cell."""
        if not self.span_basis:
            return [[] for _ in range(self.ambient_dim)]
        return linalg.transpose([list(b) for b in self.span_basis])

    def contains(self, x: Sequence) -> bool:
        return self.h_rep.contains(x)

    def contains_direction(self, d: Sequence) -> bool:
        return self.h_rep.contains_direction(d)

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        return all(self.contains(v) for v in other.vertices) and all(
            self.contains_direction(d) for d in other.rays
        )

    def same_set(self, other: "Polyhedron") -> bool:
        return self.contains_polyhedron(other) and other.contains_polyhedron(self)

    def span_contains(self, w: Sequence) -> bool:
        """Whether ``w`` lies in the linear space of the cell."""
        w = _vec(w)
        return all(linalg.dot(a, w) == 0 for a, _ in self.h_rep.equalities)

    def relative_interior_point(self) -> Point:
        n = len(self.vertices)
        bary = tuple(sum(c) / n for c in zip(*self.vertices))
        if not self.rays:
            return bary
        k = len(self.rays)
        avg = tuple(sum(c) / k for c in zip(*self.rays))
        return tuple(a + b for a, b in zip(bary, avg))

    def faces(self) -> list["Polyhedron"]:
        """All nonempty proper faces, as anonymous polyhedra (id ``""``)."""
        ineqs = self.h_rep.inequalities
        full = (frozenset(range(len(self.vertices))), frozenset(range(len(self.rays))))
        seen = {full}
        todo = [full]
        while todo:
            vs, rs = todo.pop()
            for a, b in ineqs:
                tv = frozenset(i for i in vs if linalg.dot(a, self.vertices[i]) == b)
                if not tv:
                    continue
                tr = frozenset(j for j in rs if linalg.dot(a, self.rays[j]) == 0)
                key = (tv, tr)
                if key not in seen:
                    seen.add(key)
                    todo.append(key)
        seen.discard(full)
        out = []
        for vs, rs in sorted(seen, key=lambda k: (sorted(k[0]), sorted(k[1]))):
            out.append(Polyhedron("", [self.vertices[i] for i in sorted(vs)], [self.rays[j] for j in sorted(rs)]))
        # tight sets may coincide as point sets when generators are redundant
        unique: list[Polyhedron] = []
        for f in out:
            if not any(f.same_set(g) for g in unique):
                unique.append(f)
        return unique

    def product_with_interval(self) -> "Polyhedron":
        """``self x [0, 1]`` with the interval coordinate appended last."""
        if self._cylinder is not None:
            return self._cylinder
        verts = [v + (Fraction(0),) for v in self.vertices] + [v + (Fraction(1),) for v in self.vertices]
        rays = [d + (Fraction(0),) for d in self.rays]
        self._cylinder = Polyhedron(f"{self.id}xB", verts, rays)
        return self._cylinder

    def __repr__(self) -> str:
        return f"Polyhedron({self.id!r}, dim={self.dim}, nverts={len(self.vertices)}, nrays={len(self.rays)})"


def contains(sigma: Polyhedron, x: Sequence) -> bool:
    return sigma.contains(x)


def relative_interior_point(sigma: Polyhedron) -> Point:
    return sigma.relative_interior_point()


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron | None:
    """Set intersection as a polyhedron, or ``None`` if empty."""
    hp, hq = p.h_rep, q.h_rep
    both = HRep(hp.inequalities + hq.inequalities, hp.equalities + hq.equalities)
    gens = h_to_v(both, p.ambient_dim)
    if gens is None:
        return None
    return Polyhedron(f"{p.id}&{q.id}", gens[0], gens[1])


def _separated(p: Polyhedron, q: Polyhedron) -> bool:
    # cheap certificate of disjointness: a constraint of one cell strictly violated on all of the other
    for a, b in p.h_rep.inequalities:
        if all(linalg.dot(a, v) > b for v in q.vertices) and all(linalg.dot(a, d) >= 0 for d in q.rays):
            return True
    for a, b in p.h_rep.equalities:
        vals = [linalg.dot(a, v) - b for v in q.vertices]
        if all(x > 0 for x in vals) and all(linalg.dot(a, d) >= 0 for d in q.rays):
            return True
        if all(x < 0 for x in vals) and all(linalg.dot(a, d) <= 0 for d in q.rays):
            return True
    return False


# ---------------------------------------------------------------------------


class PolyhedralComplex:
    """Cells in input order plus an explicit face relation ``child -> parent``.

    The relation used everywhere is the reflexive-transitive closure of the
    listed pairs.
    """

    def __init__(self, ambient_dim: int, cells: Sequence[Polyhedron], face_pairs: Iterable[tuple[str, str]] = ()):
        self.ambient_dim = ambient_dim
        self.cells: tuple[Polyhedron, ...] = tuple(cells)
        self.face_pairs: tuple[tuple[str, str], ...] = tuple((str(a), str(b)) for a, b in face_pairs)
        self._by_id: dict[str, Polyhedron] = {}
        for c in self.cells:
            self._by_id.setdefault(c.id, c)
        self._index = {c.id: i for i, c in reversed(list(enumerate(self.cells)))}
        parents: dict[str, set[str]] = {c.id: set() for c in self.cells}
        for a, b in self.face_pairs:
            if a in parents and b in parents:
                parents[a].add(b)
        # up[c] = all cofaces of c (including c)
        self._up: dict[str, frozenset[str]] = {}
        for c in self._by_id:
            seen = {c}
            stack = [c]
            while stack:
                for p in parents[stack.pop()]:
                    if p not in seen:
                        seen.add(p)
                        stack.append(p)
            self._up[c] = frozenset(seen)

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self._by_id

    def cell(self, cell_id: str) -> Polyhedron:
        try:
            return self._by_id[cell_id]
        except KeyError:
            raise KeyError(f"no cell {cell_id!r} in complex") from None

    def index(self, cell_id: str) -> int:
        return self._index[cell_id]

    def is_face(self, tau: str, sigma: str) -> bool:
        """``tau`` is a face of ``sigma`` (reflexive)."""
        return sigma in self._up.get(tau, ())

    def cofaces(self, sigma: str) -> list[Polyhedron]:
        ups = self._up[sigma]
        return [c for c in self.cells if c.id in ups]

    def faces_of(self, sigma: str) -> list[Polyhedron]:
        return [c for c in self.cells if self.is_face(c.id, sigma)]

    @property
    def maximal_cells(self) -> list[Polyhedron]:
        return [c for c in self.cells if self._up[c.id] == {c.id}]

    @property
    def minimal_cells(self) -> list[Polyhedron]:
        return [c for c in self.cells if not any(o.id != c.id and self.is_face(o.id, c.id) for o in self.cells)]

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    @property
    def bounded(self) -> bool:
        return all(c.bounded for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        return f"PolyhedralComplex(ambient_dim={self.ambient_dim}, cells={len(self.cells)}, dim={self.dimension})"


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.kind}: {', '.join(self.cells)}"
        return f"{msg} ({self.detail})" if self.detail else msg


def validate(C: PolyhedralComplex) -> list[Violation]:
    """Every violated complex invariant, with cell ids; empty iff valid."""
    out: list[Violation] = []
    ids = [c.id for c in C.cells]
    for cid in sorted({i for i in ids if ids.count(i) > 1}):
        out.append(Violation("duplicate id", (cid,)))
    for c in C.cells:
        if c.ambient_dim != C.ambient_dim:
            out.append(Violation("ambient dimension mismatch", (c.id,), f"{c.ambient_dim} != {C.ambient_dim}"))
    if out:
        return out
    pairs_ok = []
    for a, b in C.face_pairs:
        missing = tuple(x for x in (a, b) if x not in C)
        if missing:
            out.append(Violation("unknown id in face pair", missing, f"{a} < {b}"))
        else:
            pairs_ok.append((a, b))
    for a, b in pairs_ok:
        if a == b:
            continue
        if C.is_face(b, a):
            out.append(Violation("face relation has a cycle", (a, b)))
            continue
        tau, sigma = C.cell(a), C.cell(b)
        if not sigma.contains_polyhedron(tau):
            out.append(Violation("face not contained in parent", (a, b)))
            continue
        if not any(f.same_set(tau) for f in sigma.faces()) and not tau.same_set(sigma):
            out.append(Violation("listed pair is not a face", (a, b)))
    # face closure and completeness of the listed relation
    for sigma in C.cells:
        for f in sigma.faces():
            match = [c for c in C.cells if c.same_set(f)]
            if not match:
                desc = " ".join("(" + ",".join(str(x) for x in v) + ")" for v in f.vertices)
                out.append(Violation("not face-closed", (sigma.id,), f"missing face with vertices {desc}"))
            elif not any(C.is_face(c.id, sigma.id) for c in match):
                out.append(Violation("face relation missing", (match[0].id, sigma.id)))
    # pairwise intersections of maximal cells (suffices given face closure)
    maxi = C.maximal_cells
    for i, s in enumerate(maxi):
        for t in maxi[i + 1:]:
            if _separated(s, t) or _separated(t, s):
                continue
            inter = intersect(s, t)
            if inter is None:
                continue
            common = [c for c in C.cells if C.is_face(c.id, s.id) and C.is_face(c.id, t.id)]
            if not any(c.same_set(inter) for c in common):
                out.append(Violation("intersection not a face", (s.id, t.id)))
    return out


# ---------------------------------------------------------------------------
# symbolic domains


@dataclass(frozen=True)
class FullSupport:
    def __str__(self) -> str:
        return "support"


@dataclass(frozen=True)
class Star:
    cell_id: str
    center: Point

    def __str__(self) -> str:
        return f"star({self.cell_id})"


@dataclass(frozen=True)
class Cylinder:
    base: "Domain"

    def __str__(self) -> str:
        return f"{self.base} x [0,1]"


Domain = Union[FullSupport, Star, Cylinder]


def family(C: PolyhedralComplex, domain: Domain) -> list[Polyhedron]:
    """Maximal cells of the region; cylinder cells carry ``t`` as last coordinate."""
    if isinstance(domain, FullSupport):
        return C.maximal_cells
    if isinstance(domain, Star):
        return [c for c in C.maximal_cells if C.is_face(domain.cell_id, c.id)]
    if isinstance(domain, Cylinder):
        return [c.product_with_interval() for c in family(C, domain.base)]
    raise TypeError(f"unknown domain {domain!r}")


def domain_dim(C: PolyhedralComplex, domain: Domain) -> int:
    return C.ambient_dim + 1 if isinstance(domain, Cylinder) else C.ambient_dim


def star(C: PolyhedralComplex, sigma: str) -> tuple[Star, list[Polyhedron]]:
    """The polyhedral star of ``sigma`` centred at its relative interior point."""
    cell = C.cell(sigma)
    dom = Star(cell.id, cell.relative_interior_point())
    return dom, family(C, dom)


def smallest_common_coface(C: PolyhedralComplex, cells: Sequence[str]) -> Polyhedron | None:
    if not cells:
        raise ValueError("need at least one cell")
    for c in cells:
        C.cell(c)
    common = [nu for nu in C.cells if all(C.is_face(t, nu.id) for t in cells)]
    minimal = [nu for nu in common if all(C.is_face(nu.id, o.id) for o in common)]
    if not common:
        return None
    if len(minimal) != 1:
        raise ValueError(f"cells {list(cells)} have no unique smallest common coface")
    return minimal[0]


def barycentric_subdivision(C: PolyhedralComplex) -> PolyhedralComplex:
    """Simplicial subdivision whose simplices are chains of faces of ``C``."""
    if not C.bounded:
        raise ValueError("barycentric subdivision needs a bounded complex")
    centers = {c.id: c.relative_interior_point() for c in C.cells}
    order = sorted(C.cells, key=lambda c: (c.dim, C.index(c.id)))
    chains: list[tuple[str, ...]] = []

    def extend(chain: tuple[str, ...]):
        chains.append(chain)
        last = C.cell(chain[-1])
        for c in order:
            if c.dim > last.dim and C.is_face(last.id, c.id):
                extend(chain + (c.id,))

    for c in order:
        extend((c.id,))
    chains.sort(key=lambda ch: (len(ch), [C.index(x) for x in ch]))
    name = {ch: "<".join(ch) for ch in chains}
    cells = [Polyhedron(name[ch], [centers[x] for x in ch]) for ch in chains]
    pairs = []
    for ch in chains:
        if len(ch) > 1:
            for k in range(len(ch)):
                pairs.append((name[ch[:k] + ch[k + 1:]], name[ch]))
    return PolyhedralComplex(C.ambient_dim, cells, pairs)
