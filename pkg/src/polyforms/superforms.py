"""Superforms of bidegree (p, q) with polynomial coefficients.

A form ``sum f_IJ d'x_I ^ d''x_J`` is stored as a map from pairs of strictly
increasing 0-based index tuples ``(I, J)`` to nonzero polynomials in
``ambient_dim`` variables.  The basis symbols multiply as one exterior
algebra on the ``2r`` generators ``d'x_i, d''x_j``, all of them odd, with the
d' block written first.  That convention gives

* ``d'  = sum_i d'x_i ^ d/dx_i``
* ``d'' = sum_i d''x_i ^ d/dx_i`` which equals ``(-1)^p`` times
  ``d'x_I ^ d''x_i ^ d''x_J`` in normal order,

and makes both operators graded derivations for the total degree ``p + q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .polyalg import Polynomial, Scalar, variables
from .polyhedra import Domain, Polyhedron, PolyhedralComplex, domain_dim, family

Index = tuple[int, ...]
Key = tuple[Index, Index]


def merge_sign(a: Sequence[int], b: Sequence[int]) -> tuple[int, Index]:
    """Sign and sorted result of the exterior product ``e_a ^ e_b``.

    Returns sign 0 when the index sets overlap.
    """
    if set(a) & set(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1) ** inversions, tuple(sorted(tuple(a) + tuple(b)))


def normalize_indices(idx: Sequence[int]) -> tuple[int, Index]:
    """Sign of the permutation sorting ``idx``; 0 on repeats."""
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    inv = sum(1 for i in range(len(idx)) for j in range(i + 1, len(idx)) if idx[i] > idx[j])
    return (-1) ** inv, tuple(sorted(idx))


def _comb_ok(idx: Index, r: int) -> bool:
    return all(0 <= i < r for i in idx) and all(a < b for a, b in zip(idx, idx[1:]))


class Superform:
    """Homogeneous superform of bidegree ``(p, q)`` on ``Q^r``."""

    __slots__ = ("ambient_dim", "p", "q", "_terms", "_hash")

    def __init__(self, ambient_dim: int, bidegree: tuple[int, int], terms: Mapping[Key, Polynomial] | None = None):
        p, q = bidegree
        if p < -1 or q < -1:
            raise ValueError(f"bad bidegree {bidegree}")
        clean: dict[Key, Polynomial] = {}
        for (I, J), f in (terms or {}).items():
            I, J = tuple(I), tuple(J)
            if len(I) != p or len(J) != q:
                raise ValueError(f"index pair {(I, J)} does not match bidegree {bidegree}")
            if not (_comb_ok(I, ambient_dim) and _comb_ok(J, ambient_dim)):
                raise ValueError(f"indices {(I, J)} must be strictly increasing and < {ambient_dim}")
            if not isinstance(f, Polynomial):
                f = Polynomial.constant(ambient_dim, f)
            if f.num_vars != ambient_dim:
                raise ValueError("coefficient has the wrong number of variables")
            if f:
                clean[(I, J)] = f
        self.ambient_dim = ambient_dim
        self.p, self.q = p, q
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, r: int, p: int, q: int, terms: dict[Key, Polynomial]) -> "Superform":
        f = cls.__new__(cls)
        f.ambient_dim, f.p, f.q, f._terms, f._hash = r, p, q, terms, None
        return f

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, r: int, bidegree: tuple[int, int]) -> "Superform":
        return cls._raw(r, bidegree[0], bidegree[1], {})

    @classmethod
    def function(cls, f: Polynomial | Scalar, r: int | None = None) -> "Superform":
        if not isinstance(f, Polynomial):
            f = Polynomial.constant(r, f)
        return cls._raw(f.num_vars, 0, 0, {((), ()): f} if f else {})

    @classmethod
    def monomial(cls, r: int, I: Sequence[int], J: Sequence[int], coeff: Polynomial | Scalar = 1) -> "Superform":
        """``coeff * d'x_I ^ d''x_J`` with unsorted or repeated indices allowed."""
        si, I2 = normalize_indices(I)
        sj, J2 = normalize_indices(J)
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(r, coeff)
        if si * sj == 0:
            return cls.zero(r, (len(tuple(I)), len(tuple(J))))
        return cls(r, (len(I2), len(J2)), {(I2, J2): coeff * (si * sj)})

    @classmethod
    def dprime_x(cls, r: int, i: int) -> "Superform":
        return cls.monomial(r, (i,), ())

    @classmethod
    def ddouble_x(cls, r: int, i: int) -> "Superform":
        return cls.monomial(r, (), (i,))

    # -- access ------------------------------------------------------------

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def degree(self) -> int:
        return self.p + self.q

    @property
    def terms(self) -> Mapping[Key, Polynomial]:
        return dict(self._terms)

    def coefficient(self, I: Sequence[int], J: Sequence[int]) -> Polynomial:
        return self._terms.get((tuple(I), tuple(J)), Polynomial.zero(self.ambient_dim))

    def sorted_terms(self) -> list[tuple[Key, Polynomial]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_coefficient_degree(self) -> int:
        return max((f.degree() for f in self._terms.values()), default=-1)

    # -- linear structure --------------------------------------------------

    def _check(self, other: "Superform") -> None:
        if not isinstance(other, Superform):
            raise TypeError(f"expected Superform, got {type(other).__name__}")
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")
        if other.bidegree != self.bidegree:
            raise ValueError(f"bidegree mismatch: {self.bidegree} vs {other.bidegree}")

    def __add__(self, other: "Superform") -> "Superform":
        self._check(other)
        out = dict(self._terms)
        for k, f in other._terms.items():
            s = out[k] + f if k in out else f
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Superform._raw(self.ambient_dim, self.p, self.q, out)

    def __neg__(self) -> "Superform":
        return Superform._raw(self.ambient_dim, self.p, self.q, {k: -f for k, f in self._terms.items()})

    def __sub__(self, other: "Superform") -> "Superform":
        return self + (-other)

    def __mul__(self, c: Polynomial | Scalar) -> "Superform":
        """Multiply every coefficient by a function or scalar."""
        if isinstance(c, Superform):
            return NotImplemented
        out = {k: f * c for k, f in self._terms.items()}
        return Superform._raw(self.ambient_dim, self.p, self.q, {k: f for k, f in out.items() if f})

    __rmul__ = __mul__

    def map_coefficients(self, fn: Callable[[Polynomial], Polynomial], ambient_dim: int | None = None) -> "Superform":
        r = self.ambient_dim if ambient_dim is None else ambient_dim
        out = {}
        for k, f in self._terms.items():
            g = fn(f)
            if g:
                out[k] = g
        return Superform._raw(r, self.p, self.q, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Superform):
            return NotImplemented
        return (self.ambient_dim, self.bidegree, self._terms) == (other.ambient_dim, other.bidegree, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.bidegree, frozenset(self._terms.items())))
        return self._hash

    # -- presentation ------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.ambient_dim)]
        parts = []
        for (I, J), f in self.sorted_terms():
            basis = [f"d'{names[i]}" for i in I] + [f"d''{names[j]}" for j in J]
            coeff = f.to_str(names)
            if not basis:
                parts.append(f"({coeff})")
            elif coeff == "1":
                parts.append("^".join(basis))
            else:
                parts.append(f"({coeff}) " + "^".join(basis))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Superform(r={self.ambient_dim}, bidegree={self.bidegree}, {self.to_str()!r})"


# ---------------------------------------------------------------------------
# operators


def wedge(alpha: Superform, beta: Superform) -> Superform:
    """Exterior product; cross sign ``(-1)^(q1 * p2)`` from moving d' past d''."""
    if alpha.ambient_dim != beta.ambient_dim:
        raise ValueError("ambient mismatch in wedge")
    r = alpha.ambient_dim
    cross = -1 if (alpha.q * beta.p) % 2 else 1
    out: dict[Key, Polynomial] = {}
    for (I, J), f in alpha._terms.items():
        for (K, L), g in beta._terms.items():
            s1, IK = merge_sign(I, K)
            if not s1:
                continue
            s2, JL = merge_sign(J, L)
            if not s2:
                continue
            c = (f * g) * (cross * s1 * s2)
            key = (IK, JL)
            out[key] = out[key] + c if key in out else c
    return Superform._raw(r, alpha.p + beta.p, alpha.q + beta.q, {k: f for k, f in out.items() if f})


def d_prime(alpha: Superform) -> Superform:
    r = alpha.ambient_dim
    out: dict[Key, Polynomial] = {}
    for (I, J), f in alpha._terms.items():
        for i in range(r):
            s, iI = merge_sign((i,), I)
            if not s:
                continue
            df = f.partial(i)
            if not df:
                continue
            key = (iI, J)
            c = df * s
            out[key] = out[key] + c if key in out else c
    return Superform._raw(r, alpha.p + 1, alpha.q, {k: f for k, f in out.items() if f})


def d_double_prime(alpha: Superform) -> Superform:
    r = alpha.ambient_dim
    sign_p = -1 if alpha.p % 2 else 1
    out: dict[Key, Polynomial] = {}
    for (I, J), f in alpha._terms.items():
        for i in range(r):
            s, iJ = merge_sign((i,), J)
            if not s:
                continue
            df = f.partial(i)
            if not df:
                continue
            key = (I, iJ)
            c = df * (s * sign_p)
            out[key] = out[key] + c if key in out else c
    return Superform._raw(r, alpha.p, alpha.q + 1, {k: f for k, f in out.items() if f})


def j_swap(alpha: Superform) -> Superform:
    """Swap the d' and d'' index sets; no sign."""
    return Superform._raw(alpha.ambient_dim, alpha.q, alpha.p, {(J, I): f for (I, J), f in alpha._terms.items()})


class GradedForm:
    """Finite sum of homogeneous superforms of possibly different bidegrees."""

    def __init__(self, ambient_dim: int, components: Iterable[Superform] = ()):
        self.ambient_dim = ambient_dim
        comps: dict[tuple[int, int], Superform] = {}
        for c in components:
            if c.ambient_dim != ambient_dim:
                raise ValueError("ambient mismatch in graded form")
            if c.p < 0 or c.q < 0:
                continue
            comps[c.bidegree] = comps[c.bidegree] + c if c.bidegree in comps else c
        self._components = {k: v for k, v in comps.items() if v}

    @classmethod
    def of(cls, *forms: Superform) -> "GradedForm":
        return cls(forms[0].ambient_dim, forms)

    def component(self, p: int, q: int) -> Superform:
        return self._components.get((p, q), Superform.zero(self.ambient_dim, (p, q)))

    @property
    def components(self) -> dict[tuple[int, int], Superform]:
        return dict(sorted(self._components.items()))

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self._components)

    def is_zero(self) -> bool:
        return not self._components

    def __add__(self, other: "GradedForm | Superform") -> "GradedForm":
        if isinstance(other, Superform):
            other = GradedForm(self.ambient_dim, [other])
        return GradedForm(self.ambient_dim, list(self._components.values()) + list(other._components.values()))

    def __neg__(self) -> "GradedForm":
        return GradedForm(self.ambient_dim, [-c for c in self._components.values()])

    def __sub__(self, other: "GradedForm | Superform") -> "GradedForm":
        if isinstance(other, Superform):
            other = GradedForm(self.ambient_dim, [other])
        return self + (-other)

    def map(self, op: Callable[[Superform], Superform]) -> "GradedForm":
        return GradedForm(self.ambient_dim, [op(c) for c in self._components.values()])

    def __eq__(self, other) -> bool:
        if isinstance(other, Superform):
            other = GradedForm(other.ambient_dim, [other])
        if not isinstance(other, GradedForm):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._components == other._components

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v.to_str()}" for k, v in self.components.items())
        return f"GradedForm(r={self.ambient_dim}, {{{inner}}})"


def d_total(alpha: Superform | GradedForm) -> GradedForm:
    """``d = d' + d''`` as a graded bundle."""
    if isinstance(alpha, Superform):
        alpha = GradedForm(alpha.ambient_dim, [alpha])
    parts = []
    for c in alpha.components.values():
        parts.append(d_prime(c))
        parts.append(d_double_prime(c))
    return GradedForm(alpha.ambient_dim, parts)


# ---------------------------------------------------------------------------
# change of variables, restriction and equality on domains


def _exterior_rows(rows: Sequence[Sequence[Polynomial]], idx: Index, zero: Polynomial) -> dict[Index, Polynomial]:
    """Expand ``theta_{i1} ^ ... ^ theta_{ip}`` where ``theta_i = sum_k rows[i][k] e_k``."""
    cur: dict[Index, Polynomial] = {(): zero + 1}
    for i in idx:
        nxt: dict[Index, Polynomial] = {}
        for K, c in cur.items():
            for k, a in enumerate(rows[i]):
                if not a or k in K:
                    continue
                sgn = -1 if sum(1 for x in K if x > k) % 2 else 1
                K2 = tuple(sorted(K + (k,)))
                v = c * a * sgn
                nxt[K2] = nxt[K2] + v if K2 in nxt else v
        cur = {K: v for K, v in nxt.items() if v}
    return cur


def change_variables(
    alpha: Superform,
    images: Sequence[Polynomial],
    dprime_rows: Sequence[Sequence[Polynomial]],
    ddouble_rows: Sequence[Sequence[Polynomial]],
) -> Superform:
    """Substitute ``x = images(y)``, ``d'x_i = sum_k dprime_rows[i][k] d'y_k`` and
    ``d''x_i = sum_k ddouble_rows[i][k] d''y_k``.
    """
    r = alpha.ambient_dim
    if len(images) != r or len(dprime_rows) != r or len(ddouble_rows) != r:
        raise ValueError("change of variables needs one image per ambient coordinate")
    m = images[0].num_vars if images else 0
    zero = Polynomial.zero(m)
    cache_p: dict[Index, dict[Index, Polynomial]] = {}
    cache_q: dict[Index, dict[Index, Polynomial]] = {}
    out: dict[Key, Polynomial] = {}
    for (I, J), f in alpha._terms.items():
        if I not in cache_p:
            cache_p[I] = _exterior_rows(dprime_rows, I, zero)
        if J not in cache_q:
            cache_q[J] = _exterior_rows(ddouble_rows, J, zero)
        if not cache_p[I] or not cache_q[J]:
            continue
        g = f.substitute(images) if r else Polynomial.constant(m, f.constant_term())
        if not g:
            continue
        for K, a in cache_p[I].items():
            ga = g * a
            for L, b in cache_q[J].items():
                v = ga * b
                key = (K, L)
                out[key] = out[key] + v if key in out else v
    return Superform._raw(m, alpha.p, alpha.q, {k: v for k, v in out.items() if v})


@dataclass(frozen=True)
class CellForm:
    """A form written in affine coordinates ``u`` on a cell, ``x = v0 + B u``."""

    cell_id: str
    form: Superform

    def is_zero(self) -> bool:
        return self.form.is_zero()


def restrict_to_cell(alpha: Superform, sigma: Polyhedron) -> CellForm:
    if sigma.ambient_dim != alpha.ambient_dim:
        raise ValueError(f"cell {sigma.id!r} lives in dimension {sigma.ambient_dim}, form in {alpha.ambient_dim}")
    B = sigma.basis_matrix()
    m = sigma.dim
    u = variables(m)
    v0 = sigma.base_point
    images = []
    rows = []
    for i in range(alpha.ambient_dim):
        img = Polynomial.constant(m, v0[i])
        for k in range(m):
            if B[i][k]:
                img = img + u[k] * B[i][k]
        images.append(img)
        rows.append([Polynomial.constant(m, B[i][k]) for k in range(m)])
    return CellForm(sigma.id, change_variables(alpha, images, rows, rows))


def vanishing_witness(C: PolyhedralComplex, alpha: Superform | GradedForm, domain: Domain) -> str | None:
    """Id of a maximal cell of the domain where ``alpha`` does not restrict to zero."""
    comps = alpha.components.values() if isinstance(alpha, GradedForm) else [alpha]
    comps = [c for c in comps if c]
    if not comps:
        return None
    r = domain_dim(C, domain)
    if comps[0].ambient_dim != r:
        raise ValueError(f"form has ambient {comps[0].ambient_dim}, domain needs {r}")
    for tau in family(C, domain):
        for c in comps:
            if not restrict_to_cell(c, tau).is_zero():
                return tau.id
    return None


def vanishes_on(C: PolyhedralComplex, alpha: Superform | GradedForm, domain: Domain) -> bool:
    return vanishing_witness(C, alpha, domain) is None


def equal_on_domain(C: PolyhedralComplex, alpha: Superform | GradedForm, beta: Superform | GradedForm, domain: Domain) -> bool:
    """Equality of forms after restriction to every maximal cell of ``domain``."""
    if isinstance(alpha, Superform) and isinstance(beta, Superform):
        alpha._check(beta)
        return vanishes_on(C, alpha - beta, domain)
    if isinstance(alpha, Superform):
        alpha = GradedForm(alpha.ambient_dim, [alpha])
    if isinstance(beta, Superform):
        beta = GradedForm(beta.ambient_dim, [beta])
    return vanishes_on(C, alpha - beta, domain)
