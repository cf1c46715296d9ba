"""Exact sparse multivariate polynomials over the rationals.

A polynomial in ``n`` variables is a map from exponent tuples (length ``n``)
to nonzero :class:`fractions.Fraction` coefficients.  The zero polynomial has
an empty term map.  Values are immutable; every operation returns a new
canonical polynomial.

    >>> x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    >>> str((x + y) * (x - y))
    'x1^2 - x2^2'
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` into an exact rational.

    Floats are rejected on purpose; only integer and ``a/b`` literals are read.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        a = int(num)
        b = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if b == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(a, b)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _check_vars(p: "Polynomial", q: "Polynomial") -> None:
    if p.num_vars != q.num_vars:
        raise ValueError(f"variable count mismatch: {p.num_vars} vs {q.num_vars}")


class Polynomial:
    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Exponent, Scalar] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        clean: dict[Exponent, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for {num_vars} variables")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.num_vars = num_vars
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponent, Fraction]) -> "Polynomial":
        # trusted constructor: caller guarantees canonical terms
        p = cls.__new__(cls)
        p.num_vars = num_vars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls._raw(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        return cls._raw(num_vars, {(0,) * num_vars: value} if value else {})

    @classmethod
    def variable(cls, num_vars: int, i: int) -> "Polynomial":
        if not 0 <= i < num_vars:
            raise IndexError(f"variable index {i} out of range for {num_vars} variables")
        e = [0] * num_vars
        e[i] = 1
        return cls._raw(num_vars, {tuple(e): Fraction(1)})

    @classmethod
    def affine(cls, coeffs: Sequence[Scalar], const: Scalar = 0) -> "Polynomial":
        """``const + sum(coeffs[i] * x_i)``."""
        n = len(coeffs)
        terms: dict[Exponent, Fraction] = {}
        if Fraction(const):
            terms[(0,) * n] = Fraction(const)
        for i, c in enumerate(coeffs):
            if Fraction(c):
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        return cls._raw(n, terms)

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.num_vars, Fraction(0))

    def coefficient(self, exps: Exponent) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def linear_coefficients(self) -> list[Fraction]:
        out = []
        for i in range(self.num_vars):
            e = [0] * self.num_vars
            e[i] = 1
            out.append(self._terms.get(tuple(e), Fraction(0)))
        return out

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_vars(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.num_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.num_vars)
        return Polynomial._raw(self.num_vars, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.num_vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(self.num_vars, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and composition -----------------------------------------

    def partial(self, i: int) -> "Polynomial":
        if not 0 <= i < self.num_vars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial._raw(self.num_vars, out)

    def integrate_unit_interval(self, i: int) -> "Polynomial":
        """Definite integral over variable ``i`` from 0 to 1 (variable kept, exponent 0)."""
        if not 0 <= i < self.num_vars:
            raise IndexError(f"variable index {i} out of range")
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            out[ne] = out.get(ne, 0) + c / (e[i] + 1)
        return Polynomial._raw(self.num_vars, {e: c for e, c in out.items() if c})

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.num_vars:
            raise ValueError(f"point has length {len(point)}, expected {self.num_vars}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable ``i`` by ``images[i]``."""
        if len(images) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} images, got {len(images)}")
        if not images:
            # constant polynomial in zero variables; no target arity known
            raise ValueError("cannot substitute into a 0-variable polynomial without a target arity")
        m = images[0].num_vars
        if any(g.num_vars != m for g in images):
            raise ValueError("images must share a common num_vars")
        powers: list[list[Polynomial]] = [[Polynomial.constant(m, 1)] for _ in images]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= k:
                cache.append(cache[-1] * images[i])
            return cache[k]

        result = Polynomial.zero(m)
        for e, c in self._terms.items():
            term = Polynomial.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def drop_variable(self, i: int) -> "Polynomial":
        """Remove variable ``i``; it must not occur."""
        if self.degree_in(i) > 0:
            raise ValueError(f"variable {i} still occurs")
        return Polynomial._raw(self.num_vars - 1, {e[:i] + e[i + 1:]: c for e, c in self._terms.items()})

    def extend(self, extra: int = 1) -> "Polynomial":
        """Same polynomial viewed in ``num_vars + extra`` variables (new ones appended)."""
        pad = (0,) * extra
        return Polynomial._raw(self.num_vars + extra, {e + pad: c for e, c in self._terms.items()})

    # -- presentation -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lexicographic order, leading term first."""
        return sorted(self._terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.num_vars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self.to_str()!r})"


def variables(num_vars: int) -> list[Polynomial]:
    return [Polynomial.variable(num_vars, i) for i in range(num_vars)]


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_vars(p, q)
    return p + q


def negate(p: Polynomial) -> Polynomial:
    return -p


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_vars(p, q)
    return p * q


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    return p.substitute(images)


def integrate_unit_interval(p: Polynomial, i: int) -> Polynomial:
    return p.integrate_unit_interval(i)


def evaluate(p: Polynomial, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def poly_sum(polys: Iterable[Polynomial], num_vars: int) -> Polynomial:
    total = Polynomial.zero(num_vars)
    for p in polys:
        total = total + p
    return total
