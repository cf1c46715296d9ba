"""JSON documents for complexes, forms and map pairs.

Rationals are always strings ``"a/b"``; a JSON number is rejected so that no
float can slip in.  Form indices are 1-based in documents and 0-based in
memory.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .polyalg import Polynomial, format_rational, parse_rational
from .polyhedra import PolyhedralComplex, Polyhedron
from .pullback import MapPair
from .superforms import GradedForm, Superform


class DocumentError(ValueError):
    """Malformed document; ``location`` is a JSON-path-like string."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _rat(value: Any, where: str) -> Fraction:
    if not isinstance(value, str):
        raise DocumentError(where, f"rational must be a string, got {value!r}")
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(where, str(exc)) from None


def _field(doc: Any, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise DocumentError(where, "expected an object")
    if key not in doc:
        raise DocumentError(where, f"missing field {key!r}")
    return doc[key]


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(where, "expected a list")
    return value


def _int(value: Any, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(where, f"expected an integer, got {value!r}")
    return value


def _point(value: Any, r: int, where: str) -> tuple[Fraction, ...]:
    coords = _list(value, where)
    if len(coords) != r:
        raise DocumentError(where, f"expected {r} coordinates, got {len(coords)}")
    return tuple(_rat(c, f"{where}[{i}]") for i, c in enumerate(coords))


# ---------------------------------------------------------------------------
# polynomials


def parse_polynomial(value: Any, r: int, where: str = "poly") -> Polynomial:
    terms: dict[tuple[int, ...], Fraction] = {}
    for k, rec in enumerate(_list(value, where)):
        loc = f"{where}[{k}]"
        c = _rat(_field(rec, "coeff", loc), f"{loc}.coeff")
        exps = tuple(_int(e, f"{loc}.exps") for e in _list(_field(rec, "exps", loc), f"{loc}.exps"))
        if len(exps) != r or any(e < 0 for e in exps):
            raise DocumentError(f"{loc}.exps", f"expected {r} non-negative exponents")
        terms[exps] = terms.get(exps, Fraction(0)) + c
    return Polynomial(r, terms)


def polynomial_to_doc(f: Polynomial) -> list[dict]:
    return [{"coeff": format_rational(c), "exps": list(e)} for e, c in f.sorted_terms()]


# ---------------------------------------------------------------------------
# complexes


def parse_complex(doc: Any) -> PolyhedralComplex:
    r = _int(_field(doc, "ambient_dim", "$"), "$.ambient_dim")
    if r < 0:
        raise DocumentError("$.ambient_dim", "must be non-negative")
    cells = []
    for k, c in enumerate(_list(_field(doc, "cells", "$"), "$.cells")):
        loc = f"$.cells[{k}]"
        cid = _field(c, "id", loc)
        if not isinstance(cid, str):
            raise DocumentError(f"{loc}.id", "cell id must be a string")
        verts = [_point(v, r, f"{loc}.vertices[{i}]") for i, v in enumerate(_list(_field(c, "vertices", loc), f"{loc}.vertices"))]
        rays = [_point(v, r, f"{loc}.rays[{i}]") for i, v in enumerate(_list(c.get("rays", []), f"{loc}.rays"))]
        if not verts:
            raise DocumentError(f"{loc}.vertices", "a cell needs at least one vertex")
        cells.append(Polyhedron(cid, verts, rays))
    pairs = []
    for k, pr in enumerate(_list(doc.get("faces", []), "$.faces")):
        loc = f"$.faces[{k}]"
        pr = _list(pr, loc)
        if len(pr) != 2 or not all(isinstance(x, str) for x in pr):
            raise DocumentError(loc, "face entry must be [child_id, parent_id]")
        pairs.append((pr[0], pr[1]))
    return PolyhedralComplex(r, cells, pairs)


def complex_to_doc(C: PolyhedralComplex, face_pairs: list[tuple[str, str]] | None = None) -> dict:
    pairs = C.face_pairs if face_pairs is None else face_pairs
    return {
        "ambient_dim": C.ambient_dim,
        "cells": [
            {
                "id": c.id,
                "vertices": [[format_rational(x) for x in v] for v in c.vertices],
                "rays": [[format_rational(x) for x in d] for d in c.rays],
            }
            for c in C.cells
        ],
        "faces": [list(p) for p in pairs],
    }


# ---------------------------------------------------------------------------
# forms


def _indices(value: Any, r: int, where: str) -> tuple[int, ...]:
    idx = tuple(_int(i, where) for i in _list(value, where))
    if any(i < 1 or i > r for i in idx):
        raise DocumentError(where, f"indices must lie in 1..{r}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise DocumentError(where, "indices must be strictly increasing")
    return tuple(i - 1 for i in idx)


def parse_form(doc: Any) -> Superform:
    r = _int(_field(doc, "ambient_dim", "$"), "$.ambient_dim")
    bd = _list(_field(doc, "bidegree", "$"), "$.bidegree")
    if len(bd) != 2:
        raise DocumentError("$.bidegree", "expected [p, q]")
    p, q = (_int(x, "$.bidegree") for x in bd)
    if not (0 <= p <= r and 0 <= q <= r):
        raise DocumentError("$.bidegree", f"bidegree must lie in 0..{r}")
    terms: dict = {}
    for k, t in enumerate(_list(_field(doc, "terms", "$"), "$.terms")):
        loc = f"$.terms[{k}]"
        I = _indices(_field(t, "dI", loc), r, f"{loc}.dI")
        J = _indices(_field(t, "dJ", loc), r, f"{loc}.dJ")
        if len(I) != p or len(J) != q:
            raise DocumentError(loc, f"term does not have bidegree ({p}, {q})")
        f = parse_polynomial(_field(t, "poly", loc), r, f"{loc}.poly")
        terms[(I, J)] = terms[(I, J)] + f if (I, J) in terms else f
    return Superform(r, (p, q), terms)


def form_to_doc(alpha: Superform) -> dict:
    p, q = alpha.bidegree
    return {
        "ambient_dim": alpha.ambient_dim,
        "bidegree": [max(p, 0), max(q, 0)] if alpha.is_zero() and min(p, q) < 0 else [p, q],
        "terms": [
            {"dI": [i + 1 for i in I], "dJ": [j + 1 for j in J], "poly": polynomial_to_doc(f)}
            for (I, J), f in alpha.sorted_terms()
        ],
    }


def parse_graded_form(doc: Any) -> GradedForm:
    """A single form document or ``{"components": [form, ...]}``."""
    if isinstance(doc, dict) and "components" in doc:
        parts = [parse_form(c) for c in _list(doc["components"], "$.components")]
        if not parts:
            raise DocumentError("$.components", "need at least one component")
        return GradedForm(parts[0].ambient_dim, parts)
    alpha = parse_form(doc)
    return GradedForm(alpha.ambient_dim, [alpha])


def graded_form_to_doc(alpha: GradedForm) -> dict:
    return {"components": [form_to_doc(alpha.component(p, q)) for p, q in sorted(alpha.bidegrees(), reverse=True)]}


def form_hash(alpha: Superform | GradedForm) -> str:
    doc = form_to_doc(alpha) if isinstance(alpha, Superform) else graded_form_to_doc(alpha)
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


# ---------------------------------------------------------------------------
# map pairs


def parse_map_pair(doc: Any, source_dim: int) -> MapPair:
    s = [parse_polynomial(f, source_dim, f"$.s[{i}]") for i, f in enumerate(_list(_field(doc, "s", "$"), "$.s"))]
    L = [[_rat(x, f"$.L[{i}][{j}]") for j, x in enumerate(_list(row, f"$.L[{i}]"))] for i, row in enumerate(_list(_field(doc, "L", "$"), "$.L"))]
    try:
        return MapPair(source_dim, len(s), tuple(s), tuple(map(tuple, L)))
    except ValueError as exc:
        raise DocumentError("$", str(exc)) from None


def map_pair_to_doc(F: MapPair) -> dict:
    return {"s": [polynomial_to_doc(f) for f in F.s], "L": [[format_rational(x) for x in row] for row in F.L]}


# ---------------------------------------------------------------------------


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str, name: str = "<input>") -> Any:
    try:
        return json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{name}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _no_float(text: str):
    raise DocumentError("$", f"floating-point literal {text} is not allowed; use a rational string")


def load_file(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), path)
