"""``polyforms`` command line: validate, betti, primitive, check, subdivide.

Exit codes: 0 success, 1 input or validation error, 2 failed mathematical
precondition, 3 identity failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import cohomology, documents
from .errors import NotClosedError, PreconditionError
from .polyalg import format_rational
from .homotopy import d_prime_primitive, d_primitive_reduction
from .polyhedra import PolyhedralComplex, barycentric_subdivision, star, validate
from .suites import SUITES

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_IDENTITY = 0, 1, 2, 3


class _InputError(Exception):
    pass


def _load_complex(path: str, check: bool = True) -> PolyhedralComplex:
    try:
        C = documents.parse_complex(documents.load_file(path))
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from None
    except ValueError as exc:
        raise _InputError(f"{path}: parse error: {exc}") from None
    if check:
        problems = validate(C)
        if problems:
            raise _InputError("\n".join([f"{path}: invalid complex"] + [f"  {v}" for v in problems]))
    return C


def cmd_validate(args, out: TextIO) -> int:
    C = _load_complex(args.complex, check=False)
    problems = validate(C)
    if problems:
        print(f"{len(problems)} violation(s):", file=out)
        for v in problems:
            print(f"  {v}", file=out)
        return EXIT_INPUT
    print(f"ok: {len(C)} cells, dimension {C.dimension}, ambient dimension {C.ambient_dim}", file=out)
    return EXIT_OK


def cmd_betti(args, out: TextIO) -> int:
    C = _load_complex(args.complex)
    if args.q == "all":
        qs = None
    else:
        try:
            qs = [int(args.q)]
        except ValueError:
            raise _InputError(f"--q must be 'all' or an integer, got {args.q!r}") from None
        if not 0 <= qs[0] <= C.ambient_dim:
            raise _InputError(f"--q must lie in 0..{C.ambient_dim}")
    rows = cohomology.betti_table(C, qs)
    if args.json:
        out.write(documents.dumps([row.to_dict() for row in rows]))
        return EXIT_OK
    for row in rows:
        print(str(row), file=out)
    if any(not row.certified for row in rows):
        print(f"note: uncertified rows assume {cohomology.ASSUMPTION}", file=out)
    return EXIT_OK


def cmd_primitive(args, out: TextIO) -> int:
    C = _load_complex(args.complex)
    try:
        doc = documents.load_file(args.form)
        alpha = documents.parse_graded_form(doc) if args.op == "dreduce" else documents.parse_form(doc)
    except OSError as exc:
        raise _InputError(f"{args.form}: {exc.strerror}") from None
    except ValueError as exc:
        raise _InputError(f"{args.form}: parse error: {exc}") from None
    if alpha.ambient_dim != C.ambient_dim:
        raise _InputError(f"form lives in dimension {alpha.ambient_dim}, complex in {C.ambient_dim}")
    if args.star not in C:
        raise _InputError(f"unknown cell {args.star!r}")
    dom, _ = star(C, args.star)
    try:
        if args.op == "dprime":
            beta = d_prime_primitive(C, alpha, dom)
            result = {"beta": documents.form_to_doc(beta)}
        else:
            beta, gamma = d_primitive_reduction(C, alpha, dom)
            result = {"beta": documents.graded_form_to_doc(beta), "gamma": documents.form_to_doc(gamma)}
    except NotClosedError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        out.write(documents.dumps({"error": "not closed", "witness_cell": exc.witness}))
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    result["check"] = {
        "input_hash": documents.form_hash(alpha),
        "domain": {"star": dom.cell_id, "center": [format_rational(c) for c in dom.center]},
        "verified": True,
    }
    out.write(documents.dumps(result))
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    C = _load_complex(args.complex)
    if args.count < 0:
        raise _InputError("--count must be non-negative")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        rep = SUITES[name](C, args.seed, args.count)
        status = "pass" if rep.passed else "FAIL"
        print(f"{name}: {status} ({rep.cases} cases, seed {rep.seed})", file=out)
        for note in rep.notes:
            print(f"  {note}", file=out)
        for f in rep.failures:
            failed = True
            print(f"  identity failed: {f.identity} {f.detail}".rstrip(), file=out)
            print("  minimized input:", file=out)
            dump = documents.dumps(documents.form_to_doc(f.form))
            out.write("".join(f"    {line}\n" for line in dump.splitlines()))
    return EXIT_IDENTITY if failed else EXIT_OK


def cmd_subdivide(args, out: TextIO) -> int:
    C = _load_complex(args.complex)
    if not C.bounded:
        raise _InputError("barycentric subdivision needs a bounded complex")
    out.write(documents.dumps(documents.complex_to_doc(barycentric_subdivision(C))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyforms", description="Exact superform calculus on polyhedral complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a complex document is a polyhedral complex")
    p.add_argument("complex")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("betti", help="dimensions of d'-cohomology by Cech computation")
    p.add_argument("complex")
    p.add_argument("--q", default="all", help="'all' or a single q")
    p.add_argument("--json", action="store_true", help="emit machine-readable rows")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("primitive", help="construct a primitive on the star of a cell")
    p.add_argument("complex")
    p.add_argument("form")
    p.add_argument("--star", required=True, metavar="CELL_ID")
    p.add_argument("--op", choices=["dprime", "dreduce"], default="dprime")
    p.set_defaults(func=cmd_primitive)

    p = sub.add_parser("check", help="run seeded randomized identity suites")
    p.add_argument("complex")
    p.add_argument("--suite", choices=["homotopy", "pullback", "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("subdivide", help="emit the barycentric subdivision")
    p.add_argument("complex")
    p.set_defaults(func=cmd_subdivide)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
