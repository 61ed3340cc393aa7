"""Command-line front end.

Exit codes: 0 success or member, 1 checked and false, 2 usage or input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from . import build, moduli
from .coloring import find_epc_coloring, format_coloring
from .complex import dual_graph, genus, read_complex, write_complex
from .errors import (
    ArgumentMismatch,
    ClosureFailure,
    FormatError,
    InvalidComplex,
    MissingEntry,
    NotAMember,
    PolymoduliError,
)

OK, FALSE, USAGE, FAILURE = 0, 1, 2, 3


def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _base_edge(args):
    return tuple(args.base_edge) if args.base_edge else None


def _load_angles(args):
    K = read_complex(args.complex)
    sigma, delta = moduli.read_angles(K, args.angles)
    return K, sigma, delta


def cmd_extract(args) -> int:
    P = build.read_obj(args.mesh)
    a = build.extract_angles(P)
    if args.complex_out:
        write_complex(P.K, args.complex_out)
    _emit(moduli.format_angles(P.K, a.sigma, a.delta), args.output)
    flat = build.flat_edges(a.delta)
    if flat:
        print(f"note: {len(flat)} flat edges (dihedral pi): {flat}", file=sys.stderr)
    return OK


def cmd_check(args) -> int:
    K, sigma, delta = _load_angles(args)
    m = moduli.check_membership(K, sigma, delta, args.tol, base_edge=_base_edge(args))
    lines = [f"member {'yes' if m.member else 'no'}",
             f"max-residual {m.max_residual:.3e}"]
    lines += [f"block {name} residual {r:.3e}" for name, r in m.residuals.items()]
    if not m.member:
        lines.append(f"failing-block {m.failing_block}")
        lines.append(f"reason {m.reason}")
    print("\n".join(lines))
    return OK if m.member else FALSE


def cmd_reconstruct(args) -> int:
    K, sigma, delta = _load_angles(args)
    try:
        P = build.reconstruct(K, sigma, delta, args.tol, base_edge=_base_edge(args))
    except NotAMember as exc:
        print(f"not a member: {exc}", file=sys.stderr)
        return FALSE
    _emit(build.format_obj(P), args.output)
    return OK


def cmd_dims(args) -> int:
    if args.mesh:
        P = build.read_obj(args.mesh)
        K = P.K
        a = build.extract_angles(P)
        sigma, delta = a.sigma, a.delta
    elif args.complex and args.angles:
        K, sigma, delta = _load_angles(args)
    else:
        print("dims needs --mesh or both --complex and --angles", file=sys.stderr)
        return USAGE
    m = moduli.check_membership(K, sigma, delta, args.tol, base_edge=_base_edge(args))
    if not m.member:
        print(f"not a member: {m.reason}", file=sys.stderr)
        return FALSE
    report = moduli.verify_dimensions(K, m.point)
    _emit(report.format(), args.output)
    return OK if report.ok else FALSE


def cmd_color(args) -> int:
    K = read_complex(args.complex)
    D = dual_graph(K)
    col = find_epc_coloring(D, genus(K), tuple(args.pair) if args.pair else None)
    if col is None:
        _emit("not-found\n", args.output)
        return FALSE
    _emit(format_coloring(D, col), args.output)
    return OK


def cmd_roundtrip(args) -> int:
    P = build.read_obj(args.mesh)
    a = build.extract_angles(P)
    try:
        Q = build.reconstruct(P.K, a.sigma, a.delta, args.tol, base_edge=_base_edge(args))
    except NotAMember as exc:
        print(f"not a member: {exc}", file=sys.stderr)
        return FALSE
    if args.output:
        build.write_obj(Q, args.output)
    cmp = build.similarity_compare(Q, P)
    print(f"similar {'yes' if cmp.ok else 'no'}")
    print(f"scale {cmp.scale:.17g}")
    print(f"max-deviation {cmp.residual:.3e}")
    return OK if cmp.ok else FALSE


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymoduli",
        description="Angles, membership, reconstruction and dimension checks for "
                    "triangulated polyhedra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def numeric(p):
        p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
        p.add_argument("--base-edge", type=int, nargs=2, metavar=("I", "J"),
                       help="edge whose length is fixed to 1")

    p = sub.add_parser("extract", help="mesh -> angle file")
    p.add_argument("mesh")
    p.add_argument("-o", "--output")
    p.add_argument("--complex-out", help="also write the combinatoric")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check", help="membership test for an angle file")
    p.add_argument("complex")
    p.add_argument("angles")
    numeric(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reconstruct", help="angle file -> mesh")
    p.add_argument("complex")
    p.add_argument("angles")
    p.add_argument("-o", "--output")
    numeric(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("dims", help="dimension report")
    p.add_argument("--mesh")
    p.add_argument("--complex")
    p.add_argument("--angles")
    p.add_argument("-o", "--output")
    numeric(p)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("color", help="search an elimination-pattern coloring")
    p.add_argument("complex")
    p.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"),
                   help="adjacent dual nodes (face ids) carrying the six corners")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("roundtrip", help="mesh -> angles -> mesh, then compare")
    p.add_argument("mesh")
    p.add_argument("-o", "--output")
    numeric(p)
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (FormatError, InvalidComplex, MissingEntry, ArgumentMismatch) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE
    except ClosureFailure as exc:
        print(f"error: ClosureFailure at vertex {exc.vertex}: {exc}", file=sys.stderr)
        return FAILURE
    except PolymoduliError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
