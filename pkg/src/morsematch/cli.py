"""Command-line entry point: ``morsematch <subcommand> ...``.

Exit codes: 0 success (or an optimal field), 1 usage, I/O or parse
errors, 2 optimizer budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from .complex import (
    CellNotFound,
    ComplexError,
    MAX_ORDER,
    MIN_ORDER,
    build_matching_complex,
    euler_characteristic,
    format_cell,
    parse_cell,
    read_complex,
    write_complex,
)
from .gvf import NotCriticalError, empty_field, enumerate_paths, read_gvf
from .homology import morse_lower_bounds, simplicial_homology
from .optimizer import SearchConfig, optimize, verify_certificate, write_certificate

EXIT_OK, EXIT_ERROR, EXIT_EXHAUSTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tuple_text(t) -> str:
    return "(" + ", ".join(map(str, t)) + ")"


def cmd_build(args) -> int:
    if not MIN_ORDER <= args.n <= MAX_ORDER:
        raise UsageError(f"-n must be between {MIN_ORDER} and {MAX_ORDER}")
    cplx = build_matching_complex(args.n)
    out = args.out or f"M{args.n}.complex"
    write_complex(cplx, out)
    print(f"f = {_tuple_text(cplx.f_vector())}, chi = {euler_characteristic(cplx)}")
    return EXIT_OK


def cmd_homology(args) -> int:
    cplx = read_complex(args.complex)
    h = simplicial_homology(cplx)
    bounds = morse_lower_bounds(h)
    print(f"{h.compact()}; lower_bounds=({','.join(map(str, bounds))})")
    return EXIT_OK


def cmd_optimize(args) -> int:
    cplx = read_complex(args.complex)
    config = SearchConfig(
        strategy=args.strategy,
        seed=args.seed,
        max_restarts=args.max_restarts,
        max_cancellations=args.max_cancellations,
        simultaneous=args.simultaneous == "on",
    )
    cert = optimize(cplx, config, workers=args.workers)
    out = args.out or str(Path(args.complex).with_suffix(".cert"))
    write_certificate(cert, out)
    print(f"critical = {_tuple_text(cert.critical)}, lower_bounds = {_tuple_text(cert.bounds)}, "
          f"verdict = {cert.verdict}")
    if not verify_certificate(cplx, cert):
        print("certificate failed verification", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if cert.optimal else EXIT_EXHAUSTED


def cmd_paths(args) -> int:
    cplx = read_complex(args.complex)
    field = read_gvf(args.gvf, cplx)
    source = parse_cell(args.source)
    paths = enumerate_paths(field, source)
    for p in paths:
        print(" > ".join(format_cell(c) for c in p.cells))
    hist = Counter(p.end for p in paths)
    print(f"{len(paths)} paths from {format_cell(source)}")
    for end in sorted(hist):
        print(f"  {format_cell(end)}: {hist[end]}")
    return EXIT_OK


def dot_text(field) -> str:
    """Modified Hasse diagram as DOT: paired arcs point up, all others down."""
    cplx = field.cplx
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for cell in cplx:
        attrs = f'label="{format_cell(cell)}", dim={len(cell) - 1}'
        if field.is_critical(cell):
            attrs += ', critical=true, shape=doublecircle'
        lines.append(f'  "{format_cell(cell)}" [{attrs}];')
    for level in cplx.cells[1:]:
        for sigma in level:
            for tau in cplx.facets(sigma):
                if field.partner(tau) == sigma:
                    lines.append(f'  "{format_cell(tau)}" -> "{format_cell(sigma)}" [class="up", color="red"];')
                else:
                    lines.append(f'  "{format_cell(sigma)}" -> "{format_cell(tau)}" [class="down"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    cplx = read_complex(args.complex)
    field = read_gvf(args.gvf, cplx) if args.gvf else empty_field(cplx)
    text = dot_text(field)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="morsematch", description="Discrete Morse theory on matching complexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build M_n and write it to a complex file")
    b.add_argument("-n", type=int, required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    h = sub.add_parser("homology", help="integer homology and Morse lower bounds")
    h.add_argument("complex")
    h.set_defaults(func=cmd_homology)

    o = sub.add_parser("optimize", help="search for an optimal gradient vector field")
    o.add_argument("complex")
    o.add_argument("--strategy", choices=["lex", "random"], default="random")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-restarts", type=int, default=1000)
    o.add_argument("--max-cancellations", type=int, default=10_000)
    o.add_argument("--simultaneous", choices=["on", "off"], default="on")
    o.add_argument("--workers", "--threads", dest="workers", type=int, default=1)
    o.add_argument("--out")
    o.set_defaults(func=cmd_optimize)

    pa = sub.add_parser("paths", help="list gradient paths leaving a critical cell")
    pa.add_argument("complex")
    pa.add_argument("gvf")
    pa.add_argument("source", help="cell text, e.g. 2-5,3-6,4-7")
    pa.set_defaults(func=cmd_paths)

    d = sub.add_parser("export-dot", help="write the modified Hasse diagram as DOT")
    d.add_argument("complex")
    d.add_argument("gvf", nargs="?")
    d.add_argument("--out")
    d.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ComplexError, CellNotFound, NotCriticalError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
