"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 parse/usage error, 3 internal
invariant failure, 4 search budget exhausted, 5 theorem canary tripped.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .coverpack import (
    CertificateParseError,
    ProofInvariantError,
    cover_and_pack,
    format_certificate,
    parse_certificate,
    verify_certificate,
)
from .exact import DEFAULT_BUDGET, exact_nu, exact_tau
from .graph import GraphError, parse_graph, serialize_graph
from .search import (
    GeneratorSpec,
    random_multigraph,
    random_tournament,
    ratio_scan,
    rotational_tournament,
    tournament_from_mask,
)

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_INTERNAL, EXIT_BUDGET, EXIT_CANARY = range(6)

CLI_FAMILIES = {
    "rotational": "rotational",
    "all-tournaments": "all_tournaments",
    "random-tournament": "random_tournament",
    "random": "random_multigraph",
}


class _ParseFailure(Exception):
    pass


def _load_graph(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        g, loops = parse_graph(text)
    except (OSError, GraphError) as exc:
        raise _ParseFailure(f"{path}: {exc}") from exc
    if loops:
        print(f"warning: dropped {loops} loop arc(s)", file=sys.stderr)
    return g


def cmd_cover(args) -> int:
    g = _load_graph(args.graph)
    try:
        cert = cover_and_pack(g)
    except ProofInvariantError as exc:
        print(f"internal invariant failed: {exc}", file=sys.stderr)
        for e in exc.trace:
            print(f"  level {e.depth} pivot {e.pivot} p {e.p} tag {e.tag.value}", file=sys.stderr)
        return EXIT_INTERNAL
    cover, packing = len(cert.cover), len(cert.packing)
    ratio = Fraction(cover, packing) if packing else None
    print(f"cover={cover} packing={packing} ratio={ratio if ratio is not None else '-'}")
    for tag, count in sorted(cert.tag_histogram().items(), key=lambda kv: kv[0].value):
        print(f"  {tag.value} {count}")
    doc = format_certificate(g, cert)
    if args.out:
        Path(args.out).write_text(doc)
    elif args.print_cert:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    capped = False
    parts = []
    witnesses = []
    if args.which in ("nu", "both"):
        r = exact_nu(g, args.budget)
        capped |= r.capped
        parts.append(f"nu>={r.value} (lower bound)" if r.capped else f"nu={r.value}")
        witnesses += [f"packing triangle {t}" for t in r.witness]
    if args.which in ("tau", "both"):
        r = exact_tau(g, args.budget)
        capped |= r.capped
        parts.append(f"tau<={r.value} (upper bound)" if r.capped else f"tau={r.value}")
        witnesses += [f"cover slot {s}" for s in sorted(r.witness)]
    print(" ".join(parts))
    if args.witness:
        print("\n".join(witnesses))
    return EXIT_BUDGET if capped else EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        cert = parse_certificate(Path(args.certificate).read_text())
    except (OSError, CertificateParseError) as exc:
        raise _ParseFailure(f"{args.certificate}: {exc}") from exc
    report = verify_certificate(g, cert)
    print("PASS" if report.ok else "FAIL")
    print(report.describe())
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_scan(args) -> int:
    spec = GeneratorSpec(
        family=CLI_FAMILIES[args.family],
        n=args.n,
        kmax=args.kmax,
        arc_prob=args.arc_prob,
        max_mult=args.mult_max,
        seed=args.seed,
        limit=args.limit,
    )
    report = ratio_scan(spec, budget=args.budget, workers=args.workers)
    table = args.table or spec.family == "rotational"
    sys.stdout.write(report.format_text(table))
    if args.out:
        report.write(Path(args.out), table)
    return EXIT_CANARY if report.theorem_violations else EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "rotational":
        g = rotational_tournament(args.k)
    elif args.family == "all-tournaments":
        g = tournament_from_mask(args.n, args.index)
    elif args.family == "random-tournament":
        g = random_tournament(args.n, args.seed)
    else:
        g = random_multigraph(args.n, args.arc_prob, args.mult_max, args.seed)
    text = serialize_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtriangles",
        description="Directed triangle packing/covering certificates and exact oracles.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cover", help="build a cover/packing certificate")
    p.add_argument("graph", help="graph file in dmg text format ('-' for stdin)")
    p.add_argument("--out", help="write the certificate document here")
    p.add_argument("--print-cert", action="store_true", help="print the certificate to stdout")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("exact", help="exact packing/covering numbers")
    p.add_argument("graph")
    p.add_argument("--which", choices=("nu", "tau", "both"), default="both")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--witness", action="store_true", help="list the optimal packing/cover")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a certificate against a graph")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="extremal tau/nu scan over an instance family")
    p.add_argument("--family", choices=tuple(CLI_FAMILIES), required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--arc-prob", type=float, default=0.5)
    p.add_argument("--mult-max", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--table", action="store_true", help="print one row per instance")
    p.add_argument("--out", help="directory for report.txt, summary.json and exceeder dumps")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gen", help="emit a generated graph in dmg text format")
    p.add_argument("--family", choices=tuple(CLI_FAMILIES), required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--index", type=int, default=0, help="orientation bitmask for all-tournaments")
    p.add_argument("--arc-prob", type=float, default=0.5)
    p.add_argument("--mult-max", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR)
    try:
        return args.func(args)
    except _ParseFailure as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
