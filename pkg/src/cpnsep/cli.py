"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 unreachable (``decide``),
4 reachable instance given to ``certify``, 5 certificate rejected,
1 violations found by ``fuzz``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .io import (
    ParseError,
    certificate_from_json,
    certificate_to_json,
    fmt_rat,
    net_hash,
    read_net,
    read_polytope,
    write_net,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNREACHABLE, EXIT_REACHABLE, EXIT_REJECT = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _load(path, *names):
    net, marks = read_net(path)
    out = []
    for n in names:
        if n not in marks:
            raise UsageError(f"{path}: no marking named {n!r} (have: {', '.join(marks) or 'none'})")
        out.append(marks[n])
    return net, out


def cmd_decide(args) -> int:
    from .reach import reachable

    net, (src, tgt) = _load(args.net, args.source, args.target)
    res = reachable(net, src, tgt)
    if not res.reachable:
        print("unreachable")
        return EXIT_UNREACHABLE
    w = res.witness
    print("reachable")
    print("support " + " ".join(net.ordered(w.support)))
    print("x " + " ".join(f"{t}:{fmt_rat(v)}" for t, v in zip(net.transitions, w.x) if v))
    print("fwd " + " ".join(w.fwd_order))
    print("bwd " + " ".join(w.bwd_order))
    return EXIT_OK


def cmd_certify(args) -> int:
    from .certify import ReachableInput, construct_biseparator
    from .reach import reachable

    net, (src, tgt) = _load(args.net, args.source, args.target)
    if reachable(net, src, tgt).reachable:
        print("reachable")
        return EXIT_REACHABLE
    try:
        cert = construct_biseparator(net, net.transitions, src, tgt)
    except ReachableInput as e:  # pragma: no cover - guarded by the decision above
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REACHABLE
    Path(args.output).write_text(certificate_to_json(net, cert), encoding="utf-8")
    print(f"unreachable\nclauses {len(cert.formula)}")
    return EXIT_OK


def cmd_check(args) -> int:
    from .check import Reject, check_certificate

    net, _ = read_net(args.net)
    cert, places, digest = certificate_from_json(Path(args.cert).read_text(encoding="utf-8"))
    if places != net.places:
        verdict = Reject("structure: certificate places do not match the net")
    elif digest is not None and digest != net_hash(net):
        verdict = Reject("structure: certificate was issued for a different net")
    else:
        verdict = check_certificate(net, cert, jobs=args.jobs)
    if verdict.accepted:
        print("accept")
        return EXIT_OK
    print("reject")
    print(verdict.triple())
    return EXIT_REJECT


def cmd_separate(args) -> int:
    from .formula import specialize

    cert, places, _ = certificate_from_json(Path(args.cert).read_text(encoding="utf-8"))
    endpoint = cert.msrc if args.direction == "fwd" else cert.mtgt
    sep = specialize(cert.formula, endpoint, args.direction)
    if not args.raw:
        sep = sep.simplify()
    print(sep.render(places))
    return EXIT_OK


def cmd_compile(args) -> int:
    from .set2set import compile_query

    net, _ = read_net(args.net)
    A = read_polytope(args.a, net.places)
    B = read_polytope(args.b, net.places)
    q = compile_query(net, A, B)
    Path(args.output).write_text(write_net(q.net, {"source": q.msrc, "target": q.mtgt}), encoding="utf-8")
    print(f"places {len(q.net.places)}\ntransitions {len(q.net.transitions)}")
    return EXIT_OK


def cmd_fuzz(args) -> int:
    from .harness import NetGenSpec, crosscheck

    try:
        spec = NetGenSpec.parse(args.spec, seed=args.seed)
    except ValueError as e:
        raise UsageError(f"--spec: {e}") from None
    report = crosscheck(spec, args.count, jobs=args.jobs)
    sys.stdout.write(report.json() if args.json else report.text())
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cpnsep", description="Continuous Petri net reachability certificates.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide reachability between two named markings")
    p.add_argument("net")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("certify", help="write an unreachability certificate")
    p.add_argument("net")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", help="validate a certificate against a net")
    p.add_argument("net")
    p.add_argument("cert")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("separate", help="print the one-sided separator of a certificate")
    p.add_argument("cert")
    p.add_argument("--direction", choices=("fwd", "bwd"), default="fwd")
    p.add_argument("--raw", action="store_true", help="skip constant folding")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("compile-set2set", help="compile a polytope-to-polytope query")
    p.add_argument("net")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("fuzz", help="cross-check the pipeline on random instances")
    p.add_argument("--spec", default="4,4,2,2", help="max places, transitions, arc weight, denominator")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_fuzz)
    return ap


def run_command(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParseError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
