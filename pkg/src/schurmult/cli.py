"""``schur`` command line interface.

Exit codes: 0 ok, 1 infeasible or invalid input, 2 budget exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from . import presentation as pr
from .casesplit import DEFAULT_DEPTH, budget_exceeded, split
from .multmat import build_matrix, format_matrix
from .render import render
from .smith import STRATEGIES, Budget, schur_concrete, snf_symbolic
from .symring import P, Polynomial
from .verify import DEFAULT_PRIMES, differential_check

OK, INVALID, BUDGET, FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path):
    if not os.path.exists(path):
        stem = os.path.basename(path)
        stem = stem[:-3] if stem.endswith(".lp") else stem
        if stem in pr.FIXTURES:
            return pr.load_fixture(stem)
        raise UsageError(f"no such file: {path}")
    return pr.load(path)


def _pairs(text, option):
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        key, eq, value = part.partition("=")
        if not eq or not key.strip() or not value.strip():
            raise UsageError(f"{option}: expected name=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def _at(pres, text):
    """Parse ``p=5,x=2`` into (prime, assignment)."""
    pairs = _pairs(text, "--at")
    if P not in pairs:
        raise UsageError("--at needs the prime, e.g. --at p=5")
    try:
        prime = int(pairs.pop(P))
        assignment = {k: int(v) for k, v in pairs.items()}
    except ValueError:
        raise UsageError("--at values must be integers") from None
    unknown = sorted(set(assignment) - set(pres.params))
    if unknown:
        raise UsageError(f"unknown parameter(s) {', '.join(unknown)}")
    missing = [x for x in pres.params if x not in assignment]
    if missing:
        raise UsageError(f"--at misses parameter(s) {', '.join(missing)}")
    if not pr.is_prime(prime):
        raise UsageError(f"p={prime} is not prime")
    return prime, assignment


def _concrete(pres, text):
    prime, assignment = _at(pres, text)
    conc = pr.evaluate_concrete(pres, prime, assignment)
    if not conc.feasible:
        raise UsageError("assignment lies outside the family: "
                         + ", ".join(f"{c} = 0" for c in conc.violated))
    return conc


def cmd_mult(args, pres):
    if args.at:
        conc = _concrete(pres, args.at)
        res = schur_concrete(build_matrix(conc), conc.prime)
        return render(res, args.format), OK if res.valid else INVALID
    res = snf_symbolic(build_matrix(pres), args.budget, args.strategy)
    return render(res, args.format), BUDGET if res.budget_exceeded else OK


def cmd_matrix(args, pres):
    if not args.at:
        return format_matrix(build_matrix(pres)).rstrip("\n"), OK
    conc = _concrete(pres, args.at)
    matrix = build_matrix(conc)
    # show the integer matrix that is actually reduced
    rows = tuple(tuple(Polynomial.const(matrix.gens, v) for v in row)
                 for row in matrix.lower(conc.prime))
    return format_matrix(replace(matrix, rows=rows)).rstrip("\n"), OK


def cmd_specialise(args, pres):
    subs = _pairs(args.set, "--set")
    unknown = sorted(set(subs) - set(pres.params))
    if unknown:
        raise UsageError(f"unknown parameter(s) {', '.join(unknown)}")
    subs = {k: int(v) if v.lstrip("-").isdigit() else v for k, v in subs.items()}
    out = pr.specialise(pres, subs)
    text = pr.format_presentation(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        text = f"wrote {args.output}"
    if not out.feasible:
        return text.rstrip("\n") + "\ninfeasible: " + ", ".join(
            f"constraint {c} vanishes" for c in out.violated), INVALID
    return text.rstrip("\n"), OK


def cmd_split(args, pres):
    tree = split(pres, args.budget, args.depth, args.strategy)
    return render(tree, args.format), BUDGET if budget_exceeded(tree) else OK


def cmd_verify(args, pres):
    primes = tuple(int(x) for x in args.primes.split(",") if x.strip())
    samples = args.samples
    if args.exhaustive:
        samples = None
    tree = split(pres, args.budget, args.depth, args.strategy)
    if budget_exceeded(tree):
        return render(tree, args.format), BUDGET
    report = differential_check(pres, primes, samples=samples, seed=args.seed, tree=tree,
                                jobs=args.jobs)
    return render(report, args.format), OK if report.ok else FAILED


def cmd_check(args, pres):
    if args.at:
        rep = pr.check_consistency(_concrete(pres, args.at))
    elif pres.params:
        rep = pr.check_symbolic(pres, seed=args.seed)
    else:
        rep = pr.ConsistencyReport(ok=True, violations=[], probabilistic=False)
        for prime in DEFAULT_PRIMES:
            sub = pr.check_consistency(pr.evaluate_concrete(pres, prime))
            rep.violations += [v + (prime, {}) for v in sub.violations]
        rep.ok = not rep.violations
    return render(rep, args.format), OK if rep.ok else INVALID


COMMANDS = {
    "mult": cmd_mult,
    "matrix": cmd_matrix,
    "specialise": cmd_specialise,
    "split": cmd_split,
    "verify": cmd_verify,
    "check": cmd_check,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="schur",
                                     description="Schur multipliers of nilpotent Lie p-rings")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget=True):
        p.add_argument("file", help="presentation file (or a bundled fixture name)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if budget:
            p.add_argument("--budget", type=Budget.parse, default=Budget(),
                           help="caps, e.g. steps=5000,degree=12,digits=30")
            p.add_argument("--strategy", choices=sorted(STRATEGIES), default="sparse")

    p = sub.add_parser("mult", help="Schur multiplier (symbolic unless --at is given)")
    common(p)
    p.add_argument("--at", help="concrete evaluation, e.g. p=5,x=2")

    p = sub.add_parser("matrix", help="dump the relation matrix")
    common(p, budget=False)
    p.add_argument("--at")

    p = sub.add_parser("specialise", aliases=["specialize"], help="substitute parameters")
    common(p, budget=False)
    p.add_argument("--set", required=True, help="substitutions, e.g. t=1,z=x*y")
    p.add_argument("-o", "--output")

    p = sub.add_parser("split", help="case-distinction tree")
    common(p)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    p = sub.add_parser("verify", help="compare symbolic and concrete results")
    common(p)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--primes", default=",".join(map(str, DEFAULT_PRIMES)))
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("check", help="consistency check")
    common(p, budget=False)
    p.add_argument("--at")
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv=None):
    """Execute a command; returns (output text, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return "", INVALID if exc.code else OK
    command = "specialise" if args.command == "specialize" else args.command
    try:
        pres = _load(args.file)
        return COMMANDS[command](args, pres)
    except (UsageError, pr.FormatError, ValueError) as exc:
        return f"error: {exc}", INVALID


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    text, code = run(argv)
    if text:
        stream = sys.stderr if text.startswith("error:") else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
