"""Differential verification of symbolic results against concrete ones."""

from __future__ import annotations

import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .casesplit import split
from .multmat import build_matrix
from .presentation import (
    admissible_assignments,
    check_consistency,
    evaluate_concrete,
    least_primitive_root,
)
from .smith import schur_concrete
from .symring import P, W, DomainError

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 10 ** 5
DEFAULT_SAMPLES = 1000
DEFAULT_PRIMES = (5, 7, 11)


class EnumerationTooLarge(DomainError):
    def __init__(self, required, limit):
        self.required = required
        super().__init__(f"enumeration needs {required} assignments, limit is {limit}")


def zero_set(unit, prime, params, constraints=(), limit=EXHAUSTIVE_LIMIT):
    """All constraint-satisfying assignments in Z_p^m where ``unit`` vanishes.

    ``unit`` is a p-free Polynomial or a PseudoUnit; w is bound to the least
    primitive root.
    """
    poly = unit if hasattr(unit, "terms") else unit.constant.num
    if not poly.free_of(P):
        poly = poly.coefficients(P)[0]
    params = tuple(params)
    required = prime ** len(params)
    if required > limit:
        raise EnumerationTooLarge(required, limit)
    root = least_primitive_root(prime)
    out = []
    for values in product(range(prime), repeat=len(params)):
        env = dict(zip(params, values))
        env[W] = root
        if any(c.evaluate_mod(prime, env) == 0 for c in constraints):
            continue
        if poly.evaluate_mod(prime, env) == 0:
            out.append(dict(zip(params, values)))
    return out


def _holds(chain, prime, env):
    for name, value in chain:
        if env[name] % prime != value.evaluate_mod(prime, env):
            return False
    return True


def locate(tree, prime, assignment):
    """Nodes whose generic answer applies to this prime and assignment."""
    env = {k: v % prime for k, v in assignment.items()}
    env[W] = least_primitive_root(prime)
    found = []

    def visit(node):
        if node.infeasible or node.result is None or node.result.budget_exceeded:
            return
        units_ok = all(u.evaluate_mod(prime, env) for u in node.result.pseudo_units)
        if units_ok and prime not in node.result.bad_primes:
            found.append(node)
            return
        for child in node.children:
            if _holds(child.chain[-1:], prime, env):
                visit(child)

    if _holds(tree.chain, prime, env):
        visit(tree)
    return found


@dataclass
class Record:
    prime: int
    assignment: dict
    status: str  # match | mismatch | uncovered | inconsistent
    concrete: tuple | None = None
    symbolic: tuple | None = None
    node: str | None = None


@dataclass
class VerifyReport:
    name: str
    records: list = field(default_factory=list)
    exhaustive: dict = field(default_factory=dict)

    @property
    def summary(self):
        counts = Counter(r.status for r in self.records)
        return {k: counts.get(k, 0) for k in ("match", "mismatch", "uncovered", "inconsistent")}

    @property
    def ok(self):
        s = self.summary
        return s["mismatch"] == 0 and s["uncovered"] == 0 and s["inconsistent"] == 0


def node_path(node):
    return ", ".join(f"{k}={v}" for k, v in node.chain) or "generic"


def check_tuple(pres, tree, prime, assignment):
    conc = evaluate_concrete(pres, prime, assignment)
    if not check_consistency(conc).ok:
        return Record(prime, assignment, "inconsistent")
    res = schur_concrete(build_matrix(conc), prime)
    if not res.valid:
        return Record(prime, assignment, "inconsistent", concrete=res.norm)
    concrete = res.exponents()
    nodes = locate(tree, prime, assignment)
    if not nodes:
        return Record(prime, assignment, "uncovered", concrete=concrete)
    for node in nodes:
        if tuple(node.result.norm) != concrete:
            return Record(prime, assignment, "mismatch", concrete=concrete,
                          symbolic=tuple(node.result.norm), node=node_path(node))
    return Record(prime, assignment, "match", concrete=concrete,
                  symbolic=tuple(nodes[0].result.norm), node=node_path(nodes[0]))


def _run_prime(pres, tree, prime, samples, seed):
    m = len(pres.params)
    exhaustive = samples is None and prime ** m <= EXHAUSTIVE_LIMIT
    limit = None if exhaustive else (samples or DEFAULT_SAMPLES)
    rng = random.Random(f"{seed}:{prime}")
    records = [check_tuple(pres, tree, prime, a)
               for a in admissible_assignments(pres, prime, limit=limit, rng=rng)]
    return prime, exhaustive, records


def differential_check(pres, primes=DEFAULT_PRIMES, samples=None, seed=0, tree=None,
                       budget=None, jobs=1):
    """Compare the case tree of ``pres`` with concrete computations.

    ``samples=None`` enumerates Z_p^m exhaustively when p^m <= 10^5 and
    falls back to 1000 seeded samples otherwise.
    """
    for prime in primes:
        if prime in (2, 3):
            log.warning("p=%d is below the range the method is designed for", prime)
    if tree is None:
        tree = split(pres, budget)
    report = VerifyReport(pres.name)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            futures = [pool.submit(_run_prime, pres, tree, q, samples, seed) for q in primes]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_run_prime(pres, tree, q, samples, seed) for q in primes]
    for prime, exhaustive, records in outcomes:
        report.exhaustive[prime] = exhaustive
        report.records.extend(records)
    return report
