"""Case distinctions over the zero sets of recorded pseudo-units.

Starting from a symbolic presentation, compute its generic multiplier,
factor every pseudo-unit, and branch on each factor that can be solved for
a parameter (degree one with coefficient +-1).  Factors forced nonzero by a
``require`` constraint become N/A leaves; anything else stays on the node
as unresolved for a human to specialise by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multmat import build_matrix
from .presentation import format_presentation, specialise
from .smith import Budget, snf_symbolic
from .symring import P, W, Polynomial, factor_best_effort

DEFAULT_DEPTH = 5


@dataclass
class CaseTree:
    # substitutions from the root, as (param, Polynomial) pairs in order
    chain: tuple
    presentation: object
    result: object = None
    infeasible: bool = False
    unresolved: tuple = ()
    children: list = field(default_factory=list)

    @property
    def label(self):
        if not self.chain:
            return "generic"
        name, value = self.chain[-1]
        return f"{name}={value}"

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def _constraint_factors(constraints):
    out = set()
    for c in constraints:
        if c.is_constant():
            continue
        _, _, factors, _ = factor_best_effort(c)
        out.update(f for f, _ in factors)
    return out


def _solve_linear(factor, params):
    """(param, value) with factor == 0 <=> param == value, or None."""
    for name in params:
        if factor.degree(name) != 1:
            continue
        coeffs = factor.coefficients(name)
        lead = coeffs[1]
        if lead.is_constant() and abs(lead.constant_value()) == 1:
            # factor = lead*name + rest  =>  name = -rest/lead
            return name, coeffs[0] * (-lead.constant_value())
    return None


def branch_candidates(unit, constraints, params=None):
    """Split the zero set of a pseudo-unit into substitutions.

    ``unit`` is a PseudoUnit or a p-free Polynomial (its constant p-coefficient
    numerator).  Returns (branches, unresolved).
    """
    branches, unresolved, _ = _classify(unit, constraints, params)
    return branches, unresolved


def _classify(unit, constraints, params):
    # third list: solvable factors ruled out by a constraint
    if isinstance(unit, Polynomial):
        poly = unit
    else:
        poly = unit.constant.num
    if not poly.free_of(P):
        poly = poly.coefficients(P)[0]
    if params is None:
        params = tuple(g for g in poly.gens if g not in (P, W))
    if poly.is_constant():
        return [], [], []
    covered = _constraint_factors(constraints)
    _, _, factors, _ = factor_best_effort(poly)
    branches, unresolved, excluded = [], [], []
    for f, _ in factors:
        if f in covered:
            sol = _solve_linear(f, params)
            if sol is not None and sol not in excluded:
                excluded.append(sol)
            continue
        if f.variables() == (W,) and len(f.terms) == 1:
            # powers of the primitive root never vanish
            continue
        sol = _solve_linear(f, params)
        if sol is None:
            unresolved.append(f)
        elif sol not in branches:
            branches.append(sol)
    return branches, unresolved, excluded


def split(pres, budget=None, max_depth=DEFAULT_DEPTH, strategy="sparse", _chain=()):
    """Build the tree of specialisations covering every pseudo-unit zero set."""
    budget = budget or Budget()
    node = CaseTree(chain=_chain, presentation=pres)
    if not pres.feasible:
        node.infeasible = True
        return node
    node.result = snf_symbolic(build_matrix(pres), budget, strategy)
    if node.result.budget_exceeded:
        return node
    branches, unresolved, excluded = [], [], []
    for u in node.result.pseudo_units:
        b, un, ex = _classify(u, pres.constraints, pres.params)
        branches += [x for x in b if x not in branches]
        unresolved += [x for x in un if x not in unresolved]
        excluded += [x for x in ex if x not in excluded]
    if len(_chain) >= max_depth:
        node.unresolved = tuple(unresolved) + tuple(
            Polynomial.var(pres.gens, name) - value for name, value in branches)
        return node
    node.unresolved = tuple(unresolved)
    # factors excluded by a constraint show up as N/A leaves
    for name, value in excluded:
        child_pres = specialise(pres, {name: value})
        node.children.append(CaseTree(chain=_chain + ((name, value),), presentation=child_pres,
                                      infeasible=True))
    seen = []
    for name, value in branches:
        child_pres = specialise(pres, {name: value})
        key = format_presentation(child_pres) + repr(child_pres.violated)
        if key in seen:
            continue
        seen.append(key)
        node.children.append(split(child_pres, budget, max_depth, strategy,
                                   _chain + ((name, value),)))
    return node


def budget_exceeded(tree):
    return any(n.result is not None and n.result.budget_exceeded for n in tree.walk())


def unresolved_factors(tree):
    return [(n, f) for n in tree.walk() for f in n.unresolved]
