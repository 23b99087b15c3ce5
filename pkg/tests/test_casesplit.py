import pytest

from schurmult.casesplit import branch_candidates, budget_exceeded, split, unresolved_factors
from schurmult.presentation import load_fixture
from schurmult.render import tree_text
from schurmult.smith import Budget
from schurmult.symring import parse_poly

GENS = ("w", "x", "y", "z", "t", "p")


def P(text):
    return parse_poly(text, GENS)


def _fmt(branches):
    return sorted(f"{k}:={v}" for k, v in branches)


def test_branch_with_constraint():
    branches, unresolved = branch_candidates(P("-x^2 - x"), [P("x")])
    assert _fmt(branches) == ["x:=-1"] and unresolved == []


def test_branch_two_factors():
    branches, unresolved = branch_candidates(P("x*y*z + x*y - z^2 - z"), [])
    assert _fmt(branches) == ["z:=-1", "z:=x*y"] and unresolved == []


def test_branch_unresolved():
    branches, unresolved = branch_candidates(P("x*y - z*t"), [])
    # x*y - z*t is irreducible and not linear with unit coefficient in x
    # (its x-coefficient is y), nor in any other variable
    assert branches == []
    assert [str(f) for f in unresolved] == ["x*y-z*t"]


def test_branch_skips_primitive_root_powers():
    branches, unresolved = branch_candidates(P("w^2*x"), [])
    assert _fmt(branches) == ["x:=0"] and unresolved == []


def test_branch_constant_unit():
    assert branch_candidates(P("3"), []) == ([], [])


EXPECTED = {
    "sym1": "generic: norm := [ ], pseudounits := [ x ]\n"
            "  x=0: norm := [ p, p ], pseudounits := [ ]",
    "sym3": "generic: norm := [ p, p ], pseudounits := [ x ]\n"
            "  x=0: N/A",
    "sym6": "generic: norm := [ p ], pseudounits := [ x*y ]\n"
            "  x=0: N/A\n"
            "  y=0: norm := [ p ], pseudounits := [ x^2+x ]\n"
            "    x=0: N/A\n"
            "    x=-1: norm := [ p, p ], pseudounits := [ ]",
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_tree_golden(name):
    assert tree_text(split(load_fixture(name))) == EXPECTED[name]


@pytest.mark.parametrize("name", ["sym1", "sym2", "sym3", "sym4", "sym5", "sym6"])
def test_tree_invariants(name):
    tree = split(load_fixture(name))
    assert not budget_exceeded(tree)
    assert unresolved_factors(tree) == []
    for node in tree.walk():
        if node.infeasible:
            # N/A exactly when a constraint vanishes identically
            assert not node.presentation.feasible and not node.children
        else:
            assert node.presentation.feasible and node.result is not None
        for child in node.children:
            assert child.chain[:-1] == node.chain


def test_tree_deterministic():
    a = tree_text(split(load_fixture("sym5")))
    b = tree_text(split(load_fixture("sym5")))
    assert a == b


def test_depth_limit_leaves_unresolved():
    tree = split(load_fixture("sym2"), max_depth=0)
    assert tree.children == []
    assert [str(f) for f in tree.unresolved] == ["x"]


def test_budget_stops_branching():
    tree = split(load_fixture("sym5"), Budget(steps=1))
    assert budget_exceeded(tree) and tree.children == []
    assert "BUDGET EXCEEDED" in tree_text(tree)
