import random
from itertools import product

import pytest

from oracles import det, determinantal_snf, naive_snf
from schurmult.multmat import build_matrix
from schurmult.presentation import evaluate_concrete, load_fixture
from schurmult.smith import (
    Budget,
    poly_matrix,
    schur_concrete,
    schur_from_divisors,
    snf_integer,
    snf_symbolic,
)
from schurmult.symring import P, W

SYMBOLIC = ["sym1", "sym2", "sym3", "sym4", "sym5", "sym6"]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def random_matrix(rng, maxdim=8, bound=20):
    m, n = rng.randint(1, maxdim), rng.randint(1, maxdim)
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


def test_examples():
    assert snf_integer([[2, 0], [0, 3]])[0] == [1, 6]
    assert snf_integer([[0, 0], [0, 0]]) == ([], 0)
    assert snf_integer([[4, 6], [6, 9]])[0] == [1]
    assert snf_integer([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])[0] == [2, 6, 12]


def test_transforms_small():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    divs, rank, U, V = snf_integer(M, transforms=True)
    D = matmul(matmul(U, M), V)
    assert all(D[i][j] == (divs[i] if i == j and i < rank else 0)
               for i in range(3) for j in range(3))
    assert abs(det(U)) == abs(det(V)) == 1


def test_random_against_oracle():
    rng = random.Random(2024)
    for _ in range(300):
        M = random_matrix(rng, maxdim=5, bound=9)
        divs = snf_integer(M)[0]
        assert divs == [d for d in naive_snf(M) if d]
        if len(M) <= 4 and len(M[0]) <= 4:
            assert divs == determinantal_snf(M)


def test_schur_from_divisors():
    assert schur_from_divisors([1, 5, 25], 5).norm == (5, 25)
    assert schur_from_divisors([1, 5, 25], 5).exponents() == (1, 2)
    bad = schur_from_divisors([1, 10], 5)
    assert not bad.valid and "not a consistent" in bad.diagnostic
    assert schur_from_divisors([0, 1, 2]).norm == (1, 2)


def test_symbolic_two_by_two():
    gens = (W, "x", P)
    res = snf_symbolic(poly_matrix(gens, [["p", "x"], [0, "p"]]))
    assert res.norm == (2,)
    assert [str(u) for u in res.pseudo_units] == ["x"]
    # brute force: for x != 0 mod q the divisors are (1, q^2), for x == 0 they are (q, q)
    for q in (5, 7, 11):
        for x in range(q):
            divs = snf_integer([[q, x], [0, q]])[0]
            assert divs == ([1, q * q] if x else [q, q])


def test_symbolic_integer_content_is_bad_prime():
    gens = (W, P)
    res = snf_symbolic(poly_matrix(gens, [["3", "p"], ["p", "0"]]))
    assert 3 in res.bad_primes


def test_budget_parse():
    b = Budget.parse("steps=10,degree=3")
    assert (b.steps, b.degree, b.digits) == (10, 3, 30)
    with pytest.raises(ValueError):
        Budget.parse("bogus=1")


def test_budget_exceeded_is_reported():
    res = snf_symbolic(build_matrix(load_fixture("sym5")), Budget(steps=1))
    assert res.budget_exceeded and res.exceeded == "steps"
    assert "steps" in res.diagnostic


@pytest.mark.parametrize("name", SYMBOLIC)
def test_strategies_agree_generically(name):
    m = build_matrix(load_fixture(name))
    a = snf_symbolic(m, strategy="sparse")
    b = snf_symbolic(m, strategy="first")
    assert a.norm == b.norm


@pytest.mark.parametrize("name", SYMBOLIC)
def test_symbolic_sound_where_units_nonzero(name):
    """At every point where the ledger is nonzero, the concrete SNF agrees."""
    pres = load_fixture(name)
    res = snf_symbolic(build_matrix(pres))
    checked = 0
    for prime in (5, 7, 11):
        if prime in res.bad_primes:
            continue
        for values in product(range(prime), repeat=len(pres.params)):
            assign = dict(zip(pres.params, values))
            conc = evaluate_concrete(pres, prime, assign)
            if not conc.feasible:
                continue
            env = dict(assign, w=conc.root)
            if any(u.evaluate_mod(prime, env) == 0 for u in res.pseudo_units):
                continue
            assert schur_concrete(build_matrix(conc), prime).exponents() == res.norm
            checked += 1
    assert checked > 0


def test_pivot_guard_holds_on_fixtures():
    # the elimination asserts every pivot has a nonzero constant p-coefficient
    for name in SYMBOLIC + ["heis3", "ext3", "cyc3"]:
        snf_symbolic(build_matrix(load_fixture(name)))
