"""Elementary divisors over Z and over the localisation of Q[p] at p.

The symbolic elimination is fraction free.  Every pivot is written as
p^l * u where u has a nonzero constant p-coefficient (a pseudo-unit).
Other rows are cleared by ``row <- (u/g) * row - (b/g) * pivot_row`` with
``b`` the entry divided by p^l and ``g = gcd(u, b)``, so entries stay in
Z[w, params][p].  The constant coefficient of each u is recorded: the result
holds at every prime and parameter value where none of them vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .presentation import _prime_factors
from .symring import P, Polynomial, poly_gcd


# -- integer Smith normal form ----------------------------------------------------


def snf_integer(matrix, transforms=False):
    """Return (divisors, rank) or (divisors, rank, U, V) with U*M*V diagonal.

    ``divisors`` is the full chain d_1 | d_2 | ... | d_rank of positive ints.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        if V is not None:
            for row in V:
                row[a], row[b] = row[b], row[a]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rs, rd = A[src], A[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
            # a nonzero remainder is smaller than the pivot: bring it in
            small = None
            for i in range(t + 1, m):
                if A[i][t] and (small is None or abs(A[i][t]) < abs(small[0])):
                    small = (A[i][t], i, None)
            for j in range(t + 1, n):
                if A[t][j] and (small is None or abs(A[t][j]) < abs(small[0])):
                    small = (A[t][j], None, j)
            if small is not None:
                done = False
                if small[1] is not None:
                    swap_rows(t, small[1])
                else:
                    swap_cols(t, small[2])
                continue
            # pivot must divide the whole remaining block
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        add_row(t, i, 1)
                        done = False
                        break
                if not done:
                    break
            if done:
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    divisors = [A[i][i] for i in range(t)]
    if transforms:
        return divisors, t, U, V
    return divisors, t


# -- results -------------------------------------------------------------------------


@dataclass
class Budget:
    steps: int = 5000
    degree: int = 12
    digits: int = 30

    @classmethod
    def parse(cls, text):
        """Parse ``steps=K,degree=D,digits=B`` (any subset)."""
        budget = cls()
        if not text:
            return budget
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in ("steps", "degree", "digits"):
                raise ValueError(f"unknown budget cap {key!r}")
            setattr(budget, key, int(value))
        return budget


@dataclass
class SchurResult:
    # exponents of p when ``prime`` is None, integers otherwise
    norm: tuple
    pseudo_units: tuple = ()
    prime: int | None = None
    budget_exceeded: bool = False
    exceeded: str | None = None
    valid: bool = True
    diagnostic: str | None = None
    rank: int = 0
    # primes dividing an integer that was treated as a unit
    bad_primes: tuple = ()
    steps: int = 0

    @property
    def symbolic(self):
        return self.prime is None

    def exponents(self):
        """Norm as p-exponents (concrete results must be valid)."""
        if self.symbolic:
            return tuple(self.norm)
        out = []
        for d in self.norm:
            e = 0
            while d % self.prime == 0:
                d //= self.prime
                e += 1
            out.append(e)
        return tuple(out)


def _p_adic_exponent(d, prime):
    e = 0
    while d % prime == 0:
        d //= prime
        e += 1
    return e if d == 1 else None


def schur_from_divisors(divisors, prime=None):
    """Drop unit divisors; validate p-powers in the concrete case."""
    if prime is None:
        return SchurResult(norm=tuple(sorted(e for e in divisors if e > 0)),
                           rank=len(divisors))
    norm = tuple(sorted(d for d in divisors if d != 1))
    bad = [d for d in norm if _p_adic_exponent(d, prime) is None]
    if bad:
        return SchurResult(norm=norm, prime=prime, valid=False, rank=len(divisors),
                           diagnostic="presentation is not a consistent Lie p-ring "
                                      f"(divisor {bad[0]} is not a power of {prime})")
    return SchurResult(norm=norm, prime=prime, rank=len(divisors))


def schur_concrete(matrix, prime):
    divisors, _ = snf_integer(matrix.lower(prime))
    return schur_from_divisors(divisors, prime)


# -- symbolic Smith normal form ---------------------------------------------------------


class BudgetExceeded(Exception):
    def __init__(self, cap, detail):
        self.cap = cap
        super().__init__(f"{cap} cap exceeded ({detail})")


def normalise_unit(poly):
    """Strip sign and integer content; returns (content, primitive part or None)."""
    c, prim = poly.primitive()
    c = abs(c)
    if prim.is_constant():
        return c, None
    return c, prim


def _split(entry):
    l = entry.valuation(P)
    rest = entry.shift_down(P, l)
    return l, rest, rest.coefficients(P)[0]


def _key_sparse(l, u, s0, r, c):
    return (l, len(s0.terms), s0.total_degree(),
            max(abs(x) for x in s0.terms.values()), len(u.terms), r, c)


def _key_first(l, u, s0, r, c):
    return (l, r, c)


STRATEGIES = {"sparse": _key_sparse, "first": _key_first}


def snf_symbolic(matrix, budget=None, strategy="sparse"):
    """Elementary divisors of a polynomial matrix, localised at p.

    ``matrix`` is a RelationMatrix or a list of rows of Polynomials over a
    context containing ``p``.  Returns a SchurResult whose norm lists the
    nonzero p-exponents, with the pseudo-unit ledger in primitive form.
    """
    budget = budget or Budget()
    key = STRATEGIES[strategy]
    rows_in = matrix.rows if hasattr(matrix, "rows") else matrix
    rows = []
    for row in rows_in:
        d = {c: e for c, e in enumerate(row) if e}
        if d:
            rows.append(d)

    ledger, bad = [], set()
    exponents = []
    steps = 0

    def check(entry):
        if entry.total_degree() > budget.degree:
            raise BudgetExceeded("degree", f"entry of degree {entry.total_degree()}")
        if entry.max_digits() > budget.digits:
            raise BudgetExceeded("digits", f"coefficient with {entry.max_digits()} digits")

    def record(s0):
        c, prim = normalise_unit(s0)
        if c > 1:
            bad.update(_prime_factors(c))
        if prim is not None and prim not in ledger:
            ledger.append(prim)

    def result(exceeded=None):
        return SchurResult(norm=tuple(sorted(e for e in exponents if e > 0)),
                           pseudo_units=tuple(ledger), budget_exceeded=exceeded is not None,
                           exceeded=exceeded, rank=len(exponents), bad_primes=tuple(sorted(bad)),
                           steps=steps)

    try:
        while rows:
            best = None
            for r, row in enumerate(rows):
                for c, entry in row.items():
                    l, u, s0 = _split(entry)
                    k = key(l, u, s0, r, c)
                    if best is None or k < best[0]:
                        best = (k, r, c, l, u, s0)
            _, r, c, l, u, s0 = best
            # only pseudo-units may act as divisors
            assert s0, "pivot has zero constant p-coefficient"
            record(s0)
            pivot_row = rows.pop(r)
            exponents.append(l)
            unit = u.is_constant() and abs(u.constant_value()) == 1
            new_rows = []
            for row in rows:
                entry = row.get(c)
                if entry is None:
                    new_rows.append(row)
                    continue
                steps += 1
                if steps > budget.steps:
                    raise BudgetExceeded("steps", f"more than {budget.steps} row operations")
                b = entry.shift_down(P, l)
                if unit:
                    mult, q = 1, b * u.constant_value()
                else:
                    q = b.divexact(u)
                    mult = 1
                    if q is None:
                        g = poly_gcd(u, b)
                        mult = u.divexact(g)
                        q = b.divexact(g)
                        gc, _ = normalise_unit(mult.coefficients(P)[0])
                        if gc > 1:
                            bad.update(_prime_factors(gc))
                out = {}
                for col in row.keys() | pivot_row.keys():
                    if col == c:
                        continue
                    x = row.get(col)
                    y = pivot_row.get(col)
                    val = (x * mult if x is not None else None)
                    if y is not None:
                        t = q * y
                        val = -t if val is None else val - t
                    if val:
                        check(val)
                        out[col] = val
                if out:
                    new_rows.append(out)
            # the pivot column is now zero outside the pivot row; the pivot
            # row is cleared by column operations that touch nothing else
            rows = new_rows
    except BudgetExceeded as exc:
        res = result(exc.cap)
        res.diagnostic = str(exc)
        return res
    return result()


def poly_matrix(gens, rows):
    """Build a list-of-rows polynomial matrix from nested ints/strings/Polynomials."""
    from .symring import parse_poly

    out = []
    for row in rows:
        conv = []
        for e in row:
            if isinstance(e, Polynomial):
                conv.append(e)
            elif isinstance(e, int):
                conv.append(Polynomial.const(gens, e))
            else:
                conv.append(parse_poly(e, gens))
        out.append(conv)
    return out
