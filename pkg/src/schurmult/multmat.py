"""The relation matrix whose elementary divisors give the Schur multiplier.

Columns are indexed by t[i,j] (i < j, lexicographic) followed by s[1..n];
rows are u[i], then v[i,j] for ordered pairs i != j, then w[i,j,h] for
i < j < h.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .symring import P, DomainError, Polynomial


@dataclass(frozen=True)
class BasisIndex:
    n: int
    labels: tuple
    _pos: dict

    def __len__(self):
        return len(self.labels)

    def t(self, i, j):
        """(column, sign) of t[i,j], or None for t[i,i]."""
        if i == j:
            return None
        if i < j:
            return self._pos[("t", i, j)], 1
        return self._pos[("t", j, i)], -1

    def s(self, i):
        return self._pos[("s", i)]

    def label(self, col):
        kind, *idx = self.labels[col]
        return f"{kind}[{','.join(map(str, idx))}]"


def basis_index(n):
    if n < 1:
        raise DomainError("dimension must be at least 1")
    labels = [("t", i, j) for i, j in combinations(range(1, n + 1), 2)]
    labels += [("s", i) for i in range(1, n + 1)]
    return BasisIndex(n, tuple(labels), {lab: k for k, lab in enumerate(labels)})


@dataclass(frozen=True)
class RelationMatrix:
    basis: BasisIndex
    gens: tuple
    labels: tuple
    rows: tuple  # tuples of Polynomial, one per basis element

    @property
    def ncols(self):
        return len(self.basis)

    def lower(self, prime):
        """Integer matrix obtained by putting p = ``prime`` (other variables must be absent)."""
        env = {P: prime}
        return [[e.evaluate(env) for e in row] for row in self.rows]

    def row(self, label):
        return self.rows[self.labels.index(label)]


def row_count(n):
    return n + n * (n - 1) + n * (n - 1) * (n - 2) // 6


def build_matrix(pres):
    n = pres.n
    basis = basis_index(n)
    gens = pres.gens
    zero = Polynomial.const(gens, 0)
    p = Polynomial.var(gens, P)
    a3 = pres.coefficient
    a2 = pres.pcoefficient

    def new_row():
        return [zero] * len(basis)

    def add_t(row, coeff, i, j):
        hit = basis.t(i, j)
        if hit is not None and coeff:
            col, sign = hit
            row[col] = row[col] + (coeff if sign > 0 else -coeff)

    labels, rows = [], []
    for i in range(1, n + 1):
        row = new_row()
        for k in range(i + 1, n + 1):
            add_t(row, a2(i, k), k, i)
        labels.append(f"u[{i}]")
        rows.append(tuple(row))

    for i, j in sorted(permutations(range(1, n + 1), 2)):
        row = new_row()
        add_t(row, p, i, j)
        for k in range(1, n + 1):
            c = a3(i, j, k)
            if c:
                col = basis.s(k)
                row[col] = row[col] + c
            add_t(row, -a2(i, k), k, j)
        labels.append(f"v[{i},{j}]")
        rows.append(tuple(row))

    for i, j, h in combinations(range(1, n + 1), 3):
        row = new_row()
        for k in range(1, n + 1):
            add_t(row, a3(j, h, k), i, k)
            add_t(row, a3(i, j, k), h, k)
            add_t(row, a3(h, i, k), j, k)
        labels.append(f"w[{i},{j},{h}]")
        rows.append(tuple(row))

    return RelationMatrix(basis, gens, tuple(labels), tuple(rows))


def _term(coeff, label):
    if coeff == 1:
        return label
    if coeff == -1:
        return "-" + label
    text = str(coeff)
    if len(coeff.terms) > 1:
        text = f"({text})"
    return f"{text}*{label}"


def format_row(matrix, k):
    parts = []
    for col, c in enumerate(matrix.rows[k]):
        if not c:
            continue
        t = _term(c, matrix.basis.label(col))
        if parts:
            t = ("- " + t[1:]) if t.startswith("-") else ("+ " + t)
        parts.append(t)
    return f"{matrix.labels[k]} : {' '.join(parts) if parts else '0'}"


def format_matrix(matrix):
    return "\n".join(format_row(matrix, k) for k in range(len(matrix.rows))) + "\n"
