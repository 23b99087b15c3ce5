"""Exact multivariate integer polynomials, rational functions and Q[p].

Every polynomial lives in a *context*: an ordered tuple of indeterminate
names.  Terms are stored as a dict mapping exponent vectors (aligned with
the context) to nonzero Python ints.  The distinguished indeterminate ``p``
is the prime; ``w`` stands for a primitive root modulo ``p``.

Printing uses graded lexicographic order with the context order deciding
ties, so ``x*y*z+x*y*t-z^2*t-z*t^2`` round-trips byte for byte when the
context is ``(w, x, y, z, t, p)``.
"""

from __future__ import annotations

import re
from functools import reduce
from math import gcd

P = "p"
W = "w"
RESERVED = (P, W)

# RationalFunction falls back to full multivariate gcd reduction once any
# integer coefficient grows beyond this many decimal digits.
GCD_REDUCTION_DIGITS = 64


class ContextError(ValueError):
    """Operands live over different indeterminate sets, or a variable is unknown."""


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens, terms=None):
        self.gens = tuple(gens)
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, gens, c):
        gens = tuple(gens)
        return cls(gens, {(0,) * len(gens): c} if c else None)

    @classmethod
    def var(cls, gens, name, exp=1):
        gens = tuple(gens)
        try:
            idx = gens.index(name)
        except ValueError:
            raise ContextError(f"{name!r} is not an indeterminate of {gens}") from None
        e = [0] * len(gens)
        e[idx] = exp
        return cls(gens, {tuple(e): 1})

    @classmethod
    def _raw(cls, gens, terms):
        # terms already free of zero coefficients
        obj = cls.__new__(cls)
        obj.gens = gens
        obj.terms = terms
        obj._hash = None
        return obj

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.gens != self.gens:
                raise ContextError(f"context mismatch: {self.gens} vs {other.gens}")
            return other
        if isinstance(other, int):
            return Polynomial.const(self.gens, other)
        return NotImplemented

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        """The integer value of a constant polynomial."""
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.gens), 0)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(self.gens[i] for i in sorted(used))

    def free_of(self, name):
        if name not in self.gens:
            return True
        idx = self.gens.index(name)
        return all(e[idx] == 0 for e in self.terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial._raw(self.gens, {})
            return Polynomial._raw(self.gens, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        get = terms.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = get(e, 0) + c1 * c2
        return Polynomial._raw(self.gens, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers")
        result = Polynomial.const(self.gens, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(self.gens, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # -- structure ---------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name):
        if name not in self.gens:
            return 0 if self.terms else -1
        idx = self.gens.index(name)
        return max((e[idx] for e in self.terms), default=-1)

    def valuation(self, name):
        """Smallest exponent of ``name`` occurring in any term."""
        if not self.terms:
            raise DomainError("zero polynomial has no valuation")
        idx = self.gens.index(name)
        return min(e[idx] for e in self.terms)

    def coefficients(self, name):
        """Coefficients of ``name``^0, ``name``^1, ... as polynomials free of ``name``."""
        idx = self.gens.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            out.setdefault(k, {})[e[:idx] + (0,) + e[idx + 1:]] = c
        top = max(out, default=-1)
        return [Polynomial._raw(self.gens, out.get(k, {})) for k in range(top + 1)]

    def shift_down(self, name, k):
        """Divide by ``name``^k; every term must be divisible."""
        if k == 0:
            return self
        idx = self.gens.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[idx] < k:
                raise DomainError(f"{self} is not divisible by {name}^{k}")
            terms[e[:idx] + (e[idx] - k,) + e[idx + 1:]] = c
        return Polynomial._raw(self.gens, terms)

    def content(self):
        """Nonnegative gcd of the integer coefficients."""
        return reduce(gcd, self.terms.values(), 0)

    def primitive(self):
        """(sign * content, primitive part with positive leading coefficient)."""
        if not self.terms:
            return 0, self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return c, Polynomial._raw(self.gens, {e: v // c for e, v in self.terms.items()})

    def max_digits(self):
        return max((len(str(abs(c))) for c in self.terms.values()), default=0)

    def divexact(self, other):
        """``self / other`` if the division is exact, else None."""
        other = self._coerce(other)
        if not other.terms:
            raise DomainError("division by zero polynomial")
        if not self.terms:
            return self
        if other.is_constant():
            c = other.constant_value()
            if any(v % c for v in self.terms.values()):
                return None
            return Polynomial._raw(self.gens, {e: v // c for e, v in self.terms.items()})
        le, lc = other.leading_term()
        rem = self
        quot = {}
        while rem.terms:
            re_, rc = rem.leading_term()
            if rc % lc or any(a < b for a, b in zip(re_, le)):
                return None
            qe = tuple(a - b for a, b in zip(re_, le))
            qc = rc // lc
            quot[qe] = qc
            rem = rem - Polynomial._raw(self.gens, {qe: qc}) * other
        return Polynomial._raw(self.gens, quot)

    # -- context handling --------------------------------------------------

    def reembed(self, gens):
        """Move into another context; every used variable must exist there."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        used = self.variables()
        missing = [v for v in used if v not in gens]
        if missing:
            raise ContextError(f"cannot drop variables still in use: {missing}")
        pos = [gens.index(g) if g in gens else None for g in self.gens]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(gens)
            for i, x in enumerate(e):
                if x:
                    ne[pos[i]] = x
            terms[tuple(ne)] = c
        return Polynomial._raw(gens, terms)

    def substitute(self, name, value):
        """Replace the indeterminate ``name`` by an integer or polynomial."""
        if name == P:
            raise DomainError("the prime p is never specialised symbolically")
        if name not in self.gens:
            raise ContextError(f"{name!r} is not an indeterminate of {self.gens}")
        if isinstance(value, int):
            value = Polynomial.const(self.gens, value)
        value = self._coerce(value)
        idx = self.gens.index(name)
        if self.free_of(name):
            return self
        powers = [Polynomial.const(self.gens, 1)]
        result = Polynomial._raw(self.gens, {})
        for e, c in self.terms.items():
            k = e[idx]
            while len(powers) <= k:
                powers.append(powers[-1] * value)
            rest = Polynomial._raw(self.gens, {e[:idx] + (0,) + e[idx + 1:]: c})
            result = result + rest * powers[k]
        return result

    def evaluate_mod(self, prime, assignment):
        """Residue modulo ``prime``; ``p`` itself evaluates to 0."""
        vals = []
        for g in self.gens:
            if g == P:
                vals.append(0)
            elif g in assignment:
                vals.append(assignment[g] % prime)
            else:
                vals.append(None)
        total = 0
        for e, c in self.terms.items():
            t = c % prime
            for i, x in enumerate(e):
                if x:
                    v = vals[i]
                    if v is None:
                        raise ContextError(f"indeterminate {self.gens[i]!r} unassigned")
                    t = t * pow(v, x, prime) % prime
            total += t
        return total % prime

    def evaluate(self, assignment):
        """Exact integer value; all occurring variables must be assigned."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for g, x in zip(self.gens, e):
                if x:
                    if g not in assignment:
                        raise ContextError(f"indeterminate {g!r} unassigned")
                    t *= assignment[g] ** x
            total += t
        return total

    # -- printing ----------------------------------------------------------

    def _monomial_str(self, e):
        parts = []
        for g, x in zip(self.gens, e):
            if x == 1:
                parts.append(g)
            elif x:
                parts.append(f"{g}^{x}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = self._monomial_str(e)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if c < 0:
                out.append("-" + body)
            else:
                out.append(("+" if out else "") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, gens={self.gens})"


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text):
    tokens = []
    for num, ident, op in _TOKEN.findall(text):
        if num:
            tokens.append(("int", int(num)))
        elif ident:
            tokens.append(("id", ident))
        elif op.strip():
            if op not in "+-*^()":
                raise ValueError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
    return tokens


def parse_poly(text, gens):
    """Parse ``text`` (integers, identifiers, ``+ - * ^``, parentheses) over ``gens``.

    ``*`` is mandatory between factors.  Unknown identifiers raise ContextError.
    """
    gens = tuple(gens)
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"malformed polynomial {text!r}")
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            base = base ** take("int")[1]
        return base

    def atom():
        kind, val = peek()
        if kind == "int":
            take()
            return Polynomial.const(gens, val)
        if kind == "id":
            take()
            return Polynomial.var(gens, val)
        if (kind, val) == ("op", "("):
            take()
            inner = expr()
            take("op", ")")
            return inner
        if (kind, val) == ("op", "-"):
            take()
            return -atom()
        raise ValueError(f"malformed polynomial {text!r}")

    if not tokens:
        raise ValueError("empty polynomial")
    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return result


def poly_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def substitute(a, var, value):
    return a.substitute(var, value)


def evaluate_mod(a, prime, assignment):
    return a.evaluate_mod(prime, assignment)


# -- sympy bridge (gcd and factorisation) -----------------------------------

_RINGS = {}


def _sympy_ring(gens):
    ring = _RINGS.get(gens)
    if ring is None:
        from sympy import ZZ
        from sympy.polys.rings import ring as make_ring

        ring = make_ring(",".join(gens), ZZ)[0]
        _RINGS[gens] = ring
    return ring


def _to_sympy(a):
    ring = _sympy_ring(a.gens)
    return ring.from_dict(dict(a.terms))


def _from_sympy(gens, f):
    return Polynomial(gens, {tuple(e): int(c) for e, c in f.items()})


def poly_gcd(a, b):
    """Greatest common divisor, primitive with positive leading coefficient."""
    b = a._coerce(b)
    if not a.terms:
        return b.primitive()[1] if b.terms else b
    if not b.terms:
        return a.primitive()[1]
    if a.is_constant() or b.is_constant():
        return Polynomial.const(a.gens, 1)
    g = _from_sympy(a.gens, _to_sympy(a).gcd(_to_sympy(b)))
    return g.primitive()[1]


def factor_best_effort(a):
    """Split ``a`` into (unit, content, [(factor, multiplicity)], complete).

    Each factor is primitive, non-constant and has a positive leading
    coefficient.  The product of the outputs equals ``a`` exactly.
    """
    if not a.terms:
        raise DomainError("cannot factor the zero polynomial")
    if not a.free_of(P):
        raise DomainError("factorisation is for p-free polynomials")
    complete = True
    try:
        coeff, pairs = _to_sympy(a).factor_list()
        coeff = int(coeff)
        factors = []
        for f, mult in pairs:
            f = _from_sympy(a.gens, f)
            c, prim = f.primitive()
            coeff *= c ** mult
            factors.append((prim, mult))
    except Exception:  # pragma: no cover - sympy failure is not expected
        coeff, prim = a.primitive()
        factors = [] if prim.is_constant() else [(prim, 1)]
        complete = False
    factors.sort(key=lambda fm: (str(fm[0]), fm[1]))
    unit = 1 if coeff > 0 else -1
    content = abs(coeff)
    check = Polynomial.const(a.gens, unit * content)
    for f, m in factors:
        check = check * f ** m
    assert check == a, "factorisation does not multiply back"
    return unit, content, factors, complete


# -- rational functions ------------------------------------------------------


class RationalFunction:
    """Quotient num/den of p-free polynomials in a common context."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Polynomial.const(num.gens, 1)
        if isinstance(num, int):
            num = Polynomial.const(den.gens, num)
        if isinstance(den, int):
            den = Polynomial.const(num.gens, den)
        if den.gens != num.gens:
            raise ContextError("numerator and denominator contexts differ")
        if not den.terms:
            raise DomainError("zero denominator")
        if not (num.free_of(P) and den.free_of(P)):
            raise DomainError("rational function coefficients must be free of p")
        if not num.terms:
            den = Polynomial.const(num.gens, 1)
        else:
            g = gcd(num.content(), den.content())
            if g > 1:
                num = num.divexact(g)
                den = den.divexact(g)
            if max(num.max_digits(), den.max_digits()) > GCD_REDUCTION_DIGITS:
                h = poly_gcd(num, den)
                if not h.is_constant():
                    num = num.divexact(h)
                    den = den.divexact(h)
        if den.leading_term()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @property
    def gens(self):
        return self.num.gens

    def is_zero(self):
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Polynomial)):
            return RationalFunction(other if isinstance(other, Polynomial)
                                    else Polynomial.const(self.gens, other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DomainError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # equal fractions need not share a representation; hash coarsely
        return hash((self.gens, self.is_zero()))

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num = str(self.num) if len(self.num.terms) == 1 else f"({self.num})"
        return f"{num}/({self.den})" if len(self.den.terms) > 1 else f"{num}/{self.den}"

    __repr__ = __str__


class PElement:
    """An element s_0 + s_1 p + ... + s_n p^n of Q[p]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_polynomial(cls, poly, den=None):
        """Split a polynomial containing ``p`` into its p-coefficients."""
        if P not in poly.gens:
            return cls([RationalFunction(poly, den)] if poly.terms else [])
        return cls([RationalFunction(c, den) for c in poly.coefficients(P)])

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PElement([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self):
        return PElement([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return PElement([])
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                t = x * y
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return PElement(out)

    def __eq__(self, other):
        if not isinstance(other, PElement):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            x == y for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def p_power(self, k):
        """Multiply by p^k."""
        if not self.coeffs:
            return self
        zero = RationalFunction(Polynomial.const(self.coeffs[0].gens, 0))
        return PElement([zero] * k + list(self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("p" if k == 1 else f"p^{k}")
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__


class PseudoUnit:
    """A Q[p] element with nonzero constant coefficient."""

    __slots__ = ("value",)

    def __init__(self, value):
        if not value.coeffs or value.coeffs[0].is_zero():
            raise DomainError(f"{value} has zero constant coefficient")
        self.value = value

    @property
    def constant(self):
        return self.value.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, PseudoUnit) and self.value == other.value

    __hash__ = None

    def __repr__(self):
        return f"PseudoUnit({self.value})"


def decompose_pseudo_unit(f):
    """Write a nonzero ``f`` as p^l * u with u a pseudo-unit; returns (l, u)."""
    if f.is_zero():
        raise DomainError("zero has no pseudo-unit decomposition")
    l = 0
    while f.coeffs[l].is_zero():
        l += 1
    return l, PseudoUnit(PElement(f.coeffs[l:]))


def recompose(l, u):
    return u.value.p_power(l)
