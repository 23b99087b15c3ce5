"""Nilpotent Lie p-ring presentations: parsing, specialisation, evaluation.

A presentation on generators b_1..b_n stores

* bracket coefficients ``a[i,j,k]`` for i < j < k, meaning
  [b_i, b_j] = sum_k a[i,j,k] b_k, and
* p-power coefficients ``a[i,k]`` for i < k, meaning p b_i = sum_k a[i,k] b_k.

Coefficients are polynomials over the context ``(w, *params, p)``.  A
*concrete* presentation has no params, a fixed prime, and residue
coefficients.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from itertools import combinations, product

from .symring import P, RESERVED, W, ContextError, DomainError, Polynomial, parse_poly


class FormatError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


def context_for(params):
    return (W, *params, P)


@dataclass(frozen=True)
class Presentation:
    name: str
    n: int
    params: tuple = ()
    brackets: dict = field(default_factory=dict)
    pmults: dict = field(default_factory=dict)
    constraints: tuple = ()
    prime: int | None = None
    root: int | None = None
    assignment: tuple = ()
    # constraints that vanished under specialisation or evaluation
    violated: tuple = ()

    @property
    def gens(self):
        return context_for(self.params)

    @property
    def concrete(self):
        return self.prime is not None

    @property
    def feasible(self):
        return not self.violated

    def zero(self):
        return Polynomial.const(self.gens, 0)

    def coefficient(self, i, j, k):
        """a_{ijk} extended by a_{iik} = 0 and a_{jik} = -a_{ijk}."""
        if i == j:
            return self.zero()
        if i < j:
            return self.brackets.get((i, j, k), self.zero())
        return -self.brackets.get((j, i, k), self.zero())

    def pcoefficient(self, i, k):
        return self.pmults.get((i, k), self.zero())

    def residue(self, poly):
        """Integer value of a coefficient of a concrete presentation."""
        return poly.constant_value()


def _check_ident(name, lineno):
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise FormatError(f"bad parameter name {name!r}", lineno)
    if name in RESERVED:
        raise FormatError(f"{name!r} is reserved and cannot be a parameter", lineno)
    if re.fullmatch(r"[bl]\d+", name):
        raise FormatError(f"{name!r} clashes with generator names", lineno)


_PMULT = re.compile(r"^p\s*\*?\s*[bl](\d+)$")
_BRACKET = re.compile(r"^\[\s*[bl](\d+)\s*,\s*[bl](\d+)\s*\]$")


def parse(text):
    """Parse the line-oriented presentation format."""
    name = "unnamed"
    n = None
    params = ()
    raw_constraints = []
    relations = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if "=" not in line and word == "name":
            name = rest or name
        elif "=" not in line and word == "dim":
            if n is not None:
                raise FormatError("duplicate dim line", lineno)
            try:
                n = int(rest)
            except ValueError:
                raise FormatError(f"bad dimension {rest!r}", lineno) from None
            if n < 1:
                raise FormatError("dimension must be positive", lineno)
        elif "=" not in line and word == "params":
            if relations or raw_constraints:
                raise FormatError("params must precede relations", lineno)
            params = tuple(rest.split())
            for pname in params:
                _check_ident(pname, lineno)
            if len(set(params)) != len(params):
                raise FormatError("duplicate parameter", lineno)
        elif "=" not in line and word == "require":
            raw_constraints.append((lineno, rest))
        elif "=" in line:
            lhs, rhs = (s.strip() for s in line.split("=", 1))
            relations.append((lineno, lhs, rhs))
        else:
            raise FormatError(f"unrecognised line {line!r}", lineno)
    if n is None:
        raise FormatError("missing dim line")

    gens = context_for(params)
    gen_names = [f"{c}{k}" for c in "bl" for k in range(1, n + 1)]
    full = gens + tuple(gen_names)

    def coeff_poly(src, lineno):
        try:
            poly = parse_poly(src, gens)
        except ContextError as exc:
            raise FormatError(f"undeclared identifier: {exc}", lineno) from None
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if not poly.free_of(P):
            raise FormatError("coefficients may not involve p", lineno)
        return poly

    constraints = []
    for lineno, src in raw_constraints:
        c = coeff_poly(src, lineno)
        if not c:
            raise FormatError("constraint is identically zero", lineno)
        constraints.append(c)

    brackets, pmults, seen = {}, {}, set()
    for lineno, lhs, rhs in relations:
        m_p = _PMULT.match(lhs)
        m_b = _BRACKET.match(lhs)
        if m_p:
            i = int(m_p.group(1))
            key, lo, sign = ("p", i), i, 1
        elif m_b:
            a, b = int(m_b.group(1)), int(m_b.group(2))
            if a == b:
                raise FormatError("bracket of a generator with itself", lineno)
            i, j = min(a, b), max(a, b)
            key, lo, sign = ("b", i, j), j, (1 if a < b else -1)
        else:
            raise FormatError(f"unrecognised relation {lhs!r}", lineno)
        if any(x < 1 or x > n for x in key[1:]):
            raise FormatError(f"generator index out of range 1..{n}", lineno)
        if key in seen:
            raise FormatError("duplicate relation", lineno)
        seen.add(key)
        try:
            body = parse_poly(rhs, full)
        except ContextError as exc:
            raise FormatError(f"undeclared identifier: {exc}", lineno) from None
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        per_gen = {}
        base = len(gens)
        for e, c in body.terms.items():
            hits = [idx for idx in range(base, len(full)) if e[idx]]
            if e[gens.index(P)]:
                raise FormatError("coefficients may not involve p", lineno)
            if len(hits) != 1 or e[hits[0]] != 1:
                raise FormatError("right-hand side must be linear in the generators", lineno)
            k = (hits[0] - base) % n + 1
            mono = e[:base]
            per_gen.setdefault(k, {})
            per_gen[k][mono] = per_gen[k].get(mono, 0) + c
        for k, terms in sorted(per_gen.items()):
            poly = Polynomial(gens, terms)
            if not poly:
                continue
            if k <= lo:
                raise FormatError(f"coefficient of b{k} outside triangular range (need index > {lo})",
                                  lineno)
            if key[0] == "p":
                pmults[(key[1], k)] = poly
            else:
                brackets[(key[1], key[2], k)] = poly * sign
    return Presentation(name=name, n=n, params=params, brackets=brackets, pmults=pmults,
                        constraints=tuple(constraints))


def _rhs(terms):
    parts = []
    for k, c in terms:
        if c == 1:
            s = f"b{k}"
        elif c == -1:
            s = f"-b{k}"
        elif len(c.terms) == 1:
            s = f"{c}*b{k}"
        else:
            s = f"({c})*b{k}"
        if parts and not s.startswith("-"):
            s = "+ " + s
        elif parts:
            s = "- " + s[1:]
        parts.append(s)
    return " ".join(parts)


def format_presentation(pres):
    """Render in the file format accepted by :func:`parse`."""
    if pres.concrete:
        raise ValueError("only symbolic presentations have a file form")
    lines = [f"name {pres.name}", f"dim {pres.n}"]
    if pres.params:
        lines.append("params " + " ".join(pres.params))
    for c in pres.constraints:
        lines.append(f"require {c}")
    for i in range(1, pres.n + 1):
        terms = [(k, pres.pmults[(i, k)]) for k in range(i + 1, pres.n + 1) if (i, k) in pres.pmults]
        if terms:
            lines.append(f"p*b{i} = {_rhs(terms)}")
    for i, j in combinations(range(1, pres.n + 1), 2):
        terms = [(k, pres.brackets[(i, j, k)]) for k in range(j + 1, pres.n + 1)
                 if (i, j, k) in pres.brackets]
        if terms:
            lines.append(f"[b{i},b{j}] = {_rhs(terms)}")
    return "\n".join(lines) + "\n"


def load(path):
    with open(path) as fh:
        return parse(fh.read())


FIXTURES = ("cyc1", "cyc2", "elem2", "cyc3", "cyc2x1", "elem3", "heis3", "ext3",
            "sym1", "sym2", "sym3", "sym4", "sym5", "sym6", "bad1", "dim7stress")


def fixture_text(name):
    return resources.files("schurmult.fixtures").joinpath(f"{name}.lp").read_text()


def load_fixture(name):
    return parse(fixture_text(name))


# -- specialisation ----------------------------------------------------------


def _normalise_constraints(polys):
    """Drop discharged constants, make primitive, deduplicate.  Returns (kept, violated)."""
    kept, violated = [], []
    for c in polys:
        if not c:
            violated.append(c)
        elif c.is_constant():
            continue
        else:
            prim = c.primitive()[1]
            if prim not in kept:
                kept.append(prim)
    return tuple(kept), tuple(violated)


def specialise(pres, subs):
    """Substitute integers or polynomials for parameters.

    Substituted parameters leave the parameter list.  A constraint that
    becomes identically zero marks the result infeasible.
    """
    if pres.concrete:
        raise ValueError("cannot specialise a concrete presentation")
    if not subs:
        return pres
    for name in subs:
        if name not in pres.params:
            raise ContextError(f"{name!r} is not a parameter of {pres.name}")
    gens = pres.gens
    values = {}
    for name, value in subs.items():
        if isinstance(value, str):
            value = parse_poly(value, gens)
        if isinstance(value, Polynomial):
            value = value.reembed(gens)
            clash = set(value.variables()) & set(subs)
            if clash or not value.free_of(P):
                raise ContextError(f"substitution for {name} uses {sorted(clash) or 'p'}")
        values[name] = value

    def sub(poly):
        for name, value in values.items():
            poly = poly.substitute(name, value)
        return poly

    params = tuple(x for x in pres.params if x not in values)
    new_gens = context_for(params)

    def move(poly):
        return sub(poly).reembed(new_gens)

    brackets = {k: v for k, v in ((k, move(v)) for k, v in pres.brackets.items()) if v}
    pmults = {k: v for k, v in ((k, move(v)) for k, v in pres.pmults.items()) if v}
    kept, violated = _normalise_constraints(move(c) for c in pres.constraints)
    return replace(pres, params=params, brackets=brackets, pmults=pmults, constraints=kept,
                   violated=pres.violated + tuple(v.reembed(new_gens) for v in violated))


# -- concrete evaluation -------------------------------------------------------


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def least_primitive_root(prime):
    if not is_prime(prime):
        raise DomainError(f"{prime} is not prime")
    if prime == 2:
        return 1
    order = prime - 1
    factors = _prime_factors(order)
    for g in range(2, prime):
        if all(pow(g, order // q, prime) != 1 for q in factors):
            return g
    raise AssertionError("unreachable")


def evaluate_concrete(pres, prime, assignment=None):
    """Bind every parameter and w; coefficients become residues mod ``prime``."""
    if pres.concrete:
        raise ValueError("presentation is already concrete")
    if not is_prime(prime):
        raise DomainError(f"{prime} is not prime")
    assignment = dict(assignment or {})
    unknown = set(assignment) - set(pres.params)
    if unknown:
        raise ContextError(f"unknown parameters {sorted(unknown)}")
    missing = [x for x in pres.params if x not in assignment]
    if missing:
        raise ContextError(f"unassigned parameters {missing}")
    root = least_primitive_root(prime)
    env = {k: v % prime for k, v in assignment.items()}
    env[W] = root
    gens = context_for(())

    def ev(poly):
        return Polynomial.const(gens, poly.evaluate_mod(prime, env))

    brackets = {k: v for k, v in ((k, ev(v)) for k, v in pres.brackets.items()) if v}
    pmults = {k: v for k, v in ((k, ev(v)) for k, v in pres.pmults.items()) if v}
    violated = tuple(c for c in pres.constraints if c.evaluate_mod(prime, env) == 0)
    return Presentation(name=pres.name, n=pres.n, params=(), brackets=brackets, pmults=pmults,
                        constraints=(), prime=prime, root=root,
                        assignment=tuple((x, env[x]) for x in pres.params),
                        violated=pres.violated + violated)


# -- concrete arithmetic ---------------------------------------------------------


class _Tables:
    """Integer structure constants of a concrete presentation, cached per object."""

    _cache = {}

    def __init__(self, pres):
        n = pres.n
        self.p = pres.prime
        self.n = n
        self.pm = [[0] * (n + 1) for _ in range(n + 1)]
        for (i, k), c in pres.pmults.items():
            self.pm[i][k] = c.constant_value()
        self.br = [[[0] * (n + 1) for _ in range(n + 1)] for _ in range(n + 1)]
        for (i, j, k), c in pres.brackets.items():
            v = c.constant_value()
            self.br[i][j][k] = v
            self.br[j][i][k] = -v

    @classmethod
    def of(cls, pres):
        key = id(pres)
        hit = cls._cache.get(key)
        if hit is None or hit[0] is not pres:
            if len(cls._cache) > 512:
                cls._cache.clear()
            hit = (pres, cls(pres))
            cls._cache[key] = hit
        return hit[1]


def _require_concrete(pres):
    if not pres.concrete:
        raise ValueError("operation needs a concrete presentation")


def normal_form(pres, v):
    """Reduce an integer coefficient vector to residues, carrying p-multiples upward."""
    _require_concrete(pres)
    tab = _Tables.of(pres)
    c = [0] + list(v)
    if len(c) != pres.n + 1:
        raise ValueError(f"vector must have length {pres.n}")
    p = tab.p
    for i in range(1, pres.n + 1):
        q, c[i] = divmod(c[i], p)
        if q:
            row = tab.pm[i]
            for k in range(i + 1, pres.n + 1):
                if row[k]:
                    c[k] += q * row[k]
    return tuple(c[1:])


def bracket(pres, a, b):
    _require_concrete(pres)
    tab = _Tables.of(pres)
    n = pres.n
    out = [0] * (n + 1)
    for i in range(1, n + 1):
        if not a[i - 1]:
            continue
        for j in range(1, n + 1):
            if not b[j - 1] or i == j:
                continue
            f = a[i - 1] * b[j - 1]
            row = tab.br[i][j]
            for k in range(max(i, j) + 1, n + 1):
                if row[k]:
                    out[k] += f * row[k]
    return normal_form(pres, out[1:])


def unit_vector(n, i):
    v = [0] * n
    v[i - 1] = 1
    return tuple(v)


def scale(pres, k, v):
    return normal_form(pres, [k * x for x in v])


def add(pres, *vs):
    return normal_form(pres, [sum(xs) for xs in zip(*vs)])


@dataclass
class ConsistencyReport:
    ok: bool
    violations: list
    probabilistic: bool = False
    samples: int = 0


def check_consistency(pres):
    """Evaluate the alternating, p-compatibility and Jacobi relations.

    Violations are (kind, indices, left, right) with left != right.
    """
    _require_concrete(pres)
    n, p = pres.n, pres.prime
    zero = (0,) * n
    e = [None] + [unit_vector(n, i) for i in range(1, n + 1)]
    pb = [None] + [scale(pres, p, e[i]) for i in range(1, n + 1)]
    violations = []

    for i in range(1, n + 1):
        for j in range(i, n + 1):
            left = bracket(pres, e[i], e[j])
            right = zero if i == j else scale(pres, -1, bracket(pres, e[j], e[i]))
            if left != right:
                violations.append(("alternating", (i, j), left, right))

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            left = bracket(pres, pb[i], e[j])
            right = zero if i == j else scale(pres, p, bracket(pres, e[i], e[j]))
            if left != right:
                violations.append(("p-compat", (i,) if i == j else (i, j), left, right))

    for i, j, h in combinations(range(1, n + 1), 3):
        total = add(pres,
                    bracket(pres, e[i], bracket(pres, e[j], e[h])),
                    bracket(pres, e[h], bracket(pres, e[i], e[j])),
                    bracket(pres, e[j], bracket(pres, e[h], e[i])))
        if total != zero:
            violations.append(("jacobi", (i, j, h), total, zero))
    return ConsistencyReport(ok=not violations, violations=violations)


def admissible_assignments(pres, prime, limit=None, rng=None):
    """Yield parameter assignments in Z_p^m satisfying every constraint.

    Exhaustive when ``limit`` is None, otherwise ``limit`` uniform samples.
    """
    root = least_primitive_root(prime)
    params = pres.params

    def ok(assign):
        env = dict(assign)
        env[W] = root
        return all(c.evaluate_mod(prime, env) for c in pres.constraints)

    if limit is None:
        for values in product(range(prime), repeat=len(params)):
            assign = dict(zip(params, values))
            if ok(assign):
                yield assign
    else:
        rng = rng or random.Random(0)
        drawn = 0
        attempts = 0
        while drawn < limit and attempts < 50 * limit:
            attempts += 1
            assign = {x: rng.randrange(prime) for x in params}
            if ok(assign):
                drawn += 1
                yield assign


def check_symbolic(pres, primes=(5, 7, 11), samples=20, seed=0):
    """Sampled consistency check of a symbolic family (probabilistic)."""
    rng = random.Random(seed)
    violations = []
    count = 0
    for prime in primes:
        for assign in admissible_assignments(pres, prime, limit=samples, rng=rng):
            count += 1
            rep = check_consistency(evaluate_concrete(pres, prime, assign))
            for kind, idx, left, right in rep.violations:
                violations.append((kind, idx, left, right, prime, assign))
    return ConsistencyReport(ok=not violations, violations=violations, probabilistic=True,
                             samples=count)
