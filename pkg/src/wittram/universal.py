"""Universal polynomials for p-typical Witt vector addition.

Everything here is exact symbolic computation over the rationals in the
doubly indexed variables X_{i,j} (summand index i, Witt level j).  The
level-n addition law z_n is obtained by solving the ghost-component
equations

    sum_i W_n(X_{i,0}, ..., X_{i,n}) = W_n(z_0, ..., z_n),
    W_n(X_0, ..., X_n) = sum_k p^k X_k^(p^(n-k)),

for z_n level by level, dividing by p^n at each step.  The classical theory
guarantees the result has integer coefficients and no constant term; the
computation certifies both facts and raises IntegralityError otherwise, so
the certificate doubles as a correctness check on the solve.

Two derived families feed the valuation verifiers downstream:

* the level-n carry f_n = z_n - sum_i X_{i,n}, computed here in telescoped
  ghost form as sum_{k<n} (1/p^(n-k)) (sum_i X_{i,k}^(p^(n-k)) -
  z_k^(p^(n-k))); every monomial of f_n has total degree >= p;

* the carry residue g returned by ``carry_residue_polynomial(p, n)``, which
  splits the carry as f_n = g + (1/p)(sum_i X_{i,n-1}^p - z_{n-1}^p -
  (-f_{n-1})^p); every monomial of g has total degree >= p^2.

Monomials are kept in a canonical sparse form and rendered in graded
lexicographic order with the variables X_{i,j} ordered by (j, i), so the
serialized output is byte-stable and suitable for golden files.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IntegralityError, ResourceLimit

# A variable is the pair (summand index i, level j); a monomial is a tuple
# of ((i, j), exponent) pairs sorted by (j, i) with positive exponents.
Var = tuple
Monomial = tuple

DEFAULT_TERM_LIMIT = 10 ** 7


def _var_key(var: Var):
    i, j = var
    return (j, i)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged = dict(m1)
    for var, e in m2:
        merged[var] = merged.get(var, 0) + e
    return tuple(sorted(merged.items(), key=lambda it: _var_key(it[0])))


def _mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def _output_key(mono: Monomial):
    # graded lex, descending: higher degree first, then larger exponent on
    # the earliest variable in the (j, i) order
    return (-_mono_degree(mono), tuple((_var_key(v), -e) for v, e in mono))


class SymPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Instances are immutable by convention: the term dict is created fresh
    by every operation and never mutated afterwards, which makes the cached
    polynomial families safe to share.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms:
            self.terms = {m: c for m, c in terms.items() if c != 0}
        else:
            self.terms = {}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "SymPoly":
        return SymPoly()

    @staticmethod
    def const(c) -> "SymPoly":
        c = Fraction(c)
        return SymPoly({(): c} if c else None)

    @staticmethod
    def var(i: int, j: int) -> "SymPoly":
        return SymPoly({(((i, j), 1),): Fraction(1)})

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return SymPoly(out)

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) - c
        return SymPoly(out)

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                acc = out.get(mono)
                out[mono] = c1 * c2 if acc is None else acc + c1 * c2
        return SymPoly(out)

    def __pow__(self, n: int) -> "SymPoly":
        if n < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = SymPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "SymPoly":
        c = Fraction(c)
        if c == 0:
            return SymPoly.zero()
        return SymPoly({m: c * co for m, co in self.terms.items()})

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    @property
    def has_constant_term(self) -> bool:
        return () in self.terms

    @property
    def min_total_degree(self):
        """Smallest total degree among monomials, or None for the zero poly."""
        if not self.terms:
            return None
        return min(_mono_degree(m) for m in self.terms)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def variables(self):
        seen = set()
        for mono in self.terms:
            for var, _ in mono:
                seen.add(var)
        return sorted(seen, key=_var_key)

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitution -----------------------------------------------------

    def substitute(self, table: dict) -> "SymPoly":
        """Replace each variable found in ``table`` by the given SymPoly."""
        out = SymPoly.zero()
        power_cache = {}
        for mono, coeff in self.terms.items():
            term = SymPoly.const(coeff)
            for var, e in mono:
                key = (var, e)
                got = power_cache.get(key)
                if got is None:
                    base = table.get(var)
                    if base is None:
                        base = SymPoly.var(*var)
                    got = base ** e
                    power_cache[key] = got
                term = term * got
            out = out + term
        return out

    # -- canonical serialization -----------------------------------------

    def iter_terms(self):
        """Terms in canonical (graded lex descending) order."""
        for mono in sorted(self.terms, key=_output_key):
            yield mono, self.terms[mono]

    def canonical_lines(self):
        """One line per term: coefficient, then "i:j^e" pairs in (j,i) order."""
        lines = []
        for mono, coeff in self.iter_terms():
            c = str(coeff.numerator) if coeff.denominator == 1 else str(coeff)
            parts = [c] + [f"{i}:{j}^{e}" for (i, j), e in mono]
            lines.append(" ".join(parts))
        return lines

    def digest(self) -> str:
        return hashlib.sha256("\n".join(self.canonical_lines()).encode()).hexdigest()

    def __repr__(self):
        if self.is_zero:
            return "SymPoly(0)"
        return "SymPoly(" + "; ".join(self.canonical_lines()) + ")"


def format_polynomial(poly: SymPoly) -> str:
    """Canonical exchange format: newline-joined term lines (empty for 0)."""
    return "\n".join(poly.canonical_lines())


@dataclass(frozen=True)
class StructureReport:
    """Outcome of the structural certification of a universal polynomial."""

    is_integral: bool
    has_no_constant_term: bool
    min_total_degree: object  # int or None for the zero polynomial
    required_min_degree: int
    passed: bool


def structure_check(poly: SymPoly, required_min_degree: int) -> StructureReport:
    """Certify integer coefficients, no constant term, and a degree floor."""
    integral = poly.is_integral
    no_const = not poly.has_constant_term
    min_deg = poly.min_total_degree
    passed = integral and no_const and (min_deg is None or min_deg >= required_min_degree)
    return StructureReport(integral, no_const, min_deg, required_min_degree, passed)


def _guard(p: int, n: int, arity: int, max_terms: int):
    # dense bound: monomials of total degree <= p^n in arity*(n+1) variables
    nvars = arity * (n + 1)
    projected = math.comb(p ** n + nvars, nvars)
    if projected > max_terms:
        raise ResourceLimit(
            f"projected dense term count {projected} for (p={p}, n={n}, "
            f"arity={arity}) exceeds the limit {max_terms}"
        )


def ghost_polynomial(p: int, n: int) -> SymPoly:
    """The level-n ghost component W_n = sum_k p^k X_k^(p^(n-k)).

    Variables are addressed as (0, k), i.e. the level index in row 0, so the
    result can be fed to ``substitute`` with arbitrary replacement tables.
    """
    if n < 0:
        raise ValueError("ghost level must be >= 0")
    out = SymPoly.zero()
    for k in range(n + 1):
        out = out + (SymPoly.var(0, k) ** (p ** (n - k))).scale(p ** k)
    return out


@lru_cache(maxsize=None)
def sum_polynomials(p: int, n: int, arity: int,
                    max_terms: int = DEFAULT_TERM_LIMIT) -> tuple:
    """The Witt addition laws z_0..z_n for ``arity`` summands.

    Each z_k is certified to have integer coefficients and no constant term.
    Raises ResourceLimit before starting a level whose dense monomial bound
    exceeds ``max_terms``.
    """
    if arity < 2:
        raise ValueError("arity must be >= 2")
    if n < 0:
        raise ValueError("level must be >= 0")
    zs = []
    for k in range(n + 1):
        _guard(p, k, arity, max_terms)
        ghost_sum = SymPoly.zero()
        for i in range(arity):
            for e in range(k + 1):
                ghost_sum = ghost_sum + (SymPoly.var(i, e) ** (p ** (k - e))).scale(p ** e)
        for j in range(k):
            ghost_sum = ghost_sum - (zs[j] ** (p ** (k - j))).scale(p ** j)
        z_k = ghost_sum.scale(Fraction(1, p ** k))
        _certify(z_k, f"z_{k} (p={p}, arity={arity})")
        zs.append(z_k)
    return tuple(zs)


def _certify(poly: SymPoly, label: str):
    if not poly.is_integral:
        raise IntegralityError(f"{label} has a non-integer coefficient")
    if poly.has_constant_term:
        raise IntegralityError(f"{label} has a constant term")


@lru_cache(maxsize=None)
def carry_polynomial(p: int, n: int, max_terms: int = DEFAULT_TERM_LIMIT) -> SymPoly:
    """The level-n addition carry for p summands (CLI name: f).

    f_0 = 0, and for n >= 1

        f_n = sum_{k=0}^{n-1} (1/p^(n-k)) (sum_i X_{i,k}^(p^(n-k)) - z_k^(p^(n-k))),

    which equals z_n - sum_i X_{i,n}.  Certified integral with no constant
    term; every monomial has total degree >= p.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    if n == 0:
        return SymPoly.zero()
    _guard(p, n, p, max_terms)
    zs = sum_polynomials(p, n - 1, p, max_terms)
    out = SymPoly.zero()
    for k in range(n):
        q = p ** (n - k)
        block = SymPoly.zero()
        for i in range(p):
            block = block + SymPoly.var(i, k) ** q
        block = block - zs[k] ** q
        out = out + block.scale(Fraction(1, q))
    _certify(out, f"carry level {n} (p={p})")
    return out


@lru_cache(maxsize=None)
def carry_residue_polynomial(p: int, n: int,
                             max_terms: int = DEFAULT_TERM_LIMIT) -> SymPoly:
    """The residue of the level-n carry split (CLI name: g).

    For n >= 1 this is the polynomial g with

        f_n = g + (1/p)(sum_i X_{i,n-1}^p - z_{n-1}^p - (-f_{n-1})^p),

    i.e. g = sum_{k<=n-2} (1/p^(n-k))(sum_i X_{i,k}^(p^(n-k)) - z_k^(p^(n-k)))
    + (1/p)(-f_{n-1})^p.  It vanishes for n = 1, is certified integral with
    no constant term, and for n >= 2 every monomial has total degree >= p^2.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    if n == 1:
        return SymPoly.zero()
    _guard(p, n, p, max_terms)
    zs = sum_polynomials(p, n - 2, p, max_terms)
    out = SymPoly.zero()
    for k in range(n - 1):
        q = p ** (n - k)
        block = SymPoly.zero()
        for i in range(p):
            block = block + SymPoly.var(i, k) ** q
        block = block - zs[k] ** q
        out = out + block.scale(Fraction(1, q))
    f_prev = carry_polynomial(p, n - 1, max_terms)
    out = out + ((-f_prev) ** p).scale(Fraction(1, p))
    _certify(out, f"carry residue for level {n} (p={p})")
    return out
