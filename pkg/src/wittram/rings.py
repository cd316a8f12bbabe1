"""Exact truncated arithmetic for a two-level Eisenstein tower of local rings.

All scalars live in Z/p^N and are stored as plain ints in [0, p^N).  On top
of the scalar ring sit two monogenic quotients

    O_K = (Z/p^N)[y] / (E_K)      degree e_K, uniformizer pi_K = class of y
    O_L = O_K[x]     / (E_L)      degree p,   uniformizer pi_L = class of x

with both moduli monic and Eisenstein, so the tower models the ring of
integers of a totally ramified extension L / K / Q_p with e(L/Q_p) = p*e_K,
truncated at p-adic precision N.  Elements are coordinate tuples in the
monomial bases (1, pi_K, ..., pi_K^{e_K-1}) and (1, pi_L, ..., pi_L^{p-1});
every operation returns canonical form (degree below the modulus degree,
scalar coordinates reduced mod p^N).

Valuations are L-normalized: v_L(pi_L) = 1, v_L(pi_K) = p, v_L(p) = e_L =
p*e_K.  The monomials pi_K^j pi_L^i (i < p, j < e_K) have pairwise distinct
valuations p*j + i modulo e_L, and a scalar coordinate c contributes
e_L * v_p(c); by the non-archimedean property the valuation of a nonzero
element is therefore the minimum of e_L*v_p(c_ij) + p*j + i over its
nonzero coordinates.  An element whose residue vanishes at precision gets
the marker value "at least N*e_L" rather than infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, NotEisenstein, PrecisionExhausted, InvalidExtension


def padic_val(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("padic_val(0) is undefined; handle zero separately")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Valuation:
    """Either an exact valuation or a lower bound hit at the precision horizon.

    ``exact(v)`` is only ever produced with v strictly below the horizon;
    ``at_least(h)`` marks an element indistinguishable from zero at
    precision, where h is the horizon itself (N*e_L for O_L, N*e_K for O_K).
    """

    kind: str
    value: int

    EXACT = "exact"
    AT_LEAST = "at-least"

    @classmethod
    def exact(cls, value: int) -> "Valuation":
        return cls(cls.EXACT, value)

    @classmethod
    def at_least(cls, value: int) -> "Valuation":
        return cls(cls.AT_LEAST, value)

    @property
    def is_exact(self) -> bool:
        return self.kind == self.EXACT

    def __repr__(self) -> str:
        return f"{self.kind}({self.value})"


@dataclass(frozen=True)
class EisensteinPoly:
    """A monic Eisenstein modulus, stored by its non-leading coefficients.

    ``coeffs`` holds c_0..c_{degree-1}; the leading coefficient is an
    implicit 1.  Coefficients are ints for the base-level modulus E_K and
    OKElement values for the top-level modulus E_L.
    """

    degree: int
    coeffs: tuple


class OKElement:
    """An element of O_K in the basis 1, pi_K, ..., pi_K^{e_K-1}."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: "Tower", coeffs: tuple):
        self.tower = tower
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, OKElement):
            if other.tower is not self.tower:
                raise ValueError("elements belong to different towers")
            return other
        if isinstance(other, int):
            return self.tower.ok_const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        pN = self.tower.pN
        return OKElement(self.tower, tuple((a + b) % pN for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        pN = self.tower.pN
        return OKElement(self.tower, tuple(-a % pN for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.tower._ok_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported in O_K")
        result = self.tower.one_ok
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_int(self, c: int) -> "OKElement":
        pN = self.tower.pN
        c %= pN
        return OKElement(self.tower, tuple((a * c) % pN for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def __repr__(self):
        return f"OK{self.coeffs}"


class OLElement:
    """An element of O_L in the basis 1, pi_L, ..., pi_L^{p-1} over O_K."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: "Tower", coeffs: tuple):
        self.tower = tower
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, OLElement):
            if other.tower is not self.tower:
                raise ValueError("elements belong to different towers")
            return other
        if isinstance(other, int):
            return self.tower.ol_const(other)
        if isinstance(other, OKElement):
            return self.tower.embed(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OLElement(self.tower, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return OLElement(self.tower, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.tower._ol_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use invert() for negative powers")
        result = self.tower.one_ol
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_int(self, c: int) -> "OLElement":
        return OLElement(self.tower, tuple(a.scale_int(c) for a in self.coeffs))

    def scale_ok(self, c: OKElement) -> "OLElement":
        return OLElement(self.tower, tuple(a * c for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.coeffs)

    def ok_part(self) -> OKElement:
        """The O_K component, provided the element actually lies in O_K."""
        if any(not a.is_zero for a in self.coeffs[1:]):
            raise ValueError("element does not lie in O_K")
        return self.coeffs[0]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def __repr__(self):
        return f"OL{tuple(a.coeffs for a in self.coeffs)}"


class Tower:
    """The truncated two-level tower (Z/p^N) -> O_K -> O_L.

    ``base_coeffs`` are the non-leading integer coefficients of E_K (length
    e_K) and ``top_coeffs`` the non-leading coefficients of E_L (length p),
    each given as a coordinate list over O_K.  Both moduli are validated to
    be Eisenstein; the constant-term valuations must resolve exactly at the
    working precision.
    """

    def __init__(self, p: int, N: int, base_coeffs, top_coeffs):
        if not is_prime(p):
            raise InvalidExtension(f"p = {p} is not prime")
        if N < 1:
            raise InvalidExtension(f"precision N = {N} must be positive")
        self.p = p
        self.N = N
        self.pN = p ** N
        self.e_K = len(base_coeffs)
        if self.e_K < 1:
            raise InvalidExtension("base modulus must have positive degree")
        if len(top_coeffs) != p:
            raise InvalidExtension(
                f"top modulus must have degree p = {p}, got {len(top_coeffs)}"
            )
        self.e_L = p * self.e_K
        self.horizon_K = N * self.e_K
        self.horizon_L = N * self.e_L

        self._base = tuple(c % self.pN for c in base_coeffs)
        self.zero_ok = OKElement(self, (0,) * self.e_K)
        self.one_ok = self.ok_const(1)
        self._top = tuple(self._as_ok(c) for c in top_coeffs)

        self.E_K = EisensteinPoly(self.e_K, self._base)
        self.E_L = EisensteinPoly(p, self._top)
        self._validate_eisenstein()

        self.zero_ol = OLElement(self, (self.zero_ok,) * p)
        self.one_ol = self.embed(self.one_ok)
        self.pi_K = self.reduce_ok([0, 1])
        self.pi_L = self.reduce_ol([self.zero_ok, self.one_ok])
        self.pi_K_in_L = self.embed(self.pi_K)

        # structure constants of the flat rank-(p*e_K) module, built once so
        # products run as dense integer loops instead of nested reductions
        self.dim = p * self.e_K
        self._mul_table = None
        self._mul_table = self._build_mul_table()

    # -- constructors -------------------------------------------------

    def _as_ok(self, value) -> OKElement:
        if isinstance(value, OKElement):
            if value.tower is not self:
                raise ValueError("coefficient belongs to a different tower")
            return value
        if isinstance(value, int):
            return self.ok_const(value)
        return self.ok(value)

    def ok(self, coeffs) -> OKElement:
        """Canonical O_K element from a coordinate list (length <= e_K)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.e_K:
            return self.reduce_ok(coeffs)
        coeffs += [0] * (self.e_K - len(coeffs))
        return OKElement(self, tuple(c % self.pN for c in coeffs))

    def ok_const(self, c: int) -> OKElement:
        return OKElement(self, (c % self.pN,) + (0,) * (self.e_K - 1))

    def ol(self, coeffs) -> OLElement:
        """Canonical O_L element from a list of O_K coordinates (length <= p)."""
        coeffs = [self._as_ok(c) if not isinstance(c, OKElement) else c for c in coeffs]
        if len(coeffs) > self.p:
            return self.reduce_ol(coeffs)
        coeffs += [self.zero_ok] * (self.p - len(coeffs))
        return OLElement(self, tuple(coeffs))

    def ol_const(self, c: int) -> OLElement:
        return self.embed(self.ok_const(c))

    def embed(self, a: OKElement) -> OLElement:
        return OLElement(self, (a,) + (self.zero_ok,) * (self.p - 1))

    # -- reduction and multiplication ----------------------------------

    def reduce_ok(self, raw) -> OKElement:
        """Reduce an integer coefficient list modulo the monic E_K."""
        pN = self.pN
        e = self.e_K
        work = [c % pN for c in raw]
        if len(work) < e:
            work += [0] * (e - len(work))
        for d in range(len(work) - 1, e - 1, -1):
            c = work[d]
            if c:
                base = self._base
                off = d - e
                for j in range(e):
                    work[off + j] = (work[off + j] - c * base[j]) % pN
            work.pop()
        return OKElement(self, tuple(work))

    def reduce_ol(self, raw) -> OLElement:
        """Reduce an O_K coefficient list modulo the monic E_L."""
        p = self.p
        work = [self._as_ok(c) for c in raw]
        if len(work) < p:
            work += [self.zero_ok] * (p - len(work))
        for d in range(len(work) - 1, p - 1, -1):
            c = work[d]
            if not c.is_zero:
                top = self._top
                off = d - p
                for j in range(p):
                    work[off + j] = work[off + j] - c * top[j]
            work.pop()
        return OLElement(self, tuple(work))

    def _ok_mul(self, a: OKElement, b: OKElement) -> OKElement:
        e = self.e_K
        if e == 1:
            return OKElement(self, ((a.coeffs[0] * b.coeffs[0]) % self.pN,))
        raw = [0] * (2 * e - 1)
        ac, bc = a.coeffs, b.coeffs
        for i, ai in enumerate(ac):
            if ai:
                for j, bj in enumerate(bc):
                    raw[i + j] += ai * bj
        return self.reduce_ok(raw)

    def _ol_mul_nested(self, a: OLElement, b: OLElement) -> OLElement:
        p = self.p
        raw = [self.zero_ok] * (2 * p - 1)
        ac, bc = a.coeffs, b.coeffs
        for i, ai in enumerate(ac):
            if not ai.is_zero:
                for j, bj in enumerate(bc):
                    raw[i + j] = raw[i + j] + ai * bj
        return self.reduce_ol(raw)

    def _ol_mul(self, a: OLElement, b: OLElement) -> OLElement:
        if self._mul_table is None:
            return self._ol_mul_nested(a, b)
        return self.unflat(self.flat_mul(self.flat(a), self.flat(b)))

    def _build_mul_table(self):
        monomials = []
        for idx in range(self.dim):
            i, j = divmod(idx, self.e_K)
            ok_coords = [0] * self.e_K
            ok_coords[j] = 1
            elems = [self.zero_ok] * self.p
            elems[i] = OKElement(self, tuple(ok_coords))
            monomials.append(OLElement(self, tuple(elems)))
        table = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                row.append(self.flat(self._ol_mul_nested(monomials[a], monomials[b])))
            table.append(tuple(row))
        return tuple(table)

    def flat(self, a: OLElement) -> tuple:
        """Coordinates in the flat monomial basis pi_L^i pi_K^j, index i*e_K+j."""
        return tuple(c for ok in a.coeffs for c in ok.coeffs)

    def unflat(self, vec) -> OLElement:
        e = self.e_K
        return OLElement(self, tuple(
            OKElement(self, tuple(v % self.pN for v in vec[i * e:(i + 1) * e]))
            for i in range(self.p)))

    def flat_mul(self, x, y) -> list:
        """Product of flat coordinate vectors via the structure constants."""
        pN = self.pN
        table = self._mul_table
        out = [0] * self.dim
        for a, ca in enumerate(x):
            if ca:
                row = table[a]
                for b, cb in enumerate(y):
                    if cb:
                        c = ca * cb
                        vec = row[b]
                        for k in range(self.dim):
                            if vec[k]:
                                out[k] += c * vec[k]
        return [v % pN for v in out]

    # -- validation ----------------------------------------------------

    def _validate_eisenstein(self):
        for i, c in enumerate(self._base):
            if c == 0:
                # vanishing at precision means v_p >= N >= 1, fine except at c_0
                if i == 0:
                    if self.N == 1:
                        raise PrecisionExhausted(
                            "constant term of E_K vanishes at precision N=1; "
                            "cannot certify Eisenstein"
                        )
                    raise NotEisenstein("constant term of E_K has valuation > 1")
                continue
            v = padic_val(c, self.p)
            if v < 1:
                raise NotEisenstein(f"coefficient {i} of E_K is a unit")
            if i == 0 and v != 1:
                raise NotEisenstein(f"constant term of E_K has valuation {v} != 1")
        for i, c in enumerate(self._top):
            v = self.valuation_ok(c)
            if not v.is_exact:
                if i == 0:
                    raise PrecisionExhausted(
                        "constant term of E_L vanishes at precision; "
                        "cannot certify Eisenstein"
                    )
                continue  # at-least(horizon) >= 1
            if v.value < 1:
                raise NotEisenstein(f"coefficient {i} of E_L is a unit")
            if i == 0 and v.value != 1:
                raise NotEisenstein(f"constant term of E_L has valuation {v.value} != 1")

    # -- valuations ------------------------------------------------------

    def valuation_ok(self, a: OKElement) -> Valuation:
        """K-normalized valuation: v_K(pi_K) = 1, v_K(p) = e_K."""
        best = None
        for j, c in enumerate(a.coeffs):
            if c:
                v = self.e_K * padic_val(c, self.p) + j
                if best is None or v < best:
                    best = v
        if best is None:
            return Valuation.at_least(self.horizon_K)
        return Valuation.exact(best)

    def valuation_ol(self, a: OLElement) -> Valuation:
        """L-normalized valuation: v_L(pi_L) = 1, v_L(pi_K) = p, v_L(p) = e_L."""
        best = None
        for i, ok in enumerate(a.coeffs):
            for j, c in enumerate(ok.coeffs):
                if c:
                    v = self.e_L * padic_val(c, self.p) + self.p * j + i
                    if best is None or v < best:
                        best = v
        if best is None:
            return Valuation.at_least(self.horizon_L)
        return Valuation.exact(best)


def tower_reduce(tower: Tower, coeffs, modulus: EisensteinPoly):
    """Reduce a raw coefficient list modulo one of the tower's moduli.

    The result is the canonical element (degree below deg(modulus)) equal to
    the input polynomial evaluated at the corresponding uniformizer.
    """
    if modulus == tower.E_K:
        return tower.reduce_ok(coeffs)
    if modulus == tower.E_L:
        return tower.reduce_ol(coeffs)
    raise ValueError("modulus does not belong to this tower")


def valuation_K(a: OKElement) -> Valuation:
    return a.tower.valuation_ok(a)


def valuation_L(a: OLElement) -> Valuation:
    return a.tower.valuation_ol(a)


def valuation_K_of_embedded(a: OLElement) -> Valuation:
    """v_K of an O_L element that is known to lie in O_K.

    For elements of K the L-valuation is divisible by p = e(L/K) and
    v_K = v_L / p; reading the valuation off the O_K coordinates directly
    gives the same answer with the O_K horizon.
    """
    return a.tower.valuation_ok(a.ok_part())


def invert(u: OLElement) -> OLElement:
    """Inverse of a unit of O_L at precision.

    Starts from the inverse of the residue (the residue field is F_p, so
    the residue of u is its constant scalar coordinate mod p) and runs the
    quadratically convergent iteration x <- x(2 - ux); k steps give
    v_L(1 - ux) >= 2^k.
    """
    tower = u.tower
    v = tower.valuation_ol(u)
    if not v.is_exact or v.value != 0:
        raise NotAUnit(f"valuation {v} is not exact(0)")
    c00 = u.coeffs[0].coeffs[0]
    x = tower.ol_const(pow(c00 % tower.p, -1, tower.p))
    one = tower.one_ol
    steps = max(1, (tower.horizon_L - 1).bit_length() + 1)
    for _ in range(steps):
        err = one - u * x
        if err.is_zero:
            break
        x = x + x * err
    if u * x != one:
        raise NotAUnit("inversion did not converge; element is not a unit")
    return x
