"""Construction of totally ramified cyclic degree-p towers with Galois action.

An extension is described by exact integer data: the non-leading
coefficients of the two Eisenstein moduli plus the coordinates of the
Galois image sigma(pi_L), so the same extension can be rebuilt at any
precision.  Three constructions ship built in:

* ``quadratic-gaussian``   p = 2, K = Q_2, E_L = x^2 - 2x + 2 (pi_L = 1+i),
                           sigma(pi_L) = 2 - pi_L; ramification break t = 1.
* ``quadratic-sqrt2``      p = 2, K = Q_2, E_L = x^2 - 2,
                           sigma(pi_L) = -pi_L; t = 2.
* ``cyclotomic-step``      odd p, K = Q_p(zeta_p) via E_K = ((y+1)^p - 1)/y,
                           L = K(zeta_{p^2}) with pi_L = zeta_{p^2} - 1 and
                           sigma(zeta_{p^2}) = zeta_{p^2}^{1+p}; t = p - 1.

sigma is represented by its value on pi_L and extended as the O_K-algebra
endomorphism x -> sigma_pi; custom extensions must supply sigma_pi
explicitly (conjugate roots of an Eisenstein polynomial are p-adically too
close for naive root-finding to separate them reliably).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import (
    InvalidExtension,
    PrecisionExhausted,
    SigmaNotARoot,
    SigmaWrongOrder,
    VerificationError,
)
from .rings import OLElement, Tower, Valuation, is_prime, valuation_L

BUILTIN_NAMES = ("quadratic-gaussian", "quadratic-sqrt2", "cyclotomic-step")
DEFAULT_PRECISION = 32


@dataclass(frozen=True)
class ExtensionSpec:
    """Exact integer description of an extension, rebuildable at any precision.

    For ``kind="custom"`` the three coefficient fields are required:
    ``base_coeffs`` are the non-leading integer coefficients of E_K,
    ``top_coeffs`` the non-leading coefficients of E_L as O_K coordinate
    tuples, and ``sigma_pi`` the O_L coordinates (one O_K tuple per power of
    pi_L) of the Galois image of pi_L.
    """

    kind: str
    p: int = 0
    precision: int = DEFAULT_PRECISION
    base_coeffs: tuple = None
    top_coeffs: tuple = None
    sigma_pi: tuple = None


@dataclass(frozen=True)
class ExtensionData:
    """A validated extension: tower, Galois action, and ramification break.

    ``sigma_pi_powers[k][i]`` caches (sigma^k(pi_L))^i for 0 <= k, i < p, so
    applying any power of sigma to an element is a single coordinate-wise
    combination.
    """

    spec: ExtensionSpec
    name: str
    tower: Tower
    sigma_pi: OLElement
    sigma_pi_powers: tuple
    t: int

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def N(self) -> int:
        return self.tower.N

    @property
    def e_K(self) -> int:
        return self.tower.e_K

    @property
    def e_L(self) -> int:
        return self.tower.e_L

    def apply_sigma(self, a: OLElement, power: int = 1) -> OLElement:
        """sigma^power applied to an element of O_L."""
        power %= self.p
        if power == 0:
            return a
        table = self.sigma_pi_powers[power]
        out = self.tower.zero_ol
        for i, coeff in enumerate(a.coeffs):
            if not coeff.is_zero:
                out = out + table[i].scale_ok(coeff)
        return out

    def conjugates(self, a: OLElement) -> tuple:
        return tuple(self.apply_sigma(a, k) for k in range(self.p))

    def trace(self, a: OLElement) -> OLElement:
        """tr_{L/K}(a) = a + sigma(a) + ... + sigma^{p-1}(a)."""
        out = a
        for k in range(1, self.p):
            out = out + self.apply_sigma(a, k)
        return out

    def with_precision(self, precision: int) -> "ExtensionData":
        return build_extension(replace(self.spec, precision=precision))

    def __repr__(self):
        return (f"ExtensionData({self.name}, p={self.p}, N={self.N}, "
                f"e_K={self.e_K}, t={self.t})")


def _binomials(p: int, k_from: int, k_to: int):
    return [math.comb(p, k) for k in range(k_from, k_to)]


def _materialize(spec: ExtensionSpec) -> ExtensionSpec:
    """Fill in the exact integer data for the built-in kinds."""
    kind = spec.kind
    if kind == "quadratic-gaussian":
        return replace(spec, p=2, base_coeffs=(-2,),
                       top_coeffs=((2,), (-2,)), sigma_pi=((2,), (-1,)))
    if kind == "quadratic-sqrt2":
        return replace(spec, p=2, base_coeffs=(-2,),
                       top_coeffs=((-2,), (0,)), sigma_pi=((0,), (-1,)))
    if kind == "cyclotomic-step":
        p = spec.p or 3
        if p == 2 or not is_prime(p):
            raise InvalidExtension(f"cyclotomic-step requires an odd prime, got {p}")
        # E_K = ((y+1)^p - 1)/y, degree p-1; pi_K = zeta_p - 1
        base = tuple(_binomials(p, 1, p))
        # E_L = (x+1)^p - (1 + pi_K): constant term -pi_K, then binomials
        zero_k = (0,) * (p - 1)
        minus_pi_k = (0, -1) + (0,) * (p - 3)
        top = [minus_pi_k]
        for k in range(1, p):
            top.append((math.comb(p, k),) + zero_k[1:])
        return replace(spec, p=p, base_coeffs=base, top_coeffs=tuple(top),
                       sigma_pi=None)  # computed in the tower below
    if kind == "custom":
        if spec.base_coeffs is None or spec.top_coeffs is None or spec.sigma_pi is None:
            raise InvalidExtension(
                "custom extension needs base_coeffs, top_coeffs and sigma_pi"
            )
        if not spec.p:
            raise InvalidExtension("custom extension needs the prime p")
        return spec
    raise InvalidExtension(f"unknown extension kind {kind!r}")


def build_extension(spec, precision: int = None) -> ExtensionData:
    """Build and validate an extension from a spec or a built-in name.

    Checks, in order: both moduli are Eisenstein, sigma_pi is a root of the
    top modulus, the induced endomorphism has order exactly p, and the
    ramification break t = v_L(sigma(pi_L) - pi_L) - 1 resolves exactly
    below the precision horizon with t >= 1 (wild ramification).
    """
    if isinstance(spec, str):
        spec = ExtensionSpec(kind=spec, precision=precision or DEFAULT_PRECISION)
    elif precision is not None:
        spec = replace(spec, precision=precision)
    name = spec.kind
    spec = _materialize(spec)

    tower = Tower(spec.p, spec.precision, spec.base_coeffs, spec.top_coeffs)
    p = tower.p

    if spec.sigma_pi is not None:
        sigma_pi = tower.ol([tower.ok(c) for c in spec.sigma_pi])
    else:
        # cyclotomic-step: sigma(pi_L) = (pi_L + 1)^(1+p) - 1
        sigma_pi = (tower.pi_L + tower.one_ol) ** (1 + p) - tower.one_ol

    if not _eval_top_modulus(tower, sigma_pi).is_zero:
        raise SigmaNotARoot("sigma(pi_L) is not a root of E_L at precision")

    # one application of sigma needs the powers of sigma_pi
    first_powers = _powers(tower, sigma_pi)
    orbit = [tower.pi_L]
    for _ in range(p):
        orbit.append(_apply_with_powers(tower, orbit[-1], first_powers))
    if orbit[1] == tower.pi_L:
        raise SigmaWrongOrder("sigma fixes pi_L; the action is trivial")
    if orbit[p] != tower.pi_L:
        raise SigmaWrongOrder("sigma^p does not fix pi_L at precision")

    diff = sigma_pi - tower.pi_L
    v = valuation_L(diff)
    if not v.is_exact:
        raise PrecisionExhausted(
            "v_L(sigma(pi_L) - pi_L) is not resolvable below the horizon"
        )
    t = v.value - 1
    if t < 1:
        raise InvalidExtension(f"ramification break t = {t} violates t >= 1")

    tables = tuple(_powers(tower, orbit[k]) for k in range(p))
    return ExtensionData(spec=spec, name=name, tower=tower, sigma_pi=sigma_pi,
                         sigma_pi_powers=tables, t=t)


def _eval_top_modulus(tower: Tower, x: OLElement) -> OLElement:
    acc = tower.one_ol  # monic leading coefficient
    for c in reversed(tower.E_L.coeffs):
        acc = acc * x + tower.embed(c)
    return acc


def _powers(tower: Tower, x: OLElement) -> tuple:
    pows = [tower.one_ol]
    for _ in range(tower.p - 1):
        pows.append(pows[-1] * x)
    return tuple(pows)


def _apply_with_powers(tower: Tower, a: OLElement, pows: tuple) -> OLElement:
    out = tower.zero_ol
    for i, coeff in enumerate(a.coeffs):
        if not coeff.is_zero:
            out = out + pows[i].scale_ok(coeff)
    return out


def ramification_break(ext: ExtensionData, generator_power: int = 1) -> int:
    """Re-derive t from any generator sigma^g (1 <= g < p); all agree."""
    if not 1 <= generator_power < ext.p:
        raise ValueError("generator power must lie in [1, p)")
    diff = ext.apply_sigma(ext.tower.pi_L, generator_power) - ext.tower.pi_L
    v = valuation_L(diff)
    if not v.is_exact:
        raise PrecisionExhausted("ramification break not resolvable at precision")
    return v.value - 1


@dataclass(frozen=True)
class SigmaBasis:
    """The conjugate-product basis x_mu = prod_{i<mu} sigma^i(pi_L).

    v_L(x_mu) = mu, and v_L((sigma - 1) x_mu) = t + mu for 1 <= mu <= p-1;
    the valuations are pairwise distinct mod p, which is what makes the
    family an O_K-basis of O_L.
    """

    elements: tuple


def sigma_basis(ext: ExtensionData) -> SigmaBasis:
    """Build x_0..x_{p-1} and verify their valuation pattern exactly."""
    tower = ext.tower
    xs = [tower.one_ol]
    for mu in range(1, ext.p):
        xs.append(xs[-1] * ext.apply_sigma(tower.pi_L, mu - 1))
    for mu, x in enumerate(xs):
        v = valuation_L(x)
        if not v.is_exact:
            raise PrecisionExhausted(f"v_L(x_{mu}) hit the precision horizon")
        if v.value != mu:
            raise VerificationError(f"v_L(x_{mu}) = {v.value}, expected {mu}")
    for mu in range(1, ext.p):
        d = ext.apply_sigma(xs[mu]) - xs[mu]
        v = valuation_L(d)
        if not v.is_exact:
            raise PrecisionExhausted(f"v_L((sigma-1)x_{mu}) hit the horizon")
        if v.value != ext.t + mu:
            raise VerificationError(
                f"v_L((sigma-1)x_{mu}) = {v.value}, expected t + mu = {ext.t + mu}"
            )
    return SigmaBasis(tuple(xs))


# -- extension spec files ---------------------------------------------------


def _parse_int(value) -> int:
    # integers may arrive as decimal strings to sidestep word-size limits
    if isinstance(value, bool):
        raise InvalidExtension("booleans are not valid integers in spec files")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip(), 10)
    raise InvalidExtension(f"expected an integer or decimal string, got {value!r}")


def _parse_int_list(values) -> tuple:
    return tuple(_parse_int(v) for v in values)


def load_spec_file(path) -> ExtensionSpec:
    """Load an extension spec from a JSON document.

    Required field: ``kind``.  Optional: ``p``, ``precision``.  For
    ``kind="custom"``: ``e_K``, ``E_K`` (list of integers, low to high,
    without the leading 1), ``E_L`` (list of O_K coordinate lists) and
    ``sigma_pi`` (list of O_K coordinate lists).  Integers may be written
    as decimal strings.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidExtension(f"spec file {path} lacks a 'kind' field")
    kind = doc["kind"]
    p = _parse_int(doc.get("p", 0))
    precision = _parse_int(doc.get("precision", DEFAULT_PRECISION))
    if kind != "custom":
        return ExtensionSpec(kind=kind, p=p, precision=precision)
    base = _parse_int_list(doc["E_K"])
    if "e_K" in doc and _parse_int(doc["e_K"]) != len(base):
        raise InvalidExtension("e_K does not match the length of E_K")
    top = tuple(_parse_int_list(row) for row in doc["E_L"])
    sigma = tuple(_parse_int_list(row) for row in doc["sigma_pi"])
    return ExtensionSpec(kind="custom", p=p, precision=precision,
                         base_coeffs=base, top_coeffs=top, sigma_pi=sigma)


def resolve_extension(name_or_path: str, precision: int = None) -> ExtensionData:
    """Build a built-in extension by name, or a custom one from a spec file."""
    if name_or_path in BUILTIN_NAMES:
        return build_extension(name_or_path, precision=precision)
    return build_extension(load_spec_file(name_or_path), precision=precision)
