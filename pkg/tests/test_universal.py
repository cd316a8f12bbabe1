"""Universal addition polynomials: frozen oracles and exact identities.

The frozen term dictionaries below were derived by hand-expanding the ghost
equations (e.g. for two summands and p = 2: z_1 = (X00^2 + 2 X01 + X10^2 +
2 X11 - (X00 + X10)^2)/2 = X01 + X11 - X00 X10) and are asserted literally.
"""

from fractions import Fraction

import pytest

from wittram import (
    ResourceLimit,
    SymPoly,
    carry_polynomial,
    carry_residue_polynomial,
    format_polynomial,
    ghost_polynomial,
    structure_check,
    sum_polynomials,
)

X = SymPoly.var


def mono(*pairs):
    return tuple(sorted(((var, e) for var, e in pairs),
                        key=lambda it: (it[0][1], it[0][0])))


def poly(term_map):
    return SymPoly({m: Fraction(c) for m, c in term_map.items()})


# -- ghost polynomials ----------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ghost_level_zero(p):
    assert ghost_polynomial(p, 0) == X(0, 0)


@pytest.mark.parametrize("p", [2, 3])
def test_ghost_level_one(p):
    expected = poly({mono(((0, 0), p)): 1, mono(((0, 1), 1)): p})
    assert ghost_polynomial(p, 1) == expected


def test_ghost_level_two_p2():
    expected = poly({
        mono(((0, 0), 4)): 1,
        mono(((0, 1), 2)): 2,
        mono(((0, 2), 1)): 4,
    })
    assert ghost_polynomial(2, 2) == expected


# -- addition laws ----------------------------------------------------------------


@pytest.mark.parametrize("p,arity", [(2, 2), (3, 2), (3, 3), (2, 4)])
def test_level_zero_is_plain_sum(p, arity):
    z0 = sum_polynomials(p, 0, arity)[0]
    expected = SymPoly.zero()
    for i in range(arity):
        expected = expected + X(i, 0)
    assert z0 == expected


def test_binary_z1_p2():
    z1 = sum_polynomials(2, 1, 2)[1]
    expected = poly({
        mono(((0, 1), 1)): 1,
        mono(((1, 1), 1)): 1,
        mono(((0, 0), 1), ((1, 0), 1)): -1,
    })
    assert z1 == expected


def test_binary_z1_p3():
    z1 = sum_polynomials(3, 1, 2)[1]
    expected = poly({
        mono(((0, 1), 1)): 1,
        mono(((1, 1), 1)): 1,
        mono(((0, 0), 2), ((1, 0), 1)): -1,
        mono(((0, 0), 1), ((1, 0), 2)): -1,
    })
    assert z1 == expected


@pytest.mark.parametrize("p,n", [(2, 2), (3, 1)])
def test_adding_zero_summands_is_identity(p, n):
    # with all summands but the first set to 0, z_n collapses to X_{0,n}
    zs = sum_polynomials(p, n, p)
    zero_table = {}
    for i in range(1, p):
        for j in range(n + 1):
            zero_table[(i, j)] = SymPoly.zero()
    assert zs[n].substitute(zero_table) == X(0, n)


@pytest.mark.parametrize("p,n_max,arity", [(2, 3, 2), (3, 2, 3), (3, 2, 2)])
def test_ghost_compatibility(p, n_max, arity):
    zs = sum_polynomials(p, n_max, arity)
    for k in range(n_max + 1):
        w_k = ghost_polynomial(p, k)
        lhs = SymPoly.zero()
        for i in range(arity):
            lhs = lhs + w_k.substitute({(0, e): X(i, e) for e in range(k + 1)})
        rhs = w_k.substitute({(0, e): zs[e] for e in range(k + 1)})
        assert (lhs - rhs).is_zero


@pytest.mark.parametrize("p,n_max,arity", [(2, 3, 2), (3, 2, 3)])
def test_addition_laws_integral_without_constant(p, n_max, arity):
    for z in sum_polynomials(p, n_max, arity):
        assert z.is_integral
        assert not z.has_constant_term


# -- carries -----------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_carry_level_zero_vanishes(p):
    assert carry_polynomial(p, 0).is_zero


def test_carry_level_one_p2():
    expected = poly({mono(((0, 0), 1), ((1, 0), 1)): -1})
    assert carry_polynomial(2, 1) == expected


def test_carry_level_one_p3():
    # hand expansion of (X0^3 + X1^3 + X2^3 - (X0+X1+X2)^3)/3
    terms = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                terms[mono(((i, 0), 2), ((j, 0), 1))] = -1
    terms[mono(((0, 0), 1), ((1, 0), 1), ((2, 0), 1))] = -2
    assert carry_polynomial(3, 1) == poly(terms)


@pytest.mark.parametrize("p,n_max", [(2, 3), (3, 2)])
def test_carry_identity_and_structure(p, n_max):
    zs = sum_polynomials(p, n_max, p)
    for n in range(1, n_max + 1):
        f_n = carry_polynomial(p, n)
        total = f_n - zs[n]
        for i in range(p):
            total = total + X(i, n)
        assert total.is_zero
        rep = structure_check(f_n, p)
        assert rep.passed, rep


def test_carry_residue_base_case():
    assert carry_residue_polynomial(2, 1).is_zero
    assert carry_residue_polynomial(3, 1).is_zero


def test_carry_residue_p2_level2():
    expected = poly({
        mono(((0, 0), 3), ((1, 0), 1)): -1,
        mono(((0, 0), 2), ((1, 0), 2)): -1,
        mono(((0, 0), 1), ((1, 0), 3)): -1,
    })
    g = carry_residue_polynomial(2, 2)
    assert g == expected
    assert g.min_total_degree == 4


@pytest.mark.parametrize("p,n_max", [(2, 3), (3, 2)])
def test_carry_split_identity_and_structure(p, n_max):
    zs = sum_polynomials(p, n_max, p)
    for n in range(2, n_max + 1):
        g = carry_residue_polynomial(p, n)
        f_n = carry_polynomial(p, n)
        f_prev = carry_polynomial(p, n - 1)
        block = SymPoly.zero()
        for i in range(p):
            block = block + X(i, n - 1) ** p
        block = block - zs[n - 1] ** p - (-f_prev) ** p
        assert (f_n - g - block.scale(Fraction(1, p))).is_zero
        rep = structure_check(g, p * p)
        assert rep.passed, rep


# -- structure reports ---------------------------------------------------------------


def test_structure_check_passes_known_cases():
    assert structure_check(carry_residue_polynomial(2, 2), 4).passed
    assert structure_check(carry_polynomial(2, 1), 2).passed


def test_structure_check_flags_constant_term():
    bad = X(0, 0) + SymPoly.const(1)
    rep = structure_check(bad, 1)
    assert not rep.passed
    assert not rep.has_no_constant_term


def test_structure_check_zero_poly_is_vacuous():
    rep = structure_check(SymPoly.zero(), 100)
    assert rep.passed
    assert rep.min_total_degree is None


# -- resource guard -------------------------------------------------------------------


def test_resource_limit_large_level():
    with pytest.raises(ResourceLimit):
        sum_polynomials(3, 3, 3, 10 ** 7)


def test_resource_limit_large_arity():
    with pytest.raises(ResourceLimit):
        sum_polynomials(2, 3, 40, 10 ** 7)


# -- canonical format ------------------------------------------------------------------


def test_canonical_lines_carry_p2():
    assert carry_polynomial(2, 1).canonical_lines() == ["-1 0:0^1 1:0^1"]


def test_canonical_order_graded_then_variable():
    z1 = sum_polynomials(2, 1, 2)[1]
    assert z1.canonical_lines() == ["-1 0:0^1 1:0^1", "1 0:1^1", "1 1:1^1"]


def test_format_zero_polynomial_is_empty():
    assert format_polynomial(SymPoly.zero()) == ""


def test_digest_is_stable():
    a = carry_residue_polynomial(2, 2)
    b = carry_residue_polynomial(2, 2)
    assert a.digest() == b.digest()
    assert a.digest() != carry_polynomial(2, 1).digest()


def test_substitution_composes_with_arithmetic():
    f = X(0, 0) * X(1, 0) + X(0, 1)
    table = {(0, 0): X(0, 1), (1, 0): SymPoly.const(2)}
    assert f.substitute(table) == X(0, 1).scale(2) + X(0, 1)
