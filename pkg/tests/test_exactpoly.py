from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import assume, given, strategies as st

from hurwitzkit.exactpoly import fp
from hurwitzkit.exactpoly.bivariate import subcover_factor_degrees
from hurwitzkit.exactpoly.family import FamilyError, parse_family, read_family, verify_family
from hurwitzkit.exactpoly.fields import QQ, PrimeField, is_prime
from hurwitzkit.exactpoly.poly import (
    Poly, PolyError, RationalFunction, discriminant, parse_poly, poly_sqrt, resultant,
    squarefree_decomposition, verify_composition,
)
from hurwitzkit.exactpoly.ramification import (
    INF, CoverError, branch_point_count, branch_profiles, dedekind_cycle_samples, discriminant_in_t,
    discriminant_is_square, expand_profiles, is_square_in_function_field, ramification_profile, sturm_count,
)
from hurwitzkit.numcover.roots import complex_roots

X = sympy.Symbol("X")
T = sympy.Symbol("t")


def poly(text):
    return parse_poly(text)


def to_sympy(f: Poly, var=X):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in f.c])) or [0], var,
                      domain="QQ")


coeff = st.integers(-20, 20)
small_polys = st.lists(coeff, min_size=1, max_size=8).map(Poly)
nonzero_polys = small_polys.filter(lambda f: not f.is_zero())


# -- arithmetic -------------------------------------------------------------------

def test_arithmetic_examples():
    assert poly("X^2 - 1").gcd(poly("X - 1")) == poly("X - 1")
    assert poly("X^3").derivative() == poly("3X^2")
    assert poly("X + 1") * poly("X - 1") == poly("X^2 - 1")


@given(small_polys, nonzero_polys)
def test_divmod_matches_sympy(f, g):
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.is_zero() or r.deg < g.deg
    sq, sr = sympy.div(to_sympy(f), to_sympy(g))
    assert to_sympy(q) == sq and to_sympy(r) == sr


@given(nonzero_polys, nonzero_polys)
def test_gcd_is_monic_and_matches_sympy(f, g):
    h = f.gcd(g)
    assert h.lc == 1
    assert to_sympy(h) == sympy.gcd(to_sympy(f), to_sympy(g)).monic()


@given(small_polys, small_polys, st.fractions(min_value=-10, max_value=10, max_denominator=9))
def test_evaluation_is_a_ring_map(f, g, x):
    assert (f * g).evaluate(x) == f.evaluate(x) * g.evaluate(x)
    assert (f + g).evaluate(x) == f.evaluate(x) + g.evaluate(x)


def test_division_by_zero_polynomial():
    with pytest.raises((PolyError, ZeroDivisionError)):
        poly("X").divmod(Poly([]))


# -- resultants and discriminants -------------------------------------------------

def test_discriminant_examples():
    b, c = Fraction(3), Fraction(-7, 2)
    assert discriminant(Poly([c, b, 1])) == b * b - 4 * c
    p_, q_ = Fraction(-5), Fraction(2, 3)
    assert discriminant(Poly([q_, p_, 0, 1])) == -4 * p_ ** 3 - 27 * q_ ** 2


def test_resultant_with_linear_factor_is_evaluation():
    a = Fraction(5, 3)
    g = poly("2X^3 - X + 7")
    assert resultant(Poly([-a, 1]), g) == g.evaluate(a)


@given(nonzero_polys, nonzero_polys)
def test_resultant_matches_sympy(f, g):
    assume(f.deg >= 1 and g.deg >= 1)
    # Sylvester determinant: sympy.resultant itself has the wrong sign for e.g. (X - 2, X^3)
    assert resultant(f, g) == sylvester(to_sympy(f).as_expr(), to_sympy(g).as_expr(), X).det()


@given(nonzero_polys)
def test_discriminant_matches_sympy(f):
    assume(f.deg >= 2)
    assert discriminant(f) == sympy.discriminant(to_sympy(f))


@given(nonzero_polys, st.integers(2, 3), nonzero_polys)
def test_squarefree_decomposition_reconstructs(f, k, g):
    assume(f.deg >= 1)
    h = f ** k * g
    parts = squarefree_decomposition(h)
    prod = Poly([1])
    for part, m in parts:
        prod = prod * part ** m
        assert part.gcd(part.derivative()).deg == 0
    assert prod.monic() == h.monic()


# -- square roots and composition -------------------------------------------------

def test_poly_sqrt_examples():
    assert poly_sqrt(poly("X^2 + 2X + 1")) == poly("X + 1")
    g = poly("X^3 - 2X + 5")
    assert poly_sqrt(g * g) in (g, -g)
    with pytest.raises(PolyError):
        poly_sqrt(poly("X^2 + 1"))


@given(nonzero_polys)
def test_poly_sqrt_round_trip(g):
    r = poly_sqrt(g * g)
    assert r * r == g * g


def test_verify_composition_examples():
    x = Poly([0, 1])
    x2 = RationalFunction(x * x)
    assert verify_composition(RationalFunction(x ** 4), x2, x2)
    f0 = poly("X^3 - 2X + 1")
    assert verify_composition(RationalFunction(f0 * f0), x2, RationalFunction(f0))
    assert not verify_composition(RationalFunction(x ** 4 + Poly([1])), x2, x2)


# -- ramification -----------------------------------------------------------------

def test_discriminant_in_t_of_square_map():
    D = discriminant_in_t(poly("X^2"), Poly([1]))
    assert D.deg == 1 and D.evaluate(0) == 0


def test_profiles_of_simple_maps():
    assert str(ramification_profile(poly("X^3"), Poly([1]), 0).cycle_type) == "3^1"
    assert str(ramification_profile(poly("X^3"), Poly([1]), INF).cycle_type) == "3^1"
    assert str(ramification_profile(poly("X^3"), Poly([1]), 5).cycle_type) == "1^3"


def covers():
    """Random coprime (p, q) with max degree in 2..7."""
    return st.tuples(nonzero_polys, nonzero_polys).filter(
        lambda pq: 2 <= max(pq[0].deg, pq[1].deg) and pq[0].gcd(pq[1]).deg == 0)


@given(covers())
def test_riemann_hurwitz_for_random_rational_maps(pq):
    p, q = pq
    n = max(p.deg, q.deg)
    total = sum(ct.index for ct in expand_profiles(branch_profiles(p, q)))
    # genus 0 source: total ramification 2n - 2
    assert total == 2 * n - 2


@given(covers(), st.integers(-50, 50))
def test_non_branch_point_is_unramified(pq, t0):
    p, q = pq
    n = max(p.deg, q.deg)
    D = discriminant_in_t(p, q)
    assume(D.evaluate(t0) != 0)
    assert str(ramification_profile(p, q, t0).cycle_type) == f"1^{n}"


@given(covers(), st.integers(-3, 3).filter(bool))
def test_branch_points_are_translation_invariant(pq, c):
    p, q = pq
    shift = Poly([c, 1])
    D = discriminant_in_t(p, q)
    Ds = discriminant_in_t(p.compose(shift), q.compose(shift))
    assert D.deg == Ds.deg
    assert D.monic() == Ds.monic()


def test_discriminant_in_t_matches_sympy_resultant():
    p, q = poly("X^4 - 2X + 1"), poly("3X^2 + 1")
    ours = discriminant_in_t(p, q)
    F = to_sympy(p).as_expr() - T * to_sympy(q).as_expr()
    ref = sympy.Poly(sympy.discriminant(F, X), T)
    ours_s = to_sympy(ours, T)
    assert ours_s.monic() == ref.monic()


def test_degree27_family_has_four_branch_points(deg27_polys):
    p, q = deg27_polys
    profiles = branch_profiles(p, q)
    assert branch_point_count(profiles) == 4
    finite = [pr for pr in profiles if pr.point != INF]
    assert sum(pr.degree for pr in finite) == 3
    total = sum(ct.index for ct in expand_profiles(profiles))
    assert total == 2 * 27 - 2


# -- Sturm ------------------------------------------------------------------------

def test_sturm_examples():
    assert sturm_count(poly("X^2 - 2"), 0, 2) == 1
    assert sturm_count(poly("X^2 + 1"), -10, 10) == 0
    assert sturm_count(poly("X^3 - X")) == 3


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=13).map(Poly).filter(lambda f: f.deg >= 1))
def test_sturm_matches_numerical_roots(f):
    sqf = f // f.gcd(f.derivative())
    roots = complex_roots([float(c) for c in sqf.c], bits=53, clustered=False) if sqf.deg >= 1 else []
    scale = max(1.0, max((abs(r) for r in roots), default=1.0))
    near_real = [r for r in roots if abs(r.imag) < 1e-7 * scale]
    clear = [r for r in roots if abs(r.imag) > 1e-4 * scale]
    assume(len(near_real) + len(clear) == len(roots))
    assert sturm_count(f) == len(near_real)
    assert sturm_count(f) == len(sympy.real_roots(to_sympy(sqf)))


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=10).map(Poly).filter(lambda f: f.deg >= 1),
       st.integers(-6, 6), st.integers(0, 6))
def test_sturm_on_intervals_matches_sympy(f, a, w):
    b = a + w
    got = sturm_count(f, Fraction(a), Fraction(b))
    ref = sympy.Poly(to_sympy(f // f.gcd(f.derivative())).as_expr(), X)
    # half-open interval (a, b]
    expect = ref.count_roots(a, b) - (1 if ref.eval(a) == 0 else 0)
    assert got == expect


# -- finite fields ----------------------------------------------------------------

def test_factor_examples():
    lc, facs = fp.factor([1, 0, 1], 5)
    assert lc == 1 and facs == [([2, 1], 1), ([3, 1], 1)]
    _, facs = fp.factor([1, 0, 0, 0, 1], 3)
    assert [len(f) - 1 for f, _ in facs] == [2, 2]
    # second route: every monic quadratic over GF(3)
    quads = [[a, b, 1] for a in range(3) for b in range(3)]
    irreducible = [q for q in quads if all(fp.evaluate(q, x, 3) for x in range(3))]
    divides = [q for q in irreducible if not fp.mod([1, 0, 0, 0, 1], q, 3)]
    assert sorted(divides) == sorted(f for f, _ in facs)


@given(st.sampled_from([2, 3, 5, 7, 31]), st.lists(st.integers(0, 1000), min_size=2, max_size=12), st.integers(0, 5))
def test_factorization_properties(p, c, seed):
    f = fp.strip([x % p for x in c])
    assume(len(f) >= 2)
    lc, facs = fp.factor(f, p, seed=seed)
    prod = [lc]
    for g, m in facs:
        assert fp.is_irreducible(g, p) and g[-1] == 1
        for _ in range(m):
            prod = fp.mul(prod, g, p)
    assert prod == f
    assert len({tuple(g) for g, _ in facs}) == len(facs)
    ref = sympy.factor_list(sympy.Poly(list(reversed(f)), X, modulus=p))
    assert sorted((g.degree(), m) for g, m in ref[1]) == sorted((len(g) - 1, m) for g, m in facs)


def test_dedekind_samples_of_square_map():
    for s in dedekind_cycle_samples(poly("X^2"), Poly([1]), 31, range(1, 30)):
        assert s.cycle_type is None or str(s.cycle_type) in ("2^1", "1^2")


# -- squareness -------------------------------------------------------------------

def test_discriminant_squareness_examples():
    assert discriminant_is_square(poly("X^3 - 3X - 1"))
    assert discriminant(poly("X^3 - 3X - 1")) == 81
    # X^2 - t: discriminant 4t is not a square in Q(t)
    assert not is_square_in_function_field(discriminant_in_t(poly("X^2"), Poly([1])))


def test_squareness_over_prime_field():
    F = PrimeField(31)
    assert discriminant_is_square(parse_poly("X^3 - 3X - 1", field=F))
    # 3 is not a square mod 31 (31 = 3 mod 4 and 31 = 1 mod 3): X^2 - 3 has discriminant 12 = 4*3
    assert not discriminant_is_square(parse_poly("X^2 - 3", field=F))


# -- subcovers --------------------------------------------------------------------

def test_subcover_of_square_map():
    assert subcover_factor_degrees(poly("X^2"), Poly([1])).degrees == [1, 1]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_subcover_of_power_map_is_cyclotomic(n):
    p = 31
    res = subcover_factor_degrees(Poly([0] * n + [1]), Poly([1]), primes=(p,))
    ref = sympy.factor_list(sympy.Poly(X ** n - 1, X, modulus=p))
    assert res.degrees == sorted((g.degree() for g, m in ref[1] for _ in range(m)), reverse=True)


# -- family files -----------------------------------------------------------------

FAMILY = """
family toy
param alpha = 2
let A = X - alpha
p = A^2 (X + 1)
q = X^2 + 5
expect degree 3
expect branch_points {bp}
"""


def test_family_parsing_and_failure_diff():
    p, q = parse_family(FAMILY.format(bp=4)).instantiate()
    assert p == poly("X^3 - 3X^2 + 4")
    n_bp = branch_point_count(branch_profiles(p, q))
    good = verify_family(parse_family(FAMILY.format(bp=n_bp)))
    assert good.passed
    bad = verify_family(parse_family(FAMILY.format(bp=n_bp + 1)))
    assert not bad.passed
    (check,) = [c for c in bad.checks if not c.passed]
    assert check.expected == str(n_bp + 1) and check.observed == str(n_bp)


def test_wrong_cycle_type_fails(data_dir):
    text = (data_dir / "psp43_2_deg27.fam").read_text()
    text = text.replace("expect profiles 2^6.1^15, 2^6.1^15, 4^6.1^3, 6^4.3^1",
                        "expect profiles 2^6.1^15, 2^6.1^15, 4^6.1^3, 6^3.3^3")
    text = "\n".join(l for l in text.splitlines() if not l.startswith("expect subcover") and not l.startswith("expect disc"))
    rep = verify_family(parse_family(text))
    assert not rep.passed
    assert [c.check for c in rep.checks if not c.passed] == ["profiles"]


def test_family_errors():
    with pytest.raises(FamilyError):
        parse_family("p = X\n")
    with pytest.raises(FamilyError):
        parse_family("p = X\nq = 1\nexpect nonsense 3\n")
    with pytest.raises(FamilyError, match="<family>:1:"):
        parse_family("param alpha = 1/0\np = X\nq = 1\n")
    with pytest.raises(FamilyError, match="<family>:3:"):
        parse_family("param alpha = 1\nlet A = X\np = (X\nq = 1\n")


def test_verify_rejects_composite_prime(data_dir):
    with pytest.raises(FamilyError):
        verify_family(read_family(data_dir / "psp43_2_deg27.fam"), prime=33)


def test_is_prime_small():
    assert [n for n in range(40) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
