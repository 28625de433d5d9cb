from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hurwitzkit.numcover.roots import complex_roots
from hurwitzkit.recognize import (
    InsufficientPrecision, IntegerLattice, InterpolationError, RecognitionError, interpolate_dependency,
    lll_reduce, read_samples, recognize_algebraic, recognize_rational,
)


def gram_schmidt(B):
    """Exact orthogonalisation: returns (B*, mu)."""
    star, mu = [], [[Fraction(0)] * len(B) for _ in B]
    for i, b in enumerate(B):
        v = [Fraction(x) for x in b]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(b, star[j])) / sum(y * y for y in star[j])
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
    return star, mu


def is_lll_reduced(B, delta=Fraction(99, 100)):
    star, mu = gram_schmidt(B)
    sq = [sum(x * x for x in v) for v in star]
    for i in range(len(B)):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    return all(sq[k] >= (delta - mu[k][k - 1] ** 2) * sq[k - 1] for k in range(1, len(B)))


def same_lattice(A, B):
    """Each basis is an integer combination of the other."""
    MA, MB = sympy.Matrix(A), sympy.Matrix(B)
    for M1, M2 in ((MA, MB), (MB, MA)):
        # solve X * M1 = M2 over Q and require integer X
        X = (M1 * M1.T).inv() * M1 * M2.T
        if any(not x.is_integer for x in X) or X.T * M1 != M2:
            return False
    return True


def norm2(v):
    return sum(x * x for x in v)


# -- LLL --------------------------------------------------------------------------

def test_orthogonal_basis_is_unchanged_up_to_sign():
    B = [[3, 0, 0], [0, 5, 0], [0, 0, 7]]
    out = lll_reduce(IntegerLattice(B)).basis
    assert sorted(tuple(abs(x) for x in v) for v in out) == sorted(map(tuple, B))


def test_skewed_basis_norm_never_grows():
    B = [[1, 0], [1000000, 1]]
    out = lll_reduce(IntegerLattice(B)).basis
    assert max(norm2(v) for v in out) <= max(norm2(v) for v in B)
    assert sorted(map(norm2, out)) == [1, 1]


def test_sqrt2_knapsack_lattice_finds_the_minimal_polynomial():
    with gmpy2.context(precision=200):
        r = gmpy2.sqrt(gmpy2.mpfr(2))
        C = 2 ** 60
        B = [[1, 0, 0, C], [0, 1, 0, int(gmpy2.rint(C * r))], [0, 0, 1, int(gmpy2.rint(C * r * r))]]
        v = lll_reduce(IntegerLattice(B)).basis[0]
        assert abs(v[0] + v[1] * r + v[2] * r * r) < 1e-15
    assert sorted(map(abs, v[:3])) == [0, 1, 2]


def test_delta_out_of_range():
    with pytest.raises(RecognitionError):
        lll_reduce(IntegerLattice([[1, 0], [0, 1]]), Fraction(1, 4))


lattices = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=40)
@given(lattices)
def test_lll_output_is_reduced_and_spans_the_same_lattice(B):
    assume(sympy.Matrix(B).det() != 0)
    L = IntegerLattice(B)
    out = lll_reduce(L)
    assert out.gram_determinant() == L.gram_determinant() == sympy.Matrix(B).det() ** 2
    assert is_lll_reduced(out.basis)
    assert same_lattice(B, out.basis)


@settings(max_examples=30)
@given(lattices)
def test_first_vector_obeys_the_lll_bound(B):
    assume(sympy.Matrix(B).det() != 0)
    out = lll_reduce(IntegerLattice(B)).basis
    n = len(B)
    # |b1|^2 <= alpha^(n-1) lambda1^2 with alpha = 1/(delta - 1/4); any input vector bounds lambda1
    alpha = 1 / (Fraction(99, 100) - Fraction(1, 4))
    assert norm2(out[0]) <= alpha ** (n - 1) * min(norm2(v) for v in B)


# -- rationals --------------------------------------------------------------------

def test_third_from_200_digits():
    assert recognize_rational("0." + "3" * 200, 10 ** 6) == Fraction(1, 3)


def test_twenty_two_sevenths():
    assert recognize_rational("3.142857142857142857", 1000) == Fraction(22, 7)


def test_pi_has_no_small_rational():
    pi50 = "3.14159265358979323846264338327950288419716939937510"
    assert recognize_rational(pi50, 1000) is None


@given(st.fractions(max_denominator=10 ** 6).filter(lambda f: abs(f) < 10 ** 6), st.integers(-40, 40))
def test_perturbed_rational_is_recovered(f, wiggle):
    with gmpy2.context(precision=256):
        x = gmpy2.mpfr(f.numerator) / f.denominator
        x = x + x * gmpy2.mpfr(2) ** -256 * wiggle     # well inside the 8-bit guard
        assert recognize_rational(x, 10 ** 12) == f


# -- algebraic numbers ------------------------------------------------------------

def test_sqrt2_at_256_bits():
    with gmpy2.context(precision=256):
        z = gmpy2.mpc(gmpy2.sqrt(gmpy2.mpfr(2)))
    r = recognize_algebraic(z, 2, 100, bits=256)
    assert r.coeffs == [-2, 0, 1] and str(r) == "X^2 - 2"


def test_golden_ratio():
    with gmpy2.context(precision=256):
        z = gmpy2.mpc((1 + gmpy2.sqrt(gmpy2.mpfr(5))) / 2)
    r = recognize_algebraic(z, 3, 100, bits=256)
    assert r.coeffs == [-1, -1, 1]
    assert r.margin >= 2 ** 16


def test_cubic_root_round_trip():
    roots = complex_roots([-1, -1, 0, 1], bits=256)
    for z in roots:
        r = recognize_algebraic(z, 3, 100, bits=256)
        assert r.coeffs == [-1, -1, 0, 1]
        assert r.residual < 2.0 ** -64


def test_complex_algebraic_number():
    with gmpy2.context(precision=256):
        z = gmpy2.mpc(1, gmpy2.sqrt(gmpy2.mpfr(3))) / 2     # primitive sixth root of unity
    assert recognize_algebraic(z, 4, 50, bits=256).coeffs == [1, -1, 1]


def test_transcendental_is_inconclusive():
    with gmpy2.context(precision=256):
        z = gmpy2.mpc(gmpy2.const_pi())
    assert recognize_algebraic(z, 3, 100, bits=256) is None


def test_precision_bound_is_explicit():
    with pytest.raises(InsufficientPrecision, match="need at least"):
        recognize_algebraic(complex(2 ** 0.5), 6, 10 ** 6, bits=53)


def test_provenance_line():
    with gmpy2.context(precision=256):
        z = gmpy2.mpc(gmpy2.sqrt(gmpy2.mpfr(2)))
    line = recognize_algebraic(z, 2, 100, bits=256).provenance()
    assert line.startswith("# recognized at 256 bits, margin 2^")


@settings(max_examples=20)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=4).filter(lambda c: c[-1] > 0))
def test_random_irreducible_polynomials_are_recovered(coeffs):
    X = sympy.Symbol("X")
    f = sympy.Poly(list(reversed(coeffs)), X)
    assume(f.is_irreducible and f.degree() >= 2)
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    assume(g == 1)
    z = complex_roots(coeffs, bits=320)[0]
    r = recognize_algebraic(z, f.degree(), 20, bits=320)
    assert r is not None and r.coeffs == coeffs


# -- dependencies -----------------------------------------------------------------

def test_parabola():
    samples = [(b, b * b) for b in map(Fraction, range(-2, 3))]
    dep = interpolate_dependency(samples, (2, 1))
    assert dep.coeffs == {(2, 0): -1, (0, 1): 1} or dep.coeffs == {(2, 0): 1, (0, 1): -1}
    assert all(dep(b, g) == 0 for b, g in samples)


def circle_points(count):
    # (1 - t^2)/(1 + t^2), 2t/(1 + t^2)
    return [(Fraction(1 - t * t, 1 + t * t), Fraction(2 * t, 1 + t * t)) for t in map(Fraction, range(count))]


def test_unit_circle():
    dep = interpolate_dependency(circle_points(12), (2, 2))
    assert dep.total_degree() == 2
    assert {k: abs(v) for k, v in dep.coeffs.items()} == {(2, 0): 1, (0, 2): 1, (0, 0): 1}
    assert dep(Fraction(3, 5), Fraction(4, 5)) == 0


def test_rational_graph_is_cleared_of_denominators():
    samples = [(b, (b ** 3 - 1) / (b + 2)) for b in map(Fraction, range(0, 12))]
    dep = interpolate_dependency(samples, (3, 1))
    X, Y = sympy.symbols("b g")
    got = sum(c * X ** i * Y ** j for (i, j), c in dep.coeffs.items())
    want = Y * (X + 2) - (X ** 3 - 1)
    assert sympy.simplify(got - want) == 0 or sympy.simplify(got + want) == 0
    held_out = Fraction(7, 3)
    assert dep(held_out, (held_out ** 3 - 1) / (held_out + 2)) == 0


@settings(max_examples=25)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4), st.integers(1, 5))
def test_graph_of_a_polynomial_vanishes_on_held_out_points(coeffs, shift):
    assume(coeffs[-1] != 0 and len(coeffs) >= 2)
    def f(b):
        return sum(c * b ** k for k, c in enumerate(coeffs))
    d = len(coeffs) - 1
    train = [(Fraction(b), Fraction(f(b))) for b in range(-d - 2, d + 3)]
    dep = interpolate_dependency(train, (d, 1))
    b = Fraction(100 + shift, 7)
    assert dep(b, f(b)) == 0


def test_bounds_too_small_suggest_larger_ones():
    samples = [(b, b ** 3) for b in map(Fraction, range(8))]
    with pytest.raises(InterpolationError, match=r"try \(3, 1\)"):
        interpolate_dependency(samples, (2, 1))


def test_too_few_samples():
    with pytest.raises(InterpolationError, match="add samples"):
        # beta - 1 and gamma - 1 both vanish on a single point
        interpolate_dependency([(Fraction(1), Fraction(1))], (1, 1))


def test_duplicate_samples_rejected():
    with pytest.raises(InterpolationError, match="duplicate"):
        interpolate_dependency([(1, 1), (1, 1)], (1, 1))


def test_sample_file(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("# header\nsample 1/2 1/4\nsample 3 9\n")
    assert read_samples(path) == [(Fraction(1, 2), Fraction(1, 4)), (Fraction(3), Fraction(9))]
    path.write_text("sample 1/2 1/4\nsample 3\n")
    with pytest.raises(RecognitionError, match=r"s.txt:2"):
        read_samples(path)
