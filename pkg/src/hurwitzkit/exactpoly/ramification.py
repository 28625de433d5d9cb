"""Branch points and ramification of covers ``X -> t = p(X)/q(X)``.

The cover is the pencil ``b*p(X) - a*q(X)`` over places ``t = a/b``; its degree
is ``n = max(deg p, deg q)``.  A root at ``X = infinity`` of multiplicity
``n - deg(b*p - a*q)`` is booked explicitly as one extra cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..permgroup import CycleType
from . import fp
from .fields import QQ, PrimeField, QuotientRing, ZeroDivisorSplit, primes_below
from .poly import (
    Poly, _int_prem, _resultant_field, integer_primitive, squarefree_decomposition,
)

INF = "infinity"


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class RamificationProfile:
    point: object            # Fraction, INF, or a monic Poly whose roots are the points
    cycle_type: CycleType
    degree: int = 1          # number of branch points sharing this profile

    def describe(self) -> str:
        if self.point == INF:
            where = "t = infinity"
        elif isinstance(self.point, Poly):
            where = f"roots of {str(self.point).replace('X', 't').replace('+ -', '- ')}"
        else:
            where = f"t = {self.point}"
        return f"{where}: {self.cycle_type}"


def cover_degree(p: Poly, q: Poly) -> int:
    return max(p.deg, q.deg)


def check_cover(p: Poly, q: Poly):
    if p.is_zero() or q.is_zero():
        raise CoverError("p and q must be nonzero")
    if p.F != q.F:
        raise CoverError("p and q over different fields")
    if p.gcd(q).deg > 0:
        raise CoverError("p and q have a common factor")
    if cover_degree(p, q) < 1:
        raise CoverError("constant cover")


# ---------------------------------------------------------------------------
# discriminant in t

def _common_integer_scale(p: Poly, q: Poly):
    den = math.lcm(*(c.denominator for c in p.c + q.c))
    P = [int(c * den) for c in p.c]
    Q = [int(c * den) for c in q.c]
    return den, P, Q


def _fp_resultant(a: list, b: list, pr: int) -> int:
    """Resultant over GF(pr) of polynomials with nonzero leading coefficients."""
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, pr) % pr
        r = fp.mod(a, b, pr)
        if not r:
            return 0
        if da % 2 and db % 2:
            res = -res
        res = res * pow(b[-1], da - (len(r) - 1), pr) % pr
        a, b = b, r


def _hadamard_bits(P: list[int], Q: list[int], n: int) -> float:
    """log2 of a bound on every coefficient of ``res_X(f, f')`` with f = P - tQ."""
    w = [abs(P[i] if i < len(P) else 0) + abs(Q[i] if i < len(Q) else 0) for i in range(n + 1)]
    row_f = math.sqrt(sum(float(x) ** 2 for x in w)) if max(w) < 2 ** 500 else None
    row_d = math.sqrt(sum(float(i * x) ** 2 for i, x in enumerate(w))) if row_f is not None else None
    if row_f is None:
        row_f_bits = max(x.bit_length() for x in w) + math.log2(n + 1) / 2
        row_d_bits = row_f_bits + math.log2(n)
    else:
        row_f_bits, row_d_bits = math.log2(row_f), math.log2(row_d)
    return (n - 1) * row_f_bits + n * row_d_bits


def discriminant_in_t(p: Poly, q: Poly) -> Poly:
    """Discriminant of ``p(X) - t*q(X)`` with respect to ``X``, as a polynomial in ``t``.

    Over QQ it is computed modulo enough primes to exceed a Hadamard bound and
    recovered by CRT; over GF(p) by evaluation in an extension field.
    """
    check_cover(p, q)
    if p.F is QQ:
        return _disc_t_rational(p, q)
    if isinstance(p.F, PrimeField):
        return _disc_t_prime(p, q)
    raise CoverError(f"unsupported coefficient field {p.F!r}")


def _disc_t_rational(p: Poly, q: Poly) -> Poly:
    n = cover_degree(p, q)
    L, P, Q = _common_integer_scale(p, q)
    P += [0] * (n + 1 - len(P))
    Q += [0] * (n + 1 - len(Q))
    need_bits = _hadamard_bits(P, Q, n) + 2
    npts = 2 * n
    residues: list[list[int]] = []
    moduli: list[int] = []
    bits = 0.0
    for pr in primes_below(1 << 62):
        if P[n] % pr == 0 and Q[n] % pr == 0:
            continue
        xs, ys = [], []
        t0 = 0
        while len(xs) < npts:
            t0 += 1
            f0 = [(P[i] - t0 * Q[i]) % pr for i in range(n + 1)]
            if f0[n] == 0:
                continue
            xs.append(t0)
            ys.append(_fp_resultant(f0, fp.deriv(f0, pr), pr))
        R = fp.interpolate(xs, ys, pr)
        residues.append(R + [0] * (npts - len(R)))
        moduli.append(pr)
        bits += math.log2(pr)
        if bits > need_bits:
            break
    coeffs = _crt_symmetric(residues, moduli)
    R = Poly(coeffs, QQ)
    lc_t = Poly([P[n], -Q[n]], QQ)
    D = R.exact_div(lc_t)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return D.scale(Fraction(sign, L ** (2 * n - 2)))


def _crt_symmetric(residues: list[list[int]], moduli: list[int]) -> list[int]:
    M = 1
    acc = [0] * len(residues[0])
    for res, m in zip(residues, moduli):
        inv = pow(M, -1, m)
        for k in range(len(acc)):
            delta = (res[k] - acc[k]) * inv % m
            acc[k] += M * delta
        M *= m
    half = M // 2
    return [x - M if x > half else x for x in acc]


def _disc_t_prime(p: Poly, q: Poly) -> Poly:
    F = p.F
    pr = F.p
    n = cover_degree(p, q)
    P = list(p.c) + [0] * (n + 1 - len(p.c))
    Q = list(q.c) + [0] * (n + 1 - len(q.c))
    if P[n] == 0 and Q[n] == 0:
        raise CoverError("degree drops modulo the prime")
    if n % pr == 0:
        raise CoverError(f"cover degree {n} divisible by the characteristic")
    npts = 2 * n
    k = 1
    while pr ** k < npts + n + 2:
        k += 1
    K = F if k == 1 else QuotientRing(F, fp.find_irreducible(k, pr))
    xs, ys = [], []
    for idx in range(1, pr ** k):
        if len(xs) == npts:
            break
        t0 = _ext_element(K, idx, pr, k)
        coeffs = [K.sub(K.coerce(P[i]), K.mul(t0, K.coerce(Q[i]))) for i in range(n + 1)]
        if K.is_zero(coeffs[n]):
            continue
        f0 = Poly._raw(coeffs, K)
        xs.append(t0)
        ys.append(_resultant_field(f0, f0.derivative()))
    if len(xs) < npts:
        raise CoverError("not enough evaluation points")
    R = _newton_interpolate(K, xs, ys)
    base = []
    for c in R:
        if k > 1:
            if any(x != 0 for x in c[1:]):
                raise CoverError("interpolated resultant is not defined over the prime field")
            base.append(c[0])
        else:
            base.append(c)
    Rp = Poly(base, F)
    lc_t = Poly([P[n], -Q[n]], F)
    D = Rp.exact_div(lc_t)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return D.scale(sign)


def _ext_element(K, idx: int, pr: int, k: int):
    if k == 1:
        return idx % pr
    digits = []
    for _ in range(k):
        digits.append(idx % pr)
        idx //= pr
    return tuple(digits)


def _newton_interpolate(K, xs, ys) -> list:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = K.div(K.sub(coef[i], coef[i - 1]), K.sub(xs[i], xs[i - j]))
    out = [K.zero]
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        shifted = [K.zero] + out
        for j in range(len(out)):
            shifted[j] = K.sub(shifted[j], K.mul(out[j], xs[i]))
        shifted[0] = K.add(shifted[0], coef[i])
        out = shifted
    while len(out) > 1 and K.is_zero(out[-1]):
        out.pop()
    return out


# ---------------------------------------------------------------------------
# ramification profiles

def _profile_from(g: Poly, n: int) -> CycleType:
    """Cycle type over a place: multiplicities of the roots of ``g``, plus X=inf."""
    if g.is_zero():
        raise CoverError("p and q are proportional")
    g.F.inv(g.lc)                      # forces a split if the degree is not uniform
    parts = []
    for a, m in squarefree_decomposition(g):
        parts.extend([m] * a.deg)
    if n > g.deg:
        parts.append(n - g.deg)
    return CycleType(tuple(parts))


def ramification_profile(p: Poly, q: Poly, t0) -> RamificationProfile:
    """Cycle type of inertia over a rational place ``t0`` (or ``INF``)."""
    check_cover(p, q)
    n = cover_degree(p, q)
    F = p.F
    if t0 == INF or (isinstance(t0, str) and t0.lower() in ("inf", "infinity")):
        return RamificationProfile(INF, _profile_from(q, n))
    a = F.coerce(Fraction(t0) if F is QQ else t0)
    return RamificationProfile(t0 if F is not QQ else Fraction(t0), _profile_from(p - q.scale(a), n))


def profiles_at_roots(p: Poly, q: Poly, m: Poly) -> list[RamificationProfile]:
    """Profiles over the roots of a squarefree ``m(t)``, split into uniform pieces."""
    check_cover(p, q)
    n = cover_degree(p, q)
    F = p.F
    out = []
    stack = [m.monic()]
    while stack:
        mod = stack.pop()
        if mod.deg < 1:
            continue
        if mod.deg == 1:
            root = F.neg(mod.c[0])
            prof = _profile_from(p - q.scale(root), n)
            out.append(RamificationProfile(Fraction(root) if F is QQ else root, prof, 1))
            continue
        K = QuotientRing(F, mod.c)
        theta = K.generator()
        g = p.map(K) - q.map(K).scale(theta)
        try:
            prof = _profile_from(g, n)
        except ZeroDivisorSplit as split:
            f1 = Poly(split.factor, F)
            stack.append(f1)
            stack.append(mod.exact_div(f1))
            continue
        out.append(RamificationProfile(mod, prof, mod.deg))
    out.sort(key=_profile_sort_key)
    return out


def _profile_sort_key(pr: RamificationProfile):
    if pr.point == INF:
        return (2, 0, "")
    if isinstance(pr.point, Poly):
        return (1, pr.point.deg, str(pr.point))
    return (0, pr.point, "")


def branch_profiles(p: Poly, q: Poly, disc: Poly | None = None) -> list[RamificationProfile]:
    """All places with nontrivial inertia, including infinity when ramified."""
    check_cover(p, q)
    D = discriminant_in_t(p, q) if disc is None else disc
    if D.is_zero():
        raise CoverError("discriminant vanishes identically (inseparable cover)")
    out = []
    if D.deg > 0:
        sqf = Poly.const(1, D.F)
        for g, _ in squarefree_decomposition(D):
            sqf = sqf * g
        out = profiles_at_roots(p, q, sqf)
    inf = ramification_profile(p, q, INF)
    if inf.cycle_type.index > 0:
        out.append(inf)
    return [pr for pr in out if pr.cycle_type.index > 0]


def expand_profiles(profiles: Sequence[RamificationProfile]) -> list[CycleType]:
    out = []
    for pr in profiles:
        out.extend([pr.cycle_type] * pr.degree)
    return out


def branch_point_count(profiles: Sequence[RamificationProfile]) -> int:
    return sum(pr.degree for pr in profiles)


# ---------------------------------------------------------------------------
# squareness

def is_square_in_function_field(D: Poly) -> bool:
    """Is ``D(t)`` a square in ``K(t)`` (K = QQ or GF(p))?"""
    if D.is_zero():
        raise CoverError("zero discriminant")
    F = D.F
    lead = D.lc
    if F is QQ:
        from .poly import _rational_sqrt
        if _rational_sqrt(lead) is None:
            return False
    elif isinstance(F, PrimeField):
        if F.p != 2 and pow(lead, (F.p - 1) // 2, F.p) != 1:
            return False
    else:
        raise CoverError("unsupported field")
    return all(m % 2 == 0 for _, m in squarefree_decomposition(D))


def discriminant_is_square(f: Poly) -> bool:
    """Is the discriminant of a univariate polynomial a square in its field?"""
    from .poly import discriminant, _rational_sqrt, _fp_sqrt
    d = discriminant(f)
    if f.F is QQ:
        if d == 0:
            raise CoverError("zero discriminant")
        return _rational_sqrt(d) is not None
    if isinstance(f.F, PrimeField):
        if d == 0:
            raise CoverError("zero discriminant")
        return _fp_sqrt(d, f.F.p) is not None
    raise CoverError("unsupported field")


def cover_discriminant_is_square(p: Poly, q: Poly) -> bool:
    return is_square_in_function_field(discriminant_in_t(p, q))


# ---------------------------------------------------------------------------
# Sturm sequences

def _sign_at(c: Sequence[int], x) -> int:
    if x == math.inf or x == -math.inf:
        if not c:
            return 0
        s = 1 if c[-1] > 0 else -1
        if x == -math.inf and (len(c) - 1) % 2:
            s = -s
        return s
    x = Fraction(x)
    u, v = x.numerator, x.denominator
    d = len(c) - 1
    acc = 0
    for k, ck in enumerate(c):
        acc += ck * u ** k * v ** (d - k)
    return (acc > 0) - (acc < 0)


def sturm_sequence(f: Poly) -> list[list[int]]:
    """Signed remainder sequence of the squarefree part, with positive rescalings only."""
    if f.F is not QQ:
        raise CoverError("Sturm sequences need rational coefficients")
    g = f.gcd(f.derivative())
    sqf = f // g if g.deg > 0 else f
    _, a = integer_primitive(sqf)
    _, b = integer_primitive(sqf.derivative())
    seq = [a, b]
    while len(seq[-1]) > 1:
        A, B = seq[-2], seq[-1]
        e = len(A) - len(B) + 1
        # lc(B)^e * A = Q*B + R; keep R a positive multiple of -rem(A, B)
        R = _int_prem(A, B)
        if B[-1] < 0 and e % 2:
            R = [-x for x in R]
        R = [-x for x in R]
        if not R:
            break
        c = math.gcd(*R)
        seq.append([x // c for x in R])
    return seq


def sturm_count(f: Poly, a=-math.inf, b=math.inf) -> int:
    """Number of distinct real roots of ``f`` in ``(a, b]``."""
    if a > b:
        raise CoverError("empty interval")
    if f.deg < 1:
        return 0
    seq = sturm_sequence(f)

    def variations(x):
        signs = [s for s in (_sign_at(c, x) for c in seq) if s]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(a) - variations(b)


# ---------------------------------------------------------------------------
# Frobenius cycle types

@dataclass
class DedekindSample:
    t: int
    cycle_type: CycleType | None     # None: skipped (inseparable or degree drop)
    reason: str = ""


def reduce_mod(f: Poly, prime: int) -> list[int]:
    """Coefficients of a rational polynomial modulo a prime (error on bad denominators)."""
    out = []
    for c in f.c:
        c = Fraction(c)
        if c.denominator % prime == 0:
            raise CoverError(f"prime {prime} divides a denominator")
        out.append(c.numerator * pow(c.denominator, -1, prime) % prime)
    return fp.strip(out)


def dedekind_cycle_samples(p: Poly, q: Poly, prime: int, t_values: Sequence[int]) -> list[DedekindSample]:
    """Factor degrees of ``p - t0*q`` mod ``prime``: Frobenius cycle types."""
    n = cover_degree(p, q)
    P = reduce_mod(p, prime)
    Q = reduce_mod(q, prime)
    out = []
    for t0 in t_values:
        f = fp.sub(P, fp.scale(Q, t0, prime), prime)
        if len(f) - 1 != n:
            out.append(DedekindSample(t0, None, "degree drops"))
            continue
        if len(fp.gcd(f, fp.deriv(f, prime), prime)) > 1:
            out.append(DedekindSample(t0, None, "not squarefree"))
            continue
        out.append(DedekindSample(t0, CycleType(tuple(fp.factor_degrees(f, prime)))))
    return out


def possible_factor_degree_sums(degree_lists: Sequence[Sequence[int]], n: int) -> set[int]:
    """Degrees d < n that could be the degree of a rational factor given mod-p patterns."""
    common = None
    for degs in degree_lists:
        sums = {0}
        for d in degs:
            sums |= {s + d for s in sums}
        sums = {s for s in sums if 0 < s < n}
        common = sums if common is None else common & sums
    return common or set()
