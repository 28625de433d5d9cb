"""Dense univariate polynomials over an exact field, and rational functions."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import QQ, FieldError, PrimeField, QuotientRing, _render_poly


class PolyError(ArithmeticError):
    pass


class Poly:
    """Coefficients low-first over ``field``; the zero polynomial has no coefficients."""

    __slots__ = ("F", "c")

    def __init__(self, coeffs: Iterable, field=QQ):
        F = field
        c = [F.coerce(x) for x in coeffs]
        while c and F.is_zero(c[-1]):
            c.pop()
        self.F = F
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: list, F) -> "Poly":
        while c and F.is_zero(c[-1]):
            c.pop()
        p = object.__new__(cls)
        p.F = F
        p.c = tuple(c)
        return p

    @classmethod
    def x(cls, field=QQ) -> "Poly":
        return cls._raw([field.zero, field.one], field)

    @classmethod
    def const(cls, a, field=QQ) -> "Poly":
        return cls._raw([field.coerce(a)], field)

    @classmethod
    def monomial(cls, k: int, coef=1, field=QQ) -> "Poly":
        return cls._raw([field.zero] * k + [field.coerce(coef)], field)

    @classmethod
    def from_roots(cls, roots, field=QQ) -> "Poly":
        out = cls.const(1, field)
        for r in roots:
            out = out * cls._raw([field.neg(field.coerce(r)), field.one], field)
        return out

    # -- structure ---------------------------------------------------------

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self):
        if not self.c:
            raise PolyError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def coeff(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else self.F.zero

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c and (self.F == other.F or not self.c)
        try:
            return self == Poly.const(other, self.F)
        except (FieldError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.F != self.F:
                raise PolyError(f"field mismatch: {self.F!r} vs {other.F!r}")
            return other
        return Poly.const(other, self.F)

    def map(self, field, fn=None) -> "Poly":
        """Coefficientwise image in another field (default: coercion)."""
        fn = fn or field.coerce
        return Poly._raw([fn(a) for a in self.c], field)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        F = self.F
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return Poly._raw(out, F)

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return Poly._raw([F.neg(a) for a in self.c], F)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        F = self.F
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw([], F)
        if len(b) == 1:
            y = b[0]
            return Poly._raw([F.mul(x, y) for x in a], F)
        if len(a) == 1:
            x = a[0]
            return Poly._raw([F.mul(x, y) for y in b], F)
        out = [F.zero] * (len(a) + len(b) - 1)
        if F is QQ:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
        else:
            for i, x in enumerate(a):
                if F.is_zero(x):
                    continue
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly._raw(out, F)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = Poly.const(1, self.F)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, a) -> "Poly":
        F = self.F
        a = F.coerce(a)
        return Poly._raw([F.mul(x, a) for x in self.c], F)

    def divmod(self, other) -> tuple["Poly", "Poly"]:
        b = self._lift(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        inv = F.inv(b.c[-1])
        db = b.deg
        r = list(self.c)
        if len(r) <= db:
            return Poly._raw([], F), self
        q = [F.zero] * (len(r) - db)
        bc = b.c
        for k in range(len(r) - 1 - db, -1, -1):
            top = r[k + db]
            if F.is_zero(top):
                continue
            coef = F.mul(top, inv)
            q[k] = coef
            for i in range(db + 1):
                r[k + i] = F.sub(r[k + i], F.mul(coef, bc[i]))
        return Poly._raw(q, F), Poly._raw(r[:db], F)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise PolyError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.F.inv(self.lc)
        return self.scale(inv)

    def derivative(self) -> "Poly":
        F = self.F
        return Poly._raw([F.mul(F.coerce(k), self.c[k]) for k in range(1, len(self.c))], F)

    def __call__(self, x):
        """Horner evaluation at a field element, or composition with a Poly."""
        if isinstance(x, Poly):
            return self.compose(x)
        F = self.F
        x = F.coerce(x)
        acc = F.zero
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def evaluate(self, x):
        return self(x)

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly._raw([], self.F)
        for a in reversed(self.c):
            acc = acc * g + Poly.const(a, self.F)
        return acc

    def shift(self, c) -> "Poly":
        """``self(X + c)``."""
        return self.compose(Poly._raw([self.F.coerce(c), self.F.one], self.F))

    def reverse(self, n: int | None = None) -> "Poly":
        """``X^n * self(1/X)`` with ``n`` defaulting to the degree."""
        n = self.deg if n is None else n
        c = list(self.c) + [self.F.zero] * (n + 1 - len(self.c))
        return Poly._raw(c[::-1], self.F)

    # -- gcd family --------------------------------------------------------

    def gcd(self, other) -> "Poly":
        a, b = self, self._lift(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """Monic ``g`` and ``s, t`` with ``s*self + t*other = g``."""
        F = self.F
        r0, r1 = self, self._lift(other)
        s0, s1 = Poly.const(1, F), Poly._raw([], F)
        t0, t1 = Poly._raw([], F), Poly.const(1, F)
        while r1:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = F.inv(r0.lc)
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    # -- display -----------------------------------------------------------

    def __str__(self):
        return _render_poly(self.F, self.c, "X")

    def __repr__(self):
        return f"Poly({self}, {self.F!r})"

    def to_fractions(self) -> list[Fraction]:
        if self.F is not QQ:
            raise PolyError("not a rational polynomial")
        return list(self.c)


# ---------------------------------------------------------------------------
# integer-coefficient helpers

def integer_primitive(f: Poly) -> tuple[Fraction, list[int]]:
    """``f = content * g`` with ``g`` integral, primitive, positive leading coefficient."""
    if f.F is not QQ:
        raise PolyError("integer_primitive needs rational coefficients")
    if f.is_zero():
        return Fraction(0), []
    den = math.lcm(*(c.denominator for c in f.c))
    ints = [int(c * den) for c in f.c]
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), [x // g for x in ints]


def _int_content(c: Sequence[int]) -> int:
    return math.gcd(*c) if c else 0


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder ``lc(b)^(da-db+1) * a mod b`` over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(a) - 1 - db + 1
    for _ in range(max(steps, 0)):
        if len(r) - 1 >= db and r:
            top = r[-1]
            shift = len(r) - 1 - db
            r = [x * lb for x in r]
            for i in range(db + 1):
                r[shift + i] -= top * b[i]
            r.pop()
        else:
            r = [x * lb for x in r]
        while r and r[-1] == 0:
            r.pop()
    return r


def resultant_int(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant of integer polynomials (low-first) by the subresultant PRS."""
    A = list(a)
    B = list(b)
    while A and A[-1] == 0:
        A.pop()
    while B and B[-1] == 0:
        B.pop()
    if not A or not B:
        return 0
    s = 1
    if len(A) < len(B):
        if (len(A) - 1) * (len(B) - 1) % 2:
            s = -1
        A, B = B, A
    if len(B) == 1:
        return s * B[0] ** (len(A) - 1)
    ca, cb = _int_content(A), _int_content(B)
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    t = ca ** (len(B) - 1) * cb ** (len(A) - 1)
    g = h = 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _int_prem(A, B)
        A = B
        if not R:
            return 0
        div = g * h ** delta
        B = [x // div for x in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
        if len(B) == 1:
            da = len(A) - 1
            if da == 0:
                return s * t
            hh = B[0] ** da // h ** (da - 1) if da >= 1 else 1
            return s * t * hh


def resultant(f: Poly, g: Poly):
    """Resultant over the coefficient field (Euclid; integer PRS for rationals)."""
    if f.F != g.F:
        raise PolyError("field mismatch")
    if f.is_zero() or g.is_zero():
        return f.F.zero if not f.is_zero() or not g.is_zero() else f.F.zero
    if f.F is QQ:
        cf, fi = integer_primitive(f)
        cg, gi = integer_primitive(g)
        return Fraction(resultant_int(fi, gi)) * cf ** g.deg * cg ** f.deg
    return _resultant_field(f, g)


def _resultant_field(f: Poly, g: Poly):
    F = f.F
    res = F.one
    a, b = f, g
    while True:
        da, db = a.deg, b.deg
        if db == 0:
            return F.mul(res, _fpow(F, b.c[0], da))
        r = a % b
        if r.is_zero():
            return F.zero
        if da % 2 and db % 2:
            res = F.neg(res)
        res = F.mul(res, _fpow(F, b.lc, da - r.deg))
        a, b = b, r


def _fpow(F, a, k: int):
    out = F.one
    while k:
        if k & 1:
            out = F.mul(out, a)
        a = F.mul(a, a)
        k >>= 1
    return out


def discriminant(f: Poly):
    """``(-1)^(d(d-1)/2) / lc(f) * res(f, f')``."""
    if f.deg < 1:
        raise PolyError("discriminant of a constant polynomial")
    d = f.deg
    F = f.F
    r = resultant(f, f.derivative())
    val = F.div(r, f.lc)
    return F.neg(val) if (d * (d - 1) // 2) % 2 else val


# ---------------------------------------------------------------------------
# squarefree decomposition

def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic pairwise coprime squarefree ``(g_i, i)`` with ``f = lc * prod g_i^i``.

    Yun's algorithm in characteristic zero; in characteristic p the
    derivative-free part is handled by taking p-th roots.
    """
    if f.is_zero():
        raise PolyError("squarefree decomposition of zero")
    if f.deg == 0:
        return []
    if f.F.char == 0:
        return _yun(f.monic())
    return _sqf_charp(f.monic())


def _yun(f: Poly) -> list[tuple[Poly, int]]:
    fp = f.derivative()
    a = f.gcd(fp)
    b = f // a
    c = fp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.deg > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        if a.deg > 0:
            out.append((a, i))
        d = c - b.derivative()
        i += 1
    return out


def _sqf_charp(f: Poly) -> list[tuple[Poly, int]]:
    F = f.F
    p = F.char
    out: dict[int, Poly] = {}

    def add(g: Poly, m: int):
        if g.deg > 0:
            out[m] = out[m] * g if m in out else g

    def rec(f: Poly, mult: int):
        if f.deg <= 0:
            return
        fp = f.derivative()
        if fp.is_zero():
            rec(_pth_root(f), mult * p)
            return
        c = f.gcd(fp)
        w = f // c
        i = 1
        while w.deg > 0:
            y = w.gcd(c)
            add(w // y, i * mult)
            w = y
            c = c // y
            i += 1
        if c.deg > 0:
            rec(_pth_root(c), mult * p)

    rec(f, 1)
    return sorted(((g.monic(), m) for m, g in out.items()), key=lambda t: t[1])


def _pth_root(f: Poly) -> Poly:
    F = f.F
    p = F.char
    if not isinstance(F, PrimeField):
        raise PolyError("p-th roots only implemented over prime fields")
    if any(not F.is_zero(a) for k, a in enumerate(f.c) if k % p):
        raise PolyError("not a p-th power")
    return Poly._raw([f.c[k] for k in range(0, len(f.c), p)], F)


def squarefree_part(f: Poly) -> Poly:
    out = Poly.const(1, f.F)
    for g, _ in squarefree_decomposition(f):
        out = out * g
    return out


def poly_sqrt(f: Poly) -> Poly:
    """``g`` with ``g*g == f`` (positive-leading choice over QQ), or PolyError."""
    F = f.F
    if f.is_zero():
        return f
    if f.deg % 2:
        raise PolyError("odd degree polynomial is not a square")
    n = f.deg // 2
    lead = f.lc
    if F is QQ:
        s = _rational_sqrt(lead)
        if s is None:
            raise PolyError(f"leading coefficient {lead} is not a square")
    elif isinstance(F, PrimeField):
        s = _fp_sqrt(lead, F.p)
        if s is None:
            raise PolyError("leading coefficient is not a square")
    else:
        raise PolyError("poly_sqrt supports QQ and prime fields")
    if F.char == 2:
        raise PolyError("characteristic 2 not supported")
    # top-down: g_{n-k} from the coefficient of X^{2n-k}
    g = [F.zero] * (n + 1)
    g[n] = s
    two_s_inv = F.inv(F.mul(F.coerce(2), s))
    for k in range(1, n + 1):
        acc = f.c[2 * n - k]
        for i in range(1, k):
            acc = F.sub(acc, F.mul(g[n - i], g[n - k + i]))
        g[n - k] = F.mul(acc, two_s_inv)
    root = Poly._raw(g, F)
    if root * root != f:
        raise PolyError("polynomial is not a perfect square")
    return root


def _rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _fp_sqrt(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


# ---------------------------------------------------------------------------
# rational functions

class RationalFunction:
    """``num/den`` in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(1, num.F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.deg > 0:
            num, den = num // g, den // g
        inv = den.F.inv(den.lc)
        self.num = num.scale(inv)
        self.den = den.scale(inv)

    @property
    def F(self):
        return self.num.F

    @property
    def degree(self) -> int:
        return max(self.num.deg, self.den.deg)

    def __eq__(self, other):
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __str__(self):
        if self.den.deg == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def compose(self, h: "RationalFunction") -> "RationalFunction":
        """``self(h(X))`` computed homogeneously."""
        n = self.degree
        a, b = h.num, h.den
        F = self.F
        num = Poly._raw([], F)
        den = Poly._raw([], F)
        apow = [Poly.const(1, F)]
        bpow = [Poly.const(1, F)]
        for _ in range(n):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        for k in range(n + 1):
            term = apow[k] * bpow[n - k]
            num = num + term.scale(self.num.coeff(k))
            den = den + term.scale(self.den.coeff(k))
        return RationalFunction(num, den)


def verify_composition(F: RationalFunction, g: RationalFunction, h: RationalFunction) -> bool:
    """Exact check ``F == g o h``."""
    return F == g.compose(h)


# ---------------------------------------------------------------------------
# parsing

_TERM = re.compile(r"^\s*([+-]?)\s*([0-9/]*)\s*\*?\s*(X(?:\^(\d+))?)?\s*$")


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise PolyError(f"bad rational {s!r}") from None


def parse_poly(text: str, var: str = "X", field=QQ) -> Poly:
    """Parse a sum of terms ``c*X^k``; coefficients are integers or fractions."""
    s = text.replace(" ", "").replace(var, "X")
    if not s:
        raise PolyError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", s)
    coeffs: dict[int, Fraction] = {}
    for t in terms:
        m = re.fullmatch(r"([+-]?)(\d+(?:/\d+)?)?\*?(X(?:\^(\d+))?)?", t)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise PolyError(f"cannot parse term {t!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        k = 0 if not m.group(3) else int(m.group(4) or 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
    n = max(coeffs)
    return Poly([coeffs.get(k, 0) for k in range(n + 1)], QQ).map(field) if field is not QQ else \
        Poly([coeffs.get(k, 0) for k in range(n + 1)], QQ)
