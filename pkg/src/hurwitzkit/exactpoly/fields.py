"""Coefficient fields: rationals, prime fields and quotient rings ``K[z]/(m)``.

A quotient ring by a squarefree but possibly reducible modulus behaves like a
product of fields.  Inverting a zero divisor raises :class:`ZeroDivisorSplit`
carrying a proper factor of the modulus, so callers can split the computation
and retry on each factor (dynamic evaluation).
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ArithmeticError):
    pass


class ZeroDivisorSplit(FieldError):
    """Raised when an element of a quotient ring is a nonzero zero divisor."""

    def __init__(self, ring: "QuotientRing", factor: tuple):
        super().__init__(f"zero divisor modulo a factor of degree {len(factor) - 1}")
        self.ring = ring
        self.factor = factor        # monic proper factor of ring.modulus, low-first


class Rationals:
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    @staticmethod
    def coerce(x) -> Fraction:
        return x if isinstance(x, Fraction) else Fraction(x)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a * self.inv(b)

    @staticmethod
    def is_zero(a) -> bool:
        return not a

    @staticmethod
    def is_one(a) -> bool:
        return a == 1

    @staticmethod
    def render(a) -> str:
        return str(a)


QQ = Rationals()


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    @staticmethod
    def is_one(a) -> bool:
        return a == 1

    @staticmethod
    def render(a) -> str:
        return str(a)


class QuotientRing:
    """``base[z]/(modulus)`` with elements stored as coefficient tuples of length ``d``."""

    def __init__(self, base, modulus):
        mod = [base.coerce(c) for c in modulus]
        while mod and base.is_zero(mod[-1]):
            mod.pop()
        if len(mod) < 2:
            raise FieldError("modulus must have positive degree")
        lc_inv = base.inv(mod[-1])
        self.base = base
        self.modulus = tuple(base.mul(c, lc_inv) for c in mod)
        self.d = len(self.modulus) - 1
        self.char = base.char
        self.zero = tuple([base.zero] * self.d)
        self.one = tuple([base.one] + [base.zero] * (self.d - 1))

    def __repr__(self):
        return f"{self.base!r}[z]/({_render_poly(self.base, self.modulus, 'z')})"

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and other.base == self.base and other.modulus == self.modulus

    def __hash__(self):
        return hash((self.base, self.modulus))

    @property
    def size(self) -> int | None:
        return self.base.p ** self.d if isinstance(self.base, PrimeField) else None

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.d:
            return x
        return tuple([self.base.coerce(x)] + [self.base.zero] * (self.d - 1))

    def generator(self):
        """The class of ``z``."""
        if self.d == 1:
            return (self.base.neg(self.modulus[0]),)
        return tuple([self.base.zero, self.base.one] + [self.base.zero] * (self.d - 2))

    def embed(self, coeffs):
        """Reduce an arbitrary base polynomial (low-first) modulo the modulus."""
        return self._reduce(list(coeffs))

    def _reduce(self, c: list) -> tuple:
        B, m, d = self.base, self.modulus, self.d
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if not B.is_zero(top):
                for i in range(d):
                    c[k - d + i] = B.sub(c[k - d + i], B.mul(top, m[i]))
        c = c[:d]
        c.extend([B.zero] * (d - len(c)))
        return tuple(c)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        prod = [B.zero] * (2 * self.d - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        return self._reduce(prod)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def is_one(self, a) -> bool:
        return a == self.one

    def inv(self, a):
        """Inverse by extended Euclid; a nontrivial gcd raises ZeroDivisorSplit."""
        B = self.base
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        g, s = _base_xgcd(B, list(a), list(self.modulus))
        if len(g) > 1:
            raise ZeroDivisorSplit(self, tuple(g))
        return self._reduce(s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def render(self, a) -> str:
        return "(" + _render_poly(self.base, a, "z") + ")"


# ---------------------------------------------------------------------------
# small helpers on base-field coefficient lists

def _strip(B, c: list) -> list:
    while c and B.is_zero(c[-1]):
        c.pop()
    return c


def _base_divmod(B, a: list, b: list):
    a = _strip(B, list(a))
    b = _strip(B, list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = B.inv(b[-1])
    db = len(b) - 1
    q = [B.zero] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        coef = B.mul(a[-1], inv)
        q[k] = coef
        for i in range(db + 1):
            a[k + i] = B.sub(a[k + i], B.mul(coef, b[i]))
        _strip(B, a)
    return q, a


def _base_xgcd(B, a: list, m: list):
    """Monic gcd(a, m) and s with s*a = gcd mod m."""
    r0, r1 = _strip(B, list(m)), _strip(B, list(a))
    s0, s1 = [], [B.one]
    while r1:
        q, r = _base_divmod(B, r0, r1)
        r0, r1 = r1, r
        qs = _base_mul(B, q, s1)
        s0, s1 = s1, _base_sub(B, s0, qs)
    inv = B.inv(r0[-1])
    return [B.mul(c, inv) for c in r0], [B.mul(c, inv) for c in s0]


def _base_mul(B, a, b):
    if not a or not b:
        return []
    out = [B.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = B.add(out[i + j], B.mul(x, y))
    return _strip(B, out)


def _base_sub(B, a, b):
    n = max(len(a), len(b))
    out = [B.sub(a[i] if i < len(a) else B.zero, b[i] if i < len(b) else B.zero) for i in range(n)]
    return _strip(B, out)


def _render_poly(B, coeffs, var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if B.is_zero(c):
            continue
        cs = B.render(c)
        if k == 0:
            terms.append(cs)
        else:
            mon = var if k == 1 else f"{var}^{k}"
            terms.append(mon if cs == "1" else f"{cs}*{mon}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24; strong probable prime above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int):
    """Primes descending from ``bound`` (exclusive)."""
    n = bound - 1
    while n > 2:
        if is_prime(n):
            yield n
        n -= 1
