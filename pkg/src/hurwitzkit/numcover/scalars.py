"""Working-precision scalars and small polynomial helpers on coefficient lists.

At 53 bits the scalar type is Python ``complex``; above that it is
``gmpy2.mpc`` evaluated inside a gmpy2 context with the requested mantissa
bits (gmpy2 contexts are thread-local).  Polynomials are
plain lists, constant term first.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from typing import Sequence

import gmpy2


def use_mp(bits: int) -> bool:
    if bits < 53:
        raise ValueError("precision must be at least 53 bits")
    return bits > 53


@contextlib.contextmanager
def precision(bits: int):
    if use_mp(bits):
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            yield
    else:
        yield


def scalar(x, bits: int):
    """Convert a number (int, Fraction, float, complex, mpc, string) to working type."""
    if use_mp(bits):
        if isinstance(x, Fraction):
            return gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator)))
        if isinstance(x, str):
            return parse_complex(x, bits)
        if isinstance(x, int):
            return gmpy2.mpc(gmpy2.mpfr(x))
        return gmpy2.mpc(x)
    if isinstance(x, Fraction):
        return complex(float(x))
    if isinstance(x, str):
        return complex(parse_complex(x, 53))
    return complex(x)


def parse_complex(text: str, bits: int):
    """``"<re> <im>"`` or a single real decimal."""
    parts = text.split()
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise ValueError(f"bad complex number {text!r}")
    if not use_mp(bits):
        return complex(float(parts[0]), float(parts[1]))
    return gmpy2.mpc(gmpy2.mpfr(parts[0]), gmpy2.mpfr(parts[1]))


def format_real(x, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits."""
    if not isinstance(x, type(gmpy2.mpfr(0))):
        return f"{float(x):.{digits - 1}e}"
    if x == 0:
        return f"{0:.{digits - 1}e}"
    mant, exp, _ = x.digits(10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+03d}"


def format_complex(z, digits: int) -> str:
    """Decimal real and imaginary parts with explicit exponents."""
    if isinstance(z, complex) or not hasattr(z, "real"):
        z = complex(z)
        return f"{z.real:.17e} {z.imag:.17e}"
    return f"{format_real(z.real, digits)} {format_real(z.imag, digits)}"


def to_complex(x) -> complex:
    return complex(x)


def poly_from_exact(f, bits: int) -> list:
    """Coefficients of an exact rational polynomial as working scalars."""
    return [scalar(Fraction(c), bits) for c in f.c]


def horner2(c: Sequence, z):
    """``(f(z), f'(z))``."""
    f = c[-1] * 0
    d = f
    for a in reversed(c):
        d = d * z + f
        f = f * z + a
    return f, d


def horner(c: Sequence, z):
    f = c[-1] * 0
    for a in reversed(c):
        f = f * z + a
    return f


def abs_horner(c: Sequence, r) -> float:
    """``sum |c_k| r^k``: scale for relative residuals."""
    s = 0.0
    for a in reversed(c):
        s = s * r + abs(a)
    return s


def padd(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = out[i] + y
    return out


def psub(a: Sequence, b: Sequence) -> list:
    return padd(a, [-y for y in b])


def pscale(a: Sequence, c) -> list:
    return [c * x for x in a]


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def ppow(a: Sequence, e: int) -> list:
    out = [a[0] * 0 + 1]
    base = list(a)
    while e:
        if e & 1:
            out = pmul(out, base)
        e >>= 1
        if e:
            base = pmul(base, base)
    return out


def pderiv(a: Sequence) -> list:
    return [k * a[k] for k in range(1, len(a))] or [a[0] * 0]


def pad(a: Sequence, n: int) -> list:
    """Pad or check length ``n``."""
    a = list(a)
    if len(a) > n:
        raise ValueError("polynomial longer than expected")
    return a + [a[0] * 0 if a else 0] * (n - len(a))
