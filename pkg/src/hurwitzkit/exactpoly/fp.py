"""Fast polynomial arithmetic over GF(p) on plain int lists (low-first), and
Cantor-Zassenhaus factorization."""

from __future__ import annotations

import random
from collections import Counter


def strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = (out[i] + y) % p
    return strip(out)


def sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return strip(out)


def scale(a, c, p):
    c %= p
    return strip([x * c % p for x in a]) if c else []


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return strip([x % p for x in out])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], strip(r)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        top = r[k + db] % p
        if top:
            c = top * inv % p
            q[k] = c
            for i in range(db + 1):
                r[k + i] = (r[k + i] - c * b[i]) % p
    return strip(q), strip([x % p for x in r[:db]])


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def gcd(a, b, p):
    a, b = strip(list(a)), strip(list(b))
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def deriv(a, p):
    return strip([k * a[k] % p for k in range(1, len(a))])


def powmod(base, e: int, m, p):
    result = [1]
    base = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def from_ints(c, p):
    return strip([int(x) % p for x in c])


# ---------------------------------------------------------------------------
# factorization

def squarefree_decomposition(f, p) -> list[tuple[list, int]]:
    """Monic squarefree factors with multiplicities (characteristic-p aware)."""
    f = monic(strip(list(f)), p)
    out: Counter = Counter()
    parts: dict[int, list] = {}

    def put(g, m):
        if len(g) > 1:
            parts[m] = mul(parts[m], g, p) if m in parts else g

    def rec(f, mult):
        if len(f) <= 1:
            return
        fp = deriv(f, p)
        if not fp:
            rec([f[k] for k in range(0, len(f), p)], mult * p)
            return
        c = gcd(f, fp, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = gcd(w, c, p)
            put(monic(divmod_(w, y, p)[0], p), i * mult)
            w = y
            c = divmod_(c, y, p)[0]
            i += 1
        if len(c) > 1:
            rec([c[k] for k in range(0, len(c), p)], mult * p)

    rec(f, 1)
    del out
    return sorted(((monic(g, p), m) for m, g in parts.items()), key=lambda t: (t[1], len(t[0])))


def distinct_degree(f, p) -> list[tuple[list, int]]:
    """For squarefree monic ``f``: products of all irreducible factors of each degree."""
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = mod(h, f, p)
    if len(f) > 1:
        out.append((monic(f, p), len(f) - 1))
    return out


def equal_degree(f, d: int, p, rng: random.Random) -> list[list]:
    """Split a product of degree-``d`` irreducibles (Cantor-Zassenhaus; trace map for p = 2)."""
    n = len(f) - 1
    if n == d:
        return [f]
    e = (p ** d - 1) // 2
    while True:
        a = strip([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            b, sq = a, a
            for _ in range(d - 1):
                sq = mod(mul(sq, sq, p), f, p)
                b = add(b, sq, p)
        else:
            b = sub(powmod(a, e, f, p), [1], p)
        g = gcd(f, b, p)
        if 1 < len(g) < len(f):
            h = monic(divmod_(f, g, p)[0], p)
            return equal_degree(g, d, p, rng) + equal_degree(h, d, p, rng)


def factor(f, p, seed: int = 0) -> tuple[int, list[tuple[list, int]]]:
    """``(lc, [(monic irreducible, multiplicity), ...])`` sorted canonically."""
    f = strip([x % p for x in f])
    if not f:
        raise ValueError("factorization of zero")
    lc = f[-1]
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_decomposition(f, p):
        for h, d in distinct_degree(g, p):
            for irr in equal_degree(h, d, p, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return lc, out


def is_irreducible(f, p) -> bool:
    """Rabin's test."""
    f = monic(strip(list(f)), p)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    primes = [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, int(q ** 0.5) + 1))]
    for q in primes:
        h = sub(powmod([0, 1], p ** (n // q), f, p), [0, 1], p)
        if len(gcd(f, h, p)) > 1:
            return False
    return not sub(powmod([0, 1], p ** n, f, p), [0, 1], p)


def find_irreducible(d: int, p, seed: int = 0) -> list:
    """Deterministic search for a monic irreducible of degree ``d``."""
    if d == 1:
        return [0, 1]
    rng = random.Random(seed)
    while True:
        cand = [rng.randrange(p) for _ in range(d)] + [1]
        if is_irreducible(cand, p):
            return cand


def factor_degrees(f, p) -> list[int]:
    """Degrees of irreducible factors (with multiplicity) of ``f``."""
    f = strip([x % p for x in f])
    degs = []
    for g, m in squarefree_decomposition(f, p):
        for h, d in distinct_degree(g, p):
            degs.extend([d] * (((len(h) - 1) // d) * m))
    return sorted(degs, reverse=True)


def interpolate(xs, ys, p) -> list:
    """Polynomial through ``(xs[i], ys[i])`` mod ``p`` (Newton form)."""
    n = len(xs)
    coef = [y % p for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    out = [0]
    for i in range(n - 1, -1, -1):
        out = add(mul(out, [(-xs[i]) % p, 1], p), [coef[i]], p)
    return out
