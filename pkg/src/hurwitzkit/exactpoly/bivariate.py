"""Factor degrees of ``f1(X) f2(Y) - f2(X) f1(Y)`` over a prime field.

The bivariate polynomial is shifted to ``Y = y0 + Z`` at a point where the
univariate specialization stays squarefree of full degree, its factors are
lifted to power series in ``Z`` (linear multifactor Hensel lifting) and
recombined into true factors in ``GF(p)[X, Z]``.  Irreducibility of each
recombined factor is certified by irreducibility of its specialization or by
the exhaustive subset search.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fp
from .fields import is_prime
from .poly import Poly
from .ramification import reduce_mod


class FactorError(ValueError):
    pass


@dataclass
class FactorRun:
    prime: int
    y0: int
    specialization_degrees: list[int]
    factor_degrees: list[int]


@dataclass
class SubcoverFactorization:
    degrees: list[int]                     # X-degrees, descending
    runs: list[FactorRun] = field(default_factory=list)
    rejected: list[FactorRun] = field(default_factory=list)


def _taylor_shift(c: list[int], y0: int, p: int) -> list[int]:
    """Coefficients of ``c(y0 + Z)`` in ``Z``."""
    c = list(c)
    n = len(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] = (c[k] + y0 * c[k + 1]) % p
    return c


def _series_mul(A: np.ndarray, B: np.ndarray, M: int, p: int) -> np.ndarray:
    """Product of bivariate arrays ``[z, x]`` truncated to ``z < M``."""
    za, xa = A.shape
    zb, xb = B.shape
    out = np.zeros((min(M, za + zb - 1), xa + xb - 1), dtype=np.int64)
    for i in range(min(za, M)):
        row = A[i]
        if not row.any():
            continue
        for j in range(min(zb, M - i)):
            if B[j].any():
                out[i + j] += np.convolve(row, B[j]) % p
        out %= p
    return out


def _bivariate(F1: list[int], F2: list[int], y0: int, p: int):
    """``G[z, x]`` for ``F(X, y0 + Z) = f1(X) f2(y0+Z) - f2(X) f1(y0+Z)``."""
    n = max(len(F1), len(F2)) - 1
    a = _taylor_shift(F2, y0, p)
    b = _taylor_shift(F1, y0, p)
    nz = max(len(a), len(b))
    G = np.zeros((nz, n + 1), dtype=np.int64)
    f1 = np.array(F1 + [0] * (n + 1 - len(F1)), dtype=np.int64)
    f2 = np.array(F2 + [0] * (n + 1 - len(F2)), dtype=np.int64)
    for k in range(nz):
        ak = a[k] if k < len(a) else 0
        bk = b[k] if k < len(b) else 0
        G[k] = (ak * f1 - bk * f2) % p
    return G


def _trim_x(G: np.ndarray) -> np.ndarray:
    nz = np.nonzero(G.any(axis=0))[0]
    return G[:, : nz[-1] + 1] if len(nz) else G[:, :1]


def _trim_z(G: np.ndarray) -> np.ndarray:
    nz = np.nonzero(G.any(axis=1))[0]
    return G[: nz[-1] + 1] if len(nz) else G[:1]


def _hensel_lift(H: np.ndarray, factors: list[list[int]], M: int, p: int) -> list[np.ndarray]:
    """Lift monic ``factors`` of ``H[0]`` to series factors of monic ``H`` mod ``Z^M``."""
    n = H.shape[1] - 1
    prod0 = [1]
    for g in factors:
        prod0 = fp.mul(prod0, g, p)
    cof = []
    for g in factors:
        Pi = fp.divmod_(prod0, g, p)[0]
        cof.append(_inverse_mod(Pi, g, p))
    lifted = []
    for g in factors:
        A = np.zeros((M, len(g)), dtype=np.int64)
        A[0] = g
        lifted.append(A)
    for k in range(1, M):
        prod = lifted[0][: k + 1]
        for A in lifted[1:]:
            prod = _series_mul(prod, A[: k + 1], k + 1, p)
        row = np.zeros(n + 1, dtype=np.int64)
        Hk = H[k] if k < H.shape[0] else np.zeros(n + 1, dtype=np.int64)
        row[: len(Hk)] += Hk
        if prod.shape[0] > k:
            pk = prod[k]
            row[: len(pk)] -= pk[: n + 1]
        e = fp.strip([int(x) % p for x in row])
        if not e:
            continue
        for i, g in enumerate(factors):
            d = fp.mod(fp.mul(cof[i], e, p), g, p)
            A = lifted[i]
            A[k, : len(d)] = d
    return lifted


def _inverse_mod(a: list[int], m: list[int], p: int) -> list[int]:
    r0, r1 = list(m), fp.mod(a, m, p)
    s0, s1 = [], [1]
    while r1:
        q, r = fp.divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, fp.sub(s0, fp.mul(q, s1, p), p)
    if len(r0) != 1:
        raise FactorError("factors are not coprime")
    inv = pow(r0[0], -1, p)
    return fp.scale(s0, inv, p)


def _primitive_x(C: np.ndarray, p: int) -> np.ndarray:
    """Divide a bivariate array by the gcd (in GF(p)[Z]) of its X-coefficients."""
    cols = [fp.strip([int(v) for v in C[:, j]]) for j in range(C.shape[1])]
    g = []
    for c in cols:
        if c:
            g = fp.gcd(g, c, p) if g else fp.monic(c, p)
            if len(g) == 1:
                break
    if len(g) > 1:
        cols = [fp.divmod_(c, g, p)[0] if c else [] for c in cols]
    nz = max((len(c) for c in cols), default=1)
    out = np.zeros((max(nz, 1), C.shape[1]), dtype=np.int64)
    for j, c in enumerate(cols):
        out[: len(c), j] = c
    return _trim_z(out)


def _exact_divide(G: np.ndarray, h: np.ndarray, p: int):
    """``G / h`` in GF(p)[Z][X] if exact, else None."""
    Gc = [fp.strip([int(v) for v in G[:, j]]) for j in range(G.shape[1])]
    hc = [fp.strip([int(v) for v in h[:, j]]) for j in range(h.shape[1])]
    while hc and not hc[-1]:
        hc.pop()
    while Gc and not Gc[-1]:
        Gc.pop()
    dh = len(hc) - 1
    if dh < 0 or len(Gc) - 1 < dh:
        return None
    q = [[] for _ in range(len(Gc) - dh)]
    for k in range(len(Gc) - 1 - dh, -1, -1):
        top = Gc[k + dh]
        if not top:
            continue
        c, rem = fp.divmod_(top, hc[-1], p)
        if rem:
            return None
        q[k] = c
        for i in range(dh + 1):
            if hc[i]:
                Gc[k + i] = fp.sub(Gc[k + i], fp.mul(c, hc[i], p), p)
    if any(Gc[:dh]):
        return None
    nz = max((len(c) for c in q), default=1)
    out = np.zeros((max(nz, 1), len(q)), dtype=np.int64)
    for j, c in enumerate(q):
        out[: len(c), j] = c
    return _trim_z(out)


def _series_inverse(L: list[int], M: int, p: int) -> list[int]:
    inv0 = pow(L[0], -1, p)
    out = [inv0] + [0] * (M - 1)
    for k in range(1, M):
        acc = 0
        for i in range(1, min(k, len(L) - 1) + 1):
            acc += L[i] * out[k - i]
        out[k] = (-acc * inv0) % p
    return out


def _factor_once(F1: list[int], F2: list[int], y0: int, p: int, spec: list[list[int]],
                 subset_budget: int) -> list[int]:
    G = _trim_z(_bivariate(F1, F2, y0, p))
    n = G.shape[1] - 1
    dz = G.shape[0] - 1
    M = 2 * dz + 2
    L = [int(v) for v in G[:, n]]
    Linv = _series_inverse(L, M, p)
    H = np.zeros((M, n + 1), dtype=np.int64)
    for k in range(M):
        acc = np.zeros(n + 1, dtype=np.int64)
        for i in range(min(k, dz) + 1):
            acc = (acc + Linv[k - i] * G[i]) % p
        H[k] = acc
    lifted = _hensel_lift(H, spec, M, p)
    Lser = np.array(L + [0] * (M - len(L)), dtype=np.int64)[:, None]

    remaining = list(range(len(spec)))
    degrees = []
    current = G
    tested = 0
    s = 1
    while 2 * s <= len(remaining):
        found = False
        for S in itertools.combinations(remaining, s):
            tested += 1
            if tested > subset_budget:
                raise FactorError(f"recombination exceeded {subset_budget} subsets")
            cand = Lser
            for i in S:
                cand = _series_mul(cand, lifted[i], M, p)
            cand = _primitive_x(_trim_x(cand % p), p)
            quot = _exact_divide(current, cand, p)
            if quot is None:
                continue
            degrees.append(cand.shape[1] - 1)
            current = _trim_x(quot)
            remaining = [i for i in remaining if i not in S]
            found = True
            break
        if not found:
            s += 1
    if remaining:
        degrees.append(current.shape[1] - 1)
    return sorted(degrees, reverse=True)


def subcover_factor_degrees(f1: Poly, f2: Poly, primes: Sequence[int] = (31, 101, 1009),
                            specializations: int = 3, seed: int = 0, max_tries: int = 40,
                            scan: int = 60, subset_budget: int = 20000) -> SubcoverFactorization:
    """X-degrees of the irreducible factors of ``f1(X) f2(Y) - f2(X) f1(Y)`` over GF(p).

    Runs at least ``specializations`` independent (prime, y0) choices and
    requires every run to give the same multiset.
    """
    rng = random.Random(seed)
    runs: list[FactorRun] = []
    rejected: list[FactorRun] = []
    n = max(f1.deg, f2.deg)
    prime_cycle = itertools.cycle(primes)
    tries = 0
    used: set[tuple[int, int]] = set()
    while len(runs) < specializations:
        tries += 1
        if tries > max_tries:
            raise FactorError(f"only {len(runs)} usable specializations after {max_tries} tries")
        p = next(prime_cycle)
        if not is_prime(p):
            raise FactorError(f"{p} is not prime")
        try:
            F1 = reduce_mod(f1, p)
            F2 = reduce_mod(f2, p)
        except ValueError:
            continue
        if max(len(F1), len(F2)) - 1 != n:
            continue
        # choose y0 with the fewest specialized factors among a scan
        best = None
        cands = list(range(p)) if p <= scan else rng.sample(range(p), scan)
        for y0 in cands:
            if (p, y0) in used:
                continue
            f0 = fp.sub(fp.scale(F1, fp.evaluate(F2, y0, p), p), fp.scale(F2, fp.evaluate(F1, y0, p), p), p)
            if len(f0) - 1 != n:
                continue
            if len(fp.gcd(f0, fp.deriv(f0, p), p)) > 1:
                continue
            degs = fp.factor_degrees(f0, p)
            if best is None or len(degs) < len(best[1]):
                best = (y0, degs, f0)
        if best is None:
            continue
        y0, degs, f0 = best
        used.add((p, y0))
        _, fac = fp.factor(f0, p, seed=rng.randrange(1 << 30))
        spec = [g for g, m in fac]
        result = _factor_once(F1, F2, y0, p, spec, subset_budget)
        run = FactorRun(p, y0, degs, result)
        if runs and result != runs[0].factor_degrees:
            rejected.append(run)
            continue
        runs.append(run)
    if rejected and len(rejected) >= len(runs):
        raise FactorError("specializations disagree on the factor degrees")
    return SubcoverFactorization(runs[0].factor_degrees, runs, rejected)
