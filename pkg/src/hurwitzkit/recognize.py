"""Exact values from approximations: continued fractions, LLL relation search,
and exact interpolation of polynomial dependencies between sampled coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import gmpy2

from . import config


class RecognitionError(ValueError):
    pass


class DependentLattice(RecognitionError):
    pass


class InsufficientPrecision(RecognitionError):
    pass


class InterpolationError(RecognitionError):
    pass


# ---------------------------------------------------------------------------
# lattices

@dataclass
class IntegerLattice:
    basis: list[list[int]]

    def __post_init__(self):
        self.basis = [[int(x) for x in v] for v in self.basis]
        if self.basis and len({len(v) for v in self.basis}) != 1:
            raise RecognitionError("lattice vectors must have equal length")

    @property
    def dimension(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram_determinant(self) -> int:
        """``det(B B^T)`` by exact fraction-free elimination."""
        n = self.rank
        G = [[_dot(a, b) for b in self.basis] for a in self.basis]
        return _bareiss_det(G) if n else 1


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _bareiss_det(M: list[list[int]]) -> int:
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def lll_reduce(L: IntegerLattice, delta: Fraction | tuple = config.LLL_DELTA) -> IntegerLattice:
    """LLL reduction in exact integer arithmetic.

    Gram-Schmidt data are kept as integers ``d_i`` (Gram determinants) and
    ``lambda_ij = d_j * mu_ij``, so every step is exact.
    """
    delta = Fraction(*delta) if isinstance(delta, tuple) else Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise RecognitionError("delta must lie in (1/4, 1)")
    a, b_ = delta.numerator, delta.denominator
    B = [list(v) for v in L.basis]
    n = len(B)
    if n == 0:
        return IntegerLattice([])
    # 1-based bookkeeping: d[0] = 1, d[i] for vector i-1
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            B[k] = [x - q * y for x, y in zip(B[k], B[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        B[k], B[k - 1] = B[k - 1], B[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        Bv = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (Bv * t + lm * lam[i][k]) // d[k + 1]
        d[k] = Bv

    d[1] = _dot(B[0], B[0])
    if d[1] == 0:
        raise DependentLattice("zero vector in basis")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(B[k], B[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DependentLattice("basis vectors are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        if b_ * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < a * d[k] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return IntegerLattice(B)


# ---------------------------------------------------------------------------
# rationals

def _as_fraction(x, bits: int | None):
    """Exact binary value of ``x`` plus the number of significant bits it carries."""
    if isinstance(x, Fraction):
        return x, bits if bits is not None else 10 ** 6
    if isinstance(x, int):
        return Fraction(x), bits if bits is not None else 10 ** 6
    if isinstance(x, str):
        s = x.strip()
        mant = s.lower().split("e")[0].lstrip("+-")
        digits = len(mant.replace(".", "").lstrip("0")) or 1
        return Fraction(s), bits if bits is not None else int(digits * math.log2(10))
    if isinstance(x, float):
        return Fraction(x), bits if bits is not None else 53
    if hasattr(x, "precision") and gmpy2.is_finite(x):
        if not isinstance(x, type(gmpy2.mpfr(0))):
            raise TypeError("complex input: pass the real part")
        num, den = x.as_integer_ratio()        # no re-rounding through the context
        return Fraction(int(num), int(den)), bits if bits is not None else x.precision
    raise TypeError(f"cannot interpret {x!r} as a real number")


def recognize_rational(x, max_height: int, bits: int | None = None, guard: int = 8) -> Fraction | None:
    """Smallest continued-fraction convergent agreeing with ``x`` to its precision.

    Returns None when no convergent of height at most ``max_height`` agrees.
    """
    fx, prec = _as_fraction(x, bits)
    tol = Fraction(max(1, abs(fx))) / (Fraction(2) ** max(prec - guard, 0))
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rest = fx
    while True:
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if max(abs(h1), k1) > max_height:
            return None
        cand = Fraction(h1, k1)
        if abs(cand - fx) <= tol:
            return cand
        frac = rest - a
        if frac == 0:
            return None
        rest = 1 / frac


# ---------------------------------------------------------------------------
# algebraic numbers

@dataclass
class RecognizedValue:
    coeffs: list[int]              # low-first, content-free, positive leading coefficient
    residual: float
    margin: float
    bits: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            mag = abs(c)
            body = f"{mag}{mon}" if (mag != 1 or not mon) else mon
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def provenance(self) -> str:
        return f"# recognized at {self.bits} bits, margin 2^{int(math.log2(max(self.margin, 1)))}"


def _precision_of(z, bits: int | None) -> int:
    if bits is not None:
        return bits
    if hasattr(z, "precision"):
        p = z.precision
        return min(p) if isinstance(p, tuple) else p
    return 53


def _squarefree(coeffs: list[int]) -> bool:
    from .exactpoly.poly import Poly

    f = Poly([Fraction(c) for c in coeffs])
    return f.gcd(f.derivative()).deg == 0


def recognize_algebraic(z, max_degree: int, height_bound: int, bits: int | None = None,
                        guard: int = 16) -> RecognizedValue | None:
    """Minimal-polynomial candidate for ``z`` by lattice reduction.

    Degrees 1..max_degree are tried in turn.  A degree is accepted when the
    shortest reduced vector annihilates ``z`` to ``2^(-bits/4)`` times its
    height and beats the runner-up by the configured margin.  Returns None
    when no degree qualifies.
    """
    prec = _precision_of(z, bits)
    need = (max_degree + 1) * math.log2(max(height_bound, 2)) + guard
    if prec < need:
        raise InsufficientPrecision(
            f"{prec} bits cannot separate degree-{max_degree} relations of height {height_bound}; "
            f"need at least {math.ceil(need)}")
    with gmpy2.context(gmpy2.get_context(), precision=prec + 32):
        zz = gmpy2.mpc(z)
        powers = [gmpy2.mpc(1)]
        for _ in range(max_degree):
            powers.append(powers[-1] * zz)
        scale = gmpy2.mpfr(2) ** (prec - 8)
        cols = [[int(gmpy2.rint(scale * w.real)) for w in powers],
                [int(gmpy2.rint(scale * w.imag)) for w in powers]]
        for deg in range(1, max_degree + 1):
            basis = []
            for i in range(deg + 1):
                row = [0] * (deg + 1)
                row[i] = 1
                basis.append(row + [cols[0][i], cols[1][i]])
            red = lll_reduce(IntegerLattice(basis)).basis
            norms = sorted((math.sqrt(_dot(v, v)), idx) for idx, v in enumerate(red))
            best = red[norms[0][1]]
            margin = norms[1][0] / max(norms[0][0], 1e-300)
            coeffs = best[: deg + 1]
            if coeffs[-1] == 0 or margin < config.RECOGNITION_MARGIN:
                continue
            g = 0
            for c in coeffs:
                g = math.gcd(g, c)
            coeffs = [c // g for c in coeffs]
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            height = max(abs(c) for c in coeffs)
            if height > height_bound:
                continue
            val = sum((c * w for c, w in zip(coeffs, powers)), gmpy2.mpc(0))
            residual = float(abs(val))
            if residual >= 2.0 ** (-prec / 4) * height:
                continue
            if not _squarefree(coeffs):
                continue
            return RecognizedValue(coeffs, residual, margin, prec)
    return None


# ---------------------------------------------------------------------------
# dependencies between sampled coefficients

@dataclass
class Dependency:
    coeffs: dict[tuple[int, int], int]   # (i, j) -> coefficient of beta^i gamma^j

    def total_degree(self) -> int:
        return max(i + j for i, j in self.coeffs)

    def __call__(self, beta, gamma):
        return sum(c * Fraction(beta) ** i * Fraction(gamma) ** j for (i, j), c in self.coeffs.items())

    def render(self, names: tuple[str, str] = ("beta", "gamma")) -> str:
        def mon(i, j):
            parts = []
            for name, e in ((names[0], i), (names[1], j)):
                if e == 1:
                    parts.append(name)
                elif e > 1:
                    parts.append(f"{name}^{e}")
            return "*".join(parts)

        out = []
        for (i, j) in sorted(self.coeffs, key=lambda m: (-(m[0] + m[1]), -m[1], -m[0])):
            c = self.coeffs[(i, j)]
            m = mon(i, j)
            body = m if abs(c) == 1 and m else (f"{abs(c)}*{m}" if m else str(abs(c)))
            out.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self):
        return self.render()


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace via reduced row echelon form."""
    M = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def interpolate_dependency(samples: Sequence[tuple], bounds: tuple[int, int]) -> Dependency:
    """Integer polynomial ``P(beta, gamma)`` of minimal total degree vanishing on the samples.

    Monomials ``beta^i gamma^j`` with ``i <= bounds[0]`` and ``j <= bounds[1]``
    are allowed.  The minimal-total-degree part of the exact nullspace must be
    one-dimensional, otherwise more samples are needed.
    """
    db, dg = bounds
    if db < 0 or dg < 0:
        raise InterpolationError("degree bounds must be non-negative")
    pts = [(Fraction(b), Fraction(g)) for b, g in samples]
    if len(set(pts)) != len(pts):
        raise InterpolationError("duplicate samples")
    # columns ordered so that the minimal-total-degree generator is last in echelon order
    monos = sorted(((i, j) for i in range(db + 1) for j in range(dg + 1)),
                   key=lambda m: (-(m[0] + m[1]), -m[1], -m[0]))
    rows = [[b ** i * g ** j for i, j in monos] for b, g in pts]
    null = _nullspace(rows, len(monos))
    if not null:
        raise InterpolationError(
            f"no dependency within bounds ({db}, {dg}); try ({db + 1}, {dg}) or ({db}, {dg + 1})")
    # echelonize the nullspace basis from the highest monomial down
    B = [v[:] for v in null]
    for c in range(len(monos)):
        piv = next((i for i, v in enumerate(B) if v[c] != 0 and all(v[k] == 0 for k in range(c))), None)
        if piv is None:
            continue
        for i, v in enumerate(B):
            if i != piv and v[c] != 0 and all(v[k] == 0 for k in range(c)):
                f = v[c] / B[piv][c]
                B[i] = [x - f * y for x, y in zip(v, B[piv])]

    def lead(v):
        return next(k for k, x in enumerate(v) if x != 0)

    B = [v for v in B if any(v)]
    tdeg = [monos[lead(v)][0] + monos[lead(v)][1] for v in B]
    low = min(tdeg)
    lowest = [v for v, t in zip(B, tdeg) if t == low]
    if len(lowest) > 1:
        raise InterpolationError(
            f"{len(lowest)} independent dependencies of total degree {low}; add samples")
    v = lowest[0]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    if ints[lead(ints)] < 0:
        ints = [-x for x in ints]
    dep = Dependency({m: c for m, c in zip(monos, ints) if c})
    for b, gm in pts:
        if dep(b, gm) != 0:
            raise InterpolationError("dependency does not vanish on every sample")
    return dep


def read_samples(path) -> list[tuple[Fraction, Fraction]]:
    """Lines ``sample <beta> <gamma>`` with rational entries; ``#`` comments."""
    out = []
    path = Path(path)
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "sample":
            raise RecognitionError(f"{path}:{lineno}: expected 'sample <beta> <gamma>'")
        try:
            out.append((Fraction(parts[1]), Fraction(parts[2])))
        except (ValueError, ZeroDivisionError) as exc:
            raise RecognitionError(f"{path}:{lineno}: {exc}") from None
    return out
