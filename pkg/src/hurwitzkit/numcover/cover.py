"""Factored cover models and Newton continuation.

A cover ``p(X) - t q(X)`` with prescribed ramification is modelled place by
place: at each finite branch point ``t_i`` the fiber polynomial is
``P_i = c_i * prod m_ij^e_ij`` with monic factors ``m_ij``, and at infinity
``Q = q = c_inf * prod m_j^e_j``.  Unknowns are the constants and the
non-leading factor coefficients; equations are the coefficients of

    P_i - P_0 - (t_0 - t_i) Q = 0      for every finite i > 0,

plus pins that remove the affine change of ``X`` and the common scaling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .. import config
from ..permgroup import CycleType
from .roots import complex_roots
from .scalars import pad, padd, pmul, ppow, precision, pscale, psub, scalar, use_mp

INF = "infinity"


class NewtonError(ArithmeticError):
    pass


class SingularJacobian(NewtonError):
    pass


class Divergence(NewtonError):
    pass


class ClearanceError(ValueError):
    pass


@dataclass
class Place:
    t: object                      # branch point (scalar) or INF
    const: object                  # c
    factors: list[list]            # monic factors without the leading 1, low-first
    exps: list[int]

    def shape(self) -> list[tuple[int, int]]:
        return [(len(f), e) for f, e in zip(self.factors, self.exps)]

    def degree(self) -> int:
        return sum(len(f) * e for f, e in zip(self.factors, self.exps))

    def is_infinite(self) -> bool:
        return isinstance(self.t, str)


@dataclass
class Pin:
    """Fixes one quantity: a factor coefficient, a place constant, or a coefficient of p or q.

    ``place`` is a place index, or ``"p"`` / ``"q"`` to pin coefficient
    ``index`` of that polynomial (``factor`` is then ignored).
    """
    place: int | str
    factor: int | None             # None pins the constant
    index: int
    value: object


@dataclass
class CoverApproximation:
    degree: int
    places: list[Place]            # finite places first, infinity last
    pins: list[Pin]
    bits: int = 53
    residual: float = float("inf")
    parameter: object = None       # freed branch coordinate left by drive_coefficient

    # -- views -------------------------------------------------------------
    @property
    def finite(self) -> list[Place]:
        return [pl for pl in self.places if not pl.is_infinite()]

    @property
    def infinite(self) -> Place:
        inf = [pl for pl in self.places if pl.is_infinite()]
        if len(inf) != 1:
            raise ValueError("model needs exactly one place at infinity")
        return inf[0]

    @property
    def branch_points(self) -> list:
        return [pl.t for pl in self.places]

    def polynomials(self) -> tuple[list, list]:
        """``(p, q)`` as working-precision coefficient lists."""
        with precision(self.bits):
            Q = _place_poly(self.infinite)
            P0 = _place_poly(self.finite[0])
            p = padd(P0, pscale(Q, self.finite[0].t))
            return pad(p, self.degree + 1), pad(Q, self.degree + 1)

    def cycle_types(self) -> list[CycleType]:
        out = []
        for pl in self.places:
            parts = []
            for f, e in zip(pl.factors, pl.exps):
                parts.extend([e] * len(f))
            if pl.is_infinite():
                extra = self.degree - pl.degree()
                if extra:
                    parts.append(extra)
            out.append(CycleType(tuple(sorted(parts, reverse=True))))
        return out

    def unknowns(self) -> list:
        u = []
        for pl in self.places:
            u.append(pl.const)
            for f in pl.factors:
                u.extend(f)
        return u

    def with_unknowns(self, u: Sequence, bits: int | None = None) -> "CoverApproximation":
        it = iter(u)
        places = []
        for pl in self.places:
            c = next(it)
            fs = [[next(it) for _ in f] for f in pl.factors]
            places.append(Place(pl.t, c, fs, list(pl.exps)))
        return CoverApproximation(self.degree, places, list(self.pins), bits or self.bits, self.residual,
                                  self.parameter)

    def with_branch_points(self, ts: Sequence) -> "CoverApproximation":
        fin = iter(ts)
        places = [Place(pl.t if pl.is_infinite() else next(fin), pl.const, pl.factors, pl.exps)
                  for pl in self.places]
        return CoverApproximation(self.degree, places, list(self.pins), self.bits, self.residual, self.parameter)

    def at_precision(self, bits: int) -> "CoverApproximation":
        with precision(bits):
            conv = lambda x: scalar(x, bits)
            places = [Place(pl.t if pl.is_infinite() else conv(pl.t), conv(pl.const),
                            [[conv(a) for a in f] for f in pl.factors], list(pl.exps)) for pl in self.places]
            pins = [Pin(p.place, p.factor, p.index, conv(p.value)) for p in self.pins]
            par = None if self.parameter is None else conv(self.parameter)
        return CoverApproximation(self.degree, places, pins, bits, self.residual, par)

    def coefficient(self, place: int, factor: int | None, index: int):
        pl = self.places[place]
        return pl.const if factor is None else pl.factors[factor][index]

    def unknown_index(self, place: int, factor: int | None, index: int) -> int:
        k = 0
        for i, pl in enumerate(self.places):
            if i == place:
                if factor is None:
                    return k
                k += 1 + sum(len(f) for f in pl.factors[:factor])
                if not 0 <= index < len(pl.factors[factor]):
                    raise IndexError("coefficient index out of range")
                return k + index
            k += 1 + sum(len(f) for f in pl.factors)
        raise IndexError("place out of range")


# ---------------------------------------------------------------------------
# construction from polynomials

def _place_poly(pl: Place) -> list:
    out = [pl.const]
    for f, e in zip(pl.factors, pl.exps):
        out = pmul(out, ppow(list(f) + [f[0] * 0 + 1 if f else 1], e))
    return out


def _cluster(roots: Sequence[complex], mults: Sequence[int]) -> dict[int, list[complex]]:
    """Group approximate roots into clusters whose sizes are the given multiplicities."""
    pts = list(roots)
    want = sorted(mults, reverse=True)
    out: dict[int, list[complex]] = {}
    remaining = pts
    for m in want:
        if m == 1:
            continue
        # the m mutually closest remaining roots form the next cluster
        best = None
        for i, z in enumerate(remaining):
            d = sorted(range(len(remaining)), key=lambda j: abs(remaining[j] - z))[:m]
            spread = max(abs(remaining[j] - z) for j in d)
            if best is None or spread < best[0]:
                best = (spread, d)
        _, idx = best
        out.setdefault(m, []).append(sum(remaining[j] for j in idx) / m)
        remaining = [z for j, z in enumerate(remaining) if j not in idx]
    if remaining:
        out.setdefault(1, []).extend(remaining)
    return out


def _monic_from_roots(rs: Sequence[complex]) -> list:
    c = [1 + 0j]
    for r in rs:
        c = pmul(c, [-r, 1 + 0j])
    return c[:-1]


def from_polynomials(p: Sequence, q: Sequence, branch_points: Sequence, cycle_types: Sequence,
                     bits: int = 53, pins: Sequence[Pin] | None = None) -> CoverApproximation:
    """Seed a factored model from coefficient lists and the ramification data.

    ``branch_points`` lists the finite points first and ``"infinity"`` last;
    ``cycle_types`` gives the inertia at each.  Roots are clustered at double
    precision and the model is then Newton-refined to ``bits``.
    """
    p_in, q_in = list(p), list(q)
    p = [complex(scalar(c, 53)) for c in p]
    q = [complex(scalar(c, 53)) for c in q]
    while q and q[-1] == 0:
        q.pop()
        q_in.pop()
    n = len(p) - 1
    places = []
    for b, ct in zip(branch_points, cycle_types):
        ct = ct if isinstance(ct, CycleType) else CycleType.parse(str(ct))
        if isinstance(b, str):
            poly = q
            mults = list(ct.parts)
            extra = n - (len(q) - 1)
            if extra:
                mults.remove(extra)
        else:
            t = complex(b)
            poly = [a - t * (q[k] if k < len(q) else 0) for k, a in enumerate(p)]
            mults = list(ct.parts)
        if len(poly) - 1 != sum(mults):
            raise ValueError(f"cycle type {ct} does not fit the polynomial at {b}")
        if len(poly) == 1:
            places.append(Place(b if isinstance(b, str) else complex(b), poly[0], [], []))
            continue
        roots = complex_roots(poly, 53, max_iter=200, clustered=True)
        groups = _cluster(roots, mults)
        factors, exps = [], []
        for m in sorted(groups, reverse=True):
            factors.append(_monic_from_roots(groups[m]))
            exps.append(m)
        places.append(Place(b if isinstance(b, str) else complex(b), poly[-1], factors, exps))
    cover = CoverApproximation(n, places, [], 53)
    # the seed was clustered in double precision; refine against the caller's exact-as-given points
    with precision(max(bits, 53)):
        for pl, b in zip(cover.places, branch_points):
            if not isinstance(b, str):
                pl.t = scalar(b, max(bits, 53))
    cover.pins = list(pins) if pins is not None else default_pins(cover, p_in, q_in, bits)
    return newton_refine(cover, bits)


def default_pins(cover: CoverApproximation, p: Sequence | None = None, q: Sequence | None = None,
                 bits: int | None = None) -> list[Pin]:
    """Pins removing ``X -> aX + b`` and the common scaling of ``(p, q)``.

    Fixes the leading coefficient of ``q``, the ``X^(n-1)`` coefficient of
    ``p``, and either the leading coefficient of ``p`` (when ``deg q < n``)
    or its ``X^(n-2)`` coefficient.  When ``deg q < n`` a finite twist
    ``X -> wX`` with ``w^(n - deg q) = 1`` is left over.
    """
    if p is None or q is None:
        p, q = cover.polynomials()
    bits = bits or cover.bits
    with precision(bits):
        p = [scalar(c, bits) for c in p]
        q = [scalar(c, bits) for c in q]
    n = cover.degree
    dq = cover.infinite.degree()
    pins = [Pin("q", None, dq, q[dq]), Pin("p", None, n - 1, p[n - 1])]
    pins.append(Pin("p", None, n, p[n]) if dq < n else Pin("p", None, n - 2, p[n - 2]))
    return pins


# ---------------------------------------------------------------------------
# residual and Jacobian

def _place_parts(pl: Place):
    """``(P, dP/dc, [dP/dm_j for each factor])`` as polynomials."""
    one = pl.const * 0 + 1
    powers = []
    for f, e in zip(pl.factors, pl.exps):
        m = list(f) + [one]
        powers.append((m, e, ppow(m, e)))
    M = [one]
    for _, _, mp in powers:
        M = pmul(M, mp)
    P = pscale(M, pl.const)
    grads = []
    for j, (m, e, _) in enumerate(powers):
        g = pscale(ppow(m, e - 1), pl.const * e)
        for l, (_, _, ml) in enumerate(powers):
            if l != j:
                g = pmul(g, ml)
        grads.append(g)
    return P, M, grads


@dataclass
class _System:
    cover: CoverApproximation
    # lambda -> (finite branch points, their derivatives); lambda is cover.parameter
    motion: Callable | None = None
    extra: tuple | None = None                # (unknown index, target) for a driven coefficient


def _residual_and_jacobian(sys_: _System, want_jac: bool = True):
    cov = sys_.cover
    n = cov.degree
    fin = [i for i, pl in enumerate(cov.places) if not pl.is_infinite()]
    inf = next(i for i, pl in enumerate(cov.places) if pl.is_infinite())
    parts = [_place_parts(pl) for pl in cov.places]
    Q = pad(parts[inf][0], n + 1)
    P0 = pad(parts[fin[0]][0], n + 1)
    t0 = cov.places[fin[0]].t
    rows = []
    for i in fin[1:]:
        Pi = pad(parts[i][0], n + 1)
        ti = cov.places[i].t
        rows.extend(psub(psub(Pi, P0), pscale(Q, t0 - ti)))
    zero = cov.places[0].const * 0
    one_ = zero + 1
    offsets = []
    k = 0
    for pl in cov.places:
        offsets.append(k)
        k += 1 + sum(len(f) for f in pl.factors)
    nunk = k + (1 if sys_.motion is not None else 0)
    dts = None
    if sys_.motion is not None:
        _, dts = sys_.motion(cov.parameter)
    res = list(rows)
    for pin in cov.pins:
        if pin.place == "p":
            val = P0[pin.index] + t0 * Q[pin.index]
        elif pin.place == "q":
            val = Q[pin.index]
        else:
            val = cov.coefficient(pin.place, pin.factor, pin.index)
        res.append(val - pin.value)
    if sys_.extra is not None:
        idx, target = sys_.extra
        res.append(cov.unknowns()[idx] - target)
    if not want_jac:
        return res, None
    neq = len(res)
    J = [[zero] * nunk for _ in range(neq)]

    def put_block(block: int, col: int, poly, sign):
        base = block * (n + 1)
        for r, v in enumerate(poly[: n + 1]):
            if v != 0:
                J[base + r][col] = J[base + r][col] + (v if sign > 0 else -v)

    nblocks = len(fin) - 1
    pin_rows = {}
    for r, pin in enumerate(cov.pins):
        pin_rows.setdefault(pin.place, []).append((nblocks * (n + 1) + r, pin.index))
    for pi, pl in enumerate(cov.places):
        P, M, grads = parts[pi]
        cols = [(offsets[pi], M)]
        c = offsets[pi] + 1
        for j, f in enumerate(pl.factors):
            for kk in range(len(f)):
                cols.append((c, [zero] * kk + grads[j]))
                c += 1
        for col, d in cols:
            for b in range(nblocks):
                i = fin[b + 1]
                if pi == i:
                    put_block(b, col, d, +1)
                elif pi == fin[0]:
                    put_block(b, col, d, -1)
                elif pi == inf:
                    put_block(b, col, pscale(d, t0 - cov.places[i].t), -1)
            # p = P_0 + t_0 Q and q = Q
            targets = []
            if pi == fin[0]:
                targets.append(("p", one_))
            if pi == inf:
                targets.append(("p", t0))
                targets.append(("q", one_))
            for name, factor in targets:
                for row, k in pin_rows.get(name, []):
                    if k < len(d):
                        J[row][col] = J[row][col] + factor * d[k]
    if dts is not None:
        col = nunk - 1
        for b in range(nblocks):
            # d/dlambda of -(t0 - ti) Q
            coef = -(dts[0] - dts[b + 1])
            if coef != 0:
                put_block(b, col, pscale(Q, coef), +1)
    row = nblocks * (n + 1)
    for pin in cov.pins:
        if pin.place == "p" and dts is not None:
            J[row][nunk - 1] = Q[pin.index] * dts[0]
        if not isinstance(pin.place, str):
            J[row][cov.unknown_index(pin.place, pin.factor, pin.index)] = one_
        row += 1
    if sys_.extra is not None:
        J[row][sys_.extra[0]] = zero + 1
    return res, J


def _solve(J, r, bits):
    """Solve ``J x = r``; raises SingularJacobian on numerical rank deficiency."""
    n = len(J)
    if n != len(J[0]):
        raise SingularJacobian(f"system is not square ({n} equations, {len(J[0])} unknowns)")
    A = np.array([[complex(x) for x in row] for row in J], dtype=complex)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= s[0] * 1e-13:
        raise SingularJacobian(f"Jacobian is numerically singular (condition {s[0] / max(s[-1], 1e-300):.2e})")
    cond = float(s[0] / s[-1])
    if not use_mp(bits):
        return list(np.linalg.solve(A, np.array([complex(x) for x in r]))), cond
    M = [list(row) + [r[i]] for i, row in enumerate(J)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(M[i][col]))
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        inv = 1 / pv
        for i in range(col + 1, n):
            f = M[i][col]
            if f != 0:
                f = f * inv
                Ri, Rc = M[i], M[col]
                for j in range(col, n + 1):
                    Ri[j] = Ri[j] - f * Rc[j]
    x = [None] * n
    for i in range(n - 1, -1, -1):
        s_ = M[i][n]
        for j in range(i + 1, n):
            s_ = s_ - M[i][j] * x[j]
        x[i] = s_ / M[i][i]
    return x, cond


def _norm(v) -> float:
    return max((float(abs(x)) for x in v), default=0.0)


def _scale(cover: CoverApproximation) -> float:
    return 1.0 + _norm(cover.unknowns())


def _newton(sys_: _System, bits: int, max_iter: int, tol: float, strict: bool = True):
    """Newton iteration on the model; returns the updated system and residual."""
    cov = sys_.cover
    prev = None
    res_norm = float("inf")
    for it in range(max_iter):
        r, J = _residual_and_jacobian(sys_)
        res_norm = _norm(r) / _scale(sys_.cover)
        if res_norm < tol:
            return sys_, res_norm, it
        dx, cond = _solve(J, r, bits)
        step = _norm(dx) / _scale(sys_.cover)
        noise = max(2.0 ** (-0.75 * bits), 64 * cond * 2.0 ** -bits)
        if step < noise and it >= 1:
            return sys_, res_norm, it
        if prev is not None and step > 0.5 * prev and it >= 2:
            if strict:
                raise Divergence(f"Newton contraction lost at iteration {it} (step {step:.2e} after {prev:.2e})")
            return None, res_norm, it
        prev = step
        u = sys_.cover.unknowns()
        nu = len(u)
        u = [a - b for a, b in zip(u, dx[:nu])]
        cov = sys_.cover.with_unknowns(u, bits)
        if sys_.motion is not None:
            cov.parameter = cov.parameter - dx[nu]
            cov = cov.with_branch_points(sys_.motion(cov.parameter)[0])
        sys_ = replace(sys_, cover=cov)
        if step < tol * 1e-3:
            r, _ = _residual_and_jacobian(sys_, want_jac=False)
            res_norm = _norm(r) / _scale(sys_.cover)
            if res_norm < tol:
                return sys_, res_norm, it + 1
    if strict:
        raise Divergence(f"Newton did not reach residual {tol:.1e} in {max_iter} iterations (at {res_norm:.2e})")
    return None, res_norm, max_iter


def _ladder(bits: int) -> list[int]:
    out = [b for b in config.PRECISION_LADDER if b < bits]
    return out + [bits]


def _reparam(state: CoverApproximation, orig: CoverApproximation, bits: int,
             keep: frozenset = frozenset()) -> CoverApproximation:
    """``state`` at ``bits`` with branch points (except places in ``keep``) and pins taken from ``orig``."""
    with precision(bits):
        c = state.at_precision(bits)
        for i, (pl, po) in enumerate(zip(c.places, orig.places)):
            if i not in keep and not po.is_infinite():
                pl.t = scalar(po.t, bits)
        c.pins = [Pin(p.place, p.factor, p.index, scalar(p.value, bits)) for p in orig.pins]
    return c


def _climb(build: Callable[[int, CoverApproximation], _System], state: CoverApproximation, bits: int,
           max_iter: int = config.MAX_NEWTON_ITERATIONS, start: int = 53):
    """Newton at each rung of the precision ladder from ``start`` up to ``bits``.

    If the last rung stalls, the next ladder precision is tried before giving up.
    """
    res = float("inf")
    sys_ = None
    rungs = [b for b in _ladder(bits) if b >= start]
    higher = [b for b in config.PRECISION_LADDER if b > bits]
    k = 0
    while k < len(rungs):
        b = rungs[k]
        with precision(b):
            sys_ = build(b, state)
            tol = 2.0 ** (-0.8 * b) if b > 53 else 1e-13
            try:
                sys_, res, _ = _newton(sys_, b, max_iter, tol)
            except Divergence:
                if k == len(rungs) - 1 and higher and b >= bits:
                    rungs.append(higher.pop(0))
                    k += 1
                    continue
                raise
            state = sys_.cover
        k += 1
    if res >= 2.0 ** (-bits / 2) and bits > 53:
        raise Divergence(f"residual {res:.2e} above 2^-{bits // 2}")
    state.residual = res
    return state, sys_


def newton_refine(cover: CoverApproximation, bits: int | None = None,
                  max_iter: int = config.MAX_NEWTON_ITERATIONS) -> CoverApproximation:
    """Refine to residual below ``2^-(bits/2)``, climbing the precision ladder.

    Branch points and pin values are read from ``cover`` at each rung, so
    they keep whatever precision they were given with.
    """
    bits = bits or cover.bits
    out, _ = _climb(lambda b, st: _System(_reparam(st, cover, b)), cover, bits, max_iter)
    return out


# ---------------------------------------------------------------------------
# continuation

@dataclass
class DeformationReport:
    steps: int
    rejected: int
    monodromy_preserved: bool | None = None
    start_types: list[str] = field(default_factory=list)
    end_types: list[str] = field(default_factory=list)


def _check_clearance(start: Sequence[complex], end: Sequence[complex]):
    pts0 = [complex(x) for x in start]
    pts1 = [complex(x) for x in end]
    spread = max((abs(a - b) for a in pts0 for b in pts0), default=1.0) or 1.0
    limit = config.CLEARANCE_FRACTION * spread
    for i in range(len(pts0)):
        for j in range(i + 1, len(pts0)):
            d0 = pts0[i] - pts0[j]
            d1 = pts1[i] - pts1[j]
            dd = d1 - d0
            s = 0.0 if dd == 0 else min(1.0, max(0.0, -(d0 * dd.conjugate()).real / abs(dd) ** 2))
            if abs(d0 + s * dd) < limit:
                raise ClearanceError(f"branch points {i} and {j} come within {abs(d0 + s * dd):.3e} "
                                     f"(clearance {limit:.3e}) at s = {s:.4f}")


def _continue(cover: CoverApproximation, make_system: Callable[[float, CoverApproximation], _System],
              steps: int, bits: int, min_step: float = 1e-6, keep: frozenset = frozenset()):
    """Follow ``make_system(s)`` from s = 0 to 1 at double precision, then refine."""
    cur = cover.at_precision(53)
    s, h = 0.0, 1.0 / max(steps, 1)
    hmax = 4.0 / max(steps, 1)
    rep = DeformationReport(0, 0)
    while s < 1.0:
        h = min(h, 1.0 - s)
        sys_ = make_system(s + h, cur)
        try:
            out, _, _ = _newton(sys_, 53, 8, 1e-12, strict=False)
        except SingularJacobian:
            out = None
        if out is None:
            rep.rejected += 1
            h /= 2
            if h < min_step:
                raise Divergence(f"continuation step underflow at s = {s:.6f}")
            continue
        cur = out.cover
        s += h
        rep.steps += 1
        h = min(1.5 * h, hmax)
    out, final = _climb(lambda b, st: make_system(1.0, _reparam(st, cover, b, keep)), cur, bits)
    return out, rep, final


def deform(cover: CoverApproximation, target_branch_points: Sequence, steps: int = 16,
           bits: int | None = None, certify: bool = True):
    """Move the finite branch points along straight lines to the targets.

    Returns ``(cover, report)``; with ``certify`` the monodromy of the start
    and end covers is compared up to simultaneous conjugation.
    """
    bits = bits or cover.bits
    start = [pl.t for pl in cover.finite]
    if len(target_branch_points) != len(start):
        raise ValueError("one target per finite branch point is required")
    with precision(bits):
        target = [scalar(x, bits) for x in target_branch_points]
    _check_clearance(start, target)
    s0 = [complex(x) for x in start]
    s1 = [complex(x) for x in target]

    def make(s, cur):
        ts = [a + (b - a) * s for a, b in zip(s0, s1)]
        return _System(cur.with_branch_points(ts))

    def make_exact(s, cur):
        if s < 1.0:
            return make(s, cur)
        with precision(cur.bits):
            return _System(cur.with_branch_points([scalar(x, cur.bits) for x in target]))

    out, rep, _ = _continue(cover, make_exact, steps, bits)
    if certify:
        rep.monodromy_preserved, rep.start_types, rep.end_types = _compare_monodromy(cover, out)
    return out, rep


def point_motion(cover: CoverApproximation, index: int) -> tuple[Callable, object]:
    """Motion freeing finite branch point ``index``: ``lambda`` is its value."""
    fin = cover.finite
    if index == 0:
        raise ValueError("the first finite branch point stays fixed")

    def motion(lam):
        ts = [lam if k == index else pl.t for k, pl in enumerate(fin)]
        one = lam * 0 + 1
        return ts, [one if k == index else one * 0 for k in range(len(fin))]

    return motion, fin[index].t


def drive_coefficient(cover: CoverApproximation, selector: tuple, target, motion: Callable | None = None,
                      start_parameter=None, free_branch_point: int | None = None,
                      steps: int = 16, bits: int | None = None) -> CoverApproximation:
    """Move one unpinned coefficient to ``target`` while one branch coordinate moves freely.

    ``selector`` is ``(place, factor, index)`` with ``factor=None`` for the
    constant of a place.  By default the last finite branch point is freed;
    ``motion`` maps a parameter ``lambda`` to ``(finite branch points,
    derivatives)`` for coordinated moves such as ``1 +- sqrt(lambda)``, with
    the current value given by ``start_parameter``.  The parameter reached is
    stored as ``parameter`` on the result.
    """
    bits = bits or cover.bits
    place, factor, index = selector
    for pin in cover.pins:
        if (pin.place, pin.factor, pin.index) == (place, factor, index):
            raise ValueError("selected coefficient is pinned")
    uidx = cover.unknown_index(place, factor, index)
    if motion is None:
        k = len(cover.finite) - 1 if free_branch_point is None else free_branch_point
        motion, start_parameter = point_motion(cover, k)
    elif start_parameter is None:
        raise ValueError("a custom motion needs its starting parameter")
    start = complex(cover.coefficient(place, factor, index))
    tgt53 = complex(scalar(target, 53))
    with precision(cover.bits):
        seeded = replace(cover, parameter=scalar(start_parameter, cover.bits))
        seeded = seeded.with_branch_points(motion(seeded.parameter)[0])

    def make(s, cur):
        with precision(cur.bits):
            if s >= 1.0:
                val = scalar(target, cur.bits)
            else:
                val = scalar(start + (tgt53 - start) * s, cur.bits)
            cur = cur.with_branch_points(motion(cur.parameter)[0])
        return _System(cur, motion=motion, extra=(uidx, val))

    keep = frozenset(range(len(cover.places)))
    out, _, _ = _continue(seeded, make, steps, bits, keep=keep)
    return out


def _compare_monodromy(a: CoverApproximation, b: CoverApproximation):
    from ..nielsen import sn_canonical
    from .monodromy import monodromy

    def tuple_of(c: CoverApproximation):
        p, q = c.polynomials()
        bps = [complex(x) if not isinstance(x, str) else x for x in c.branch_points]
        cert = monodromy([complex(x) for x in p], [complex(x) for x in q], bps, bits=53)
        by_label = {}
        for lab, perm in zip(cert.branch_points, cert.permutations):
            by_label[lab if isinstance(lab, str) else complex(lab)] = perm
        out = []
        for x in bps:
            out.append(by_label[x if isinstance(x, str) else complex(x)])
        return out, cert

    ta, ca = tuple_of(a)
    tb, cb = tuple_of(b)
    n = a.degree
    same = sn_canonical([p.images for p in ta], n)[0] == sn_canonical([p.images for p in tb], n)[0]
    return same, [str(p.cycle_type()) for p in ta], [str(p.cycle_type()) for p in tb]


# ---------------------------------------------------------------------------
# exact inputs

def numeric_branch_data(p, q, bits: int = 53):
    """Branch points of an exact cover as working scalars, with their cycle types.

    Finite points come first (sorted by real then imaginary part), infinity last.
    """
    from ..exactpoly.poly import Poly
    from ..exactpoly.ramification import branch_profiles

    finite, at_inf = [], []
    with precision(bits):
        for pr in branch_profiles(p, q):
            if isinstance(pr.point, str):
                at_inf.append((INF, pr.cycle_type))
            elif isinstance(pr.point, Poly):
                for z in complex_roots([scalar(Fraction(c), bits) for c in pr.point.c], bits):
                    finite.append((z, pr.cycle_type))
            else:
                finite.append((scalar(Fraction(pr.point), bits), pr.cycle_type))
    finite.sort(key=lambda e: (round(float(e[0].real), 9), float(e[0].imag)))
    return finite + at_inf


def from_exact(p, q, bits: int = 53, pins: Sequence[Pin] | None = None) -> CoverApproximation:
    """Factored model of an exact rational cover ``p - t q``."""
    data = numeric_branch_data(p, q, bits)
    if not any(isinstance(b, str) for b, _ in data):
        data.append((INF, CycleType((1,) * max(p.deg, q.deg))))
    with precision(bits):
        pc = [scalar(Fraction(c), bits) for c in p.c]
        qc = [scalar(Fraction(c), bits) for c in q.c]
    return from_polynomials(pc, qc, [b for b, _ in data], [ct for _, ct in data], bits, pins)
