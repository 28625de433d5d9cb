"""Lifting paths in the t-plane to the fibers of ``p(X) - t q(X) = 0``.

A path is a polygon given by its vertices.  Each edge is followed with an
Euler predictor and Newton corrector; the step halves whenever the corrector
is slow, moves a root by a sizeable fraction of its distance to the nearest
other root, or two roots come within three Newton radii of each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .. import config
from .scalars import abs_horner, horner2, precision, scalar


class TrackingError(ArithmeticError):
    pass


class StepUnderflow(TrackingError):
    pass


class RootCollision(TrackingError):
    pass


@dataclass
class TrackStats:
    steps: int = 0
    rejected: int = 0
    max_residual: float = 0.0


def _fiber_values(p, q, t, z):
    fp_, dp = horner2(p, z)
    fq, dq = horner2(q, z)
    return fp_ - t * fq, dp - t * dq, fq


def _rel_residual(p, q, t, z) -> float:
    f, _, _ = _fiber_values(p, q, t, z)
    r = abs(z)
    scale = abs_horner(p, r) + abs(t) * abs_horner(q, r)
    return float(abs(f) / max(scale, 1e-300))


def _min_gaps(z: Sequence) -> list[float]:
    n = len(z)
    gaps = [float("inf")] * n
    for i in range(n):
        zi = z[i]
        for j in range(i + 1, n):
            d = float(abs(zi - z[j]))
            if d < gaps[i]:
                gaps[i] = d
            if d < gaps[j]:
                gaps[j] = d
    return gaps


def _try_step(p, q, t0, t1, z, tol):
    """Predict-correct from ``t0`` to ``t1``; None if the step must be halved."""
    n = len(z)
    gaps = _min_gaps(z)
    dt = t1 - t0
    out = []
    radii = []
    for i in range(n):
        f, d, fq = _fiber_values(p, q, t0, z[i])
        if d == 0:
            return None
        # dz/dt = q / (p' - t q')
        zp = z[i] + dt * fq / d
        w = zp
        prev = None
        first = None
        ok = False
        for _ in range(6):
            f, d, _ = _fiber_values(p, q, t1, w)
            if d == 0:
                return None
            delta = f / d
            size = float(abs(delta))
            if first is None:
                first = size
            w = w - delta
            if prev is not None and size > 0.5 * prev and size > tol * max(1.0, float(abs(w))):
                return None
            prev = size
            if size <= tol * max(1.0, float(abs(w))):
                ok = True
                break
        if not ok:
            return None
        move = float(abs(w - z[i]))
        if move > gaps[i] / 3 or float(abs(w - zp)) > gaps[i] / 8:
            return None
        out.append(w)
        radii.append(2 * first)
    newgaps = _min_gaps(out)
    for i in range(n):
        if newgaps[i] < 3 * radii[i] or newgaps[i] == 0:
            return None
    return out


def lift_roots(p: Sequence, q: Sequence, path: Sequence, fiber: Sequence, bits: int = 53,
               stats: TrackStats | None = None, min_step: float = 1e-14) -> list:
    """Continue ``fiber`` (roots at ``path[0]``) along the polygon ``path``.

    Returns the roots at ``path[-1]`` where entry ``i`` is the continuation of
    ``fiber[i]``.
    """
    stats = stats if stats is not None else TrackStats()
    tol = config.tracking_tolerance(bits)
    with precision(bits):
        P = [scalar(c, bits) for c in p]
        Q = [scalar(c, bits) for c in q]
        z = [scalar(c, bits) for c in fiber]
        verts = [scalar(v, bits) for v in path]
        for a, b in zip(verts, verts[1:]):
            s, h = 0.0, 0.25
            while s < 1.0:
                h = min(h, 1.0 - s)
                t0 = a + (b - a) * s
                t1 = a + (b - a) * (s + h) if s + h < 1.0 else b
                step = _try_step(P, Q, t0, t1, z, tol)
                if step is None:
                    stats.rejected += 1
                    h /= 2
                    if h < min_step:
                        gaps = _min_gaps(z)
                        if min(gaps) < 1e3 * tol * max(1.0, max(float(abs(w)) for w in z)):
                            raise RootCollision(f"fiber roots collide near t = {complex(t0):.6g}")
                        raise StepUnderflow(f"step size underflow near t = {complex(t0):.6g}")
                    continue
                z = step
                s += h
                stats.steps += 1
                h = min(2 * h, 0.25)
            res = max(_rel_residual(P, Q, b, w) for w in z)
            stats.max_residual = max(stats.max_residual, res)
        return z
