"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration)."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .. import config
from .scalars import abs_horner, horner2, precision, scalar, use_mp


class RootFindingError(ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


def _initial(c: Sequence[complex]) -> list[complex]:
    n = len(c) - 1
    lc = abs(c[-1])
    # Fujiwara-type radius, then points on a circle with a fixed irrational offset
    rad = 2 * max((abs(c[n - k]) / lc) ** (1.0 / k) for k in range(1, n + 1)) if n else 1.0
    rad = max(rad, 1e-12)
    mean = -c[n - 1] / (n * c[-1]) if n else 0
    return [mean + rad * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]


def _aberth(c, z, tol, max_iter):
    n = len(z)
    for it in range(max_iter):
        worst = 0.0
        for i in range(n):
            f, d = horner2(c, z[i])
            if f == 0:
                continue
            ratio = f / d if d != 0 else f
            s = 0
            zi = z[i]
            for j in range(n):
                if j != i:
                    diff = zi - z[j]
                    if diff != 0:
                        s += 1 / diff
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            rel = abs(w) / max(1.0, abs(z[i]))
            if rel > worst:
                worst = rel
        if worst < tol:
            return z, it + 1, worst
    return z, max_iter, worst


def relative_residual(c: Sequence, z) -> float:
    """``|f(z)| / sum |c_k||z|^k``."""
    f, _ = horner2(c, z)
    return float(abs(f) / max(abs_horner(c, abs(z)), 1e-300))


def complex_roots(coeffs: Sequence, bits: int = 53, tol: float | None = None,
                  max_iter: int = 500, clustered: bool = False) -> list:
    """All roots (with multiplicity) of a polynomial given low-first.

    Runs in double precision first, then polishes at ``bits`` when higher.
    Raises :class:`RootFindingError` if the iteration does not settle.  With
    ``clustered`` the double-precision roots are accepted once every relative
    residual is tiny, which is what multiple roots allow; no polishing is done.
    """
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    c53 = [complex(x) for x in c]
    tol53 = 1e-14 if tol is None or not use_mp(bits) else 1e-14
    z, _, worst = _aberth(c53, _initial(c53), tol53, max_iter)
    if clustered:
        res = max(relative_residual(c53, w) for w in z)
        if res > 1e-11:
            raise RootFindingError("clustered roots not located", res)
        return z
    if worst > 1e-6:
        raise RootFindingError("Aberth iteration did not converge in double precision", worst)
    if not use_mp(bits):
        return z
    target = tol if tol is not None else 2.0 ** (-0.9 * bits)
    with precision(bits):
        cm = [scalar(x, bits) for x in c]
        zm = [scalar(x, bits) for x in z]
        zm, _, worst = _aberth(cm, zm, target, 60)
        if worst > target * 1e6:
            raise RootFindingError(f"polishing at {bits} bits stalled", float(worst))
        return zm
