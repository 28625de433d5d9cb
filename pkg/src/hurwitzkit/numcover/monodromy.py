"""Monodromy of ``p(X) - t q(X)`` by lifting standard loops around branch points."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .. import config
from ..permgroup import Permutation, product
from .roots import complex_roots
from .scalars import precision, scalar
from .track import TrackStats, TrackingError, lift_roots

INF = "infinity"


class MonodromyError(ArithmeticError):
    pass


@dataclass
class MonodromyCertificate:
    basepoint: complex
    branch_points: list            # loop order; finite as complex, INF last
    loops: list[list[complex]]
    permutations: list[Permutation]
    product_one: bool
    max_residual: float
    bits: int
    steps: int = 0
    fiber: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.permutations[0].degree if self.permutations else 0

    def cycle_types(self):
        return [p.cycle_type() for p in self.permutations]


def _is_inf(b) -> bool:
    return isinstance(b, str) and b.lower().startswith("inf")


def _seg_distance(x: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(x - a)
    s = ((x - a) * ab.conjugate()).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(x - (a + s * ab))


def loop_radii(finite: Sequence[complex]) -> list[float]:
    out = []
    for i, b in enumerate(finite):
        others = [abs(b - c) for j, c in enumerate(finite) if j != i]
        near = min(others) if others else max(1.0, abs(b))
        out.append(config.LOOP_RADIUS_FRACTION * near)
    return out


def bounding_circle(finite: Sequence[complex]) -> tuple[complex, float]:
    if not finite:
        return 0j, 1.0
    xs = [b.real for b in finite]
    ys = [b.imag for b in finite]
    center = complex((min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2)
    spread = max(abs(b - center) for b in finite)
    rad = max(loop_radii(finite))
    return center, 2 * spread + 2 * rad + (1.0 if spread == 0 else 0.0)


def choose_basepoint(finite: Sequence[complex], candidates: int = 64) -> complex:
    """Point on the bounding circle whose straight segments to the branch
    points keep the largest clearance (relative to loop radii) from the others."""
    center, R = bounding_circle(finite)
    radii = loop_radii(finite)
    best, best_score = None, -1.0
    for k in range(candidates):
        base = center + R * cmath.exp(1j * (2 * math.pi * k / candidates + math.pi / 2 + 0.1))
        score = float("inf")
        for i, b in enumerate(finite):
            for j, c in enumerate(finite):
                if i != j:
                    score = min(score, _seg_distance(c, base, b) / radii[j])
        if score > best_score:
            best, best_score = base, score
    if finite and len(finite) > 1 and best_score <= 1.5:
        raise MonodromyError("no basepoint on the bounding circle gives clear straight loops")
    return best


def standard_loop(base: complex, b: complex, radius: float, vertices: int = 64) -> list[complex]:
    """Segment to the circle of ``radius`` around ``b``, once around counterclockwise, back."""
    u = (base - b) / abs(base - b)
    start = b + radius * u
    theta0 = cmath.phase(u)
    circle = [b + radius * cmath.exp(1j * (theta0 + 2 * math.pi * k / vertices)) for k in range(vertices + 1)]
    return [base] + circle + [base]


def infinity_loop(base: complex, center: complex, vertices: int = 128) -> list[complex]:
    """The bounding circle through ``base``, clockwise (counterclockwise around infinity)."""
    R = abs(base - center)
    th = cmath.phase(base - center)
    return [center + R * cmath.exp(1j * (th - 2 * math.pi * k / vertices)) for k in range(vertices + 1)]


def _match(start: Sequence, end: Sequence) -> Permutation:
    """Permutation sending ``i`` to the index of the start root that ``end[i]`` is."""
    n = len(start)
    s = [complex(x) for x in start]
    e = [complex(x) for x in end]
    gaps = []
    for i in range(n):
        gaps.append(min((abs(s[i] - s[j]) for j in range(n) if j != i), default=1.0))
    images = []
    for i in range(n):
        j = min(range(n), key=lambda k: abs(e[i] - s[k]))
        if abs(e[i] - s[j]) > gaps[j] / 4:
            raise MonodromyError("loop end fiber does not match the start fiber")
        images.append(j)
    if len(set(images)) != n:
        raise MonodromyError("two tracked roots ended on the same fiber point")
    return Permutation(images)


def monodromy(p: Sequence, q: Sequence, branch_points: Sequence, basepoint: complex | None = None,
              bits: int = 53, loop_vertices: int = 64, threads: int = 1) -> MonodromyCertificate:
    """Monodromy permutations ``sigma_b`` (one per branch point) with product one.

    Finite loops are ordered counterclockwise as seen from the basepoint,
    starting just after the outward ray; the loop
    around infinity comes last.  ``sigma_b`` is the inverse of the fiber
    permutation induced by lifting, so that ``sigma_1 * ... * sigma_inf = 1``
    under the project-wide composition convention.  With ``threads > 1``
    loops are lifted concurrently from the same fiber snapshot.
    """
    finite = [complex(b) for b in branch_points if not _is_inf(b)]
    has_inf = any(_is_inf(b) for b in branch_points)
    if basepoint is None:
        basepoint = choose_basepoint(finite)
    basepoint = complex(basepoint)
    radii = loop_radii(finite)
    for b, r in zip(finite, radii):
        if abs(basepoint - b) <= 2 * r:
            raise MonodromyError("basepoint too close to a branch point")
    center, _ = bounding_circle(finite)
    # measure angles from the outward ray so the cut never falls among the points
    inward = center - basepoint
    inward = inward / abs(inward) if inward else 1.0
    order = sorted(range(len(finite)), key=lambda i: cmath.phase((finite[i] - basepoint) / inward))

    with precision(bits):
        fcoeffs = [scalar(c, bits) for c in p]
        qc = [scalar(c, bits) for c in q]
        tb = scalar(basepoint, bits)
        n = max(len(fcoeffs), len(qc))
        f0 = [(fcoeffs[k] if k < len(fcoeffs) else 0) - tb * (qc[k] if k < len(qc) else 0) for k in range(n)]
        while f0 and f0[-1] == 0:
            f0.pop()
        fiber = sorted(complex_roots(f0, bits), key=lambda z: (float(z.real), float(z.imag)))

    jobs = [(standard_loop(basepoint, finite[i], radii[i], loop_vertices), finite[i]) for i in order]
    if has_inf:
        jobs.append((infinity_loop(basepoint, center, 2 * loop_vertices), INF))
    snapshot = tuple(fiber)

    def run(loop):
        st = TrackStats()
        return lift_roots(p, q, loop, snapshot, bits, st), st

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: run(job[0]), jobs))
    else:
        results = [run(loop) for loop, _ in jobs]
    stats = TrackStats()
    loops, perms, labels = [], [], []
    for (loop, label), (end, st) in zip(jobs, results):
        stats.steps += st.steps
        stats.rejected += st.rejected
        stats.max_residual = max(stats.max_residual, st.max_residual)
        loops.append(loop)
        perms.append(_match(fiber, end).inverse())
        labels.append(label)
    ok = product(perms).is_identity() if perms else True
    return MonodromyCertificate(basepoint, labels, loops, perms, ok, stats.max_residual, bits,
                                stats.steps, [complex(z) for z in fiber])
