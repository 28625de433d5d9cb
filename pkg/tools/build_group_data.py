"""Regenerate the permutation-group data files under src/hurwitzkit/data.

Sp6(2) acts on the 64 quadratic forms polarizing to the standard symplectic
form on GF(2)^6: 28 of minus type, 36 of plus type.  The orthogonal group of
one minus-type form is generated by reflections in its nonsingular vectors
and acts on the 27 nonzero singular vectors.
"""

import itertools
import random
import sys
from pathlib import Path

from hurwitzkit.nielsen import extract_fiber_tuple
from hurwitzkit.permgroup import PermGroup, Permutation, format_group, read_group_file

DATA = Path(__file__).resolve().parent.parent / "src" / "hurwitzkit" / "data"
VECS = list(itertools.product((0, 1), repeat=6))


def form(x, y):
    return (x[0] * y[3] + x[3] * y[0] + x[1] * y[4] + x[4] * y[1] + x[2] * y[5] + x[5] * y[2]) % 2


def add(x, y):
    return tuple((a + b) % 2 for a, b in zip(x, y))


def transvection(v):
    return lambda x: add(x, v) if form(x, v) else x


def quadratic(l):
    """Values on all vectors of x0x3 + x1x4 + x2x5 + <l, x>."""
    return tuple((x[0] * x[3] + x[1] * x[4] + x[2] * x[5] + sum(a * b for a, b in zip(l, x))) % 2 for x in VECS)


def arf(q):
    return sum(q) > 32      # minus type takes value 1 on 36 vectors


def action(points, gmap, act):
    index = {pt: i for i, pt in enumerate(points)}
    return Permutation([index[act(gmap, pt)] for pt in points])


def act_form(g, q):
    # (g q)(x) = q(g^-1 x); transvections are involutions
    return tuple(q[VECS.index(g(x))] for x in VECS)


def small_generators(gens, order, seed=1):
    rng = random.Random(seed)
    G = PermGroup(gens)
    while True:
        a, b = G.random_element(rng), G.random_element(rng)
        if PermGroup([a, b]).order() == order:
            return [a, b]


def main():
    forms = [quadratic(l) for l in VECS]
    minus = sorted(q for q in forms if arf(q))
    plus = sorted(q for q in forms if not arf(q))
    assert len(minus) == 28 and len(plus) == 36
    trans = [transvection(v) for v in VECS if any(v)]
    sp28 = small_generators([action(minus, g, act_form) for g in trans], 1451520)
    sp36 = small_generators([action(plus, g, act_form) for g in trans], 1451520)

    q0 = minus[0]
    singular = [x for x in VECS if any(x) and q0[VECS.index(x)] == 0]
    assert len(singular) == 27
    refl = [transvection(v) for v in VECS if q0[VECS.index(v)] == 1]
    o27 = small_generators([action(singular, g, lambda g, x: g(x)) for g in refl], 51840)

    x, y = read_group_file(DATA / "psp62_wreath56.grp").generators
    fiber = extract_fiber_tuple((x, y, (x * y).inverse()), zero_entry="last")

    out = {
        "psp62_28.grp": (fiber.entries, "PSp6(2) on 28 points: fiber 4-tuple of the degree-56 triple x, y, (xy)^-1."),
        "psp62_28_forms.grp": (sp28, "Sp6(2) on the 28 minus-type quadratic forms of GF(2)^6."),
        "psp62_36.grp": (sp36, "Sp6(2) on the 36 plus-type quadratic forms of GF(2)^6."),
        "psp43_2_27.grp": (o27, "O6-(2) = PSp4(3).2 on the 27 singular vectors of a minus-type form."),
    }
    for name, (gens, comment) in out.items():
        (DATA / name).write_text(format_group(list(gens), comment), encoding="utf-8")
        print(name, PermGroup(list(gens)).order(), file=sys.stderr)


if __name__ == "__main__":
    main()
