"""Brute-force reference implementations used to cross-check the library.

Everything here works on raw 0-based image tuples and deliberately shares no
code with ``hurwitzkit``.
"""

from __future__ import annotations

from itertools import product as cartesian


def mul(a, b):
    """(a*b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens, n):
    """All elements of the group generated by ``gens`` (breadth-first)."""
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def cycle_lengths(a):
    seen, out = set(), []
    for i in range(len(a)):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = a[j]
            k += 1
        out.append(k)
    return sorted(out, reverse=True)


def conj_class(G, x):
    return {mul(mul(g, x), inv(g)) for g in G}


def orbit_count_on_pairs(gens, n):
    pairs = {(i, j) for i in range(n) for j in range(n) if i != j}
    orbits = 0
    while pairs:
        start = pairs.pop()
        stack = [start]
        while stack:
            i, j = stack.pop()
            for s in gens:
                im = (s[i], s[j])
                if im in pairs:
                    pairs.remove(im)
                    stack.append(im)
        orbits += 1
    return orbits


def transitive(gens, n):
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for s in gens:
            if s[i] not in seen:
                seen.add(s[i])
                stack.append(s[i])
    return len(seen) == n


def inner_nielsen_count(G, classes, n):
    """Inner Nielsen classes by exhaustive enumeration of all r-tuples.

    ``classes`` are sets of image tuples (one set per position).  Tuples must
    have product one (under ``mul``), generate ``G`` and are counted up to
    simultaneous conjugation by ``G``.
    """
    e = tuple(range(n))
    order = len(G)
    found = set()
    for head in cartesian(*classes[:-1]):
        acc = e
        for h in head:
            acc = mul(acc, h)
        last = inv(acc)
        if last not in classes[-1]:
            continue
        tup = head + (last,)
        if len(closure(tup, n)) != order:
            continue
        key = min(tuple(mul(mul(g, t), inv(g)) for t in tup) for g in G)
        found.add(key)
    return len(found)
