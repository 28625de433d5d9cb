"""Permutation groups: arithmetic, cycle types, Schreier-Sims, classes, blocks.

Conventions
-----------
Composition is ``(p * q)(i) = p(q(i))``: the right factor acts first.  This is
the only place the convention is fixed; product-one conditions on tuples,
braid actions and monodromy certificates all refer back to it.

Points are ``1..n`` in every external representation (cycle notation, files,
``Permutation.__call__``) and ``0..n-1`` internally (``Permutation.images``
and all numpy element arrays).
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import config


class GroupError(ValueError):
    pass


class BudgetExceeded(GroupError):
    pass


# ---------------------------------------------------------------------------
# raw tuple helpers (hot loops work on plain tuples)

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple([a[x] for x in b])


def _inv(a: Sequence[int]) -> tuple:
    r = [0] * len(a)
    for i, x in enumerate(a):
        r[x] = i
    return tuple(r)


def _cycle_lengths(a: Sequence[int]) -> list[int]:
    n = len(a)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        k = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = a[j]
            k += 1
        out.append(k)
    return out


# ---------------------------------------------------------------------------

class Permutation:
    """An immutable bijection of ``{1..n}``."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        img = tuple(int(x) for x in images)
        if sorted(img) != list(range(len(img))):
            raise GroupError("images do not form a bijection of 0..n-1")
        self.images = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            cyc = [int(c) - 1 for c in cyc]
            for c in cyc:
                if not 0 <= c < degree:
                    raise GroupError(f"point {c + 1} outside 1..{degree}")
                if c in seen:
                    raise GroupError(f"point {c + 1} appears in two cycles")
                seen.add(c)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls._raw(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse disjoint-cycle notation such as ``(1,55,27)(3,34,6)`` or ``()``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\)\s*)+", text):
            raise GroupError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, degree)

    # -- basic protocol ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = tuple(range(self.degree))
        base = self.images
        while k:
            if k & 1:
                result = _mul(base, result)
            base = _mul(base, base)
            k >>= 1
        return Permutation._raw(result)

    def inverse(self) -> "Permutation":
        return Permutation._raw(_inv(self.images))

    def conjugate(self, by: "Permutation") -> "Permutation":
        """``by * self * by^-1``."""
        b = by.images
        binv = _inv(b)
        return Permutation._raw(_mul(b, _mul(self.images, binv)))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation"):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        n = self.degree
        seen = bytearray(n)
        out = []
        for i in range(n):
            if seen[i] or self.images[i] == i:
                seen[i] = 1
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = 1
                cyc.append(j + 1)
                j = self.images[j]
            out.append(cyc)
        return out

    def order(self) -> int:
        return math.lcm(*_cycle_lengths(self.images)) if self.images else 1

    def cycle_type(self) -> "CycleType":
        return cycle_type(self)

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``(p * q)(i) = p(q(i))``."""
    if p.degree != q.degree:
        raise GroupError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation._raw(_mul(p.images, q.images))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def product(perms: Sequence[Permutation]) -> Permutation:
    """``perms[0] * perms[1] * ... * perms[-1]``."""
    if not perms:
        raise GroupError("empty product")
    acc = perms[-1].images
    for p in reversed(perms[:-1]):
        acc = _mul(p.images, acc)
    return Permutation._raw(acc)


# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CycleType:
    """Multiset of cycle lengths; text form ``a^i.b^j`` in descending order."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise GroupError("cycle lengths must be positive")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def num_cycles(self) -> int:
        return len(self.parts)

    @property
    def index(self) -> int:
        """``degree - #cycles``, the contribution to Riemann-Hurwitz."""
        return self.degree - len(self.parts)

    @property
    def order(self) -> int:
        return math.lcm(*self.parts) if self.parts else 1

    @classmethod
    def parse(cls, text: str) -> "CycleType":
        """Accepts ``2^6.1^16``, ``15.12^2.9.8.7^2``, ``(2^24,1^8)`` and similar."""
        s = text.strip().strip("()").replace(" ", "")
        if not s:
            raise GroupError("empty cycle type")
        parts: list[int] = []
        for tok in re.split(r"[.,]", s):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
            if not m:
                raise GroupError(f"bad cycle type token {tok!r} in {text!r}")
            length = int(m.group(1))
            mult = int(m.group(2)) if m.group(2) else 1
            parts.extend([length] * mult)
        return cls(tuple(parts))

    @classmethod
    def from_counts(cls, counts: dict) -> "CycleType":
        parts = []
        for length, mult in counts.items():
            parts.extend([length] * mult)
        return cls(tuple(parts))

    def counts(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def render(self) -> str:
        c = Counter(self.parts)
        return ".".join(f"{k}^{c[k]}" for k in sorted(c, reverse=True))

    def __str__(self):
        return self.render()


def cycle_type(p: Permutation) -> CycleType:
    return CycleType(tuple(_cycle_lengths(p.images)))


@dataclass(frozen=True)
class ClassDescriptor:
    cycle_type: CycleType
    class_size: int | None = None
    element_order: int | None = None

    @classmethod
    def parse(cls, text: str) -> "ClassDescriptor":
        """``2^12.1^4 size=3780 order=2``."""
        toks = text.split()
        if not toks:
            raise GroupError("empty class descriptor")
        ct = CycleType.parse(toks[0])
        size = order = None
        for tok in toks[1:]:
            key, _, val = tok.partition("=")
            if key == "size":
                size = int(val)
            elif key == "order":
                order = int(val)
            else:
                raise GroupError(f"unknown class attribute {tok!r}")
        return cls(ct, size, order)

    def __str__(self):
        s = self.cycle_type.render()
        if self.class_size is not None:
            s += f" size={self.class_size}"
        if self.element_order is not None:
            s += f" order={self.element_order}"
        return s


# ---------------------------------------------------------------------------
# Schreier-Sims

class StabChain:
    """Base and strong generating set with explicit transversals.

    ``trans[i][beta]`` maps ``base[i]`` to ``beta`` and fixes ``base[:i]``;
    ``tinv[i][beta]`` is its inverse.  ``orbits[i]`` lists the level-``i``
    orbit in discovery order, which fixes the mixed-radix element ranking.
    """

    def __init__(self, degree: int, generators: Sequence[tuple], base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.identity = tuple(range(degree))
        gens = []
        for g in generators:
            if g != self.identity and g not in gens:
                gens.append(g)
        self.base: list[int] = list(base_prefix)
        for g in gens:
            if all(g[b] == b for b in self.base):
                self.base.append(next(x for x in range(degree) if g[x] != x))
        k = len(self.base)
        self.sgens: list[list[tuple]] = [
            [g for g in gens if all(g[b] == b for b in self.base[:i])] for i in range(k)
        ]
        self.trans: list[dict] = []
        self.tinv: list[dict] = []
        self.orbits: list[list[int]] = []
        for i in range(k):
            self._new_level_orbit(i)
        self._complete()

    # orbit bookkeeping
    def _new_level_orbit(self, i: int):
        b = self.base[i]
        while len(self.trans) <= i:
            self.trans.append({})
            self.tinv.append({})
            self.orbits.append([])
        self.trans[i] = {b: self.identity}
        self.tinv[i] = {b: self.identity}
        self.orbits[i] = [b]
        self._extend_orbit(i, 0)

    def _extend_orbit(self, i: int, start: int, gens: Sequence[tuple] | None = None):
        """BFS from ``orbits[i][start:]`` with all level generators; when ``gens``
        is given, first apply just those to the already-known points."""
        trans, tinv, orb = self.trans[i], self.tinv[i], self.orbits[i]
        if gens is not None:
            for x in list(orb[:start]):
                u = trans[x]
                for s in gens:
                    y = s[x]
                    if y not in trans:
                        v = _mul(s, u)
                        trans[y] = v
                        tinv[y] = _inv(v)
                        orb.append(y)
        pos = start if gens is None else 0
        if gens is not None:
            pos = start
        while pos < len(orb):
            x = orb[pos]
            pos += 1
            u = trans[x]
            for s in self.sgens[i]:
                y = s[x]
                if y not in trans:
                    v = _mul(s, u)
                    trans[y] = v
                    tinv[y] = _inv(v)
                    orb.append(y)

    def strip(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for i in range(start, len(self.base)):
            beta = g[self.base[i]]
            ui = self.tinv[i].get(beta)
            if ui is None:
                return g, i
            g = _mul(ui, g)
        return g, len(self.base)

    def _add_generator(self, h: tuple, lo: int, hi: int):
        if hi == len(self.base):
            self.base.append(next(x for x in range(self.degree) if h[x] != x))
            self.sgens.append([])
            self._new_level_orbit(hi)
        for level in range(lo, hi + 1):
            self.sgens[level].append(h)
            old = len(self.orbits[level])
            self._extend_orbit(level, old, gens=[h])

    def _complete(self):
        i = len(self.base) - 1
        while i >= 0:
            added = False
            b = self.base[i]
            for beta in list(self.orbits[i]):
                u = self.trans[i][beta]
                for s in list(self.sgens[i]):
                    su = _mul(s, u)
                    gamma = su[b]
                    schreier = _mul(self.tinv[i][gamma], su)
                    if schreier == self.identity:
                        continue
                    h, j = self.strip(schreier, i + 1)
                    if h != self.identity:
                        self._add_generator(h, i + 1, j)
                        i = j
                        added = True
                        break
                if added:
                    break
            if not added:
                i -= 1

    # queries
    def order(self) -> int:
        return math.prod(len(o) for o in self.orbits)

    def contains(self, g: tuple) -> bool:
        h, _ = self.strip(g)
        return h == self.identity

    def strong_generators(self) -> list[tuple]:
        return list(self.sgens[0]) if self.sgens else []

    def random_element(self, rng: random.Random) -> tuple:
        g = self.identity
        for i in range(len(self.base)):
            g = _mul(g, self.trans[i][rng.choice(self.orbits[i])])
        return g


# ---------------------------------------------------------------------------

class PermGroup:
    """A permutation group given by generators.  BSGS and element data are lazy."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 element_cap: int = config.ELEMENT_CAP):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise GroupError("need generators or an explicit degree")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise GroupError("generators of different degrees")
        self.degree = degree
        self.generators = tuple(gens)
        self.element_cap = element_cap

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @cached_property
    def chain(self) -> StabChain:
        return StabChain(self.degree, [g.images for g in self.generators])

    def chain_with_base(self, prefix: Sequence[int]) -> StabChain:
        return StabChain(self.degree, self.chain.strong_generators() or
                         [g.images for g in self.generators], prefix)

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, g: Permutation) -> bool:
        return g.degree == self.degree and self.chain.contains(g.images)

    contains = __contains__

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def random_element(self, rng: random.Random) -> Permutation:
        return Permutation._raw(self.chain.random_element(rng))

    # -- orbits ------------------------------------------------------------

    def orbit(self, point: int) -> list[int]:
        """Orbit of a 1-based point, 1-based, in BFS order."""
        start = point - 1
        seen = {start}
        order = [start]
        for x in order:
            for g in self.generators:
                y = g.images[x]
                if y not in seen:
                    seen.add(y)
                    order.append(y)
        return [x + 1 for x in order]

    def orbits(self) -> list[list[int]]:
        left = set(range(1, self.degree + 1))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(sorted(o))
            left.difference_update(o)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    def is_2_transitive(self) -> bool:
        n = self.degree
        if n < 2 or not self.is_transitive():
            return n == 1
        start = (0, 1)
        seen = {start}
        queue = [start]
        for a, b in queue:
            for g in self.generators:
                pair = (g.images[a], g.images[b])
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        return len(seen) == n * (n - 1)

    # -- element data (|G| <= element_cap) ---------------------------------

    def _require_small(self, what: str):
        if self.order() > self.element_cap:
            raise BudgetExceeded(
                f"{what} needs the full element list but |G| = {self.order()} "
                f"exceeds the element cap {self.element_cap}")

    @cached_property
    def _rank_tables(self):
        ch = self.chain
        n = self.degree
        dt = np.uint8 if n <= 256 else np.uint16
        tables = []
        for i, b in enumerate(ch.base):
            orb = ch.orbits[i]
            posmap = np.full(n, -1, dtype=np.int64)
            posmap[orb] = np.arange(len(orb))
            uinv = np.array([ch.tinv[i][beta] for beta in orb], dtype=dt)
            u = np.array([ch.trans[i][beta] for beta in orb], dtype=dt)
            tables.append((b, posmap, u, uinv))
        return dt, tables

    def elements_array(self) -> np.ndarray:
        """All elements as an ``(|G|, n)`` array (0-based images), in rank order."""
        return self._elements

    @cached_property
    def _elements(self) -> np.ndarray:
        self._require_small("element enumeration")
        dt, tables = self._rank_tables
        E = np.arange(self.degree, dtype=dt)[None, :]
        for _, _, u, _ in reversed(tables):
            # rows: u_beta o e for beta in orbit, e in E
            E = u[:, E].reshape(-1, self.degree)
        return np.ascontiguousarray(E)

    def rank(self, arr: np.ndarray) -> np.ndarray:
        """Ranks of elements (rows of 0-based images); -1 for non-members."""
        dt, tables = self._rank_tables
        A = np.asarray(arr).astype(dt, copy=True)
        if A.ndim == 1:
            A = A[None, :]
        idx = np.zeros(len(A), dtype=np.int64)
        ok = np.ones(len(A), dtype=bool)
        for b, posmap, _, uinv in tables:
            pos = posmap[A[:, b]]
            bad = pos < 0
            ok &= ~bad
            pos[bad] = 0
            idx = idx * len(uinv) + pos
            A = np.take_along_axis(uinv[pos], A.astype(np.int64), axis=1)
        ok &= np.all(A == np.arange(self.degree, dtype=A.dtype), axis=1)
        idx[~ok] = -1
        return idx

    def element_index(self, g: Permutation) -> int:
        return int(self.rank(np.array(g.images))[0])

    @cached_property
    def class_labels(self) -> np.ndarray:
        """Conjugacy class label of every element (label = rank of class minimum)."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        E = self._elements
        N = len(E)
        rows, cols = [], []
        chunk = 262144
        for g in self.generators:
            s = np.array(g.images, dtype=E.dtype)
            sinv = np.array(_inv(g.images))
            for lo in range(0, N, chunk):
                block = E[lo:lo + chunk]
                conj = s[block[:, sinv]]
                r = self.rank(conj)
                rows.append(np.arange(lo, lo + len(block)))
                cols.append(r)
        rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
        graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(N, N))
        _, comp = connected_components(graph, directed=True, connection="weak")
        first = np.full(comp.max() + 1, N, dtype=np.int64)
        np.minimum.at(first, comp, np.arange(N))
        return first[comp]

    def conjugacy_classes(self) -> list["ConjugacyClassInfo"]:
        """All classes (needs the element list), sorted by (order, size, cycle type)."""
        labels = self.class_labels
        uniq, counts = np.unique(labels, return_counts=True)
        E = self._elements
        out = []
        for lab, cnt in zip(uniq, counts):
            rep = Permutation._raw(tuple(int(x) for x in E[lab]))
            out.append(ConjugacyClassInfo(rep, int(cnt), int(lab)))
        out.sort(key=lambda c: (c.element_order, c.size, c.cycle_type.parts))
        return out

    def class_of(self, g: Permutation) -> int:
        """Label of the class containing ``g``."""
        r = self.element_index(g)
        if r < 0:
            raise GroupError("element not in group")
        return int(self.class_labels[r])

    def center(self) -> list[Permutation]:
        """Elements commuting with every generator."""
        if self.order() <= self.element_cap:
            E = self._elements
            mask = np.ones(len(E), dtype=bool)
            for g in self.generators:
                s = np.array(g.images)
                mask &= np.all(s[E] == np.take(E, s, axis=1), axis=1)
            return [Permutation._raw(tuple(int(x) for x in row)) for row in E[mask]]
        if not self.is_transitive():
            raise BudgetExceeded("center of a large intransitive group is not supported")
        # a central element of a transitive group is determined by the image of 0
        out = []
        for target in range(self.degree):
            z = _centralizing_map(self, target)
            if z is not None and z in self:
                out.append(z)
        return out


@dataclass(frozen=True)
class ConjugacyClassInfo:
    representative: Permutation
    size: int
    label: int

    @property
    def cycle_type(self) -> CycleType:
        return cycle_type(self.representative)

    @property
    def element_order(self) -> int:
        return self.representative.order()


def _centralizing_map(G: PermGroup, target: int) -> Permutation | None:
    """The unique z with z(0) = target commuting with all generators, if any."""
    n = G.degree
    z = [-1] * n
    z[0] = target
    queue = [0]
    for x in queue:
        for g in G.generators:
            y = g.images[x]
            zy = g.images[z[x]]
            if z[y] == -1:
                z[y] = zy
                queue.append(y)
            elif z[y] != zy:
                return None
    if -1 in z or sorted(z) != list(range(n)):
        return None
    return Permutation._raw(tuple(z))


# ---------------------------------------------------------------------------
# module-level operations

def group_order(G: PermGroup) -> int:
    if not G.generators:
        raise GroupError("group has no generators")
    return G.order()


def is_transitive(G: PermGroup) -> bool:
    return G.is_transitive()


def is_2_transitive(G: PermGroup) -> bool:
    return G.is_2_transitive()


def element_bfs_order(G: PermGroup, cap: int = config.ELEMENT_CAP) -> int:
    """Independent order count by closing the identity under the generators."""
    n = G.degree
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = [g.images for g in G.generators]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _mul(s, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise BudgetExceeded("element BFS exceeded cap")
        frontier = nxt
    return len(seen)


def conjugacy_class(G: PermGroup, rep: Permutation, cap: int = config.CLASS_CAP) -> list[Permutation]:
    """Conjugacy class of ``rep`` in ``G``, sorted by image array."""
    return [Permutation._raw(tuple(int(x) for x in row)) for row in class_array(G, rep, cap)]


def class_array(G: PermGroup, rep: Permutation, cap: int = config.CLASS_CAP) -> np.ndarray:
    """Conjugacy class as a sorted ``(size, n)`` array; BFS under conjugation."""
    if rep not in G:
        raise GroupError("representative is not an element of the group")
    n = G.degree
    dt = np.uint8 if n <= 256 else np.uint16
    conj = [(np.array(g.images, dtype=dt), np.array(_inv(g.images))) for g in G.generators]
    start = np.array(rep.images, dtype=dt)[None, :]
    seen = {start[0].tobytes()}
    found = [start]
    frontier = start
    while len(frontier):
        new_rows = []
        for s, sinv in conj:
            cand = s[frontier[:, sinv]]
            for row in cand:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    new_rows.append(row)
            if len(seen) > cap:
                raise BudgetExceeded(f"conjugacy class larger than cap {cap}")
        frontier = np.array(new_rows, dtype=dt).reshape(-1, n)
        if len(frontier):
            found.append(frontier)
    arr = np.concatenate(found)
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def resolve_class(G: PermGroup, d: ClassDescriptor) -> Permutation:
    """Representative of the unique class matching the descriptor."""
    if d.cycle_type.degree != G.degree:
        raise GroupError(f"cycle type {d.cycle_type} has degree {d.cycle_type.degree}, group has {G.degree}")
    matches = []
    for c in G.conjugacy_classes():
        if c.cycle_type != d.cycle_type:
            continue
        if d.class_size is not None and c.size != d.class_size:
            continue
        if d.element_order is not None and c.element_order != d.element_order:
            continue
        matches.append(c)
    if not matches:
        raise GroupError(f"no conjugacy class matches {d}")
    if len(matches) > 1:
        sizes = ", ".join(str(c.size) for c in matches)
        raise GroupError(f"descriptor {d} is ambiguous: {len(matches)} classes (sizes {sizes}); add size=")
    return matches[0].representative


def orbit_stabilizer(G: PermGroup, obj, act, key=lambda x: x, cap: int = config.CLASS_CAP,
                     rng: random.Random | None = None):
    """Orbit of ``obj`` under ``act(g, obj)`` and generators of its stabilizer.

    Schreier generators are added (randomly, reproducibly) until the subgroup
    they generate has the order forced by the orbit-stabilizer theorem.
    """
    rng = rng or random.Random(0)
    gens = G.generators
    k0 = key(obj)
    trans = {k0: G.identity()}
    objs = {k0: obj}
    order = [k0]
    for k in order:
        x = objs[k]
        for g in gens:
            y = act(g, x)
            ky = key(y)
            if ky not in trans:
                trans[ky] = g * trans[k]
                objs[ky] = y
                order.append(ky)
                if len(order) > cap:
                    raise BudgetExceeded("orbit larger than cap")
    target = G.order() // len(order)
    stab: list[Permutation] = []
    chain = None
    pairs = [(k, g) for k in order for g in gens]
    rng.shuffle(pairs)
    current = 1
    for k, g in pairs:
        if current == target:
            break
        y = act(g, objs[k])
        sg = trans[key(y)].inverse() * g * trans[k]
        if sg.is_identity():
            continue
        if chain is not None and chain.contains(sg.images):
            continue
        stab.append(sg)
        chain = StabChain(G.degree, [s.images for s in stab])
        current = chain.order()
    if current != target:
        raise GroupError("stabilizer generation did not reach the expected order")
    return [objs[k] for k in order], stab


def centralizer_generators(G: PermGroup, g: Permutation) -> list[Permutation]:
    _, stab = orbit_stabilizer(G, g, lambda h, x: x.conjugate(h), key=lambda x: x.images)
    return stab


def cyclic_normalizer(G: PermGroup, sigma: Permutation) -> list[Permutation]:
    """Generators of ``N_G(<sigma>)``."""
    m = sigma.order()
    gens_of_cyclic = frozenset((sigma ** k).images for k in range(1, m + 1) if math.gcd(k, m) == 1)

    def act(h, s):
        hi = h.images
        hinv = _inv(hi)
        return frozenset(_mul(hi, _mul(x, hinv)) for x in s)

    _, stab = orbit_stabilizer(G, gens_of_cyclic, act, key=lambda s: min(s))
    return stab


def cyclic_normalizer_fixes_cycle(G: PermGroup, sigma: Permutation) -> bool:
    """Does ``N_G(<sigma>)`` fix (setwise) one of the cycles of ``sigma``?"""
    if sigma not in G:
        raise GroupError("element not in group")
    if sigma.is_identity():
        raise GroupError("identity has no cycles to fix")
    cycles = [frozenset(c) for c in sigma.cycles()]
    normalizer = cyclic_normalizer(G, sigma)
    for cyc in cycles:
        if all(frozenset(h(x) for x in cyc) == cyc for h in normalizer):
            return True
    return False


def _minimal_block(gens: Sequence[tuple], n: int, a: int, b: int) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(b)] = find(a)
    queue = deque([(a, b)])
    while queue:
        x, y = queue.popleft()
        for s in gens:
            u, v = find(s[x]), find(s[y])
            if u != v:
                parent[v] = u
                queue.append((u, v))
    return [find(x) for x in range(n)]


def block_systems(G: PermGroup) -> list[list[list[int]]]:
    """Nontrivial block systems generated by pairs ``{1, b}`` (1-based blocks).

    Each system is the finest G-invariant partition joining 1 and b; the
    result holds every distinct such system, ordered by block size.
    """
    if not G.is_transitive():
        raise GroupError("block systems need a transitive group")
    n = G.degree
    gens = [g.images for g in G.generators]
    systems = {}
    for b in range(1, n):
        labels = _minimal_block(gens, n, 0, b)
        blocks: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            blocks.setdefault(lab, []).append(x + 1)
        if len(blocks) == 1:
            continue
        part = tuple(sorted(tuple(sorted(bl)) for bl in blocks.values()))
        systems[part] = True
    out = [[list(bl) for bl in part] for part in systems]
    out.sort(key=lambda p: (len(p[0]), p))
    return out


# ---------------------------------------------------------------------------
# group files

def read_group_file(path) -> PermGroup:
    """``degree <n>`` then one generator per line in cycle notation; ``#`` comments."""
    degree = None
    gens = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if degree is None:
                    key, _, val = line.partition(" ")
                    if key != "degree":
                        raise GroupError("first line must be 'degree <n>'")
                    degree = int(val)
                else:
                    gens.append(Permutation.parse(line, degree))
            except (GroupError, ValueError) as exc:
                raise GroupError(f"{path}:{lineno}: {exc}") from None
    if degree is None:
        raise GroupError(f"{path}: missing degree line")
    return PermGroup(gens, degree)


def format_group(perms: Sequence[Permutation], comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"degree {perms[0].degree}")
    lines.extend(str(p) for p in perms)
    return "\n".join(lines) + "\n"
