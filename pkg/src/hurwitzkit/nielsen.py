"""Nielsen classes, braid actions and the wreath-product Belyi triple.

Product-one is always ``t[0] * t[1] * ... * t[-1] == 1`` with the composition
convention of :mod:`hurwitzkit.permgroup` (right factor acts first).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import config
from .permgroup import (
    BudgetExceeded, ClassDescriptor, CycleType, GroupError, PermGroup, Permutation,
    StabChain, _inv, _mul, centralizer_generators, class_array, cycle_type, product,
    read_group_file, resolve_class,
)


class NielsenError(GroupError):
    pass


# ---------------------------------------------------------------------------
# tuples and types

def _transitive(entries: Sequence[tuple], n: int) -> bool:
    seen = bytearray(n)
    seen[0] = 1
    queue = [0]
    for x in queue:
        for e in entries:
            y = e[x]
            if not seen[y]:
                seen[y] = 1
                queue.append(y)
    return len(queue) == n


def generates(entries: Sequence[Permutation], group: PermGroup) -> bool:
    """Do the entries (assumed to lie in ``group``) generate all of it?"""
    n = group.degree
    imgs = [e.images for e in entries]
    if group.is_transitive() and not _transitive(imgs, n):
        return False
    return StabChain(n, imgs).order() == group.order()


class GeneratingTuple:
    """Nonidentity permutations with product one generating ``group``."""

    __slots__ = ("group", "entries")

    def __init__(self, group: PermGroup, entries: Sequence[Permutation], check: bool = True):
        self.group = group
        self.entries = tuple(entries)
        if check:
            self._validate()

    def _validate(self):
        if len(self.entries) < 2:
            raise NielsenError("a generating tuple needs at least two entries")
        for k, e in enumerate(self.entries):
            if e.degree != self.group.degree:
                raise NielsenError(f"entry {k + 1} has degree {e.degree}, group has {self.group.degree}")
            if e.is_identity():
                raise NielsenError(f"entry {k + 1} is the identity")
            if e not in self.group:
                raise NielsenError(f"entry {k + 1} is not in the group")
        if not product(self.entries).is_identity():
            raise NielsenError("entries do not multiply to the identity")
        if not generates(self.entries, self.group):
            raise NielsenError("entries do not generate the group")

    @classmethod
    def generated_by(cls, entries: Sequence[Permutation]) -> "GeneratingTuple":
        """Tuple whose group is the one its entries generate."""
        return cls(PermGroup(list(entries)), entries)

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def degree(self) -> int:
        return self.group.degree

    def cycle_types(self) -> list[CycleType]:
        return [cycle_type(e) for e in self.entries]

    def key(self) -> tuple:
        return tuple(e.images for e in self.entries)

    def conjugate(self, g: Permutation) -> "GeneratingTuple":
        """Simultaneous conjugation ``g * e * g^-1``."""
        return GeneratingTuple(self.group, [e.conjugate(g) for e in self.entries], check=False)

    def __eq__(self, other):
        return isinstance(other, GeneratingTuple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return " ".join(str(e) for e in self.entries)

    def __repr__(self):
        return f"GeneratingTuple({self})"


@dataclass
class RamificationType:
    group: PermGroup
    classes: list[ClassDescriptor]

    @property
    def r(self) -> int:
        return len(self.classes)

    @cached_property
    def representatives(self) -> list[Permutation]:
        return [resolve_class(self.group, d) for d in self.classes]

    @cached_property
    def labels(self) -> list[int]:
        """Class labels (see ``PermGroup.class_labels``) of each position."""
        return [self.group.class_of(p) for p in self.representatives]


def read_type_file(path) -> RamificationType:
    """``group <path>`` then one ``class <cycle_type> [size=n] [order=k]`` per position."""
    path = Path(path)
    group = None
    classes = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            try:
                if key == "group":
                    gpath = Path(rest.strip())
                    if not gpath.is_absolute():
                        gpath = path.parent / gpath
                    group = read_group_file(gpath)
                elif key == "class":
                    classes.append(ClassDescriptor.parse(rest))
                else:
                    raise NielsenError(f"unknown directive {key!r}")
            except (GroupError, ValueError, OSError) as exc:
                raise NielsenError(f"{path}:{lineno}: {exc}") from None
    if group is None:
        raise NielsenError(f"{path}: missing 'group' line")
    if len(classes) < 3:
        raise NielsenError(f"{path}: need at least 3 class lines, found {len(classes)}")
    return RamificationType(group, classes)


# ---------------------------------------------------------------------------
# genus

def genus_from_cycle_types(n: int, types: Sequence[CycleType]) -> int:
    """Genus from Riemann-Hurwitz: ``2 - 2g = 2n - sum(ind)``."""
    total = 0
    for ct in types:
        if ct.degree != n:
            raise NielsenError(f"cycle type {ct} does not have degree {n}")
        total += ct.index
    twice = total - 2 * n + 2
    if twice < 0 or twice % 2:
        raise NielsenError(f"index sum {total} gives no valid genus for degree {n}")
    return twice // 2


def tuple_genus(t: GeneratingTuple) -> int:
    if not t.group.is_transitive():
        raise NielsenError("genus needs a transitive group")
    return genus_from_cycle_types(t.degree, t.cycle_types())


# ---------------------------------------------------------------------------
# equivalence under simultaneous conjugation

def _relabel_key(tup: Sequence[tuple], n: int, start: int):
    """Tuple conjugated by the BFS relabelling from ``start``; returns (key, relabel)."""
    lab = [-1] * n
    lab[start] = 0
    order = [start]
    for x in order:
        for e in tup:
            y = e[x]
            if lab[y] < 0:
                lab[y] = len(order)
                order.append(y)
    if len(order) != n:
        raise NielsenError("tuple does not act transitively")
    key = tuple(tuple(lab[e[order[i]]] for i in range(n)) for e in tup)
    return key, tuple(lab)


def sn_canonical(tup: Sequence[tuple], n: int):
    """Canonical form under simultaneous conjugation by the full symmetric group.

    Returns the minimal relabelled tuple and every relabelling attaining it.
    """
    best = None
    maps = []
    for v in range(n):
        key, lab = _relabel_key(tup, n, v)
        if best is None or key < best:
            best, maps = key, [lab]
        elif key == best:
            maps.append(lab)
    return best, maps


class InnerClassIndex:
    """Deduplicates generating tuples up to simultaneous conjugation by ``G``."""

    def __init__(self, group: PermGroup):
        self.group = group
        self.n = group.degree
        self._buckets: dict[tuple, list[tuple[int, tuple]]] = {}
        self.members: list[tuple] = []

    def lookup(self, tup: Sequence[tuple], add: bool = False) -> int:
        """Index of the inner class of ``tup``; -1 (or a new index) if unseen."""
        key, maps = sn_canonical(tup, self.n)
        bucket = self._buckets.setdefault(key, [])
        chain = self.group.chain
        for idx, rep_map in bucket:
            rep_inv = _inv(rep_map)
            for lab in maps:
                # lab conjugates tup to key, rep_map conjugates the stored rep to key
                if chain.contains(_mul(rep_inv, lab)):
                    return idx
        if not add:
            return -1
        idx = len(self.members)
        self.members.append(tuple(tup))
        bucket.append((idx, maps[0]))
        return idx

    def __len__(self):
        return len(self.members)


class LexMinimizer:
    """Lexicographically smallest simultaneous ``G``-conjugate of a tuple.

    Works column by column over the full element list: at each image position
    only the conjugators attaining the minimum so far are kept.
    """

    def __init__(self, group: PermGroup):
        self.group = group
        self.E = group.elements_array().astype(np.int64)
        inv = np.empty_like(self.E)
        rows = np.arange(len(self.E))[:, None]
        inv[rows, self.E] = np.arange(group.degree)[None, :]
        self.Einv = inv

    def __call__(self, tup: Sequence[tuple]) -> tuple:
        n = self.group.degree
        cand = np.arange(len(self.E))
        out = []
        for e in tup:
            e = np.asarray(e, dtype=np.int64)
            row = []
            for i in range(n):
                vals = self.E[cand, e[self.Einv[cand, i]]]
                m = vals.min()
                cand = cand[vals == m]
                row.append(int(m))
            out.append(tuple(row))
        return tuple(out)


# ---------------------------------------------------------------------------
# enumeration

@dataclass
class NielsenResult:
    type: RamificationType
    count: int                     # inner classes
    straight_count: int            # |SNi| before quotienting
    representatives: list[GeneratingTuple]
    candidates: int                # tuples examined

    def __len__(self):
        return self.count


def _row_lookup(arr: np.ndarray) -> dict:
    return {row.tobytes(): i for i, row in enumerate(arr)}


def _orbits_under_conjugation(arr: np.ndarray, gens: Sequence[Permutation]):
    """Orbits of ``<gens>`` acting by conjugation on the rows of ``arr``."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    m = len(arr)
    index = _row_lookup(arr)
    rows, cols = [], []
    for g in gens:
        s = np.array(g.images, dtype=arr.dtype)
        sinv = np.array(_inv(g.images))
        conj = s[arr[:, sinv]]
        rows.append(np.arange(m))
        cols.append(np.array([index[r.tobytes()] for r in conj]))
    if not rows:
        return np.arange(m)
    graph = coo_matrix((np.ones(m * len(gens), dtype=np.int8),
                        (np.concatenate(rows), np.concatenate(cols))), shape=(m, m))
    _, comp = connected_components(graph, directed=True, connection="weak")
    return comp


class _Membership:
    """Vectorised test 'row lies in a given conjugacy class'."""

    def __init__(self, group: PermGroup, rep: Permutation, cap: int):
        self.group = group
        if group.order() <= group.element_cap:
            self.label = group.class_of(rep)
            self.set = None
        else:
            self.set = {row.tobytes() for row in class_array(group, rep, cap)}

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        if self.set is None:
            ranks = self.group.rank(rows)
            ok = ranks >= 0
            res = np.zeros(len(rows), dtype=bool)
            res[ok] = self.group.class_labels[ranks[ok]] == self.label
            return res
        return np.array([r.tobytes() in self.set for r in rows], dtype=bool)


def enumerate_straight_nielsen(T: RamificationType, budget: int = config.PAIR_BUDGET,
                               class_cap: int = config.CLASS_CAP,
                               representatives: bool = True) -> NielsenResult:
    """Inner classes of generating tuples with entries in ``T.classes`` (in order).

    The first entry is fixed to its class representative; the second ranges
    over orbit representatives of the centralizer of the first; the middle
    entries run over full classes and the last is solved from product-one.
    """
    G = T.group
    r = T.r
    if r < 3:
        raise NielsenError("need at least 3 classes")
    if len(G.center()) > 1:
        raise NielsenError("groups with nontrivial center are not supported")
    n = G.degree
    order = G.order()
    reps = T.representatives
    s1 = reps[0]

    class_arrays = [None] + [class_array(G, reps[k], class_cap) for k in range(1, r - 1)]
    last_member = _Membership(G, reps[-1], class_cap)

    cent = centralizer_generators(G, s1)
    cent_order = StabChain(n, [g.images for g in cent]).order() if cent else 1
    comp = _orbits_under_conjugation(class_arrays[1], cent)
    orbit_reps: dict[int, int] = {}
    orbit_size: dict[int, int] = {}
    for i, c in enumerate(comp):
        orbit_reps.setdefault(c, i)
        orbit_size[c] = orbit_size.get(c, 0) + 1

    n_middle = [len(class_arrays[k]) for k in range(2, r - 1)]
    expected = len(orbit_reps) * math.prod(n_middle) if r > 3 else len(orbit_reps)
    if expected > budget:
        raise BudgetExceeded(f"enumeration would examine {expected} candidates (budget {budget})")

    s1_arr = np.array(s1.images, dtype=np.int64)
    weighted = 0
    candidates = 0
    found: list[tuple] = []
    ar = np.arange(n)

    for c, i2 in sorted(orbit_reps.items(), key=lambda kv: kv[1]):
        s2 = class_arrays[1][i2].astype(np.int64)
        hits = 0
        # prefix products over positions 3..r-2, then vectorise position r-1
        stack = [(s1_arr[s2], [s2])]
        while stack:
            prefix, chosen = stack.pop()
            pos = len(chosen) + 1           # 0-based index of the next entry
            if pos == r - 1:
                # chosen holds entries 2..r-1 ; prefix = s1*...*s_{r-1}
                last = np.empty(n, dtype=np.int64)
                last[prefix] = ar
                candidates += 1
                if last_member(last[None, :])[0]:
                    tup = (s1_arr,) + tuple(chosen) + (last,)
                    hits += _accept(tup, G, found)
                continue
            arr = class_arrays[pos].astype(np.int64)
            if pos == r - 2:
                prod = prefix[arr]                      # prefix * s for all s
                lasts = np.empty_like(prod)
                lasts[np.arange(len(prod))[:, None], prod] = ar[None, :]
                candidates += len(arr)
                ok = np.nonzero(last_member(lasts))[0]
                for j in ok:
                    tup = (s1_arr,) + tuple(chosen) + (arr[j], lasts[j])
                    hits += _accept(tup, G, found)
            else:
                for s in arr:
                    stack.append((prefix[s], chosen + [s]))
        weighted += orbit_size[c] * hits

    if weighted % cent_order:
        raise NielsenError("inconsistent orbit weights (centralizer order does not divide count)")
    count = weighted // cent_order
    straight = count * order

    result_reps: list[GeneratingTuple] = []
    if representatives:
        index = InnerClassIndex(G)
        for tup in found:
            index.lookup(tup, add=True)
        if len(index) != count:
            raise NielsenError(f"representative dedup found {len(index)} classes, weights give {count}")
        lexmin = LexMinimizer(G) if order <= G.element_cap else None
        canon = sorted(lexmin(t) if lexmin else t for t in index.members)
        result_reps = [GeneratingTuple(G, [Permutation._raw(e) for e in t], check=False) for t in canon]
    return NielsenResult(T, count, straight, result_reps, candidates)


def _accept(tup, G: PermGroup, found: list) -> int:
    imgs = [tuple(int(x) for x in e) for e in tup]
    if any(all(i == x for i, x in enumerate(e)) for e in imgs):
        return 0
    if G.is_transitive() and not _transitive(imgs, G.degree):
        return 0
    if StabChain(G.degree, imgs).order() != G.order():
        return 0
    found.append(tuple(imgs))
    return 1


def brute_force_nielsen(T: RamificationType) -> int:
    """Inner-class count by trying every tuple (small groups only; a test oracle)."""
    G = T.group
    classes = [[tuple(int(x) for x in row) for row in class_array(G, rep)] for rep in T.representatives]
    ident = tuple(range(G.degree))
    total = 0

    def rec(pos, acc, chosen):
        nonlocal total
        if pos == T.r - 1:
            last = _inv(acc)
            if last in last_set:
                imgs = chosen + [last]
                if StabChain(G.degree, imgs).order() == G.order():
                    total += 1
            return
        for s in classes[pos]:
            rec(pos + 1, _mul(acc, s), chosen + [s])

    last_set = set(classes[-1])
    rec(0, ident, [])
    if total % G.order():
        raise NielsenError("brute-force count not divisible by |G|")
    return total // G.order()


# ---------------------------------------------------------------------------
# braid action

def braid_generator(i: int, t: GeneratingTuple, inverse: bool = False) -> GeneratingTuple:
    """Artin generator ``Q_i`` (1-based) on a tuple, or its inverse."""
    if not 1 <= i <= t.r - 1:
        raise NielsenError(f"braid index {i} outside 1..{t.r - 1}")
    e = list(t.entries)
    a, b = e[i - 1], e[i]
    if inverse:
        e[i - 1], e[i] = b, b.inverse() * a * b
    else:
        e[i - 1], e[i] = a * b * a.inverse(), a
    return GeneratingTuple(t.group, e, check=False)


def _braid_raw(i: int, tup: tuple, inverse: bool = False) -> tuple:
    e = list(tup)
    a, b = e[i - 1], e[i]
    if inverse:
        e[i - 1], e[i] = b, _mul(_inv(b), _mul(a, b))
    else:
        e[i - 1], e[i] = _mul(a, _mul(b, _inv(a))), a
    return tuple(e)


_WORD_TOKEN = re.compile(r"Q(\d+)(?:\^(-?\d+))?")


def parse_braid_word(word: str, r: int) -> list[tuple[int, int]]:
    """``"Q1^2 Q3^-1"`` or ``"Q1Q2"`` into ``[(1, 2), (3, -1)]``; ``"1"`` is the identity."""
    w = word.replace(" ", "").replace("*", "")
    if w in ("", "1", "id"):
        return []
    out = []
    pos = 0
    for m in _WORD_TOKEN.finditer(w):
        if m.start() != pos:
            raise NielsenError(f"bad braid word {word!r}")
        pos = m.end()
        i = int(m.group(1))
        k = int(m.group(2)) if m.group(2) else 1
        if not 1 <= i <= r - 1:
            raise NielsenError(f"braid word {word!r} uses Q{i}, valid are Q1..Q{r - 1}")
        out.append((i, k))
    if pos != len(w):
        raise NielsenError(f"bad braid word {word!r}")
    return out


def apply_braid_word(word, tup: tuple) -> tuple:
    """Apply a parsed word to raw tuples, leftmost letter first."""
    for i, k in word:
        for _ in range(abs(k)):
            tup = _braid_raw(i, tup, inverse=k < 0)
    return tup


@dataclass
class BraidOrbit:
    type: RamificationType
    members: list[tuple]           # raw tuples, one per inner class, BFS order
    index: InnerClassIndex

    def __len__(self):
        return len(self.members)

    def action(self, word: str) -> Permutation:
        """Permutation of the orbit induced by a braid word (1-based on BFS order)."""
        parsed = parse_braid_word(word, self.type.r)
        images = []
        for tup in self.members:
            img = apply_braid_word(parsed, tup)
            j = self.index.lookup(img)
            if j < 0:
                raise NielsenError(f"braid word {word!r} leaves the straight Nielsen class")
            images.append(j)
        return Permutation(images)


def _in_straight_class(tup: tuple, G: PermGroup, labels: Sequence[int]) -> bool:
    ranks = G.rank(np.array(tup))
    return bool(np.all(ranks >= 0)) and all(int(G.class_labels[k]) == lab for k, lab in zip(ranks, labels))


def braid_orbit(T: RamificationType, seed: GeneratingTuple | tuple,
                budget: int = config.ORBIT_BUDGET) -> BraidOrbit:
    """Straight-class part of the braid orbit of ``seed``.

    BFS runs over the full (unordered-class) Nielsen class under ``Q_1..Q_{r-1}``;
    the members whose classes appear in the order of ``T`` are returned.
    """
    G = T.group
    raw = seed.key() if isinstance(seed, GeneratingTuple) else tuple(seed)
    labels = T.labels
    if not _in_straight_class(raw, G, labels):
        raise NielsenError("seed is not in the straight Nielsen class of the type")
    full = InnerClassIndex(G)
    full.lookup(raw, add=True)
    queue = [raw]
    for tup in queue:
        for i in range(1, T.r):
            img = _braid_raw(i, tup)
            if full.lookup(img) < 0:
                full.lookup(img, add=True)
                queue.append(img)
                if len(queue) > budget:
                    raise BudgetExceeded(f"braid orbit exceeds budget {budget}")
    straight = InnerClassIndex(G)
    members = []
    for tup in queue:
        if _in_straight_class(tup, G, labels):
            straight.lookup(tup, add=True)
            members.append(tup)
    return BraidOrbit(T, members, straight)


def braid_orbits(result: NielsenResult, budget: int = config.ORBIT_BUDGET) -> list[BraidOrbit]:
    """Partition the straight Nielsen class into braid orbits."""
    left = [r.key() for r in result.representatives]
    done = InnerClassIndex(result.type.group)
    orbits = []
    for tup in left:
        if done.lookup(tup) >= 0:
            continue
        orb = braid_orbit(result.type, tup, budget)
        for m in orb.members:
            done.lookup(m, add=True)
        orbits.append(orb)
    return orbits


def hurwitz_curve_braid_types(orbit: BraidOrbit, words: Sequence[str]) -> list[CycleType]:
    return [cycle_type(orbit.action(w)) for w in words]


# ---------------------------------------------------------------------------
# rigidity and symmetric tuples

def is_rational_class(G: PermGroup, rep: Permutation) -> bool:
    """Is the class closed under ``x -> x^k`` for all ``k`` prime to the element order?"""
    m = rep.order()
    label = G.class_of(rep)
    return all(G.class_of(rep ** k) == label for k in range(2, m) if math.gcd(k, m) == 1)


@dataclass
class RigidityReport:
    rigid: bool
    inner_classes: int
    rational: list[bool]


def rigidity_check(T: RamificationType, **kw) -> RigidityReport:
    res = enumerate_straight_nielsen(T, representatives=False, **kw)
    rational = [is_rational_class(T.group, rep) for rep in T.representatives]
    return RigidityReport(res.count == 1, res.count, rational)


def exists_symmetric_tuple(tuples: Sequence[GeneratingTuple]):
    """First tuple ``(s1, s21, s22, s3)`` with ``s3 = s22^-1 * s3^-1 * s22``, or None."""
    for t in tuples:
        if t.r != 4:
            raise NielsenError("symmetric-tuple test needs 4-tuples")
        _, _, s22, s3 = t.entries
        if s22.inverse() * s3.inverse() * s22 == s3:
            return t
    return None


# ---------------------------------------------------------------------------
# wreath-product Belyi triple

def _orient(t: Sequence[Permutation], zero_entry: str) -> list[Permutation]:
    if zero_entry == "first":
        return list(t)
    if zero_entry == "last":
        return [e.inverse() for e in reversed(t)]
    raise NielsenError("zero_entry must be 'first' or 'last'")


def wreath_belyi_triple(t: GeneratingTuple | Sequence[Permutation], zero_entry: str = "first"):
    """Monodromy ``(s0, s1, s_inf)`` of ``g o f`` with ``g(x) = x^(r-2)``.

    With ``zero_entry="first"``, ``s0^(r-2)`` restricted to the first block is
    ``t[0]``, ``s_inf^(r-2)`` is conjugate to ``t[-1]`` on a block and ``s1``
    acts on the blocks by ``t[1..r-2]``.  ``"last"`` builds the triple of the
    reversed inverted tuple, putting the last class over 0.
    """
    entries = t.entries if isinstance(t, GeneratingTuple) else tuple(t)
    tau = _orient(entries, zero_entry)
    r = len(tau)
    if r < 3:
        raise NielsenError("need r >= 3")
    if not product(tau).is_identity():
        raise NielsenError("tuple does not have product one")
    n = tau[0].degree
    k = r - 2
    s0 = [0] * (n * k)
    s1 = [0] * (n * k)
    t1 = tau[0].images
    for j in range(k):
        d = tau[k - j].images           # block j carries tau_{k+1-j} (1-based)
        for i in range(n):
            s0[j * n + i] = (j + 1) * n + i if j < k - 1 else t1[i]
            s1[j * n + i] = j * n + d[i]
    sigma0 = Permutation._raw(tuple(s0))
    sigma1 = Permutation._raw(tuple(s1))
    sinf = (sigma0 * sigma1).inverse()
    return sigma0, sigma1, sinf


def extract_fiber_tuple(triple: Sequence[Permutation], block_system=None,
                        zero_entry: str = "first") -> GeneratingTuple:
    """Recover the r-tuple of the cover ``f`` from the triple of ``x^(r-2) o f``."""
    from .permgroup import block_systems

    s0, s1, sinf = triple
    if not product([s0, s1, sinf]).is_identity():
        raise NielsenError("triple does not have product one")
    N = s0.degree
    if block_system is None:
        H = PermGroup([s0, s1, sinf])
        if not H.is_transitive():
            raise NielsenError("triple is not transitive")
        candidates = [bs for bs in block_systems(H) if _cyclic_under(s0, s1, bs)]
        if not candidates:
            # a 3-tuple is its own triple: one block holding every point
            candidates = [[list(range(1, N + 1))]]
        # fewest blocks of the finest-looking kind: largest blocks first
        block_system = max(candidates, key=lambda bs: len(bs[0]))
    blocks = [sorted(b) for b in block_system]
    if not _cyclic_under(s0, s1, blocks):
        raise NielsenError("block system is not permuted cyclically by s0 with s1 fixing each block")
    k = len(blocks)
    B0 = next(b for b in blocks if 1 in b)
    n = len(B0)
    pos = {p: i for i, p in enumerate(B0)}

    def on_b0(g: Permutation) -> Permutation:
        return Permutation([pos[g(p)] for p in B0])

    tau = [on_b0(s0 ** k)] + [None] * k
    for j in range(k):
        tau[k - j] = on_b0((s0 ** j).inverse() * s1 * (s0 ** j))
    tau.append(product(tau).inverse())
    if any(e.is_identity() for e in tau):
        raise NielsenError("extracted tuple has an identity entry")
    G = PermGroup(tau)
    if not G.is_transitive():
        raise NielsenError("restriction to a block is not transitive")
    out = _orient(tau, zero_entry)  # orientation is an involution
    return GeneratingTuple(G, out)


def _cyclic_under(s0: Permutation, s1: Permutation, blocks) -> bool:
    k = len(blocks)
    where = {}
    for bi, b in enumerate(blocks):
        for p in b:
            where[p] = bi
    for bi, b in enumerate(blocks):
        if any(where[s1(p)] != bi for p in b):
            return False
    # s0 permutes the blocks as a single k-cycle
    img = {}
    for bi, b in enumerate(blocks):
        targets = {where[s0(p)] for p in b}
        if len(targets) != 1:
            return False
        img[bi] = targets.pop()
    seen, x = set(), 0
    for _ in range(k):
        seen.add(x)
        x = img[x]
    return x == 0 and len(seen) == k


# ---------------------------------------------------------------------------
# random tuple search

def random_tuple_search(T: RamificationType, tries: int, seed: int = 0) -> GeneratingTuple | None:
    """Look for one tuple of type ``T`` by sampling the first r-1 entries at random."""
    G = T.group
    rng = random.Random(seed)
    reps = T.representatives
    last_member = _Membership(G, reps[-1], config.CLASS_CAP)
    for _ in range(tries):
        entries = []
        for rep in reps[:-1]:
            g = G.random_element(rng)
            entries.append(rep.conjugate(g))
        last = product(entries).inverse()
        if not last_member(np.array([last.images]))[0]:
            continue
        entries.append(last)
        if generates(entries, G):
            return GeneratingTuple(G, entries, check=False)
    return None


def format_tuples(tuples: Sequence[GeneratingTuple], header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    if tuples:
        lines.append(f"degree {tuples[0].degree}")
    for t in tuples:
        lines.append(" ".join(str(e) for e in t.entries))
    return "\n".join(lines) + "\n"


def read_tuples(path, check: bool = True) -> list[GeneratingTuple]:
    """Inverse of :func:`format_tuples`: ``degree n`` then one tuple per line."""
    degree = None
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if line.startswith("degree"):
                    degree = int(line.split()[1])
                    continue
                if degree is None:
                    raise NielsenError("missing 'degree' line")
                entries = [Permutation.parse(w, degree) for w in line.split()]
                out.append(GeneratingTuple(PermGroup(entries), entries, check=check))
            except (GroupError, ValueError) as exc:
                raise NielsenError(f"{path}:{lineno}: {exc}") from None
    return out
