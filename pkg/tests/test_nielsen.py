from __future__ import annotations

import pytest
from hypothesis import assume, given, strategies as st

from hurwitzkit import config
from hurwitzkit.nielsen import (
    GeneratingTuple, NielsenError, RamificationType, apply_braid_word, braid_generator, braid_orbit,
    braid_orbits, brute_force_nielsen, enumerate_straight_nielsen, exists_symmetric_tuple,
    extract_fiber_tuple, format_tuples, genus_from_cycle_types, hurwitz_curve_braid_types,
    parse_braid_word, read_tuples, sn_canonical, read_type_file, rigidity_check, tuple_genus, wreath_belyi_triple,
)
from hurwitzkit.permgroup import (
    ClassDescriptor, CycleType, GroupError, Permutation, PermGroup, class_array, cycle_type, product,
)

import oracles

P = Permutation.parse


def s3_type(data_dir):
    return read_type_file(data_dir / "s3_2a2a3a.type")


def make_type(gens, descriptors):
    G = PermGroup(gens)
    return RamificationType(G, [ClassDescriptor.parse(d) for d in descriptors])


def class_sets(T):
    return [{tuple(int(x) for x in row) for row in class_array(T.group, rep)} for rep in T.representatives]


def oracle_count(T):
    G = oracles.closure([g.images for g in T.group.generators], T.group.degree)
    return oracles.inner_nielsen_count(G, class_sets(T), T.group.degree)


def type_with_representatives(G, reps):
    """Type fixed by explicit representatives (F21 has two classes no descriptor separates)."""
    T = RamificationType(G, [ClassDescriptor(cycle_type(x), None, x.order()) for x in reps])
    T.__dict__["representatives"] = list(reps)
    T.__dict__["labels"] = [G.class_of(x) for x in reps]
    return T


A5 = [P("(1,2,3,4,5)", 5), P("(1,2,3)", 5)]
F21 = [P("(1,2,3,4,5,6,7)", 7), P("(2,3,5)(4,7,6)", 7)]


# -- enumeration ------------------------------------------------------------------

def test_s3_has_one_inner_class(data_dir):
    T = s3_type(data_dir)
    res = enumerate_straight_nielsen(T)
    assert res.count == 1
    assert res.count == oracle_count(T) == brute_force_nielsen(T)
    (t,) = res.representatives
    assert [str(c) for c in t.cycle_types()] == ["2^1.1^1", "2^1.1^1", "3^1"]


def test_a5_three_involutions_is_empty():
    T = make_type(A5, ["2^2.1^1"] * 3)
    assert enumerate_straight_nielsen(T).count == 0
    assert oracle_count(T) == 0


def test_a5_nonempty_types_match_oracle():
    G = PermGroup(A5)
    reps = {}
    for c in G.conjugacy_classes():
        reps.setdefault(str(c.cycle_type), []).append(c.representative)
    inv, three, (five_a, five_b) = reps["2^2.1^1"][0], reps["3^1.1^2"][0], reps["5^1"]
    for combo in ([inv, three, five_a], [three, three, five_b], [five_a, five_a, five_b], [five_a, five_b, five_b]):
        T = type_with_representatives(G, combo)
        assert enumerate_straight_nielsen(T).count == oracle_count(T)


def test_four_tuples_in_a5_match_oracle():
    T = make_type(A5, ["2^2.1^1", "2^2.1^1", "2^2.1^1", "3^1.1^2"])
    got = enumerate_straight_nielsen(T)
    assert got.count == brute_force_nielsen(T) == oracle_count(T)
    assert got.count > 0


# small centerless transitive groups, generators in cycle notation
POOL = {
    "S3": (3, ["(1,2)", "(1,2,3)"]),
    "A4": (4, ["(1,2,3)", "(1,2)(3,4)"]),
    "S4": (4, ["(1,2)", "(1,2,3,4)"]),
    "D5": (5, ["(1,2,3,4,5)", "(2,5)(3,4)"]),
    "F20": (5, ["(1,2,3,4,5)", "(2,3,5,4)"]),
    "A5": (5, ["(1,2,3,4,5)", "(1,2,3)"]),
    "F21": (7, ["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]),
    "S5": (5, ["(1,2)", "(1,2,3,4,5)"]),
    "PSL27": (7, ["(1,2,3,4,5,6,7)", "(2,3)(4,7)"]),
}
_GROUPS = {k: PermGroup([P(g, n) for g in gens]) for k, (n, gens) in POOL.items()}


def _random_type(draw, names, r):
    G = _GROUPS[draw(st.sampled_from(names))]
    reps = [c.representative for c in G.conjugacy_classes() if not c.representative.is_identity()]
    return type_with_representatives(G, [draw(st.sampled_from(reps)) for _ in range(r)])


@st.composite
def small_types(draw):
    return _random_type(draw, sorted(POOL), 3)


@st.composite
def small_four_types(draw):
    return _random_type(draw, ["S3", "A4", "S4", "D5", "F20", "A5"], 4)


@given(small_types())
def test_enumeration_matches_exhaustive_search(T):
    assert enumerate_straight_nielsen(T).count == oracle_count(T)


@given(small_four_types())
def test_enumeration_matches_exhaustive_search_r4(T):
    assert enumerate_straight_nielsen(T).count == oracle_count(T)


@given(small_types())
def test_representatives_are_valid_and_distinct(T):
    res = enumerate_straight_nielsen(T)
    keys = set()
    for t in res.representatives:
        GeneratingTuple(T.group, t.entries)          # validates product one and generation
        assert [T.group.class_of(e) for e in t.entries] == T.labels
        # lex-minimal over simultaneous conjugation
        G = oracles.closure([g.images for g in T.group.generators], T.group.degree)
        assert t.key() == min(tuple(oracles.mul(oracles.mul(g, e), oracles.inv(g)) for e in t.key()) for g in G)
        keys.add(t.key())
    assert len(keys) == res.count


def test_type_file_needs_classes(tmp_path, data_dir):
    path = tmp_path / "empty.type"
    path.write_text(f"group {data_dir / 's3.grp'}\n")
    with pytest.raises(NielsenError, match="class lines"):
        read_type_file(path)
    path.write_text("class 3^1\nclass 3^1\nclass 3^1\n")
    with pytest.raises(NielsenError, match="group"):
        read_type_file(path)


# -- braid action -----------------------------------------------------------------

def s3_tuple():
    a, b = P("(1,2)", 3), P("(1,3)", 3)
    return GeneratingTuple.generated_by([a, b, (a * b).inverse()])


def test_braid_generator_then_inverse():
    t = s3_tuple()
    for i in (1, 2):
        assert braid_generator(i, braid_generator(i, t), inverse=True) == t
        assert braid_generator(i, braid_generator(i, t, inverse=True)) == t


def test_braid_generator_fixes_equal_neighbours():
    a = P("(1,2,3)", 3)
    t = GeneratingTuple.generated_by([a, a, a])
    assert braid_generator(1, t) == t


def test_braid_generator_keeps_s3_class_multiset():
    t = s3_tuple()
    u = braid_generator(1, t)
    GeneratingTuple(t.group, u.entries)
    assert sorted(map(str, u.cycle_types())) == sorted(map(str, t.cycle_types()))


def test_braid_index_out_of_range():
    with pytest.raises(NielsenError):
        braid_generator(3, s3_tuple())


def test_parse_braid_word():
    assert parse_braid_word("Q1^2 Q3^-1", 4) == [(1, 2), (3, -1)]
    assert parse_braid_word("Q1Q2", 4) == [(1, 1), (2, 1)]
    assert parse_braid_word("1", 4) == []
    for bad in ("Q4", "Q1^", "R1", "Q1 x"):
        with pytest.raises(NielsenError):
            parse_braid_word(bad, 4)


words = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([-2, -1, 1, 2])), max_size=6)


@given(words)
def test_braid_words_preserve_product_generation_and_types(psp62_nielsen, word):
    for t in psp62_nielsen.representatives[:5]:
        img = apply_braid_word(word, t.key())
        entries = [Permutation(e) for e in img]
        GeneratingTuple(t.group, entries)
        assert sorted(str(cycle_type(e)) for e in entries) == sorted(map(str, t.cycle_types()))
        # the inverse word undoes it
        back = apply_braid_word([(i, -k) for i, k in reversed(word)], img)
        assert back == t.key()


def test_braid_generators_are_bijections_on_classes(psp62_type, psp62_nielsen):
    (orbit,) = braid_orbits(psp62_nielsen)
    # Q1 and Q3 move entries between different classes; these words stay in the straight class
    for w in ("Q2", "Q1^2", "Q3^2"):
        act = orbit.action(w)
        assert sorted(act.images) == list(range(len(orbit)))
        assert (act * orbit.action(w + "^-1" if "^" not in w else w.replace("^2", "^-2"))).is_identity()


def test_s3_orbit_has_size_one(data_dir):
    T = s3_type(data_dir)
    res = enumerate_straight_nielsen(T)
    orbit = braid_orbit(T, res.representatives[0])
    assert len(orbit) == 1


@given(small_types())
def test_orbits_partition_the_class(T):
    res = enumerate_straight_nielsen(T)
    assume(res.count > 0)
    orbits = braid_orbits(res)
    assert sum(len(o) for o in orbits) == res.count
    for o in orbits:
        assert len(o) <= res.count
    assert (len(orbits) == 1) == (len(orbits[0]) == res.count)


def test_identity_word_and_degree(psp62_nielsen):
    (orbit,) = braid_orbits(psp62_nielsen)
    assert str(hurwitz_curve_braid_types(orbit, ["1"])[0]) == "1^70"
    for ct in hurwitz_curve_braid_types(orbit, ["Q2 Q1^2 Q2", "Q3^-2 Q2"]):
        assert ct.degree == 70


def test_configured_words_give_genus_zero_curve(psp62_nielsen):
    (orbit,) = braid_orbits(psp62_nielsen)
    types = hurwitz_curve_braid_types(orbit, config.HURWITZ_CURVE_WORDS)
    assert genus_from_cycle_types(70, types) == 0


# -- genus ------------------------------------------------------------------------

def test_genus_examples():
    ct = CycleType.parse
    assert genus_from_cycle_types(70, [ct("15.12^2.9.8.7^2"), ct("3^13.2^14.1^3"), ct("2^35")]) == 0
    assert genus_from_cycle_types(27, [ct("2^6.1^15"), ct("2^6.1^15"), ct("4^6.1^3"), ct("6^4.3^1")]) == 0
    assert genus_from_cycle_types(2, [ct("2"), ct("2")]) == 0
    with pytest.raises(NielsenError):
        genus_from_cycle_types(3, [ct("2.1"), ct("3")])


def test_tuple_genus_examples(psp62_nielsen, data_dir):
    assert tuple_genus(psp62_nielsen.representatives[0]) == 0
    (t36,) = read_tuples(data_dir / "psp62_deg36_five_tuple.txt")
    assert tuple_genus(t36) == 0
    for n in (2, 5, 9):
        s = Permutation([(i + 1) % n for i in range(n)])
        assert tuple_genus(GeneratingTuple.generated_by([s, s.inverse()])) == 0


# -- rigidity and symmetric tuples ------------------------------------------------

def test_s3_is_rigid(data_dir):
    rep = rigidity_check(s3_type(data_dir))
    assert rep.rigid and rep.inner_classes == 1 and all(rep.rational)


def test_involution_entry_is_symmetric():
    # s3 an involution and s22 = s3 centralizes it
    c, a = P("(1,2,3)", 3), P("(1,2)", 3)
    tup = GeneratingTuple.generated_by([c, c.inverse(), a, a])
    assert exists_symmetric_tuple([tup]) is tup


def test_order_seven_entries_in_f21_are_never_inverted():
    G = PermGroup(F21)
    classes = [c.representative for c in G.conjugacy_classes() if not c.representative.is_identity()]
    threes = [x for x in classes if x.order() == 3]
    sevens = [x for x in classes if x.order() == 7]
    assert len(threes) == 2 and len(sevens) == 2
    found = []
    for a in threes:
        for b in threes:
            for c in sevens:
                for d in sevens:
                    found += enumerate_straight_nielsen(type_with_representatives(G, [a, b, c, d])).representatives
    assert found
    assert exists_symmetric_tuple(found) is None


def test_degree28_class_has_symmetric_tuple(psp62_nielsen):
    assert exists_symmetric_tuple(psp62_nielsen.representatives) is not None


# -- wreath triple ----------------------------------------------------------------

def test_three_tuple_triple_is_the_tuple():
    t = s3_tuple()
    assert list(wreath_belyi_triple(t)) == list(t.entries)


def test_wreath_round_trip_on_s3():
    t = s3_tuple()
    back = extract_fiber_tuple(wreath_belyi_triple(t))
    assert back.key() == t.key() or any(
        back.key() == t.conjugate(g).key() for g in (P("(1,2)", 3), P("(1,3)", 3), P("(2,3)", 3),
                                                    P("(1,2,3)", 3), P("(1,3,2)", 3)))


def test_wreath_triple_of_degree28_tuple(psp62_nielsen):
    for zero in ("first", "last"):
        triple = wreath_belyi_triple(psp62_nielsen.representatives[0], zero_entry=zero)
        assert triple[0].degree == 56
        assert product(list(triple)).is_identity()
    s0, s1, sinf = wreath_belyi_triple(psp62_nielsen.representatives[0], zero_entry="last")
    assert [str(cycle_type(x)) for x in (s0, s1, sinf)] == ["14^4", "2^24.1^8", "4^6.2^16"]


def test_stored_wreath_generators_give_back_the_fiber_tuple(wreath_xy):
    x, y = wreath_xy
    t = extract_fiber_tuple((x, y, (x * y).inverse()), zero_entry="last")
    assert [str(c) for c in t.cycle_types()] == ["2^6.1^16", "2^12.1^4", "2^12.1^4", "7^4"]
    assert t.group.order() == 1451520
    rebuilt = wreath_belyi_triple(t, zero_entry="last")
    # equal to (x, y, (xy)^-1) up to a relabelling of the 56 points
    key = sn_canonical([g.images for g in rebuilt], 56)[0]
    assert key == sn_canonical([x.images, y.images, (x * y).inverse().images], 56)[0]


def test_five_tuple_gives_degree_108_triple(data_dir):
    (t,) = read_tuples(data_dir / "psp62_deg36_five_tuple.txt")
    triple = wreath_belyi_triple(t)
    assert triple[0].degree == 108
    assert product(list(triple)).is_identity()
    back = extract_fiber_tuple(triple)
    assert [str(c) for c in back.cycle_types()] == [str(c) for c in t.cycle_types()]


def test_intransitive_block_restriction_is_rejected():
    a, b = P("(1,2)", 4), P("(3,4)", 4)
    triple = wreath_belyi_triple([a, a, b, b])
    with pytest.raises(NielsenError, match="not transitive"):
        extract_fiber_tuple(triple, block_system=[[1, 2, 3, 4], [5, 6, 7, 8]])


@given(small_four_types())
def test_wreath_triple_genus_equals_tuple_genus(T):
    res = enumerate_straight_nielsen(T)
    assume(res.count > 0)
    t = res.representatives[0]
    triple = wreath_belyi_triple(t)
    N = triple[0].degree
    assert N == 2 * t.degree
    g = genus_from_cycle_types(N, [cycle_type(s) for s in triple])
    assert g == tuple_genus(t)


def test_tuple_file_round_trip(tmp_path, psp62_nielsen):
    path = tmp_path / "t.txt"
    path.write_text(format_tuples(psp62_nielsen.representatives[:4], "four of them"))
    back = read_tuples(path)
    assert [b.key() for b in back] == [t.key() for t in psp62_nielsen.representatives[:4]]
