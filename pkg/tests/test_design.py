import itertools

import pytest

from corpus import cyclic_sts, sts_corpus
from tsflow.constructions import ts62_table
from tsflow.design import (
    Resolution,
    StarterSet,
    affine_sts9,
    check_admissible,
    check_hanani,
    check_resolution,
    construct_hanani,
    develop_cyclic,
    develop_rotational,
    find_cyclic_starters,
    find_resolution,
    find_rotational_starters,
    incidence_matrix,
    make_design,
    make_design_ordered,
    pair_counts,
    pasch_configurations,
    pasch_switch,
    projective_sts15,
    rotational_resolvable_ts2,
)
from tsflow.errors import MalformedBlock, NotADesign, PairCoverageError


def fano():
    return develop_cyclic(StarterSet(7, 1, ((0, 1, 3),), (7,)))[0]


def test_two_copies_of_a_triple_is_ts32():
    d = make_design(3, 2, 3, [(0, 1, 2), (0, 1, 2)])
    assert (d.b, d.r) == (2, 2)


def test_ts62_table_is_a_design():
    blocks, _ = ts62_table()
    d = make_design(6, 2, 3, blocks)
    assert d.b == 10 and d.r == 5


def test_undercovered_pair_reported():
    with pytest.raises(PairCoverageError) as exc:
        make_design(4, 1, 3, [(0, 1, 2)])
    assert exc.value.pair == (0, 3) and exc.value.count == 0


@pytest.mark.parametrize("blk", [(0, 1), (0, 0, 1), (0, 1, 7)])
def test_malformed_blocks(blk):
    with pytest.raises(MalformedBlock):
        make_design(7, 1, 3, [blk])


def test_ordered_design_keeps_the_permutation():
    blocks = [(2, 1, 0), (0, 1, 2)]
    d, order = make_design_ordered(3, 2, 3, blocks)
    for i, j in enumerate(order):
        assert d.blocks[i] == tuple(sorted(blocks[j]))


@pytest.mark.parametrize("v,lam,want", [(7, 1, True), (5, 1, False), (10, 2, True),
                                        (6, 1, False), (8, 6, True), (8, 3, False)])
def test_admissibility(v, lam, want):
    assert check_admissible(v, lam) is want


def test_admissibility_matches_divisibility():
    # lambda(v-1) even and lambda v(v-1) divisible by 6
    for v in range(3, 40):
        for lam in range(1, 13):
            want = lam * (v - 1) % 2 == 0 and lam * v * (v - 1) % 6 == 0
            assert check_admissible(v, lam) is want


def test_incidence_matrices():
    m = incidence_matrix(make_design(3, 2, 3, [(0, 1, 2)] * 2))
    assert [list(r) for r in m.entries] == [[1, 1]] * 3
    f = incidence_matrix(fano())
    assert all(sum(r) == 3 for r in f.entries)
    assert all(sum(col) == 3 for col in zip(*f.entries))
    t = incidence_matrix(make_design(6, 2, 3, ts62_table()[0]))
    assert (t.rows, t.cols) == (6, 10) and all(sum(r) == 5 for r in t.entries)


def test_develop_cyclic_sts13():
    d, tags = develop_cyclic(StarterSet(13, 1, ((0, 1, 4), (0, 2, 7)), (13, 13)))
    assert d.b == 26 and sorted(set(tags)) == [0, 1] and tags.count(0) == 13


def test_develop_cyclic_rejects_bad_starters():
    with pytest.raises(NotADesign):
        develop_cyclic(StarterSet(9, 1, ((0, 1, 2),), (9,)))


def _differences(v, starters):
    out = []
    for blk in starters:
        for a, b in itertools.permutations(blk, 2):
            out.append((a - b) % v)
    return sorted(out)


@pytest.mark.parametrize("v,lam", [(13, 1), (7, 2), (19, 1), (10, 4), (11, 3), (16, 2)])
def test_found_starters_cover_differences(v, lam):
    st = find_cyclic_starters(v, lam, True)
    assert all(n == v for n in st.orbit_lengths)
    # every nonzero difference appears exactly lambda times
    assert _differences(v, st.starters) == sorted(list(range(1, v)) * lam)


def test_no_full_orbit_sts9():
    assert find_cyclic_starters(9, 1, True) is None


def test_short_orbit_allowed_for_sts15():
    st = find_cyclic_starters(15, 1, require_full_orbits=False)
    assert 5 in st.orbit_lengths
    develop_cyclic(st)


def test_cyclic_development_is_shift_invariant():
    d = cyclic_sts(19)
    shifted = sorted(tuple(sorted((p + 1) % 19 for p in blk)) for blk in d.blocks)
    assert shifted == list(d.blocks)


def test_kts9_resolution():
    res = find_resolution(affine_sts9(), 1)
    assert len(res.classes) == 4 and all(len(c) == 3 for c in res.classes)
    assert check_resolution(affine_sts9(), res) == []


def test_cyclic_orbits_are_3_classes():
    d, tags = develop_cyclic(find_cyclic_starters(13, 1))
    classes = tuple(tuple(j for j, t in enumerate(tags) if t == s) for s in (0, 1))
    assert check_resolution(d, Resolution(3, classes)) == []


def test_fano_has_no_parallel_class():
    assert find_resolution(fano(), 1) is None


def test_bad_resolution_is_reported():
    d = affine_sts9()
    assert check_resolution(d, Resolution(1, (tuple(range(12)),)))


def test_no_resolvable_ts62():
    assert rotational_resolvable_ts2(6) is None


@pytest.mark.parametrize("v", [9, 12, 18, 21])
def test_rotational_resolvable_ts2(v):
    d, res = rotational_resolvable_ts2(v)
    assert d.lam == 2 and check_resolution(d, res) == []
    assert len(res.classes) == v - 1


@pytest.mark.parametrize("v,lam", [(8, 6), (14, 6), (14, 12), (20, 6)])
def test_rotational_starters(v, lam):
    d, tags = develop_rotational(find_rotational_starters(v, lam))
    assert (d.v, d.lam) == (v, lam)
    assert len(tags) == d.b


@pytest.mark.parametrize("u", [3])
def test_constructed_hanani(u):
    h = construct_hanani(u)
    assert h.design.v == 6 * u + 1
    assert check_hanani(h) == []


def test_pasch_counts_separate_corpus():
    counts = {n: len(pasch_configurations(d)) for n, d in sts_corpus().items()}
    assert counts["STS13-cyclic"] != counts["STS13-switched"]
    fifteen = [c for n, c in counts.items() if "15" in n]
    assert len(set(fifteen)) == len(fifteen) >= 3
    assert counts["PG15"] == 105 and counts["AG9"] == 0


def test_pasch_switch_keeps_coverage():
    d = pasch_switch(projective_sts15(), 3)
    assert set(pair_counts(15, d.blocks).values()) == {1}
