import itertools

import pytest

from tsflow.errors import BadOrder, NotCubic
from tsflow.factorizations import (
    Graph,
    WeightedFactorization,
    _f_cycles,
    _f_magnitudes,
    _l_cycles,
    complete_bipartite,
    complete_graph,
    components,
    cubic_null_search,
    cycle_type,
    edge,
    f_weighting,
    hamiltonian_cycles,
    is_bipartite,
    k4k2_5null,
    k6k4_4null,
    k6k4_union,
    kn_3null,
    knn_null,
    round_robin,
    two_null_obstruction,
    verify_null_factorization,
    walecki_hamiltonian_factorization,
    wreath_edges,
    wreath_two_factors,
)


def k33_disjoint(copies, offset=0):
    es = []
    for c in range(copies):
        base = offset + 6 * c
        es += [(base + i, base + 3 + j) for i in range(3) for j in range(3)]
    return es


def test_knn3_factor_weights():
    wf = knn_null(3)
    assert verify_null_factorization(wf, 3).valid
    for f in wf.factors:
        assert sorted(wf.weights[e] for e in f) == [-1, -1, 2]


def test_knn4_is_two_null():
    wf = knn_null(4)
    assert len(wf.factors) == 4
    assert set(wf.weights.values()) <= {1, -1}
    assert verify_null_factorization(wf, 2).valid


@pytest.mark.parametrize("n", range(3, 11))
def test_knn_null(n):
    wf = knn_null(n)
    assert wf.host == complete_bipartite(n)
    assert verify_null_factorization(wf, 3).valid


def test_knn_too_small():
    with pytest.raises(BadOrder):
        knn_null(2)


def test_flipped_weight_is_caught():
    wf = knn_null(5)
    e = wf.factors[0][0]
    w = dict(wf.weights)
    w[e] = -w[e]
    rep = verify_null_factorization(WeightedFactorization(wf.host, wf.factors, w), 3)
    assert not rep.valid
    assert sorted(x for x, _ in rep.vertex_violations) == list(e)
    assert [i for i, _ in rep.factor_violations] == [0]


def test_kn8_three_null():
    wf = kn_3null(8)
    assert len(wf.factors) == 7
    assert set(wf.weights.values()) <= {1, -1, 2, -2}
    assert verify_null_factorization(wf, 3).valid


@pytest.mark.parametrize("n", [8, 12, 16, 20, 24])
def test_kn_3null(n):
    assert verify_null_factorization(kn_3null(n), 3).valid


@pytest.mark.parametrize("n", [8, 16])
def test_kn_two_null_is_impossible(n):
    # every vertex of K_n has odd degree, so no ±1 weights can sum to zero there
    assert not verify_null_factorization(kn_3null(n), 2).valid
    assert two_null_obstruction(complete_graph(n)) == list(range(n))


@pytest.mark.parametrize("n", [4, 6, 10])
def test_kn_bad_orders(n):
    with pytest.raises(BadOrder):
        kn_3null(n)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_k6k4(k):
    wf = k6k4_4null(k)
    assert len(wf.factors) == 6 * k + 3
    assert verify_null_factorization(wf, 4).valid


@pytest.mark.parametrize("k", [2, 3])
def test_k6k4_union_contains_k4(k):
    m = 6 * k + 3
    union = k6k4_union(k)
    es = {e for f in union for e in f}
    pts = [0, 2 * k + 1, m - (2 * k + 1), m]
    assert all(edge(a, b) in es for a, b in itertools.combinations(pts, 2))
    sizes = sorted(len(c) for c in components(Graph(m + 1, tuple(es))) if len(c) > 1)
    assert sizes == [4] + [6] * k


def test_k6k4_too_small():
    with pytest.raises(BadOrder):
        k6k4_4null(1)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_k4k2(k):
    wf = k4k2_5null(k)
    assert len(wf.factors) == 4 * k + 1
    assert verify_null_factorization(wf, 5).valid


def test_k4k2_uses_c6_c8_for_k3():
    wf = k4k2_5null(3)
    mags = {}
    for c in _l_cycles(hamiltonian_cycles(7)[-1]):
        ws = {abs(wf.weights[edge(c[i], c[(i + 1) % len(c)])]) for i in range(len(c))}
        mags[len(c)] = ws
    assert mags == {6: {4}, 8: {3}}


def test_k4k2_too_small():
    with pytest.raises(BadOrder):
        k4k2_5null(1)


@pytest.mark.parametrize("k", range(2, 11))
def test_f_weighting_balances_both_matchings(k):
    cyc = list(range(2 * k + 1))
    cycles = _f_cycles(cyc)
    assert sorted(len(c) for c in cycles) == sorted([6] + [4] * (k - 1))
    ma, mb, w = f_weighting(cycles, _f_magnitudes(k))
    assert sum(w[e] for e in ma) == 0 and sum(w[e] for e in mb) == 0
    assert all(0 < abs(x) <= 4 for x in w.values())


@pytest.mark.parametrize("k", range(2, 8))
def test_wreath_splits_into_two_f_factors(k):
    cyc = hamiltonian_cycles(2 * k + 1)[0]
    first, second = wreath_two_factors(cyc)
    for tf in (first, second):
        assert sorted(len(c) for c in tf) == sorted([6] + [4] * (k - 1))
    used = sorted(edge(c[i], c[(i + 1) % len(c)]) for tf in (first, second) for c in tf for i in range(len(c)))
    assert used == sorted(wreath_edges(cyc))


def test_k4_has_no_null_factorization():
    for k in range(2, 9):
        assert cubic_null_search(complete_graph(4), k) is None


def test_k33_four_null():
    wf = cubic_null_search(Graph(6, tuple(k33_disjoint(1))), 4)
    assert verify_null_factorization(wf, 4).valid


def test_k4_plus_two_k33():
    es = k33_disjoint(2) + [(12 + a, 12 + b) for a, b in itertools.combinations(range(4), 2)]
    wf = cubic_null_search(Graph(16, tuple(es)), 4)
    assert wf is not None and verify_null_factorization(wf, 4).valid


def test_cubic_search_rejects_non_cubic():
    with pytest.raises(NotCubic):
        cubic_null_search(complete_graph(5), 3)


@pytest.mark.parametrize("m", [6, 8, 10])
def test_round_robin(m):
    fs = round_robin(range(m))
    assert len(fs) == m - 1
    assert sorted(e for f in fs for e in f) == sorted(complete_graph(m).edges)


@pytest.mark.parametrize("m", [3, 5, 7, 9])
def test_walecki(m):
    tf = walecki_hamiltonian_factorization(m)
    assert len(tf.factors) == (m - 1) // 2
    assert sorted(e for f in tf.factors for e in f) == sorted(complete_graph(m).edges)
    assert all(cycle_type(f, m) == [m] for f in tf.factors)


def test_walecki_even_order():
    with pytest.raises(BadOrder):
        walecki_hamiltonian_factorization(4)


def test_bipartite_check():
    assert is_bipartite(complete_bipartite(3))
    assert not is_bipartite(complete_graph(3))
